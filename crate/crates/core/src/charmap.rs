//! Characteristic maps of 2×2 and 3×3 quaternionic matrices.
//!
//! A characteristic map of `A` is a map `μ: ℍ → ℍ` with
//! `κ·|μ(λ)| = Sdet(A − λId)` for a fixed constant `κ > 0`, so its roots are
//! exactly the left eigenvalues. For 2×2 matrices `μ` is a degree-2
//! polynomial. For 3×3 matrices `μ` is a degree-3 polynomial whenever some
//! off-diagonal entry vanishes (after a real permutation similarity, which
//! leaves `Sdet(A − λId)` unchanged); otherwise `μ` is a rational map with a
//! distinguished point `π_A = g − h c⁻¹ b`, its pole. A discontinuous pole is
//! never an eigenvalue, and then `B = A − π_A·Id` is invertible and `B⁻¹`
//! carries a polynomial map whose roots transform back by `ρ ↦ ρ⁻¹ + π_A`.
//!
//! Maps are interpreted expressions over stored quaternion coefficients, so
//! they can be printed and serialized; evaluation and differentials are pure.

use serde::Serialize;

use crate::error::Error;
use crate::linearize::BilateralForm;
use crate::prng::SplitMix64;
use crate::quat::Quaternion;
use crate::sdet::{inverse, sdet, QMatrix};

/// Relative threshold treating an entry as zero during construction.
fn zero_tol(a: &QMatrix) -> f64 {
    1e-12 * (1.0 + a.max_entry_norm())
}

/// Public classification of a constructed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharMapKind {
    /// 2×2 polynomial (degree 2).
    Poly2,
    /// 3×3 triangular product (three linear factors).
    Tri3,
    /// 3×3 with a box decomposition: one linear factor times a 2×2 map.
    Block3,
    /// 3×3 dense polynomial (all three Schur-style terms).
    Poly3,
    /// 3×3 rational map with a pole.
    Rational3,
    /// Polynomial map of `B⁻¹` obtained through the inverse reduction.
    InverseReduced3,
}

/// How a root of the stored expression maps to a left eigenvalue of the
/// matrix the map was requested for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "pole")]
pub enum BackMap {
    /// Roots are already eigenvalues of the original matrix.
    Identity,
    /// `ρ ↦ ρ⁻¹ + pole`: roots of the `B⁻¹` map go to eigenvalues of `A`.
    InvertThenShift(Quaternion),
}

/// Interpreted expression of a characteristic map.
///
/// Inverse coefficients are precomputed; entries are those of the matrix the
/// expression was built from (after any recorded permutation).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
enum Expr {
    /// `(d−λ)(a−λ)` — diagonal 2×2.
    Product2 { a: Quaternion, d: Quaternion },
    /// `c − (d−λ)b⁻¹(a−λ)` — generic 2×2.
    Schur2 { a: Quaternion, b_inv: Quaternion, c: Quaternion, d: Quaternion },
    /// `(r−λ)(g−λ)(a−λ)` — triangular 3×3.
    Product3 { a: Quaternion, g: Quaternion, r: Quaternion },
    /// `(q − (r−λ)h⁻¹(g−λ))(a−λ)` — first row reduces to a 1×1 box.
    RowBlock3 {
        a: Quaternion,
        g: Quaternion,
        h_inv: Quaternion,
        q: Quaternion,
        r: Quaternion,
    },
    /// `(r−λ)(f − (g−λ)b⁻¹(a−λ))` — last column reduces to a 1×1 box.
    ColBlock3 {
        a: Quaternion,
        b_inv: Quaternion,
        f: Quaternion,
        g: Quaternion,
        r: Quaternion,
    },
    /// `p − qb⁻¹(a−λ) − (r−λ)h⁻¹(f − (g−λ)b⁻¹(a−λ))` — dense polynomial.
    Cubic3 {
        a: Quaternion,
        b_inv: Quaternion,
        f: Quaternion,
        g: Quaternion,
        h_inv: Quaternion,
        p: Quaternion,
        q: Quaternion,
        r: Quaternion,
    },
    /// Rational map with pole `π`:
    /// `(π−λ)p₂(λ) − (π−λ)q₁(λ)(π−λ)⁻¹f₁(λ)` away from the pole and
    /// `q₁(π)·f₁(π)` at it, with
    /// `p₂ = p−(r−λ)c⁻¹(a−λ)`, `q₁ = q−(r−λ)c⁻¹b`, `f₁ = f−hc⁻¹(a−λ)`.
    Rational3 {
        pole: Quaternion,
        a: Quaternion,
        b: Quaternion,
        c_inv: Quaternion,
        f: Quaternion,
        h: Quaternion,
        p: Quaternion,
        q: Quaternion,
        r: Quaternion,
    },
}

/// A constructed characteristic map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharMap {
    kind: CharMapKind,
    expr: Expr,
    degree: u32,
    norm_const: f64,
    pole: Option<Quaternion>,
    back: BackMap,
    /// Real permutation similarity applied before reading off coefficients,
    /// as the image list `sigma` (entry `(i,j)` moved to `(sigma[i], sigma[j])`).
    permutation: Option<Vec<usize>>,
}

impl CharMap {
    pub fn kind(&self) -> CharMapKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The constant `κ` with `κ·|μ(λ)| = Sdet(A' − λId)`.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// The pole of a rational map.
    pub fn pole(&self) -> Option<Quaternion> {
        self.pole
    }

    pub fn back(&self) -> BackMap {
        self.back
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.permutation.as_deref()
    }

    /// Named quaternion coefficients of the defining formula, for reporting.
    pub fn coefficients(&self) -> Vec<(&'static str, Quaternion)> {
        match &self.expr {
            Expr::Product2 { a, d } => vec![("a", *a), ("d", *d)],
            Expr::Schur2 { a, b_inv, c, d } => {
                vec![("a", *a), ("b_inv", *b_inv), ("c", *c), ("d", *d)]
            }
            Expr::Product3 { a, g, r } => vec![("a", *a), ("g", *g), ("r", *r)],
            Expr::RowBlock3 { a, g, h_inv, q, r } => {
                vec![("a", *a), ("g", *g), ("h_inv", *h_inv), ("q", *q), ("r", *r)]
            }
            Expr::ColBlock3 { a, b_inv, f, g, r } => {
                vec![("a", *a), ("b_inv", *b_inv), ("f", *f), ("g", *g), ("r", *r)]
            }
            Expr::Cubic3 { a, b_inv, f, g, h_inv, p, q, r } => vec![
                ("a", *a),
                ("b_inv", *b_inv),
                ("f", *f),
                ("g", *g),
                ("h_inv", *h_inv),
                ("p", *p),
                ("q", *q),
                ("r", *r),
            ],
            Expr::Rational3 { pole, a, b, c_inv, f, h, p, q, r } => vec![
                ("pole", *pole),
                ("a", *a),
                ("b", *b),
                ("c_inv", *c_inv),
                ("f", *f),
                ("h", *h),
                ("p", *p),
                ("q", *q),
                ("r", *r),
            ],
        }
    }

    /// Evaluate the stored expression. Total: rational maps take their
    /// defined value at the pole (where they may merely be discontinuous).
    pub fn eval(&self, lambda: Quaternion) -> Quaternion {
        match &self.expr {
            Expr::Product2 { a, d } => (*d - lambda) * (*a - lambda),
            Expr::Schur2 { a, b_inv, c, d } => *c - (*d - lambda) * *b_inv * (*a - lambda),
            Expr::Product3 { a, g, r } => (*r - lambda) * (*g - lambda) * (*a - lambda),
            Expr::RowBlock3 { a, g, h_inv, q, r } => {
                (*q - (*r - lambda) * *h_inv * (*g - lambda)) * (*a - lambda)
            }
            Expr::ColBlock3 { a, b_inv, f, g, r } => {
                (*r - lambda) * (*f - (*g - lambda) * *b_inv * (*a - lambda))
            }
            Expr::Cubic3 { a, b_inv, f, g, h_inv, p, q, r } => {
                let inner = *f - (*g - lambda) * *b_inv * (*a - lambda);
                *p - *q * *b_inv * (*a - lambda) - (*r - lambda) * *h_inv * inner
            }
            Expr::Rational3 { pole, a, b, c_inv, f, h, p, q, r } => {
                let q1 = *q - (*r - lambda) * *c_inv * *b;
                let f1 = *f - *h * *c_inv * (*a - lambda);
                let dist = *pole - lambda;
                let scale = 1.0 + pole.norm() + lambda.norm();
                if dist.norm() <= 1e-14 * scale {
                    q1 * f1
                } else {
                    let p2 = *p - (*r - lambda) * *c_inv * (*a - lambda);
                    dist * p2 - dist * q1 * dist.inv().expect("away from pole") * f1
                }
            }
        }
    }

    /// Exact differential at `lambda` as a bilateral form in the perturbation.
    ///
    /// Errors at the pole of a rational map, where differentiability is not
    /// guaranteed.
    pub fn differential(&self, lambda: Quaternion) -> Result<BilateralForm, Error> {
        let one = Quaternion::one();
        let terms = match &self.expr {
            Expr::Product2 { a, d } => vec![
                (-one, *a - lambda),
                (-(*d - lambda), one),
            ],
            Expr::Schur2 { a, b_inv, c: _, d } => vec![
                (one, *b_inv * (*a - lambda)),
                ((*d - lambda) * *b_inv, one),
            ],
            Expr::Product3 { a, g, r } => vec![
                (-one, (*g - lambda) * (*a - lambda)),
                (-(*r - lambda), *a - lambda),
                (-(*r - lambda) * (*g - lambda), one),
            ],
            Expr::RowBlock3 { a, g, h_inv, q, r } => {
                let m = *q - (*r - lambda) * *h_inv * (*g - lambda);
                vec![
                    (one, *h_inv * (*g - lambda) * (*a - lambda)),
                    (-m, one),
                    ((*r - lambda) * *h_inv, *a - lambda),
                ]
            }
            Expr::ColBlock3 { a, b_inv, f, g, r } => {
                let m = *f - (*g - lambda) * *b_inv * (*a - lambda);
                vec![
                    (one, -m),
                    (*r - lambda, *b_inv * (*a - lambda)),
                    ((*r - lambda) * (*g - lambda) * *b_inv, one),
                ]
            }
            Expr::Cubic3 { a, b_inv, f, g, h_inv, p: _, q, r } => {
                let inner = *f - (*g - lambda) * *b_inv * (*a - lambda);
                vec![
                    (*q * *b_inv - (*r - lambda) * *h_inv * (*g - lambda) * *b_inv, one),
                    (one, *h_inv * inner),
                    (-((*r - lambda) * *h_inv), *b_inv * (*a - lambda)),
                ]
            }
            Expr::Rational3 { pole, a, b, c_inv, f, h, p, q, r } => {
                // rebase so the pole sits at zero, then differentiate the
                // pole-at-zero rational expression at λ − π
                let scale = 1.0 + pole.norm() + lambda.norm();
                if (*pole - lambda).norm() <= 1e-14 * scale {
                    return Err(Error::DifferentialAtPole);
                }
                let lb = lambda - *pole;
                let ab = *a - *pole;
                let rb = *r - *pole;
                let neg = -lb;
                let neg_inv = neg.inv().expect("away from pole");
                let p2 = *p - (rb - lb) * *c_inv * (ab - lb);
                let q1 = *q - (rb - lb) * *c_inv * *b;
                let f1 = *f - *h * *c_inv * (ab - lb);
                vec![
                    (one, -p2 + q1 * neg_inv * f1),
                    (neg, *c_inv * (ab - lb)),
                    (-neg, *c_inv * *b * neg_inv * f1),
                    (-(neg * q1 * neg_inv), neg_inv * f1),
                    (neg * (rb - lb) * *c_inv - neg * q1 * neg_inv * *h * *c_inv, one),
                ]
            }
        };
        Ok(BilateralForm::new(terms))
    }

    /// Map a root of the stored expression to a left eigenvalue of the
    /// matrix the map answers for.
    pub fn back_map(&self, root: Quaternion) -> Result<Quaternion, Error> {
        match self.back {
            BackMap::Identity => Ok(root),
            BackMap::InvertThenShift(pole) => Ok(root.inv()? + pole),
        }
    }

    /// Magnitude of `|μ(λ)|/|λ|^degree` as `|λ| → ∞`, from the coefficients.
    pub fn leading_magnitude(&self) -> f64 {
        match &self.expr {
            Expr::Product2 { .. } | Expr::Product3 { .. } => 1.0,
            Expr::Schur2 { b_inv, .. } => b_inv.norm(),
            Expr::RowBlock3 { h_inv, .. } => h_inv.norm(),
            Expr::ColBlock3 { b_inv, .. } => b_inv.norm(),
            Expr::Cubic3 { b_inv, h_inv, .. } => (*h_inv * *b_inv).norm(),
            Expr::Rational3 { c_inv, .. } => c_inv.norm(),
        }
    }
}

/// Verify the symbolic normalization constant against the Study determinant
/// at one deterministic sample point; trips on transcription bugs.
fn verify_norm_const(map: &CharMap, source: &QMatrix) {
    let mut rng = SplitMix64::new(0x6b72_616d);
    let lambda = rng.quaternion(1.0 + source.max_entry_norm());
    let lhs = map.norm_const * map.eval(lambda).norm();
    let rhs = sdet(&source.shifted(lambda));
    assert!(
        (lhs - rhs).abs() <= 1e-6 * (1.0 + rhs),
        "characteristic map normalization mismatch: {lhs} vs {rhs}"
    );
}

/// 2×2 entries after the normalization that makes `b ≠ 0` when possible.
/// Returns the (possibly permuted) matrix and the permutation used.
pub(crate) fn normalized2(a: &QMatrix) -> (QMatrix, Option<Vec<usize>>) {
    assert_eq!(a.order(), 2, "normalized2 expects a 2x2 matrix");
    let tol = zero_tol(a);
    if a.get(0, 1).norm() <= tol && a.get(1, 0).norm() > tol {
        let sigma = vec![1usize, 0];
        (a.conj_by_permutation(&sigma), Some(sigma))
    } else {
        (a.clone(), None)
    }
}

/// Characteristic map of a 2×2 matrix.
pub fn char2(a: &QMatrix) -> CharMap {
    assert_eq!(a.order(), 2, "char2 expects a 2x2 matrix");
    let tol = zero_tol(a);
    let (m, permutation) = normalized2(a);
    let (ma, mb, mc, md) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let map = if mb.norm() <= tol {
        // both off-diagonal entries vanish
        CharMap {
            kind: CharMapKind::Poly2,
            expr: Expr::Product2 { a: ma, d: md },
            degree: 2,
            norm_const: 1.0,
            pole: None,
            back: BackMap::Identity,
            permutation,
        }
    } else {
        CharMap {
            kind: CharMapKind::Poly2,
            expr: Expr::Schur2 { a: ma, b_inv: mb.inv().expect("b nonzero"), c: mc, d: md },
            degree: 2,
            norm_const: mb.norm(),
            pole: None,
            back: BackMap::Identity,
            permutation,
        }
    };
    verify_norm_const(&map, &m);
    map
}

/// Companion data of a 2×2 matrix: `a₀ = −b⁻¹c`, `a₁ = b⁻¹(a−d)` and the
/// discriminant `Δ = a₁² − 4a₀`, read off the permutation-normalized matrix.
/// The left spectrum of the companion matrix `[[0, 1], [−a₀, −a₁]]` maps back
/// through `λ ↦ a + b·λ`.
pub fn companion2(a: &QMatrix) -> Result<(Quaternion, Quaternion, Quaternion), Error> {
    assert_eq!(a.order(), 2, "companion2 expects a 2x2 matrix");
    let tol = zero_tol(a);
    let (m, _) = normalized2(a);
    let (ma, mb, mc, md) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    if mb.norm() <= tol {
        return Err(Error::DiagonalCase);
    }
    let b_inv = mb.inv()?;
    let a0 = -(b_inv * mc);
    let a1 = b_inv * (ma - md);
    let delta = a1 * a1 - 4.0 * a0;
    Ok((a0, a1, delta))
}

/// Differential of the 2×2 map `c − (d−λ)b⁻¹(a−λ)` at `λ`:
/// `X ↦ X·b⁻¹(a−λ) + (d−λ)b⁻¹·X`. Requires `b ≠ 0`.
pub fn diff2(a: &QMatrix, lambda: Quaternion) -> BilateralForm {
    assert_eq!(a.order(), 2, "diff2 expects a 2x2 matrix");
    let b = a.get(0, 1);
    assert!(b.norm() > zero_tol(a), "diff2 requires a nonzero (1,2) entry");
    let b_inv = b.inv().expect("nonzero");
    BilateralForm::new(vec![
        (Quaternion::one(), b_inv * (a.get(0, 0) - lambda)),
        ((a.get(1, 1) - lambda) * b_inv, Quaternion::one()),
    ])
}

/// Pole `π_A = g − h c⁻¹ b` of a 3×3 matrix with `c = a₁₃ ≠ 0`.
pub fn pole(a: &QMatrix) -> Result<Quaternion, Error> {
    assert_eq!(a.order(), 3, "pole expects a 3x3 matrix");
    let c = a.get(0, 2);
    if c.norm() <= zero_tol(a) {
        return Err(Error::PolynomialCase);
    }
    Ok(a.get(1, 1) - a.get(1, 2) * c.inv()? * a.get(0, 1))
}

/// Whether the pole is itself a left eigenvalue, i.e. whether the rational
/// characteristic map is continuous.
pub fn pole_is_eigenvalue(a: &QMatrix, tol: f64) -> Result<bool, Error> {
    let p = pole(a)?;
    let scale = (1.0 + a.max_entry_norm()).powi(3);
    Ok(sdet(&a.shifted(p)) <= tol * scale)
}

/// Scan order for off-diagonal zeros, canonical position first.
const ZERO_SCAN: [(usize, usize); 6] = [(0, 2), (2, 0), (0, 1), (1, 0), (1, 2), (2, 1)];

/// Permutation sending `i ↦ 0`, `j ↦ 2` and the remaining index to `1`.
fn permutation_to_corner(i: usize, j: usize) -> Vec<usize> {
    let mut sigma = vec![usize::MAX; 3];
    sigma[i] = 0;
    sigma[j] = 2;
    for s in sigma.iter_mut() {
        if *s == usize::MAX {
            *s = 1;
        }
    }
    sigma
}

/// Classify a matrix whose (1,3) entry already vanishes.
fn build_poly3(m: &QMatrix, permutation: Option<Vec<usize>>) -> CharMap {
    let tol = zero_tol(m);
    let (ma, mb) = (m.get(0, 0), m.get(0, 1));
    let (mf, mg, mh) = (m.get(1, 0), m.get(1, 1), m.get(1, 2));
    let (mp, mq, mr) = (m.get(2, 0), m.get(2, 1), m.get(2, 2));
    let b_zero = mb.norm() <= tol;
    let h_zero = mh.norm() <= tol;
    let (kind, expr, norm_const) = if b_zero && h_zero {
        (CharMapKind::Tri3, Expr::Product3 { a: ma, g: mg, r: mr }, 1.0)
    } else if b_zero {
        (
            CharMapKind::Block3,
            Expr::RowBlock3 { a: ma, g: mg, h_inv: mh.inv().expect("h nonzero"), q: mq, r: mr },
            mh.norm(),
        )
    } else if h_zero {
        (
            CharMapKind::Block3,
            Expr::ColBlock3 { a: ma, b_inv: mb.inv().expect("b nonzero"), f: mf, g: mg, r: mr },
            mb.norm(),
        )
    } else {
        (
            CharMapKind::Poly3,
            Expr::Cubic3 {
                a: ma,
                b_inv: mb.inv().expect("b nonzero"),
                f: mf,
                g: mg,
                h_inv: mh.inv().expect("h nonzero"),
                p: mp,
                q: mq,
                r: mr,
            },
            mb.norm() * mh.norm(),
        )
    };
    CharMap {
        kind,
        expr,
        degree: 3,
        norm_const,
        pole: None,
        back: BackMap::Identity,
        permutation,
    }
}

/// Characteristic map of a 3×3 matrix: polynomial whenever some off-diagonal
/// entry vanishes (scanned in a fixed order and moved to position (1,3) by a
/// real permutation similarity), rational with pole `π_A` otherwise.
pub fn char3(a: &QMatrix) -> CharMap {
    assert_eq!(a.order(), 3, "char3 expects a 3x3 matrix");
    let tol = zero_tol(a);
    for (i, j) in ZERO_SCAN {
        if a.get(i, j).norm() <= tol {
            let (m, permutation) = if (i, j) == (0, 2) {
                (a.clone(), None)
            } else {
                let sigma = permutation_to_corner(i, j);
                (a.conj_by_permutation(&sigma), Some(sigma))
            };
            let map = build_poly3(&m, permutation);
            verify_norm_const(&map, &m);
            return map;
        }
    }
    let c = a.get(0, 2);
    let c_inv = c.inv().expect("dense matrix; c nonzero");
    let pi = a.get(1, 1) - a.get(1, 2) * c_inv * a.get(0, 1);
    let map = CharMap {
        kind: CharMapKind::Rational3,
        expr: Expr::Rational3 {
            pole: pi,
            a: a.get(0, 0),
            b: a.get(0, 1),
            c_inv,
            f: a.get(1, 0),
            h: a.get(1, 2),
            p: a.get(2, 0),
            q: a.get(2, 1),
            r: a.get(2, 2),
        },
        degree: 3,
        norm_const: c.norm(),
        pole: Some(pi),
        back: BackMap::Identity,
        permutation: None,
    };
    verify_norm_const(&map, a);
    map
}

/// Inverse reduction for a discontinuous rational map.
///
/// Requires the pole not to be an eigenvalue; then `B = A − π_A·Id` is
/// invertible, `B⁻¹` has a numerically zero (1,3) entry and therefore a
/// polynomial characteristic map, and eigenvalues of `A` are recovered from
/// roots `ρ` of that map as `ρ⁻¹ + π_A` (`ρ = 0` cannot occur).
pub fn reduce_discontinuous(a: &QMatrix) -> Result<CharMap, Error> {
    const DEFAULT_TOL: f64 = 1e-10;
    if pole_is_eigenvalue(a, DEFAULT_TOL)? {
        return Err(Error::PoleIsEigenvalue);
    }
    let pi = pole(a)?;
    let b = a.shifted(pi);
    let mut b_inv = inverse(&b)?;
    let corner = b_inv.get(0, 2).norm();
    assert!(
        corner <= 1e-9 * (1.0 + b_inv.max_entry_norm()),
        "inverse (1,3) entry not numerically zero: {corner}"
    );
    // exactly zero in exact arithmetic; clamp so the polynomial scan fires
    b_inv.set(0, 2, Quaternion::zero());
    let inner = build_poly3(&b_inv, None);
    verify_norm_const(&inner, &b_inv);
    Ok(CharMap {
        kind: CharMapKind::InverseReduced3,
        expr: inner.expr,
        degree: 3,
        norm_const: inner.norm_const,
        pole: None,
        back: BackMap::InvertThenShift(pi),
        permutation: None,
    })
}

/// Differential of the characteristic map of `a` at a point.
///
/// For polynomial and rational kinds `lambda` lives in the map's own
/// variable (the original one). For an inverse-reduced map `lambda` is a
/// point of the *original* domain: the inner polynomial differential at
/// `ρ = (λ − π)⁻¹` is composed with the derivative of `λ ↦ (λ − π)⁻¹`, so
/// the returned form is the differential of `λ ↦ μ_{B⁻¹}((λ − π)⁻¹)`.
pub fn diff3(a: &QMatrix, map: &CharMap, lambda: Quaternion) -> Result<BilateralForm, Error> {
    assert_eq!(a.order(), 3, "diff3 expects a 3x3 matrix");
    match map.back {
        BackMap::Identity => map.differential(lambda),
        BackMap::InvertThenShift(pole) => {
            let shifted = lambda - pole;
            if shifted.norm() <= 1e-14 * (1.0 + pole.norm() + lambda.norm()) {
                return Err(Error::DifferentialAtPole);
            }
            let rho = shifted.inv()?;
            let inner = map.differential(rho)?;
            // chain rule: the derivative of λ ↦ (λ−π)⁻¹ sends X to −ρXρ
            let terms = inner
                .terms()
                .iter()
                .map(|(p, q)| (-(*p * rho), rho * *q))
                .collect();
            Ok(BilateralForm::new(terms))
        }
    }
}

/// Poles of the six permutation-similar rearrangements of a 3×3 matrix.
///
/// Each real permutation similarity leaves the spectrum unchanged but moves
/// different entries into the corner, producing up to six distinct poles;
/// `None` where the rearranged matrix has a zero corner entry (polynomial
/// case).
pub fn pole_candidates(a: &QMatrix) -> Vec<(Vec<usize>, Option<Quaternion>)> {
    assert_eq!(a.order(), 3, "pole_candidates expects a 3x3 matrix");
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .iter()
        .map(|sigma| {
            let m = a.conj_by_permutation(sigma);
            (sigma.to_vec(), pole(&m).ok())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::{bilateral_matrix, numeric_rank};
    use crate::prng::SplitMix64;
    use crate::quat::{self};

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn zero() -> Quaternion {
        Quaternion::zero()
    }

    fn one() -> Quaternion {
        Quaternion::one()
    }

    /// [[𝐤,0,0],[3𝐢−𝐣,−𝐢,𝐢],[1−2𝐤,𝐣,−𝐣]] with spectrum {𝐤, 0, −𝐢−𝐣}.
    fn generic_poly_matrix() -> QMatrix {
        QMatrix::from_rows(&[
            vec![quat::K, zero(), zero()],
            vec![q(0.0, 3.0, -1.0, 0.0), -quat::I, quat::I],
            vec![q(1.0, 0.0, 0.0, -2.0), quat::J, -quat::J],
        ])
    }

    fn detached_pole_matrix() -> QMatrix {
        QMatrix::from_rows(&[
            vec![zero(), quat::I, one()],
            vec![q(0.0, 3.0, 0.0, -1.0), zero(), one()],
            vec![quat::K, q(-1.0, 0.0, 1.0, 1.0), zero()],
        ])
    }

    /// Continuous-pole example with (p, q, r) = (1, 1, 0).
    fn continuous_pole_matrix() -> QMatrix {
        QMatrix::from_rows(&[
            vec![zero(), -quat::J, quat::I],
            vec![q(-1.0, 0.0, 1.0, 0.0), quat::J, quat::K],
            vec![one(), one(), zero()],
        ])
    }

    fn random_qmatrix(n: usize, rng: &mut SplitMix64) -> QMatrix {
        QMatrix::new(n, (0..n * n).map(|_| rng.quaternion(1.0)).collect())
    }

    fn random_dense3(rng: &mut SplitMix64) -> QMatrix {
        loop {
            let a = random_qmatrix(3, rng);
            let floor = zero_tol(&a).max(0.05);
            let dense =
                (0..3).all(|i| (0..3).all(|j| i == j || a.get(i, j).norm() > floor));
            if dense {
                return a;
            }
        }
    }

    fn finite_difference_check(
        eval: &dyn Fn(Quaternion) -> Quaternion,
        form: &BilateralForm,
        lambda: Quaternion,
        rng: &mut SplitMix64,
    ) {
        let h = 1e-6;
        for _ in 0..4 {
            let x = rng.quaternion(1.0);
            let fd = (eval(lambda + h * x) - eval(lambda)) / h;
            let exact = form.eval(x);
            let scale = 1.0 + exact.norm();
            assert!(
                (fd - exact).norm() <= 1e-5 * scale,
                "finite difference mismatch: fd={fd} exact={exact}"
            );
        }
    }

    #[test]
    fn char2_companion_expansion() {
        let mut rng = SplitMix64::new(101);
        let a0 = rng.quaternion(1.0);
        let a1 = rng.quaternion(1.0);
        let companion = QMatrix::from_rows(&[vec![zero(), one()], vec![-a0, -a1]]);
        let map = char2(&companion);
        assert_eq!(map.kind(), CharMapKind::Poly2);
        assert_eq!(map.degree(), 2);
        for _ in 0..16 {
            let l = rng.quaternion(2.0);
            let expect = -(l * l + a1 * l + a0);
            assert!(map.eval(l).approx_eq(expect, 1e-12 * (1.0 + expect.norm())));
        }
    }

    #[test]
    fn char2_norm_constant_oracle() {
        let mut rng = SplitMix64::new(103);
        for _ in 0..40 {
            let a = random_qmatrix(2, &mut rng);
            let map = char2(&a);
            for _ in 0..8 {
                let l = rng.quaternion(2.0);
                let lhs = map.norm_const() * map.eval(l).norm();
                let rhs = sdet(&a.shifted(l));
                assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
            }
        }
    }

    #[test]
    fn char2_diagonal_spectrum() {
        let a = QMatrix::from_rows(&[vec![quat::I, zero()], vec![zero(), quat::J]]);
        let map = char2(&a);
        assert!(map.eval(quat::I).norm() <= 1e-14);
        assert!(map.eval(quat::J).norm() <= 1e-14);
        assert!(map.eval(quat::K).norm() > 0.1);
    }

    #[test]
    fn char2_transposes_when_b_vanishes() {
        let a = QMatrix::from_rows(&[vec![quat::I, zero()], vec![one() + quat::K, quat::J]]);
        let map = char2(&a);
        assert_eq!(map.permutation(), Some(&[1usize, 0][..]));
        assert!(map.eval(quat::I).norm() <= 1e-14);
        assert!(map.eval(quat::J).norm() <= 1e-14);
    }

    #[test]
    fn companion2_examples() {
        let a = QMatrix::from_rows(&[vec![zero(), one()], vec![-one(), zero()]]);
        let (a0, a1, delta) = companion2(&a).unwrap();
        assert!(a0.approx_eq(one(), 0.0));
        assert!(a1.approx_eq(zero(), 0.0));
        assert!(delta.approx_eq(Quaternion::real(-4.0), 0.0));

        let d = QMatrix::from_rows(&[vec![quat::I, zero()], vec![zero(), quat::I]]);
        assert_eq!(companion2(&d), Err(Error::DiagonalCase));

        let same = QMatrix::from_rows(&[
            vec![quat::I + one(), q(0.5, 1.0, 0.0, -1.0)],
            vec![zero(), quat::I + one()],
        ]);
        let (a0, a1, delta) = companion2(&same).unwrap();
        assert!(a0.norm() <= 1e-15 && a1.norm() <= 1e-15 && delta.norm() <= 1e-15);
    }

    #[test]
    fn companion_transform_preserves_sdet() {
        // the companion matrix and λ ↦ a + bλ reproduce Sdet(A − λId)
        let mut rng = SplitMix64::new(107);
        for _ in 0..20 {
            let m = random_qmatrix(2, &mut rng);
            if m.get(0, 1).norm() < 0.05 {
                continue;
            }
            let (a0, a1, _) = companion2(&m).unwrap();
            let companion = QMatrix::from_rows(&[vec![zero(), one()], vec![-a0, -a1]]);
            let b_norm = m.get(0, 1).norm();
            for _ in 0..6 {
                let l = rng.quaternion(1.5);
                let transported = m.get(0, 0) + m.get(0, 1) * l;
                let lhs = sdet(&m.shifted(transported));
                let rhs = b_norm * b_norm * sdet(&companion.shifted(l));
                assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs));
            }
        }
    }

    #[test]
    fn diff2_matches_finite_differences_and_ranks() {
        let mut rng = SplitMix64::new(109);
        for _ in 0..30 {
            let a = random_qmatrix(2, &mut rng);
            if a.get(0, 1).norm() < 0.05 {
                continue;
            }
            let map = char2(&a);
            let l = rng.quaternion(1.5);
            let form = diff2(&a, l);
            finite_difference_check(&|x| map.eval(x), &form, l, &mut rng);
        }

        // spherical representative: μ(λ) = −1 − λ², so the differential at
        // the eigenvalue 𝐢 is X ↦ −X𝐢 − 𝐢X, of rank 2
        let a = QMatrix::from_rows(&[vec![zero(), one()], vec![-one(), zero()]]);
        let form = diff2(&a, quat::I);
        assert_eq!(numeric_rank(&bilateral_matrix(&form), 1e-9), 2);
        let expect = BilateralForm::new(vec![(one(), -quat::I), (-quat::I, one())]);
        assert!(bilateral_matrix(&form).approx_eq(&bilateral_matrix(&expect), 1e-13));
        finite_difference_check(&|x| char2(&a).eval(x), &form, quat::I, &mut rng);

        // rank 0 at λ = (a+d)/2 for the double-root construction
        let t = 0.75;
        let b = q(0.3, 0.4, -0.2, 0.9);
        let a11 = q(1.0, -0.5, 0.25, 0.5);
        let a0 = Quaternion::real(t * t);
        let a1 = Quaternion::real(-2.0 * t);
        let d = a11 - b * a1;
        let c = -(b * a0);
        let m = QMatrix::from_rows(&[vec![a11, b], vec![c, d]]);
        let root = a11 + b * Quaternion::real(t);
        assert!(sdet(&m.shifted(root)) <= 1e-10);
        let form = diff2(&m, root);
        assert_eq!(numeric_rank(&bilateral_matrix(&form), 1e-9), 0);
    }

    #[test]
    fn pole_examples() {
        assert!(pole(&detached_pole_matrix()).unwrap().approx_eq(-quat::I, 0.0));
        assert!(pole(&continuous_pole_matrix()).unwrap().approx_eq(one() + quat::J, 0.0));

        // b = 0 with c ≠ 0 leaves the pole at g
        let g = q(0.5, 1.0, -1.0, 2.0);
        let m = QMatrix::from_rows(&[
            vec![one(), zero(), quat::K],
            vec![quat::I, g, quat::J],
            vec![one(), one(), one()],
        ]);
        assert!(pole(&m).unwrap().approx_eq(g, 1e-15));

        assert_eq!(pole(&generic_poly_matrix()), Err(Error::PolynomialCase));
    }

    #[test]
    fn char3_generic_poly_fixture() {
        let a = generic_poly_matrix();
        let map = char3(&a);
        assert_eq!(map.kind(), CharMapKind::Block3);
        assert_eq!(map.degree(), 3);
        // μ(λ) = (−1−𝐤+λ𝐢)λ(𝐤−λ) as values
        let mut rng = SplitMix64::new(113);
        for _ in 0..12 {
            let l = rng.quaternion(2.0);
            let expect = (q(-1.0, 0.0, 0.0, -1.0) + l * quat::I) * l * (quat::K - l);
            assert!(map.eval(l).approx_eq(expect, 1e-12 * (1.0 + expect.norm())));
        }
        for root in [zero(), quat::K, -quat::I - quat::J] {
            assert!(map.eval(root).norm() <= 1e-14);
        }
    }

    #[test]
    fn char3_value_at_pole() {
        let a = detached_pole_matrix();
        let map = char3(&a);
        assert_eq!(map.kind(), CharMapKind::Rational3);
        let v = map.eval(-quat::I);
        assert_eq!(v, q(1.0, -1.0, 2.0, -2.0));
    }

    #[test]
    fn char3_norm_constant_oracle_dense() {
        let mut rng = SplitMix64::new(127);
        for _ in 0..25 {
            let a = random_dense3(&mut rng);
            let map = char3(&a);
            assert_eq!(map.kind(), CharMapKind::Rational3);
            for _ in 0..8 {
                let l = rng.quaternion(2.0);
                if (map.pole().unwrap() - l).norm() < 1e-3 {
                    continue;
                }
                let lhs = map.norm_const() * map.eval(l).norm();
                let rhs = sdet(&a.shifted(l));
                assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
            }
        }
    }

    #[test]
    fn char3_permuted_zero_and_column_block() {
        // zero away from the corner: the permutation must fire and normalize
        let mut rng = SplitMix64::new(131);
        for (zi, zj) in [(1usize, 0usize), (2, 1), (0, 1)] {
            let mut a = random_qmatrix(3, &mut rng);
            a.set(zi, zj, zero());
            let map = char3(&a);
            assert!(matches!(
                map.kind(),
                CharMapKind::Tri3 | CharMapKind::Block3 | CharMapKind::Poly3
            ));
            for _ in 0..6 {
                let l = rng.quaternion(2.0);
                let lhs = map.norm_const() * map.eval(l).norm();
                let rhs = sdet(&a.shifted(l));
                assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
            }
        }

        // column-block shape: zeros at (1,3) and (2,3) with b ≠ 0
        let mut a = random_qmatrix(3, &mut rng);
        a.set(0, 2, zero());
        a.set(1, 2, zero());
        if a.get(0, 1).norm() < 0.05 {
            a.set(0, 1, one() + quat::J);
        }
        let map = char3(&a);
        assert_eq!(map.kind(), CharMapKind::Block3);
        for _ in 0..8 {
            let l = rng.quaternion(2.0);
            let lhs = map.norm_const() * map.eval(l).norm();
            let rhs = sdet(&a.shifted(l));
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
        }
    }

    #[test]
    fn pole_dichotomy_fixtures() {
        assert!(!pole_is_eigenvalue(&detached_pole_matrix(), 1e-10).unwrap());
        assert!(pole_is_eigenvalue(&continuous_pole_matrix(), 1e-10).unwrap());
    }

    #[test]
    fn pole_eigenvalue_by_construction() {
        // force f = h c⁻¹ (a − π) so that μ(π) = (…)·0 = 0
        let mut rng = SplitMix64::new(137);
        let mut built = 0;
        while built < 10 {
            let mut a = random_dense3(&mut rng);
            let c_inv = a.get(0, 2).inv().unwrap();
            let pi = a.get(1, 1) - a.get(1, 2) * c_inv * a.get(0, 1);
            let f = a.get(1, 2) * c_inv * (a.get(0, 0) - pi);
            if f.norm() < 0.05 {
                continue;
            }
            a.set(1, 0, f);
            built += 1;
            assert!(pole_is_eigenvalue(&a, 1e-10).unwrap());
            // and the pole really is a root of Sdet
            assert!(sdet(&a.shifted(pole(&a).unwrap())) <= 1e-10 * (1.0 + a.max_entry_norm()).powi(3));
        }
    }

    #[test]
    fn directional_limits_at_detached_pole() {
        let a = detached_pole_matrix();
        let map = char3(&a);
        let pi = -quat::I;
        let dirs = [one(), quat::I, quat::J, quat::K];
        let mut limits = Vec::new();
        for d in dirs {
            let eps = 1e-6;
            let v = map.eval(pi + eps * d);
            let expect =
                -(d * (quat::J + quat::K) * d.inv().unwrap() * (2.0 * quat::I - quat::K));
            assert!(v.approx_eq(expect, 1e-4 * (1.0 + expect.norm())));
            limits.push(expect);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((limits[i] - limits[j]).norm() > 0.1);
            }
        }

        // continuous case: limits all vanish
        let c = continuous_pole_matrix();
        let cmap = char3(&c);
        let cpi = one() + quat::J;
        for d in dirs {
            let v = cmap.eval(cpi + 1e-6 * d);
            assert!(v.norm() <= 1e-4);
        }
    }

    #[test]
    fn reduction_reproduces_printed_inverse_map() {
        let a = detached_pole_matrix();
        let reduced = reduce_discontinuous(&a).unwrap();
        assert_eq!(reduced.kind(), CharMapKind::InverseReduced3);
        assert_eq!(reduced.degree(), 3);
        match reduced.back() {
            BackMap::InvertThenShift(pole) => assert!(pole.approx_eq(-quat::I, 0.0)),
            other => panic!("unexpected back map {other:?}"),
        }
        // independent term is nonzero (∝ −c⁻¹)
        assert!(reduced.eval(zero()).norm() > 0.5);

        // the printed cubic agrees after the variable scaling λ ↦ 10λ and an
        // overall factor 10 (it is written for the integer matrix 10·B⁻¹)
        let printed = |l: Quaternion| -> Quaternion {
            let i = quat::I;
            let j = quat::J;
            let k = quat::K;
            Quaternion::real(10.0)
                - l * i
                - 2.0 * (i * l)
                - 0.1 * (i * l * (2.0 * i - k) * l)
                - 0.1 * (l * (one() + j + 2.0 * k) * l)
                - 0.01 * (l * (j + k) * l * (2.0 * i - k) * l)
        };
        let mut rng = SplitMix64::new(139);
        for _ in 0..12 {
            let l = rng.quaternion(1.5);
            let lhs = printed(10.0 * l);
            let rhs = 10.0 * reduced.eval(l);
            assert!(lhs.approx_eq(rhs, 1e-9 * (1.0 + lhs.norm())));
        }

        // continuous case refuses the reduction
        assert_eq!(
            reduce_discontinuous(&continuous_pole_matrix()),
            Err(Error::PoleIsEigenvalue)
        );
    }

    #[test]
    fn inverse_map_norm_identity() {
        // |λ⁻¹|³ · Sdet(B⁻¹ − λId) · Sdet(B) = norm_const⁻¹-normalized
        // |μ_B(λ⁻¹)|, for the rational map μ_B of B (pole at zero).
        let a = detached_pole_matrix();
        let pi = pole(&a).unwrap();
        let b = a.shifted(pi);
        let b_inv = inverse(&b).unwrap();
        let bmap = char3(&b);
        assert_eq!(bmap.kind(), CharMapKind::Rational3);
        let sb = sdet(&b);
        let mut rng = SplitMix64::new(149);
        for _ in 0..32 {
            let l = rng.quaternion(1.5);
            if l.norm() < 1e-3 {
                continue;
            }
            let lhs = l.norm().powi(-3) * sdet(&b_inv.shifted(l)) * sb;
            let rhs = bmap.norm_const() * bmap.eval(l.inv().unwrap()).norm();
            assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs));
        }
    }

    #[test]
    fn diff3_printed_rank3_example() {
        let a = QMatrix::from_rows(&[
            vec![quat::J, one(), zero()],
            vec![2.0 * quat::I, -quat::K, one()],
            vec![q(2.0, -1.0, -2.0, 0.0), q(-1.0, 0.0, -1.0, 1.0), q(0.0, -1.0, 0.0, -1.0)],
        ]);
        let map = char3(&a);
        assert_eq!(map.kind(), CharMapKind::Poly3);
        assert!(map.eval(zero()).norm() <= 1e-14, "0 is an eigenvalue");
        let form = diff3(&a, &map, zero()).unwrap();
        // μ_{*0}(X) = 𝐤X + X𝐢 + (𝐢+𝐤)X𝐣
        let expect = BilateralForm::new(vec![
            (quat::K, one()),
            (one(), quat::I),
            (quat::I + quat::K, quat::J),
        ]);
        let m = bilateral_matrix(&form);
        assert!(m.approx_eq(&bilateral_matrix(&expect), 1e-13));
        let printed = crate::linearize::RealMat4([
            [0.0, -2.0, 0.0, 0.0],
            [0.0, 0.0, -2.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [2.0, 0.0, -2.0, 0.0],
        ]);
        assert!(m.approx_eq(&printed, 1e-13));
        assert_eq!(numeric_rank(&m, 1e-9), 3);
    }

    #[test]
    fn diff3_triangular_eigenvalue_form() {
        // at the (1,1) eigenvalue of a triangular matrix the differential is
        // the single left-multiplication X ↦ (a−r)(g−a)X
        let mut rng = SplitMix64::new(151);
        let (a, g, r) = (rng.quaternion(1.0), rng.quaternion(1.0), rng.quaternion(1.0));
        let m = QMatrix::from_rows(&[
            vec![a, zero(), zero()],
            vec![rng.quaternion(1.0), g, zero()],
            vec![rng.quaternion(1.0), rng.quaternion(1.0), r],
        ]);
        let map = char3(&m);
        assert_eq!(map.kind(), CharMapKind::Tri3);
        let form = diff3(&m, &map, a).unwrap();
        let expect = BilateralForm::new(vec![((a - r) * (g - a), one())]);
        assert!(bilateral_matrix(&form).approx_eq(&bilateral_matrix(&expect), 1e-12));
    }

    #[test]
    fn diff3_finite_difference_all_kinds() {
        let mut rng = SplitMix64::new(157);

        let mut tri = random_qmatrix(3, &mut rng);
        tri.set(0, 1, zero());
        tri.set(0, 2, zero());
        tri.set(1, 2, zero());
        let mut row_block = random_qmatrix(3, &mut rng);
        row_block.set(0, 1, zero());
        row_block.set(0, 2, zero());
        let mut col_block = random_qmatrix(3, &mut rng);
        col_block.set(0, 2, zero());
        col_block.set(1, 2, zero());
        let mut cubic = random_qmatrix(3, &mut rng);
        cubic.set(0, 2, zero());

        for a in [tri, row_block, col_block, cubic] {
            let map = char3(&a);
            for _ in 0..6 {
                let l = rng.quaternion(1.5);
                let form = diff3(&a, &map, l).unwrap();
                finite_difference_check(&|x| map.eval(x), &form, l, &mut rng);
            }
        }

        // rational away from the pole
        for _ in 0..8 {
            let a = random_dense3(&mut rng);
            let map = char3(&a);
            let pi = map.pole().unwrap();
            let l = loop {
                let l = rng.quaternion(1.5);
                if (l - pi).norm() > 0.3 {
                    break l;
                }
            };
            let form = diff3(&a, &map, l).unwrap();
            finite_difference_check(&|x| map.eval(x), &form, l, &mut rng);
        }

        // inverse-reduced, composed with the chain rule, in the original domain
        let a = detached_pole_matrix();
        let reduced = reduce_discontinuous(&a).unwrap();
        let pi = -quat::I;
        for _ in 0..6 {
            let l = loop {
                let l = rng.quaternion(1.5);
                if (l - pi).norm() > 0.3 {
                    break l;
                }
            };
            let form = diff3(&a, &reduced, l).unwrap();
            let composite = |x: Quaternion| reduced.eval((x - pi).inv().unwrap());
            finite_difference_check(&composite, &form, l, &mut rng);
        }

        // differential at the pole is refused
        let dense = random_dense3(&mut rng);
        let map = char3(&dense);
        let pi = map.pole().unwrap();
        assert_eq!(diff3(&dense, &map, pi), Err(Error::DifferentialAtPole));
    }

    #[test]
    fn differential_is_real_linear() {
        let mut rng = SplitMix64::new(163);
        let a = random_dense3(&mut rng);
        let map = char3(&a);
        let l = rng.quaternion(1.0) + Quaternion::real(3.0);
        let form = diff3(&a, &map, l).unwrap();
        let m = bilateral_matrix(&form);
        for _ in 0..10 {
            let x = rng.quaternion(1.0);
            let y = rng.quaternion(1.0);
            let s = rng.next_symmetric();
            let lhs = form.eval(x * s + y);
            let rhs = Quaternion::from_array(m.mul_vec((x * s + y).to_array()));
            assert!(lhs.approx_eq(rhs, 1e-10 * (1.0 + lhs.norm())));
        }
    }

    #[test]
    fn growth_at_infinity() {
        let mut rng = SplitMix64::new(167);
        let radius = 1e6;
        let mut planted = random_qmatrix(3, &mut rng);
        planted.set(0, 2, zero());
        let maps = vec![
            char2(&random_qmatrix(2, &mut rng)),
            char3(&generic_poly_matrix()),
            char3(&random_dense3(&mut rng)),
            char3(&planted),
            reduce_discontinuous(&detached_pole_matrix()).unwrap(),
        ];
        for map in &maps {
            let expect = map.leading_magnitude();
            for _ in 0..6 {
                let dir = rng.quaternion_in_ball(1.0);
                if dir.norm() < 0.1 {
                    continue;
                }
                let l = dir * (radius / dir.norm());
                let got = map.eval(l).norm() / radius.powi(map.degree() as i32);
                assert!(
                    (got - expect).abs() <= 1e-4 * (1.0 + expect),
                    "growth mismatch: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn pole_candidates_enumeration() {
        let a = detached_pole_matrix();
        let cands = pole_candidates(&a);
        assert_eq!(cands.len(), 6);
        assert!(cands[0].1.unwrap().approx_eq(-quat::I, 0.0));
        for (sigma, cand) in &cands {
            let m = a.conj_by_permutation(sigma);
            match cand {
                Some(p) => assert!(pole(&m).unwrap().approx_eq(*p, 0.0)),
                None => assert_eq!(pole(&m), Err(Error::PolynomialCase)),
            }
        }
        let cands = pole_candidates(&generic_poly_matrix());
        assert!(cands.iter().any(|(_, c)| c.is_none()));
    }
}
