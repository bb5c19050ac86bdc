//! Root finding on characteristic maps and spectrum classification.
//!
//! Newton iteration uses the exact differential of the map, linearized to a
//! real 4×4 system. A seeded multistart sweep covers the closed ball that is
//! guaranteed to contain every left eigenvalue (`|λ| ≤ ‖A‖`, the operator
//! norm); converged points are verified against the Study determinant,
//! clustered, and annotated with the rank of the differential.
//!
//! Every start is independent, so the sweep runs in parallel under the
//! `parallel` feature; results merge in start order either way, making
//! reports byte-identical for a fixed seed regardless of scheduling.

use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::charmap::{self, char2, char3, companion2, normalized2, CharMap, CharMapKind};
use crate::error::Error;
use crate::linearize::{bilateral_matrix, numeric_rank};
use crate::prng::SplitMix64;
use crate::quat::{self, Quaternion};
use crate::sdet::{adjoint_parts, complex_adjoint, sdet, QMatrix};

/// Tunable knobs of the solver. All behavior is deterministic for a fixed
/// seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Residual acceptance threshold, relative to the matrix scale.
    pub tol_residual: f64,
    /// Single-linkage clustering radius, relative to the matrix scale.
    pub tol_cluster: f64,
    /// Newton iteration budget per start.
    pub max_iter: u32,
    /// Number of starts (9 axis points plus seeded ball samples).
    pub n_starts: usize,
    /// Seed of the start generator.
    pub seed: u64,
    /// Relative singular-value threshold for differential ranks.
    pub rank_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-10,
            tol_cluster: 1e-6,
            max_iter: 100,
            n_starts: 64,
            seed: 0,
            rank_tol: 1e-9,
        }
    }
}

/// How a spectrum came out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    Finite,
    Spherical,
    /// More verified distinct roots than the degree; heuristic flag only.
    SuspectedInfinite,
}

/// One verified left eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub lambda: Quaternion,
    /// `Sdet(A − λId)` at the root.
    pub residual: f64,
    /// Rank of the differential of the characteristic map at the root;
    /// `None` where the differential is undefined (a continuous pole).
    pub diff_rank: Option<u8>,
    pub newton_iters: u32,
}

/// The eigensphere of the infinite 2×2 case:
/// `{(a + d + b·q)/2 : q imaginary, |q| = axis_norm}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalFamily {
    pub center: Quaternion,
    pub axis_norm: f64,
    pub note: String,
}

/// Classified left spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub kind: SpectrumKind,
    pub degree: u32,
    /// Which construction/classification case fired.
    pub classification_path: String,
    pub roots: Vec<RootReport>,
    pub spherical: Option<SphericalFamily>,
}

/// Outcome of one Newton start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonResult {
    pub root: Quaternion,
    /// Iterations until the residual tolerance was first met (polishing
    /// iterations afterwards are not counted).
    pub iters: u32,
}

/// Extra iterations after convergence, driving the root toward the rounding
/// floor. Regular roots take two or three; rank-deficient roots converge
/// linearly and use most of the budget.
const POLISH_ITERS: u32 = 48;

/// Newton iteration `λ ← λ − J(λ)⁻¹·μ(λ)` on a characteristic map, in the
/// map's own variable.
///
/// Steps are damped by halving (up to 20 times) until the residual
/// decreases. Success means `|μ(λ)| ≤ tol_residual·(1+|λ|)^degree`; failure
/// (iteration budget, a singular Jacobian away from a root, a pole hit) is
/// an ordinary `None`.
pub fn newton(map: &CharMap, start: Quaternion, cfg: &SolverConfig) -> Option<NewtonResult> {
    let deg = map.degree() as i32;
    let tol_at = |l: Quaternion| cfg.tol_residual * (1.0 + l.norm()).powi(deg);
    let mut lambda = start;
    let mut mu = map.eval(lambda);
    if !mu.is_finite() {
        return None;
    }
    let mut iters = 0u32;
    let mut converged_at: Option<u32> = None;
    loop {
        let r = mu.norm();
        if converged_at.is_none() && r <= tol_at(lambda) {
            converged_at = Some(iters);
        }
        match converged_at {
            Some(c) => {
                if r == 0.0 || iters >= c + POLISH_ITERS {
                    break;
                }
            }
            None => {
                if iters >= cfg.max_iter {
                    return None;
                }
            }
        }
        let step = map
            .differential(lambda)
            .ok()
            .map(|form| bilateral_matrix(&form))
            .and_then(|m| m.solve(mu.to_array()))
            .map(Quaternion::from_array);
        let step = match (step, converged_at) {
            (Some(s), _) => s,
            (None, Some(_)) => break,
            (None, None) => return None,
        };
        let mut accepted = false;
        let mut factor = 1.0;
        for _ in 0..=20 {
            let cand = lambda - step * factor;
            let cand_mu = map.eval(cand);
            if cand_mu.is_finite() && cand_mu.norm() < r {
                lambda = cand;
                mu = cand_mu;
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if !accepted {
            match converged_at {
                Some(_) => break,
                None => return None,
            }
        }
        iters += 1;
    }
    Some(NewtonResult { root: lambda, iters: converged_at.expect("loop exits converged") })
}

/// Run Newton from every start, sequentially, preserving start order.
pub fn newton_sweep_seq(
    map: &CharMap,
    starts: &[Quaternion],
    cfg: &SolverConfig,
) -> Vec<Option<NewtonResult>> {
    starts.iter().map(|s| newton(map, *s, cfg)).collect()
}

/// Run Newton from every start; parallel under the `parallel` feature.
/// Output order matches start order in both builds.
#[cfg(feature = "parallel")]
pub fn newton_sweep(
    map: &CharMap,
    starts: &[Quaternion],
    cfg: &SolverConfig,
) -> Vec<Option<NewtonResult>> {
    starts.par_iter().map(|s| newton(map, *s, cfg)).collect()
}

/// Run Newton from every start; parallel under the `parallel` feature.
/// Output order matches start order in both builds.
#[cfg(not(feature = "parallel"))]
pub fn newton_sweep(
    map: &CharMap,
    starts: &[Quaternion],
    cfg: &SolverConfig,
) -> Vec<Option<NewtonResult>> {
    newton_sweep_seq(map, starts, cfg)
}

/// Upper bound for `|λ|` over the left spectrum: the operator norm of `A`,
/// computed as the largest singular value of the complex adjoint.
pub fn eigen_bound(a: &QMatrix) -> f64 {
    complex_adjoint(a).max_singular_value()
}

/// Zhang's determinant function `σ(x, y)` for `λ = x + 𝐣y`: the determinant
/// of the shifted adjoint blocks, assembled directly from `X`, `Y`, `x`, `y`
/// rather than through `complex_adjoint` of the difference. Equals
/// `Sdet(A − λId)²` and provides an implementation-independent cross-check.
pub fn sigma_oracle(a: &QMatrix, lambda: Quaternion) -> f64 {
    let n = a.order();
    let (xc, yc) = adjoint_parts(lambda);
    let mut m = crate::cmat::CMat::zero(2 * n);
    for r in 0..n {
        for c in 0..n {
            let (alpha, beta) = adjoint_parts(a.get(r, c));
            let d = if r == c { 1.0 } else { 0.0 };
            m.set(r, c, alpha - d * xc);
            m.set(r, n + c, -(beta.conj()) + d * yc.conj());
            m.set(n + r, c, beta - d * yc);
            m.set(n + r, n + c, alpha.conj() - d * xc.conj());
        }
    }
    m.det().re
}

/// Axis starts scaled by the eigenvalue bound, then seeded samples from the
/// ball of radius 1.25×bound.
fn generate_starts(bound: f64, cfg: &SolverConfig) -> Vec<Quaternion> {
    let axis = [
        Quaternion::zero(),
        quat::ONE,
        -quat::ONE,
        quat::I,
        -quat::I,
        quat::J,
        -quat::J,
        quat::K,
        -quat::K,
    ];
    let mut starts: Vec<Quaternion> = axis
        .iter()
        .take(cfg.n_starts.max(1))
        .map(|q| *q * bound)
        .collect();
    let mut rng = SplitMix64::new(cfg.seed);
    while starts.len() < cfg.n_starts {
        starts.push(rng.quaternion_in_ball(1.25 * bound));
    }
    starts
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    lambda: Quaternion,
    residual: f64,
    iters: u32,
    at_pole: bool,
    /// Algebraically exact candidates outrank Newton approximations when a
    /// cluster picks its representative; at a multiple root the Newton floor
    /// is only ~√ε while the algebraic value is exact.
    preferred: bool,
}

/// Single-linkage clustering in candidate order; the representative of each
/// cluster is its best member: preferred first, then smallest residual,
/// first wins on ties.
fn cluster(cands: Vec<Candidate>, radius: f64) -> Vec<Candidate> {
    let mut clusters: Vec<Vec<Candidate>> = Vec::new();
    for cand in cands {
        let hits: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(_, cl)| cl.iter().any(|m| (m.lambda - cand.lambda).norm() <= radius))
            .map(|(i, _)| i)
            .collect();
        match hits.split_first() {
            None => clusters.push(vec![cand]),
            Some((&first, rest)) => {
                for &h in rest.iter().rev() {
                    let moved = clusters.remove(h);
                    clusters[first].extend(moved);
                }
                clusters[first].push(cand);
            }
        }
    }
    clusters
        .into_iter()
        .map(|cl| {
            cl.into_iter()
                .min_by(|a, b| {
                    (!a.preferred)
                        .cmp(&!b.preferred)
                        .then(a.residual.total_cmp(&b.residual))
                })
                .expect("clusters are nonempty")
        })
        .collect()
}

/// Rank of the differential at a root, on a scale-normalized matrix so that
/// machine-zero differentials classify as rank 0 regardless of entry size.
fn rank_at(a: &QMatrix, map: &CharMap, lambda: Quaternion, cfg: &SolverConfig) -> Option<u8> {
    let form = match a.order() {
        2 => map.differential(lambda).ok()?,
        _ => charmap::diff3(a, map, lambda).ok()?,
    };
    let m = bilateral_matrix(&form);
    let scale = (1.0 + a.max_entry_norm()).powi(map.degree() as i32 - 1);
    Some(numeric_rank(&m.scale(1.0 / scale), cfg.rank_tol) as u8)
}

fn finish_report(
    a: &QMatrix,
    map: &CharMap,
    cands: Vec<Candidate>,
    path: &str,
    cfg: &SolverConfig,
) -> Result<SpectrumReport, Error> {
    let scale = 1.0 + a.max_entry_norm();
    let reps = cluster(cands, cfg.tol_cluster * scale);
    if reps.is_empty() {
        return Err(Error::NoRootFound);
    }
    let roots: Vec<RootReport> = reps
        .iter()
        .map(|c| RootReport {
            lambda: c.lambda,
            residual: c.residual,
            diff_rank: if c.at_pole { None } else { rank_at(a, map, c.lambda, cfg) },
            newton_iters: c.iters,
        })
        .collect();
    let kind = if roots.len() > map.degree() as usize {
        SpectrumKind::SuspectedInfinite
    } else {
        SpectrumKind::Finite
    };
    Ok(SpectrumReport {
        kind,
        degree: map.degree(),
        classification_path: path.to_string(),
        roots,
        spherical: None,
    })
}

/// Algebraic root candidates read off the block structure of a polynomial
/// 3×3 map. Real permutation similarity preserves the spectrum, and a
/// box-decomposed matrix splits its spectrum over the boxes, so triangular
/// maps yield their diagonal entries exactly and block maps yield the 1×1
/// box plus the 2×2 box's own classified spectrum. The flag marks candidates
/// that came out of an exact algebraic path.
fn block_seed_candidates(a: &QMatrix, map: &CharMap, cfg: &SolverConfig) -> Vec<(Quaternion, bool)> {
    let m = match map.permutation() {
        Some(sigma) => a.conj_by_permutation(sigma),
        None => a.clone(),
    };
    let tol = 1e-12 * (1.0 + m.max_entry_norm());
    let sub_spectrum = |rows: [usize; 2]| -> Vec<(Quaternion, bool)> {
        let block = m.submatrix(&rows, &rows);
        match spectrum2(&block, cfg) {
            Ok(rep) => {
                let exact = matches!(
                    rep.classification_path.as_str(),
                    "diagonal" | "real-companion" | "spherical"
                );
                rep.roots.iter().map(|r| (r.lambda, exact)).collect()
            }
            Err(_) => Vec::new(),
        }
    };
    match map.kind() {
        CharMapKind::Tri3 => vec![(m.get(0, 0), true), (m.get(1, 1), true), (m.get(2, 2), true)],
        CharMapKind::Block3 => {
            if m.get(0, 1).norm() <= tol {
                // first row is a 1×1 box
                let mut out = vec![(m.get(0, 0), true)];
                out.extend(sub_spectrum([1, 2]));
                out
            } else {
                // last column is a 1×1 box
                let mut out = vec![(m.get(2, 2), true)];
                out.extend(sub_spectrum([0, 1]));
                out
            }
        }
        _ => Vec::new(),
    }
}

/// Candidates for the single eigenvalue of the rank-2 class, from the
/// companion data: with `a₁ = −2t + (β−α)` and `a₀ = (t+α)(t−β)` for
/// imaginary `α ≠ β` of equal norm, the unique root is `t − β`. Solving
/// `|β|² = s` from the quadratic it satisfies gives at most two candidates;
/// impostors are weeded out by the residual check downstream.
fn unique_root_candidates(a0: Quaternion, a1: Quaternion) -> Vec<Quaternion> {
    let t = -a1.re() / 2.0;
    let delta = a1.im();
    if delta.norm() <= 1e-14 * (1.0 + a1.norm()) {
        return Vec::new();
    }
    let w = Quaternion::real(t * t) - t * delta - a0;
    let w0 = w.re();
    let wim2 = w.norm_sqr() - w0 * w0;
    // s² + (2w₀ − |δ|²)s + (w₀² + |w_im|²) = 0; inside the rank-2 family
    // (|α| = |β|) the quadratic degenerates to a double root at the vertex,
    // so that value is taken directly instead of through the discriminant
    let b = 2.0 * w0 - delta.norm_sqr();
    let c = w0 * w0 + wim2;
    let mut svals = vec![-b / 2.0];
    let disc = b * b - 4.0 * c;
    if disc > 1e-12 * (1.0 + b * b + c.abs()) {
        svals.push((-b - disc.sqrt()) / 2.0);
        svals.push((-b + disc.sqrt()) / 2.0);
    }
    let delta_inv = delta.inv().expect("nonzero");
    svals
        .iter()
        .filter(|s| **s >= 0.0)
        .map(|s| {
            let beta = -(delta_inv * (Quaternion::real(*s) + w));
            Quaternion::real(t) - beta
        })
        .collect()
}

/// Left spectrum of a 2×2 matrix.
///
/// Classification: diagonal matrices list their diagonal; real companion
/// data `(a₀, a₁)` splits into the spherical case (`Δ < 0`, `a₀ ≠ 0`) and a
/// real quadratic; everything else runs the Newton multistart with the
/// rank-2 algebraic candidates mixed in.
pub fn spectrum2(a: &QMatrix, cfg: &SolverConfig) -> Result<SpectrumReport, Error> {
    assert_eq!(a.order(), 2, "spectrum2 expects a 2x2 matrix");
    assert!(a.is_finite(), "matrix entries must be finite");
    let scale = 1.0 + a.max_entry_norm();
    let sdet_tol = cfg.tol_residual * scale * scale;
    let ztol = 1e-12 * scale;
    let map = char2(a);
    let residual_of = |l: Quaternion| sdet(&a.shifted(l));
    let verified = |l: Quaternion, iters: u32, preferred: bool| -> Option<Candidate> {
        let r = residual_of(l);
        (r <= sdet_tol).then_some(Candidate {
            lambda: l,
            residual: r,
            iters,
            at_pole: false,
            preferred,
        })
    };

    // a zero off-diagonal entry makes the matrix a box decomposition, so the
    // spectrum is exactly the diagonal
    let b_zero = a.get(0, 1).norm() <= ztol;
    let c_zero = a.get(1, 0).norm() <= ztol;
    if b_zero || c_zero {
        let cands: Vec<Candidate> =
            [a.get(0, 0), a.get(1, 1)].iter().filter_map(|l| verified(*l, 0, true)).collect();
        let path = if b_zero && c_zero { "diagonal" } else { "triangular" };
        return finish_report(a, &map, cands, path, cfg);
    }

    let (m, _) = normalized2(a);
    let (ma, mb) = (m.get(0, 0), m.get(0, 1));
    let (a0, a1, _) = companion2(a)?;
    let reality_tol = 1e-10 * (1.0 + a0.norm() + a1.norm());

    if a0.im_norm() <= reality_tol && a1.im_norm() <= reality_tol {
        let a0r = a0.re();
        let a1r = a1.re();
        let disc = a1r * a1r - 4.0 * a0r;
        // borderline Δ ≈ 0 classifies as finite (a double root), so the
        // spherical branch requires a meaningfully negative discriminant
        let disc_tol = 1e-10 * (1.0 + a1r * a1r + 4.0 * a0r.abs());
        if disc < -disc_tol && a0r.abs() > reality_tol {
            // eigensphere {(a + d + b·q)/2 : q² = Δ}
            let center = (ma + m.get(1, 1)) * 0.5;
            let axis_norm = (-disc).sqrt();
            let mut rng = SplitMix64::new(cfg.seed ^ 0x5048_4552);
            let mut cands = Vec::new();
            for _ in 0..16 {
                let qdir = rng.imaginary_unit() * axis_norm;
                let l = center + (mb * qdir) * 0.5;
                if let Some(c) = verified(l, 0, true) {
                    cands.push(c);
                }
            }
            let reps = cluster(cands, cfg.tol_cluster * scale);
            if reps.is_empty() {
                return Err(Error::NoRootFound);
            }
            let roots = reps
                .iter()
                .map(|c| RootReport {
                    lambda: c.lambda,
                    residual: c.residual,
                    diff_rank: rank_at(a, &map, c.lambda, cfg),
                    newton_iters: 0,
                })
                .collect();
            return Ok(SpectrumReport {
                kind: SpectrumKind::Spherical,
                degree: 2,
                classification_path: "spherical".to_string(),
                roots,
                spherical: Some(SphericalFamily {
                    center,
                    axis_norm,
                    note: format!(
                        "eigenvalues (a + d + b*q)/2 for imaginary q with |q| = {axis_norm}, b = {mb}"
                    ),
                }),
            });
        }
        // real quadratic t² + a₁t + a₀ = 0 mapped through λ = a + b·t;
        // a borderline discriminant snaps to the exact double root, and the
        // split form avoids cancellation in the smaller root
        let ts: Vec<f64> = if disc.abs() <= disc_tol {
            vec![-a1r / 2.0]
        } else {
            let split = -(a1r + a1r.signum() * disc.sqrt()) / 2.0;
            vec![split, a0r / split]
        };
        let cands: Vec<Candidate> = ts
            .iter()
            .filter_map(|t| verified(ma + mb * Quaternion::real(*t), 0, true))
            .collect();
        return finish_report(a, &map, cands, "real-companion", cfg);
    }

    // generic: Newton multistart plus the algebraic rank-2 candidates; the
    // algebraic ones go first so their exact roots win residual ties against
    // nearby Newton approximations
    let mut cands: Vec<Candidate> = unique_root_candidates(a0, a1)
        .into_iter()
        .filter_map(|lprime| verified(ma + mb * lprime, 0, true))
        .collect();
    let starts = generate_starts(eigen_bound(a), cfg);
    cands.extend(
        newton_sweep(&map, &starts, cfg)
            .into_iter()
            .flatten()
            .filter_map(|res| verified(res.root, res.iters, false)),
    );
    finish_report(a, &map, cands, "newton-multistart", cfg)
}

/// Left spectrum of a 3×3 matrix.
///
/// Polynomial maps run the Newton multistart directly. Rational maps split
/// on the pole: a continuous pole is itself a root and the sweep avoids its
/// neighborhood; a discontinuous pole triggers the inverse reduction, the
/// sweep runs on the polynomial map of `B⁻¹`, and roots return through
/// `ρ ↦ ρ⁻¹ + π`. At least one root is guaranteed; an empty outcome is a
/// solver failure, never a valid report.
pub fn spectrum3(a: &QMatrix, cfg: &SolverConfig) -> Result<SpectrumReport, Error> {
    assert_eq!(a.order(), 3, "spectrum3 expects a 3x3 matrix");
    assert!(a.is_finite(), "matrix entries must be finite");
    let scale = 1.0 + a.max_entry_norm();
    let sdet_tol = cfg.tol_residual * scale.powi(3);
    let map = char3(a);
    let residual_of = |l: Quaternion| sdet(&a.shifted(l));
    let verified = |l: Quaternion, iters: u32, preferred: bool| -> Option<Candidate> {
        if !l.is_finite() {
            return None;
        }
        let r = residual_of(l);
        (r <= sdet_tol).then_some(Candidate {
            lambda: l,
            residual: r,
            iters,
            at_pole: false,
            preferred,
        })
    };

    match map.kind() {
        CharMapKind::Tri3 | CharMapKind::Block3 | CharMapKind::Poly3 => {
            let path = match map.kind() {
                CharMapKind::Tri3 => "polynomial/triangular",
                CharMapKind::Block3 => "polynomial/block",
                _ => "polynomial/generic",
            };
            let mut cands: Vec<Candidate> = block_seed_candidates(a, &map, cfg)
                .into_iter()
                .filter_map(|(l, preferred)| verified(l, 0, preferred))
                .collect();
            let starts = generate_starts(eigen_bound(a), cfg);
            cands.extend(
                newton_sweep(&map, &starts, cfg)
                    .into_iter()
                    .flatten()
                    .filter_map(|res| verified(res.root, res.iters, false)),
            );
            finish_report(a, &map, cands, path, cfg)
        }
        CharMapKind::Rational3 => {
            let pi = map.pole().expect("rational maps carry a pole");
            let bound = eigen_bound(a);
            if charmap::pole_is_eigenvalue(a, cfg.tol_residual)? {
                // the pole is a known root; avoid differentiating near it
                let exclusion = 1e-3 * (1.0 + bound);
                let mut cands = vec![Candidate {
                    lambda: pi,
                    residual: residual_of(pi),
                    iters: 0,
                    at_pole: true,
                    preferred: true,
                }];
                let starts: Vec<Quaternion> = generate_starts(bound, cfg)
                    .into_iter()
                    .filter(|s| (*s - pi).norm() >= exclusion)
                    .collect();
                cands.extend(
                    newton_sweep(&map, &starts, cfg)
                        .into_iter()
                        .flatten()
                        .filter_map(|res| verified(res.root, res.iters, false)),
                );
                finish_report(a, &map, cands, "rational/continuous", cfg)
            } else {
                let reduced = charmap::reduce_discontinuous(a)?;
                // roots of the reduced map are ρ = (λ−π)⁻¹ with |λ| ≤ ‖A‖,
                // so they live inside the ball of radius ‖B⁻¹‖
                let rho_bound = 1.0 / complex_adjoint(&a.shifted(pi)).min_singular_value();
                let starts = generate_starts(rho_bound, cfg);
                let cands: Vec<Candidate> = newton_sweep(&reduced, &starts, cfg)
                    .into_iter()
                    .flatten()
                    .filter_map(|res| {
                        let back = reduced.back_map(res.root).ok()?;
                        verified(back, res.iters, false)
                    })
                    .collect();
                finish_report(a, &reduced, cands, "rational/discontinuous→inverse-reduction", cfg)
            }
        }
        other => unreachable!("char3 produced {other:?}"),
    }
}
