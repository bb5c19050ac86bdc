//! Real 4×4 linearization of quaternionic real-linear maps.
//!
//! A quaternion `X` is identified with the coordinate column `(w, x, y, z)`
//! in the basis `{1, 𝐢, 𝐣, 𝐤}`. Left multiplication `X ↦ PX`, right
//! multiplication `X ↦ XQ` and finite bilateral sums `X ↦ Σ Pᵢ X Qᵢ` are then
//! real 4×4 matrices, which gives ranks, determinants and linear solves for
//! everything the characteristic-map machinery needs.

use serde::Serialize;

use crate::error::Error;
use crate::quat::Quaternion;

/// Dense real 4×4 matrix, row-major, acting on `vec(X) = (w, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealMat4(pub [[f64; 4]; 4]);

impl RealMat4 {
    pub fn zero() -> Self {
        RealMat4([[0.0; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.0[r][c]
    }

    pub fn add(&self, other: &RealMat4) -> RealMat4 {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[i][j] + other.0[i][j];
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> RealMat4 {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn matmul(&self, other: &RealMat4) -> RealMat4 {
        let mut m = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    m.0[i][j] += a * other.0[k][j];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn approx_eq(&self, other: &RealMat4, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        fn det3(m: [[f64; 3]; 3]) -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        let mut total = 0.0;
        for col in 0..4 {
            let mut minor = [[0.0; 3]; 3];
            for (mi, i) in (1..4).enumerate() {
                let mut mj = 0;
                for j in 0..4 {
                    if j == col {
                        continue;
                    }
                    minor[mi][mj] = self.0[i][j];
                    mj += 1;
                }
            }
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * self.0[0][col] * det3(minor);
        }
        total
    }

    /// Solve `self · x = rhs` by Gaussian elimination with partial pivoting.
    /// `None` when a pivot degenerates to zero.
    pub fn solve(&self, rhs: [f64; 4]) -> Option<[f64; 4]> {
        let mut a = self.0;
        let mut b = rhs;
        for col in 0..4 {
            let (pivot_row, pivot) = (col..4)
                .map(|r| (r, a[r][col].abs()))
                .max_by(|l, r| l.1.total_cmp(&r.1))
                .unwrap();
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            for r in col + 1..4 {
                let f = a[r][col] / a[col][col];
                if f == 0.0 {
                    continue;
                }
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
        let mut x = [0.0; 4];
        for r in (0..4).rev() {
            let mut acc = b[r];
            for c in r + 1..4 {
                acc -= a[r][c] * x[c];
            }
            x[r] = acc / a[r][r];
            if !x[r].is_finite() {
                return None;
            }
        }
        Some(x)
    }

    /// Singular values in descending order, by one-sided Jacobi on columns.
    ///
    /// Small singular values come out to absolute accuracy `O(ε‖m‖)`, which is
    /// what rank decisions at relative thresholds down to ~1e-12 need; forming
    /// `mᵀm` would square away anything below `√ε`.
    pub fn singular_values(&self) -> [f64; 4] {
        let mut cols = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                cols[j][i] = self.0[i][j];
            }
        }
        let dot = |u: &[f64; 4], v: &[f64; 4]| -> f64 { (0..4).map(|k| u[k] * v[k]).sum() };
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..3 {
                for q in p + 1..4 {
                    let (cp, cq) = (cols[p], cols[q]);
                    let app = dot(&cp, &cp);
                    let aqq = dot(&cq, &cq);
                    let apq = dot(&cp, &cq);
                    if apq.abs() <= 1e-15 * (app * aqq).sqrt() || apq == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..4 {
                        cols[p][k] = c * cp[k] - s * cq[k];
                        cols[q][k] = s * cp[k] + c * cq[k];
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv = [0.0f64; 4];
        for j in 0..4 {
            sv[j] = dot(&cols[j], &cols[j]).sqrt();
        }
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }
}

/// A finite sum of bilateral terms `X ↦ Σᵢ Pᵢ X Qᵢ`.
///
/// Term order is preserved so that serialized fixtures stay byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilateralForm {
    terms: Vec<(Quaternion, Quaternion)>,
}

impl BilateralForm {
    pub fn new(terms: Vec<(Quaternion, Quaternion)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Quaternion, Quaternion)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact evaluation `Σᵢ Pᵢ X Qᵢ`.
    pub fn eval(&self, x: Quaternion) -> Quaternion {
        self.terms
            .iter()
            .fold(Quaternion::zero(), |acc, (p, q)| acc + *p * x * *q)
    }

    /// The real 4×4 matrix of this form.
    pub fn matrix(&self) -> RealMat4 {
        bilateral_matrix(self)
    }
}

/// Matrix of `X ↦ PX`: `Re(P)·Id + A(P)` with the skew block determined by
/// the imaginary coordinates of `P`.
pub fn left_matrix(p: Quaternion) -> RealMat4 {
    let (x, y, z) = (p.x, p.y, p.z);
    let mut m = RealMat4([
        [0.0, -x, -y, -z],
        [x, 0.0, -z, y],
        [y, z, 0.0, -x],
        [z, -y, x, 0.0],
    ]);
    for i in 0..4 {
        m.0[i][i] += p.w;
    }
    m
}

/// Matrix of the right translation `X ↦ XQ`: `Re(Q)·Id + B(Q)`.
pub fn right_matrix(q: Quaternion) -> RealMat4 {
    let (u, v, w) = (q.x, q.y, q.z);
    let mut m = RealMat4([
        [0.0, -u, -v, -w],
        [u, 0.0, w, -v],
        [v, -w, 0.0, u],
        [w, v, -u, 0.0],
    ]);
    for i in 0..4 {
        m.0[i][i] += q.w;
    }
    m
}

/// Matrix of a bilateral sum: `Σᵢ L(Pᵢ)·R(Qᵢ)`. The left and right factors
/// commute, so the factor order inside each term is immaterial.
pub fn bilateral_matrix(form: &BilateralForm) -> RealMat4 {
    let mut m = RealMat4::zero();
    for (p, q) in form.terms() {
        m = m.add(&left_matrix(*p).matmul(&right_matrix(*q)));
    }
    m
}

/// Matrix of the two-term Sylvester operator `X ↦ PX + XQ`.
pub fn sylvester_matrix(p: Quaternion, q: Quaternion) -> RealMat4 {
    left_matrix(p).add(&right_matrix(q))
}

/// Closed form of `det(sylvester_matrix(P, Q))`; always nonnegative.
pub fn sylvester_det(p: Quaternion, q: Quaternion) -> f64 {
    let ts = p.w + q.w;
    let pim = p.x * p.x + p.y * p.y + p.z * p.z;
    let qim = q.x * q.x + q.y * q.y + q.z * q.z;
    ts.powi(4) + 2.0 * ts * ts * (pim + qim) + (pim - qim) * (pim - qim)
}

/// Number of singular values at or above `tol` relative to the largest.
/// A matrix whose largest singular value sits below `tol` times the working
/// scale (`max(‖m‖_F, 1)`) counts as rank 0.
pub fn numeric_rank(m: &RealMat4, tol: f64) -> usize {
    let sv = m.singular_values();
    let smax = sv[0];
    if smax <= tol * m.fro_norm().max(1.0) {
        return 0;
    }
    sv.iter().filter(|&&s| s >= tol * smax).count()
}

/// Solve `Σᵢ Pᵢ X Qᵢ = rhs` for `X` through the real 4×4 system.
pub fn solve_bilateral(
    form: &BilateralForm,
    rhs: Quaternion,
    rank_tol: f64,
) -> Result<Quaternion, Error> {
    let m = bilateral_matrix(form);
    let rank = numeric_rank(&m, rank_tol);
    if rank < 4 {
        return Err(Error::RankDeficientBilateralForm { rank });
    }
    let x = m
        .solve(rhs.to_array())
        .ok_or(Error::RankDeficientBilateralForm { rank })?;
    Ok(Quaternion::from_array(x))
}
