//! Study determinant, quasideterminants and quaternionic matrix inversion.
//!
//! A quaternionic matrix `A = X + 𝐣Y` (with `X`, `Y` complex) has the complex
//! adjoint `c(A) = [[X, −Ȳ], [Y, X̄]]`, and `Sdet(A) = (det c(A))^{1/2}` is a
//! nonnegative real functional that vanishes exactly on singular matrices.
//! It is multiplicative, so it serves as the ground truth every other module
//! is verified against.

use num_complex::Complex64;

use crate::cmat::CMat;
use crate::error::Error;
use crate::quat::Quaternion;

/// Dense square quaternionic matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Quaternion>,
}

impl QMatrix {
    pub fn new(n: usize, entries: Vec<Quaternion>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        Self { n, entries }
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend_from_slice(row);
        }
        Self { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, vec![Quaternion::zero(); n * n])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, Quaternion::one());
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.entries[r * self.n + c] = q;
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|q| q.is_finite())
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = QMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Quaternion::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Right action on a column vector: `(Av)ᵢ = Σ aᵢₖ vₖ`.
    pub fn mul_vec(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Quaternion::zero(), |acc, k| acc + self.get(i, k) * v[k])
            })
            .collect()
    }

    /// `A − λ·Id`.
    pub fn shifted(&self, lambda: Quaternion) -> QMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, m.get(i, i) - lambda);
        }
        m
    }

    pub fn scaled(&self, s: f64) -> QMatrix {
        QMatrix::new(self.n, self.entries.iter().map(|q| *q * s).collect())
    }

    /// Conjugation `P A P⁻¹` by the permutation matrix of `sigma`:
    /// entry `(i, j)` moves to `(sigma[i], sigma[j])`.
    pub fn conj_by_permutation(&self, sigma: &[usize]) -> QMatrix {
        assert_eq!(sigma.len(), self.n);
        let mut m = QMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(sigma[i], sigma[j], self.get(i, j));
            }
        }
        m
    }

    /// Square submatrix picked by row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let mut m = QMatrix::zero(k);
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                m.set(ri, ci, self.get(r, c));
            }
        }
        m
    }

    /// Complementary square submatrix: delete the given rows and columns.
    pub fn complement(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        assert_eq!(rows.len(), cols.len());
        let keep_r: Vec<usize> = (0..self.n).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.n).filter(|j| !cols.contains(j)).collect();
        self.submatrix(&keep_r, &keep_c)
    }

    pub fn approx_eq(&self, other: &QMatrix, tol: f64) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.approx_eq(*b, tol))
    }
}

/// The complex 2n×2n adjoint of a quaternionic n×n matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAdjoint {
    pub(crate) mat: CMat,
}

impl ComplexAdjoint {
    /// Side length (2n).
    pub fn order(&self) -> usize {
        self.mat.n
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.mat.get(r, c)
    }

    pub fn matmul(&self, other: &ComplexAdjoint) -> ComplexAdjoint {
        ComplexAdjoint { mat: self.mat.matmul(&other.mat) }
    }

    pub fn det(&self) -> Complex64 {
        self.mat.det()
    }

    /// Largest singular value; equals the operator norm of the source matrix.
    pub fn max_singular_value(&self) -> f64 {
        self.mat.singular_values()[0]
    }

    /// Smallest singular value; its reciprocal bounds the inverse's norm.
    pub fn min_singular_value(&self) -> f64 {
        *self
            .mat
            .singular_values()
            .last()
            .expect("adjoint is nonempty")
    }

    pub fn approx_eq(&self, other: &ComplexAdjoint, tol: f64) -> bool {
        self.mat.n == other.mat.n
            && self
                .mat
                .data
                .iter()
                .zip(&other.mat.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Split `q = α + 𝐣β` with `α = w + x𝐢` and `β = y − z𝐢`.
pub(crate) fn adjoint_parts(q: Quaternion) -> (Complex64, Complex64) {
    (Complex64::new(q.w, q.x), Complex64::new(q.y, -q.z))
}

/// Assemble the block matrix `[[X, −Ȳ], [Y, X̄]]` for `A = X + 𝐣Y`.
pub fn complex_adjoint(a: &QMatrix) -> ComplexAdjoint {
    let n = a.order();
    let mut m = CMat::zero(2 * n);
    for r in 0..n {
        for c in 0..n {
            let (alpha, beta) = adjoint_parts(a.get(r, c));
            m.set(r, c, alpha);
            m.set(r, n + c, -beta.conj());
            m.set(n + r, c, beta);
            m.set(n + r, n + c, alpha.conj());
        }
    }
    ComplexAdjoint { mat: m }
}

/// Study determinant `(det c(A))^{1/2}`.
///
/// The determinant of the adjoint is real and nonnegative up to rounding;
/// small negatives are clamped to zero, anything materially negative trips an
/// internal consistency panic.
pub fn sdet(a: &QMatrix) -> f64 {
    let adj = complex_adjoint(a);
    let d = adj.det();
    let m = 2 * a.order();
    // Hadamard bound on |det c(A)| as the rounding scale.
    let mut hadamard = 1.0f64;
    for r in 0..m {
        let row: f64 = (0..m).map(|c| adj.entry(r, c).norm_sqr()).sum();
        hadamard *= row.sqrt();
    }
    let scale = hadamard.max(1.0);
    assert!(
        d.re >= -1e-10 * scale,
        "complex adjoint determinant materially negative: {} (scale {})",
        d.re,
        scale
    );
    d.re.max(0.0).sqrt()
}

fn null_tol(a: &QMatrix) -> f64 {
    1e-12 * (1.0 + a.max_entry_norm())
}

/// Gelfand–Retakh quasideterminant at `(i, j)`, zero-based.
///
/// Defined recursively: `|A|_{ij} = a_{ij} − Σ a_{iq} (|A^{i,j}|_{pq})⁻¹ a_{pj}`,
/// the sum running over every `(p, q)` with `p ≠ i`, `q ≠ j` whose lower-order
/// quasideterminant exists and is non-null. `None` when no admissible term
/// exists at all. Terms accumulate in row-major `(p, q)` order so rounding is
/// reproducible.
pub fn quasidet(a: &QMatrix, i: usize, j: usize) -> Option<Quaternion> {
    let n = a.order();
    assert!(i < n && j < n, "quasideterminant index out of range");
    if n == 1 {
        return Some(a.get(0, 0));
    }
    let sub = a.complement(&[i], &[j]);
    let tol = null_tol(a);
    let mut acc = a.get(i, j);
    let mut admissible = false;
    for p in (0..n).filter(|&p| p != i) {
        for q in (0..n).filter(|&q| q != j) {
            let lp = if p < i { p } else { p - 1 };
            let lq = if q < j { q } else { q - 1 };
            if let Some(d) = quasidet(&sub, lp, lq) {
                if d.norm() > tol {
                    admissible = true;
                    acc -= a.get(i, q) * d.inv().expect("non-null checked") * a.get(p, j);
                }
            }
        }
    }
    admissible.then_some(acc)
}

fn residual(a: &QMatrix, inv: &QMatrix) -> f64 {
    let id = QMatrix::identity(a.order());
    let left = a.matmul(inv);
    let right = inv.matmul(a);
    let mut worst = 0.0f64;
    for i in 0..a.order() {
        for j in 0..a.order() {
            worst = worst.max((left.get(i, j) - id.get(i, j)).norm());
            worst = worst.max((right.get(i, j) - id.get(i, j)).norm());
        }
    }
    worst
}

/// Gauss–Jordan over the quaternions with partial pivoting by entry norm.
/// Row operations act by left multiplication, so `E·A = Id` yields `E = A⁻¹`.
fn gauss_inverse(a: &QMatrix) -> Result<QMatrix, Error> {
    let n = a.order();
    let mut rows: Vec<Vec<Quaternion>> = (0..n)
        .map(|i| {
            let mut row: Vec<Quaternion> = (0..n).map(|j| a.get(i, j)).collect();
            row.extend((0..n).map(|j| {
                if i == j { Quaternion::one() } else { Quaternion::zero() }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let (pivot_row, pivot_norm) = (col..n)
            .map(|r| (r, rows[r][col].norm()))
            .max_by(|l, r| l.1.total_cmp(&r.1))
            .unwrap();
        if pivot_norm == 0.0 {
            return Err(Error::SingularMatrix { sdet: 0.0 });
        }
        rows.swap(col, pivot_row);
        let pinv = rows[col][col].inv().expect("pivot nonzero");
        for c in 0..2 * n {
            rows[col][c] = pinv * rows[col][c];
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = rows[r][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in 0..2 * n {
                let delta = f * rows[col][c];
                rows[r][c] -= delta;
            }
        }
    }
    let mut inv = QMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, rows[i][n + j]);
        }
    }
    Ok(inv)
}

fn quasidet_inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.order();
    let tol = null_tol(a);
    let mut inv = QMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            // entry (i, j) of the inverse is the reciprocal quasideterminant at (j, i)
            let d = quasidet(a, j, i)?;
            if d.norm() <= tol {
                return None;
            }
            inv.set(i, j, d.inv().ok()?);
        }
    }
    Some(inv)
}

/// Inverse of a quaternionic matrix.
///
/// Primary path: reciprocal quasideterminants, entry `(i,j) = |A|_{ji}⁻¹`.
/// When some quasideterminant is undefined or too small, or the product
/// residual is poor, falls back to Gaussian elimination and keeps whichever
/// result verifies better.
pub fn inverse(a: &QMatrix) -> Result<QMatrix, Error> {
    let n = a.order();
    let s = sdet(a);
    let scale = (1.0 + a.max_entry_norm()).powi(n as i32);
    if s <= 1e-12 * scale {
        return Err(Error::SingularMatrix { sdet: s });
    }
    let quasi = quasidet_inverse(a);
    if let Some(m) = &quasi {
        let cond_scale = (1.0 + a.max_entry_norm()) * (1.0 + m.max_entry_norm());
        if residual(a, m) <= 1e-9 * cond_scale {
            return Ok(m.clone());
        }
    }
    let ge = gauss_inverse(a)?;
    match quasi {
        Some(m) if residual(a, &m) < residual(a, &ge) => Ok(m),
        _ => Ok(ge),
    }
}
