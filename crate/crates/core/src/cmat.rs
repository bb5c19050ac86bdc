//! Small dense complex matrices (order ≤ 6 in practice): LU determinants and
//! singular values by one-sided Jacobi. Crate-internal support for the
//! complex adjoint.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CMat {
    pub n: usize,
    pub data: Vec<Complex64>, // row-major
}

impl CMat {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] = v;
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Determinant by LU with partial pivoting on modulus.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let at = |a: &Vec<Complex64>, r: usize, c: usize| a[r * n + c];
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, at(&a, r, col).norm()))
                .max_by(|l, r| l.1.total_cmp(&r.1))
                .unwrap();
            if pivot_mag == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot_row * n + c);
                }
                det = -det;
            }
            let pivot = at(&a, col, col);
            det *= pivot;
            for r in col + 1..n {
                let f = at(&a, r, col) / pivot;
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = at(&a, r, c) - f * at(&a, col, c);
                    a[r * n + c] = v;
                }
            }
        }
        det
    }

    /// Singular values, descending, by one-sided Jacobi on columns.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        let mut cols: Vec<Vec<Complex64>> =
            (0..n).map(|j| (0..n).map(|i| self.get(i, j)).collect()).collect();
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n.saturating_sub(1) {
                for q in p + 1..n {
                    let app: f64 = cols[p].iter().map(|v| v.norm_sqr()).sum();
                    let aqq: f64 = cols[q].iter().map(|v| v.norm_sqr()).sum();
                    let apq: Complex64 =
                        cols[p].iter().zip(&cols[q]).map(|(u, v)| u.conj() * v).sum();
                    let g = apq.norm();
                    if g <= 1e-15 * (app * aqq).sqrt() || g == 0.0 {
                        continue;
                    }
                    rotated = true;
                    // rotate v by the conjugate phase so ⟨u, v⟩ becomes real,
                    // then the plain symmetric-Jacobi angle applies
                    let phase = apq / g;
                    let tau = (aqq - app) / (2.0 * g);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..n {
                        let u = cols[p][k];
                        let v = cols[q][k];
                        cols[p][k] = c * u - s * phase.conj() * v;
                        cols[q][k] = s * phase * u + c * v;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }
}
