use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Inversion of a (numerically) zero quaternion.
    NonInvertibleQuaternion,
    /// A matrix whose Study determinant vanishes at the working tolerance.
    SingularMatrix {
        /// The computed Study determinant.
        sdet: f64,
    },
    /// A bilateral form whose real 4×4 matrix is rank deficient.
    RankDeficientBilateralForm {
        /// The computed numeric rank (0..4).
        rank: usize,
    },
    /// The matrix has a zero entry off the diagonal, so the characteristic
    /// map is polynomial and no pole exists.
    PolynomialCase,
    /// A 2×2 matrix with both off-diagonal entries zero; the spectrum is the
    /// set of diagonal entries and no companion reduction applies.
    DiagonalCase,
    /// The pole is a left eigenvalue, so the rational map is continuous and
    /// the inverse reduction does not apply.
    PoleIsEigenvalue,
    /// Differential requested at the pole of a rational map.
    DifferentialAtPole,
    /// The solver exhausted every start without a verified root.
    NoRootFound,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonInvertibleQuaternion => write!(f, "non-invertible quaternion"),
            Error::SingularMatrix { sdet } => write!(f, "singular matrix (sdet = {sdet:e})"),
            Error::RankDeficientBilateralForm { rank } => {
                write!(f, "rank-deficient bilateral form (rank = {rank})")
            }
            Error::PolynomialCase => {
                write!(f, "polynomial case: a zero entry off the diagonal, no pole")
            }
            Error::DiagonalCase => {
                write!(f, "diagonal/triangular case: spectrum is the diagonal")
            }
            Error::PoleIsEigenvalue => {
                write!(f, "pole is an eigenvalue; use continuous path")
            }
            Error::DifferentialAtPole => write!(f, "differential undefined at pole"),
            Error::NoRootFound => write!(f, "no root found"),
        }
    }
}

impl std::error::Error for Error {}
