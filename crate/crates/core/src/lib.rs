//! Left spectra of quaternionic matrices.
//!
//! The crate computes and classifies left eigenvalues (quaternions `λ` for
//! which `A − λ·Id` is singular) of 2×2 and 3×3 quaternionic matrices.
//! The main pieces:
//!
//! * [`quat`] — quaternion arithmetic, the scalar substrate.
//! * [`linearize`] — real 4×4 representations of the real-linear maps
//!   `X ↦ Σ Pᵢ X Qᵢ`, numeric rank, and the induced linear solves.
//! * [`sdet`] — the Study determinant via the complex adjoint,
//!   quasideterminants and quaternionic matrix inversion.
//! * [`charmap`] — characteristic maps `μ` with `κ·|μ(λ)| = Sdet(A − λId)`,
//!   their poles and exact differentials.
//! * [`solver`] — multistart Newton root finding on characteristic maps and
//!   full spectrum classification.
//! * [`prng`] — a small deterministic generator used for seeding starts.

// index loops are the natural shape for the small fixed-size kernels here
#![allow(clippy::needless_range_loop)]

pub mod charmap;
pub mod error;
pub mod linearize;
pub mod prng;
pub mod quat;
pub mod sdet;
pub mod solver;

mod cmat;

pub use charmap::{CharMap, CharMapKind};
pub use error::Error;
pub use linearize::{BilateralForm, RealMat4};
pub use quat::Quaternion;
pub use sdet::QMatrix;
pub use solver::{SolverConfig, SpectrumKind, SpectrumReport};
