//! Bakry–Émery curvature of fractional Laplacians on the circle.
//!
//! On Fourier modes the carré du champ of `L_γ = −(−Δ)^{γ/2}` is the
//! covariance kernel of fractional Brownian motion with `H = γ/2`, and the
//! iterated carré du champ is its Hadamard square. Curvature on
//! positive-frequency polynomials of degree `N` is therefore the bottom of the
//! pencil `(R_H^{∘2}, R_H)`.
//!
//! - [`kernels`]: closed-form scalar kernels.
//! - [`matrices`]: covariance matrices, Hadamard powers, Cholesky, the exact
//!   integer curvature matrix at `H = 1/2`.
//! - [`eigensolve`]: symmetric and generalized eigenproblems.
//! - [`curvature`]: curvature constants and the theorem checks built on them.
//! - [`oracle`]: brute-force Γ-calculus on trigonometric polynomials.

pub mod curvature;
pub mod eigensolve;
pub mod error;
pub mod kernels;
pub mod matrices;
pub mod oracle;
pub mod rng;
pub mod table;

pub use error::{Error, Result};
pub use kernels::StableParams;
pub use matrices::{DenseMatrix, ExactCurvatureMatrix, LowerTriangular, SymMatrix};
pub use eigensolve::Spectrum;
