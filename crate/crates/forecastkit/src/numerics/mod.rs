//! Dense linear algebra, optimization, and polynomial root finding.
//!
//! Everything here is small-scale and deterministic: the matrices involved in
//! model fitting are at most a few hundred rows, so simple dense algorithms
//! with partial pivoting are both fast enough and easy to audit.

mod matrix;
mod optim;
mod roots;
mod solve;

pub use matrix::Matrix;
pub use optim::{nelder_mead, NelderMeadConfig, NelderMeadResult};
pub use roots::polynomial_roots;
pub use solve::{invert, levinson_toeplitz, relative_residual, solve_general, solve_spd};
