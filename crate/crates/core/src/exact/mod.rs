//! Exact arithmetic layer: ℚ(i) scalars, dense matrices, sparse polynomials,
//! truncated power series and Pfaffians.

pub mod matrix;
pub mod pfaffian;
pub mod poly;
pub mod scalar;
pub mod series;

pub use matrix::{rank_kernel_image, solve_linear, ExactMatrix, MatrixError, RankKernelImage};
pub use pfaffian::{pfaffian, pfaffian_poly, PfaffianError};
pub use poly::{PolyMatrix, SparsePoly};
pub use scalar::GaussianRational;
pub use series::{series_expand_power, Ring, TruncatedSeries};
