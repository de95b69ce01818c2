//! Exact finite models for paracanonical systems of irregular varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: ℚ(i) scalars, matrices, polynomials, truncated series, Pfaffians.
//! * [`cup_model`]: graded modules `M^0..M^n` over `V = H^1(O_X)` via cup product.
//! * [`transversality`]: derivative complexes, k-transversality, incidence counts.
//! * [`strata`]: skew families `s ↦ c_s`, their Pfaffian hypersurface and rank strata.
//! * [`ledger`]: Hodge-number arithmetic and the canonical-system verdicts.
//! * [`lift`]: order-by-order lifting of a section along a straight-line deformation.
//! * [`cli`]: the batch front end used by the `paracanonical` binary.

pub mod cli;
pub mod cup_model;
pub mod exact;
pub mod ledger;
pub mod lift;
pub mod sampling;
pub mod strata;
pub mod transversality;

pub use exact::{ExactMatrix, GaussianRational, SparsePoly, TruncatedSeries};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;
