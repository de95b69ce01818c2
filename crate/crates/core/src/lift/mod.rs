//! Order-by-order lifting of a section along a straight-line deformation,
//! on finite models of the section algebra.

pub mod fixtures;
pub mod lifter;
pub mod model;

pub use lifter::{
    exp_coefficients, higher_order_step, lift_from_sigma, lift_full, second_order_step,
    solve_sigma, verify_lift, LiftCheck, LiftError, LiftResult, LiftState, OrderTrace,
};
pub use model::{validate_model, Axiom, AxiomViolation, ProductEntry, SectionAlgebraModel};
