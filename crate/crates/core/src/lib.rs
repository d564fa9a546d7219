//! Modified Bessel functions `I_nu`, `K_nu`, their Turánians and the
//! inequalities that bound them.
//!
//! * [`bessel`] and [`quantity`]: reference evaluation with error claims
//! * [`catalog`]: every bound as a domain-guarded formula
//! * [`verify`]: sweeps and probes that check the bounds numerically
//! * [`figure`]: CSV data for the three comparison plots
//! * [`selftest`]: quick closed-form checks of the evaluator

pub mod bessel;
pub mod catalog;
pub mod context;
pub mod dd;
pub mod deriv;
pub mod figure;
pub mod quantity;
pub mod selftest;
pub mod verify;

pub use catalog::Catalog;
pub use context::{BesselError, EvalContext, Result, ValueWithError, DEFAULT_TARGET};
pub use deriv::numeric_derivative;
pub use quantity::{quantity, quantity_with_target, PointEval, QuantityKind};
