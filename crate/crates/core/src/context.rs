//! Evaluation inputs, results and errors.

use serde::Serialize;
use thiserror::Error;

use crate::dd::Dd;

pub const NU_MIN: f64 = -10.0;
pub const NU_MAX: f64 = 20.0;
pub const X_MAX: f64 = 500.0;

/// Smallest relative tolerance a caller may request.
pub const MIN_TARGET: f64 = 1e-14;
pub const DEFAULT_TARGET: f64 = 1e-12;

/// Rounding of the final conversion to `f64`.
pub(crate) const F64_ROUND: f64 = f64::EPSILON / 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BesselError {
    #[error("order {0} outside the supported range [-10, 20]")]
    OrderOutOfRange(f64),
    #[error("argument {0} outside the supported range (0, 500]")]
    ArgumentOutOfRange(f64),
    #[error("target relative error {0:e} is below the minimum 1e-14")]
    TargetTooSmall(f64),
    #[error("{what} is undefined at nu={nu}, x={x}: {reason}")]
    Domain {
        what: String,
        nu: f64,
        x: f64,
        reason: String,
    },
    #[error("requested relative error {target:e} not reached (achieved {achieved:e})")]
    Accuracy { target: f64, achieved: f64 },
    #[error("evaluation paths disagree: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, BesselError>;

/// An order/argument pair inside the supported box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalContext {
    nu: f64,
    x: f64,
    mu: f64,
}

impl EvalContext {
    pub fn new(nu: f64, x: f64) -> Result<Self> {
        if !(NU_MIN..=NU_MAX).contains(&nu) {
            return Err(BesselError::OrderOutOfRange(nu));
        }
        if !(x > 0.0 && x <= X_MAX) {
            return Err(BesselError::ArgumentOutOfRange(x));
        }
        Ok(EvalContext { nu, x, mu: nu * nu - 0.25 })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `nu^2 - 1/4`
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub(crate) fn with_x(&self, x: f64) -> Result<Self> {
        EvalContext::new(self.nu, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValueWithError {
    pub value: f64,
    pub rel_error_bound: f64,
}

impl ValueWithError {
    /// Round a double-double result and fail if the claimed error exceeds `target`.
    pub(crate) fn checked(v: Dd, rel: f64, target: f64) -> Result<Self> {
        let value = v.to_f64();
        let rel_error_bound = rel + F64_ROUND;
        if !value.is_finite() {
            return Err(BesselError::Accuracy { target, achieved: f64::INFINITY });
        }
        if !(rel_error_bound <= target) {
            return Err(BesselError::Accuracy { target, achieved: rel_error_bound });
        }
        Ok(ValueWithError { value, rel_error_bound })
    }
}

pub(crate) fn check_target(target: f64) -> Result<()> {
    if target >= MIN_TARGET {
        Ok(())
    } else {
        Err(BesselError::TargetTooSmall(target))
    }
}

/// `m * exp(e)`; keeps magnitudes representable however large the exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub m: Dd,
    pub e: Dd,
}

impl Scaled {
    pub fn mul(self, o: Scaled) -> Scaled {
        Scaled { m: self.m * o.m, e: self.e + o.e }
    }

    pub fn div(self, o: Scaled) -> Scaled {
        Scaled { m: self.m / o.m, e: self.e - o.e }
    }

    pub fn value(self) -> Dd {
        self.m * self.e.exp()
    }
}
