//! `K_nu = (pi/2) (I_{-nu} - I_nu) / sin(nu pi)`, used only as a cross-check.

use super::series::{i_scaled, normalized_series};
use crate::dd::Dd;

/// Orders closer than this to an integer are rejected.
pub const MIN_INTEGER_DISTANCE: f64 = 0.05;
/// Above this argument the difference loses too many digits.
pub const MAX_ARGUMENT: f64 = 2.0;

pub(crate) fn applies(nu: f64, x: f64) -> bool {
    (nu - nu.round()).abs() > MIN_INTEGER_DISTANCE && x <= MAX_ARGUMENT
}

fn sin_pi(nu: f64) -> f64 {
    let n = nu.round();
    let s = (std::f64::consts::PI * (nu - n)).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `None` when the reflection formula is not trusted at `(nu, x)`.
pub(crate) fn k_reflection(nu: f64, x: f64) -> Option<f64> {
    if !applies(nu, x) {
        return None;
    }
    let ip = i_scaled(nu, x, &normalized_series(nu, x)).0.value();
    let im = i_scaled(-nu, x, &normalized_series(-nu, x)).0.value();
    let k = (im - ip) * Dd::PI.mul_f64(0.5) / Dd::new(sin_pi(nu));
    Some(k.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_form() {
        let x = 1.0;
        let exact = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
        let k = k_reflection(0.5, x).unwrap();
        assert!(((k - exact) / exact).abs() < 1e-14);
        assert!(k_reflection(1.02, 1.0).is_none());
        assert!(k_reflection(0.5, 3.0).is_none());
    }
}
