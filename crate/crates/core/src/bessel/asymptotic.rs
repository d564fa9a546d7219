//! Large-argument expansions of `I_nu` and `K_nu`.

use crate::context::Scaled;
use crate::dd::{Dd, DD_EPS};

#[derive(Debug, Clone, Copy)]
pub(crate) struct AsymSum {
    pub sum: Dd,
    /// |first omitted term| / |sum|
    pub omitted: f64,
}

/// `sum_k s^k a_k(nu) / x^k` with `s = -1` for `I`, `s = +1` for `K`.
pub(crate) fn asym_sum(nu: f64, x: f64, alternating: bool) -> AsymSum {
    let four_nu2 = Dd::prod(2.0 * nu, 2.0 * nu);
    let sign = if alternating { -1.0 } else { 1.0 };
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0usize;
    loop {
        k += 1;
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let num = four_nu2.add_f64(-odd * odd);
        if num.hi == 0.0 {
            return AsymSum { sum, omitted: 0.0 };
        }
        let next = (term * num / Dd::prod(8.0 * kf, x)).mul_f64(sign);
        let past_turn = kf > nu.abs() + 1.0;
        if past_turn && next.hi.abs() >= term.hi.abs() {
            return AsymSum { sum, omitted: next.hi.abs() / sum.hi.abs() };
        }
        if next.hi.abs() < 1e-34 * sum.hi.abs() || k > 4000 {
            return AsymSum { sum, omitted: next.hi.abs() / sum.hi.abs() };
        }
        term = next;
        sum = sum + term;
    }
}

/// `I_nu(x) = e^x / sqrt(2 pi x) * sum`, error `2|omitted| + e^{-2x}`.
pub(crate) fn i_scaled(x: f64, s: &AsymSum) -> (Scaled, f64) {
    let root = Dd::PI.mul_f64(2.0 * x).sqrt();
    (Scaled { m: s.sum / root, e: Dd::new(x) }, i_error(x, s))
}

/// `K_nu(x) = sqrt(pi/(2x)) e^{-x} * sum`, error `|omitted|`.
pub(crate) fn k_scaled(x: f64, s: &AsymSum) -> (Scaled, f64) {
    let root = (Dd::PI / Dd::new(2.0 * x)).sqrt();
    (Scaled { m: s.sum * root, e: Dd::new(-x) }, k_error(s))
}

pub(crate) fn i_error(x: f64, s: &AsymSum) -> f64 {
    2.0 * s.omitted + (-2.0 * x).exp() + 64.0 * DD_EPS
}

pub(crate) fn k_error(s: &AsymSum) -> f64 {
    s.omitted + 64.0 * DD_EPS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_orders_terminate() {
        let s = asym_sum(0.5, 40.0, false);
        assert_eq!(s.omitted, 0.0);
        assert_eq!(s.sum, Dd::ONE);
        let s = asym_sum(1.5, 40.0, false);
        assert_eq!(s.omitted, 0.0);
        // K_{3/2} = K_{1/2} (1 + 1/x)
        assert!((s.sum.to_f64() - 1.025).abs() < 1e-16);
    }

    #[test]
    fn k_half_closed_form() {
        let x = 45.0;
        let (v, _) = k_scaled(x, &asym_sum(0.5, x, false));
        let exact = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        assert!(((v.value().to_f64() - exact) / exact).abs() < 1e-15);
    }

    #[test]
    fn i_zero_at_forty_has_tiny_omitted_term() {
        let s = asym_sum(0.0, 40.0, true);
        assert!(s.omitted < 1e-30);
        let (v, err) = i_scaled(40.0, &s);
        assert!(err < 1e-28);
        // mpmath: I_0(40) = 1.4894774793419899e16
        assert!(((v.value().to_f64() - 1.489_477_479_341_99e16) / 1.489_477_479_341_99e16).abs() < 1e-14);
    }
}
