//! Power series of `I_nu`, normalized so that the leading term is 1.

use crate::context::Scaled;
use crate::dd::{Dd, DD_EPS};

/// Claimed relative accuracy of `libm::tgamma` for non-integer arguments.
pub(crate) const GAMMA_REL_ERR: f64 = 2e-15;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub sum: Dd,
    pub rel_err: f64,
}

/// `sum_k (x^2/4)^k / (k! (nu+1)_k)`; `nu` must not be a negative integer.
pub(crate) fn normalized_series(nu: f64, x: f64) -> SeriesSum {
    let q = Dd::prod(x, x).mul_f64(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut abs_sum = 1.0f64;
    let mut k = 0usize;
    let mut tail = 0.0;
    loop {
        k += 1;
        let kf = k as f64;
        let den = Dd::sum(kf, nu).mul_f64(kf);
        term = term * q / den;
        sum = sum + term;
        abs_sum += term.hi.abs();
        let next_shift = kf + 1.0 + nu;
        if next_shift > 0.0 {
            let rho = q.hi / ((kf + 1.0) * next_shift);
            if rho < 0.5 {
                tail = term.hi.abs() * rho / (1.0 - rho);
                if tail <= 1e-34 * sum.hi.abs() {
                    break;
                }
            }
        }
        if k > 100_000 {
            break;
        }
    }
    let s = sum.hi.abs();
    SeriesSum {
        sum,
        rel_err: (4.0 * k as f64 * DD_EPS * abs_sum + tail) / s,
    }
}

/// `Gamma(a)` together with a relative error claim.
pub(crate) fn gamma(a: f64) -> (Dd, f64) {
    if a == a.round() && (1.0..=23.0).contains(&a) {
        let mut f = Dd::ONE;
        for j in 2..(a as usize) {
            f = f.mul_f64(j as f64);
        }
        return (f, 8.0 * DD_EPS * a);
    }
    (Dd::new(libm::tgamma(a)), GAMMA_REL_ERR)
}

/// `I_nu(x)` as `m * exp(e)` from the series, with its relative error.
pub(crate) fn i_scaled(nu: f64, x: f64, s: &SeriesSum) -> (Scaled, f64) {
    let (g, g_err) = gamma(nu + 1.0);
    let e = Dd::new(x).mul_f64(0.5).ln().mul_f64(nu);
    (Scaled { m: s.sum / g, e }, s.rel_err + g_err + 1e-29 * (1.0 + e.hi.abs()))
}
