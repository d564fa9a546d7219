//! Continued fraction for `I_{nu+1}(x)/I_nu(x)` from the three-term recurrence.

/// `r_nu = 1/(2(nu+1)/x + r_{nu+1})`, modified Lentz, plain `f64`.
pub(crate) fn ratio_i_cf(nu: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..200_000 {
        let b = 2.0 * (nu + k as f64) / x;
        d = b + d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    f
}
