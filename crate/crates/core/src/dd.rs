//! Double-double arithmetic (about 31 significant digits).
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
//! Only the operations the evaluators need are provided.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unit roundoff of the double-double format, 2^-104.
pub const DD_EPS: f64 = 4.930380657631324e-32;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    #[inline]
    pub const fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::prod(q1, b);
        let q2 = r.hi / b;
        let r = r - Dd::prod(q2, b);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    /// Multiply by 2^k exactly (no overflow checks).
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        let mut r = self;
        let mut k = k;
        while k > 1000 {
            r = Dd { hi: r.hi * 2f64.powi(1000), lo: r.lo * 2f64.powi(1000) };
            k -= 1000;
        }
        while k < -1000 {
            r = Dd { hi: r.hi * 2f64.powi(-1000), lo: r.lo * 2f64.powi(-1000) };
            k += 1000;
        }
        let s = 2f64.powi(k);
        Dd { hi: r.hi * s, lo: r.lo * s }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::new(f64::NAN) };
        }
        // one Newton correction of the double estimate
        let s = self.hi.sqrt();
        let r = Dd::prod(s, s);
        let corr = (self - r).hi / (2.0 * s);
        Dd::sum(s, corr)
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.7 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Dd::LN2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        // expm1 on the reduced argument, |r| < 3.4e-4
        let mut term = r;
        let mut s = r;
        for n in 2..=12 {
            term = (term * r).div_f64(n as f64);
            s = s + term;
            if term.hi.abs() < 1e-36 * s.hi.abs().max(1e-300) {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s * s;
        }
        (s + Dd::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::new(f64::NAN);
        }
        let x = Dd::new(self.hi.ln());
        x + self * (-x).exp() - Dd::ONE
    }

    /// `ln(1 + self)` accurate for small arguments.
    pub fn ln_1p(self) -> Dd {
        if self.hi.abs() > 0.25 {
            return (self + Dd::ONE).ln();
        }
        // Newton on exp(y) - 1 = a, starting from the double estimate
        let y = Dd::new(self.hi.ln_1p());
        let em1 = y.expm1();
        y - (em1 - self) / (em1 + Dd::ONE)
    }

    /// `exp(self) - 1` accurate for small arguments.
    pub fn expm1(self) -> Dd {
        if self.hi.abs() > 0.25 {
            return self.exp() - Dd::ONE;
        }
        let mut term = self;
        let mut s = self;
        for n in 2..=40 {
            term = (term * self).div_f64(n as f64);
            s = s + term;
            if term.hi.abs() <= 1e-34 * s.hi.abs() {
                break;
            }
        }
        s
    }

    pub fn asinh(self) -> Dd {
        let a = self.abs();
        let r = (a + (a.sqr() + Dd::ONE).sqrt()).ln();
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }

    pub fn cosh(self) -> Dd {
        let e = self.exp();
        (e + e.recip()).mul_f64(0.5)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Dd, b: Dd) -> f64 {
        ((a - b).to_f64() / b.to_f64()).abs()
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &v in &[-80.0, -3.3, -1e-8, 0.5, 1.0, 7.25, 123.456] {
            let x = Dd::new(v) + Dd::new(v * 1e-17);
            let back = x.exp().ln();
            assert!((back - x).to_f64().abs() <= 1e-29 * v.abs().max(1.0), "{v}");
        }
    }

    #[test]
    fn exp_one_is_e() {
        // e to 32 digits: 2.7182818284590452353602874713527
        let e = Dd::ONE.exp();
        let reference = Dd::new(2.718_281_828_459_045) + Dd::new(1.445_646_891_729_250_2e-16);
        assert!(rel(e, reference) < 1e-30);
    }

    #[test]
    fn sqrt_and_div() {
        let two = Dd::new(2.0);
        let s = two.sqrt();
        assert!(rel(s * s, two) < 1e-31);
        let third = Dd::ONE / Dd::new(3.0);
        assert!(rel(third.mul_f64(3.0), Dd::ONE) < 1e-31);
    }

    #[test]
    fn ln2_constant_matches() {
        assert!(rel(Dd::new(2.0).ln(), Dd::LN2) < 1e-31);
    }

    #[test]
    fn small_argument_helpers() {
        let a = Dd::new(1e-12);
        let e = a.expm1();
        assert!(rel(e, a + Dd::new(5e-25) + Dd::new(1e-36 / 6.0)) < 1e-28);
        let l = a.ln_1p();
        assert!(rel(l, a - Dd::new(5e-25) + Dd::new(1e-36 / 3.0)) < 1e-28);
        let h = Dd::new(0.3).asinh();
        assert!(((h.to_f64()) - 0.3f64.asinh()).abs() < 1e-16);
    }
}
