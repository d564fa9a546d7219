//! `K_a(x) = int_0^inf exp(-x cosh t) cosh(a t) dt` by the trapezoidal rule.
//!
//! Several orders share one set of nodes. With `A = max |a|` the common
//! factor `exp(-x cosh t + A t)` is log-concave with its peak at
//! `asinh(A/x)`; every order is that factor times a weight `<= 1`.

use crate::context::{BesselError, Result};
use crate::dd::{Dd, DD_EPS};

const CUTOFF: f64 = 1e-40;
const MAX_NODES: usize = 400_000;
const MAX_HALVINGS: usize = 6;
/// Internal accuracy aim; far below any user target so that ratios of
/// nearly equal values keep their digits.
const AIM: f64 = 1e-26;

#[derive(Debug, Clone)]
pub(crate) struct KQuad {
    /// Integral values divided by `exp(e_star)`.
    pub vals: Vec<Dd>,
    pub e_star: f64,
    pub rel_err: Vec<f64>,
}

struct Pass {
    fine: Vec<Dd>,
    coarse: Vec<Dd>,
    tail: Vec<f64>,
    nodes: usize,
}

fn trapezoid(orders: &[f64], x: f64, big_a: f64, e_star: f64, h: f64) -> Result<Pass> {
    let n = orders.len();
    let t_peak = (big_a / x).asinh();
    let step_up = Dd::new(h).exp();
    let step_dn = step_up.recip();
    let mut up_w: Vec<Dd> = vec![Dd::ONE; n];
    let mut dn_w: Vec<Dd> = vec![Dd::ONE; n];
    let up_step: Vec<Dd> = orders
        .iter()
        .map(|a| Dd::sum(a.abs(), -big_a).mul_f64(h).exp())
        .collect();
    let dn_step: Vec<Dd> = orders
        .iter()
        .map(|a| (-Dd::sum(a.abs(), big_a).mul_f64(h)).exp())
        .collect();

    let mut et = Dd::ONE;
    let mut emt = Dd::ONE;
    let e0 = Dd::sum(-x, -e_star).exp().mul_f64(0.5);
    let mut fine = vec![e0; n];
    let mut coarse = vec![e0; n];
    let mut k = 0usize;
    loop {
        k += 1;
        if k > MAX_NODES {
            return Err(BesselError::Accuracy { target: AIM, achieved: f64::INFINITY });
        }
        et = et * step_up;
        emt = emt * step_dn;
        let t = Dd::prod(k as f64, h);
        let cosh = (et + emt).mul_f64(0.5);
        let g = (-cosh.mul_f64(x)) + t.mul_f64(big_a);
        let e = g.add_f64(-e_star).exp();
        for j in 0..n {
            up_w[j] = up_w[j] * up_step[j];
            dn_w[j] = dn_w[j] * dn_step[j];
            let f = e * (up_w[j] + dn_w[j]).mul_f64(0.5);
            fine[j] = fine[j] + f;
            if k % 2 == 0 {
                coarse[j] = coarse[j] + f;
            }
        }
        let tf = t.hi;
        if tf > t_peak && e.hi < CUTOFF {
            let slope = x * tf.sinh() - big_a;
            if slope > 1e-3 {
                // concavity: the rest of the integral is below E(t)/|g'(t)|
                let tail = (0..n)
                    .map(|j| e.hi * 0.5 * (up_w[j].hi + dn_w[j].hi) / slope)
                    .collect();
                return Ok(Pass { fine, coarse, tail, nodes: k });
            }
        }
    }
}

pub(crate) fn k_quadrature(orders: &[f64], x: f64) -> Result<KQuad> {
    let big_a = orders.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let e_star = -(x * x + big_a * big_a).sqrt() + big_a * (big_a / x).asinh();
    let mut h = (0.5 / (x * x + big_a * big_a).sqrt().sqrt()).min(0.1) / 2.0;
    let mut last = None;
    for _ in 0..=MAX_HALVINGS {
        let p = trapezoid(orders, x, big_a, e_star, h)?;
        let mut vals = Vec::with_capacity(orders.len());
        let mut errs = Vec::with_capacity(orders.len());
        for j in 0..orders.len() {
            let qf = p.fine[j].mul_f64(h);
            let qc = p.coarse[j].mul_f64(2.0 * h);
            let err = ((qc - qf).hi.abs() + p.tail[j]) / qf.hi + 8.0 * p.nodes as f64 * DD_EPS;
            vals.push(qf);
            errs.push(err);
        }
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        let done = worst <= AIM;
        last = Some(KQuad { vals, e_star, rel_err: errs });
        if done {
            break;
        }
        h /= 2.0;
    }
    Ok(last.expect("at least one pass"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent f64 trapezoid with a generous cutoff.
    fn oracle_k(nu: f64, x: f64) -> f64 {
        let h = 0.01;
        let mut s = 0.5 * (-x).exp();
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            let f = (-x * t.cosh()).exp() * (nu * t).cosh();
            s += f;
            if x * t.cosh() > 800.0 || (f < 1e-300 && t > 1.0) {
                break;
            }
            k += 1;
        }
        s * h
    }

    fn value(q: &KQuad, j: usize) -> f64 {
        q.vals[j].to_f64() * q.e_star.exp()
    }

    #[test]
    fn matches_f64_oracle() {
        for &(nu, x) in &[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (0.3, 0.05), (4.5, 3.0), (0.0, 20.0)] {
            let q = k_quadrature(&[nu], x).unwrap();
            let o = oracle_k(nu, x);
            assert!(((value(&q, 0) - o) / o).abs() < 1e-13, "nu={nu} x={x}");
            assert!(q.rel_err[0] < 1e-26, "{:?}", q.rel_err);
        }
    }

    #[test]
    fn frozen_values() {
        // frozen from the f64 oracle above
        let q = k_quadrature(&[0.0, 1.0, 2.0], 1.0).unwrap();
        assert!((value(&q, 0) - 0.421_024_438_240_708_3).abs() < 1e-16);
        assert!((value(&q, 1) - 0.601_907_230_197_234_6).abs() < 1e-16);
        assert!((value(&q, 2) - 1.624_838_898_635_177_5).abs() < 2e-16);
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[1e-3, 0.1, 1.0, 7.0, 29.0] {
            let q = k_quadrature(&[-0.5, 0.5, 1.5], x).unwrap();
            let r_up = q.vals[2] / q.vals[1];
            let r_dn = q.vals[0] / q.vals[1];
            assert!((r_up - Dd::new(1.0) - Dd::new(1.0) / Dd::new(x)).hi.abs() < 1e-25 * (1.0 + 1.0 / x));
            assert!((r_dn - Dd::ONE).hi.abs() < 1e-25);
        }
    }

    #[test]
    fn extreme_corners() {
        for &(nu, x) in &[(21.0, 1e-3), (9.0, 1e-3), (11.0, 450.0), (0.0, 1e-3)] {
            let q = k_quadrature(&[nu - 1.0, nu, nu + 1.0], x).unwrap();
            assert!(q.rel_err.iter().all(|e| *e < 1e-24), "nu={nu} x={x} {:?}", q.rel_err);
        }
    }
}
