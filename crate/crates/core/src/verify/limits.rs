use std::time::Instant;

use rayon::prelude::*;

use super::validity::excess;
use super::{tolerance, witness, CheckRecord, GridSpec, Violation};
use crate::catalog::{Catalog, SharpAt, Side};
use crate::context::EvalContext;
use crate::deriv::numeric_derivative;
use crate::quantity::{quantity, QuantityKind};

/// Location of the maximum of `w_{1/2}`.
pub const GRONWALL_ROOT: f64 = 3.577_847_594;
pub const GRONWALL_TOL: f64 = 1e-6;
pub const EQUALITY_REL_TOL: f64 = 1e-12;
pub const EQUALITY_POINTS: usize = 50;

fn value(kind: QuantityKind, nu: f64, x: f64) -> Result<f64, String> {
    EvalContext::new(nu, x)
        .and_then(|c| quantity(kind, &c))
        .map(|v| v.value)
        .map_err(|e| e.to_string())
}

/// `|actual - expected| < tol`, or a witness with the excess.
fn close(label: &str, nu: f64, x: f64, expected: f64, actual: Result<f64, String>, tol: f64) -> Option<Violation> {
    match actual {
        Ok(a) => {
            let gap = (a - expected).abs();
            (gap >= tol || gap.is_nan()).then(|| witness(label, nu, x, expected, a, gap - tol))
        }
        Err(e) => Some(witness(format!("{label}: {e}"), nu, x, expected, f64::NAN, f64::INFINITY)),
    }
}

/// Identities and bound equalities on the line `nu = 1/2`.
pub fn equality_checks(catalog: &Catalog) -> Vec<CheckRecord> {
    let xs = GridSpec::log_points(1e-3, 100.0, EQUALITY_POINTS);
    let mut out = Vec::new();

    let started = Instant::now();
    let w = xs
        .iter()
        .filter_map(|&x| close("phiK", 0.5, x, -1.0 / x, value(QuantityKind::PhiK, 0.5, x), EQUALITY_REL_TOL / x))
        .collect();
    out.push(CheckRecord::judged("equality/phiK_half", EQUALITY_REL_TOL, w, started));

    let started = Instant::now();
    let w = xs
        .iter()
        .filter_map(|&x| {
            close("z", 0.5, x, -x - 0.5, value(QuantityKind::Z, 0.5, x), EQUALITY_REL_TOL * (x + 0.5))
        })
        .collect();
    out.push(CheckRecord::judged("equality/z_half", EQUALITY_REL_TOL, w, started));

    for spec in catalog.entries().iter().filter(|b| b.sharp_at.contains(&SharpAt::EqualityAtHalf)) {
        let started = Instant::now();
        let w = xs
            .iter()
            .filter_map(|&x| {
                let b = catalog.evaluate_spec(spec, 0.5, x).value?;
                let v = value(spec.quantity, 0.5, x);
                let tol = EQUALITY_REL_TOL * v.as_ref().map(|v| v.abs()).unwrap_or(1.0);
                close(spec.id, 0.5, x, b, v, tol)
            })
            .collect();
        out.push(CheckRecord::judged(format!("equality/{}", spec.id), EQUALITY_REL_TOL, w, started));
    }
    out
}

struct LimitCase {
    kind: QuantityKind,
    nu: f64,
    x: f64,
    expected: f64,
    tol: f64,
}

fn limit_record(id: &str, cases: Vec<LimitCase>, tol_label: f64) -> CheckRecord {
    let started = Instant::now();
    let w = cases
        .par_iter()
        .filter_map(|c| close(c.kind.tag(), c.nu, c.x, c.expected, value(c.kind, c.nu, c.x), c.tol))
        .collect::<Vec<_>>();
    CheckRecord::judged(id, tol_label, w, started)
}

/// Endpoint limits and ranges of the auxiliary functions.
pub fn limit_checks(grid: &GridSpec) -> Vec<CheckRecord> {
    use QuantityKind::*;
    let mut out = Vec::new();
    let case = |kind, nu, x, expected, tol| LimitCase { kind, nu, x, expected, tol };

    let cases = [0.0, 0.5, 1.0, 2.0, 5.0].map(|nu| case(PhiI, nu, 1e-4, 1.0 / (nu + 1.0), 1e-6));
    out.push(limit_record("limit/phiI_at_zero", cases.into(), 1e-6));

    let cases = [0.0, 0.5, 1.0, 2.0, 5.0].map(|nu| case(Y, nu, 1e-5, nu, 1e-9));
    out.push(limit_record("limit/y_at_zero", cases.into(), 1e-9));

    let cases = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, -2.0].map(|nu: f64| case(Z, nu, 1e-5, -nu.abs(), 1e-9));
    out.push(limit_record("limit/z_at_zero", cases.into(), 1e-9));

    let cases = [1.5, 2.0, 3.0].map(|nu: f64| {
        let lim = 1.0 / (1.0 - nu);
        case(PhiK, nu, 1e-4, lim, 1e-4 * lim.abs())
    });
    out.push(limit_record("limit/phiK_at_zero", cases.into(), 1e-4));

    // divergent cases: only the sign and size are asserted
    let started = Instant::now();
    let w = [0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .filter_map(|nu| match value(PhiK, nu, 1e-3) {
            Ok(v) if v < -10.0 => None,
            Ok(v) => Some(witness("phiK", nu, 1e-3, -10.0, v, v + 10.0)),
            Err(e) => Some(witness(format!("phiK: {e}"), nu, 1e-3, -10.0, f64::NAN, f64::INFINITY)),
        })
        .collect();
    out.push(CheckRecord::judged("limit/phiK_diverges_at_zero", 0.0, w, started));

    out.push(limit_record("limit/lambda_at_zero", vec![case(Lambda, 1.0, 1e-4, -1.0, 1e-6)], 1e-6));
    out.push(limit_record("limit/lambda_at_infinity", vec![case(Lambda, 1.0, 200.0, -0.5, 1e-2)], 1e-2));
    let cases = [0.5, 1.0, 2.0].map(|nu| case(W, nu, 500.0, 0.5, 1e-2));
    out.push(limit_record("limit/w_at_infinity", cases.into(), 1e-2));
    let cases = [0.5, 1.0, 2.0].map(|nu| case(Q, nu, 500.0, -0.5, 1e-2));
    out.push(limit_record("limit/q_at_infinity", cases.into(), 1e-2));

    if let Some(g) = grid.with_orders(|nu| nu >= -0.5) {
        out.push(range_record("range/lambda", Lambda, &g, -1.0, -0.5));
    }
    out.push(range_record("range/t", T, grid, -0.5, 0.0));
    out
}

/// Open-interval membership over a grid, strict up to the sweep tolerance.
fn range_record(id: &str, kind: QuantityKind, grid: &GridSpec, lo: f64, hi: f64) -> CheckRecord {
    let started = Instant::now();
    let w: Vec<Violation> = grid
        .points()
        .par_iter()
        .filter_map(|&(nu, x)| {
            let v = EvalContext::new(nu, x).and_then(|c| quantity(kind, &c));
            match v {
                Ok(v) => {
                    let tol = tolerance(v.value, v.rel_error_bound);
                    let below = excess(Side::Lower, lo, v.value, tol);
                    let above = excess(Side::Upper, hi, v.value, tol);
                    let edge = if below > above { lo } else { hi };
                    let m = below.max(above);
                    (m > 0.0).then(|| witness(kind.tag(), nu, x, edge, v.value, m))
                }
                Err(e) => Some(witness(format!("{}: {e}", kind.tag()), nu, x, lo, f64::NAN, f64::INFINITY)),
            }
        })
        .collect();
    CheckRecord::judged(id, 1e-9, w, started).note(format!("open interval ({lo}, {hi})"))
}

/// Equality, limit and range checks together.
pub fn equality_and_limit_checks(catalog: &Catalog, grid: &GridSpec) -> Vec<CheckRecord> {
    let mut v = equality_checks(catalog);
    v.extend(limit_checks(grid));
    v
}

fn w_half(x: f64) -> Result<f64, String> {
    value(QuantityKind::W, 0.5, x)
}

fn w_half_slope(x: f64) -> Result<f64, String> {
    let ctx = EvalContext::new(0.5, x).map_err(|e| e.to_string())?;
    numeric_derivative(QuantityKind::W, &ctx, 1).map_err(|e| e.to_string())
}

/// Root of `w'_{1/2}` on `[a, b]` by bisection.
pub(crate) fn bisect_w_slope(mut a: f64, mut b: f64) -> Result<f64, String> {
    let mut fa = w_half_slope(a)?;
    let fb = w_half_slope(b)?;
    if fa.signum() == fb.signum() {
        return Err(format!("no sign change of w' on [{a}, {b}]: {fa:e}, {fb:e}"));
    }
    while b - a > 1e-11 {
        let m = 0.5 * (a + b);
        let fm = w_half_slope(m)?;
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximum of `w_{1/2}`: it rises and then falls, so it is not increasing.
pub fn gronwall_probe() -> Vec<CheckRecord> {
    let started = Instant::now();
    let root = bisect_w_slope(1.0, 10.0);
    let root_rec = match &root {
        Ok(r) => {
            let gap = (r - GRONWALL_ROOT).abs();
            let w = (gap > GRONWALL_TOL)
                .then(|| witness("w_half_max", 0.5, *r, GRONWALL_ROOT, *r, gap - GRONWALL_TOL))
                .into_iter()
                .collect();
            CheckRecord::judged("gronwall/root", GRONWALL_TOL, w, started).note(format!("root {r:.10}"))
        }
        Err(e) => CheckRecord::judged("gronwall/root", GRONWALL_TOL, Vec::new(), started).fail_if(true).note(e),
    };

    let started = Instant::now();
    let peak = root.clone().unwrap_or(GRONWALL_ROOT);
    let shape = (|| -> Result<(f64, f64, f64), String> { Ok((w_half(1.0)?, w_half(peak)?, w_half(10.0)?)) })();
    let shape_rec = match shape {
        Ok((w1, wp, w10)) => {
            let mut w = Vec::new();
            if w1 >= wp {
                w.push(witness("w_half_rises", 0.5, 1.0, wp, w1, w1 - wp));
            }
            if w10 >= wp {
                w.push(witness("w_half_falls", 0.5, 10.0, wp, w10, w10 - wp));
            }
            CheckRecord::judged("gronwall/not_monotone", 0.0, w, started)
                .note(format!("w(1) = {w1:.10}, w(peak) = {wp:.10}, w(10) = {w10:.10}"))
        }
        Err(e) => CheckRecord::judged("gronwall/not_monotone", 0.0, Vec::new(), started).fail_if(true).note(e),
    };
    vec![root_rec, shape_rec]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gronwall_root_located() {
        let r = bisect_w_slope(1.0, 10.0).unwrap();
        assert!((r - 3.577_847_596_318_864_7).abs() < 1e-8, "{r}");
    }

    #[test]
    fn half_order_equalities_hold() {
        for rec in equality_checks(&Catalog::standard()) {
            assert!(rec.passed(), "{rec:?}");
        }
    }
}
