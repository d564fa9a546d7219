use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::validity::excess;
use super::{tolerance, witness, CheckRecord, GridSpec, Violation};
use crate::catalog::Side;
use crate::context::{EvalContext, ValueWithError};
use crate::quantity::{quantity, QuantityKind};

pub const CONCAVITY_ORDERS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const GIG_ORDERS: [f64; 3] = [2.0, 5.0, 10.0];
/// Range of the random pair arguments, sampled log-uniformly.
pub const PAIR_RANGE: (f64, f64) = (1e-3, 100.0);

fn value(kind: QuantityKind, nu: f64, x: f64) -> Result<ValueWithError, String> {
    EvalContext::new(nu, x).and_then(|c| quantity(kind, &c)).map_err(|e| e.to_string())
}

/// `kind(nu, x)` on the given side of `bound(nu, x)` at every point.
fn pointwise(
    id: &str,
    kind: QuantityKind,
    points: &[(f64, f64)],
    side: Side,
    bound: impl Fn(f64, f64) -> f64 + Sync,
) -> CheckRecord {
    let started = Instant::now();
    let w: Vec<Violation> = points
        .par_iter()
        .filter_map(|&(nu, x)| {
            let b = bound(nu, x);
            match value(kind, nu, x) {
                Ok(v) => {
                    let m = excess(side, b, v.value, tolerance(v.value, v.rel_error_bound));
                    (m > 0.0).then(|| witness(kind.tag(), nu, x, b, v.value, m))
                }
                Err(e) => Some(witness(format!("{}: {e}", kind.tag()), nu, x, b, f64::NAN, f64::INFINITY)),
            }
        })
        .collect();
    CheckRecord::judged(id, 1e-9, w, started).note(format!("{} points", points.len()))
}

fn cross(orders: &[f64], xs: &[f64]) -> Vec<(f64, f64)> {
    orders.iter().flat_map(|&nu| xs.iter().map(move |&x| (nu, x))).collect()
}

/// Seeded pairs, log-uniform on [`PAIR_RANGE`].
pub fn random_pairs(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (PAIR_RANGE.0.ln(), PAIR_RANGE.1.ln());
    (0..count)
        .map(|_| {
            let a = rng.gen_range(lo..hi).exp();
            let b = rng.gen_range(lo..hi).exp();
            (a, b)
        })
        .collect()
}

/// Strict `lhs > rhs` up to rounding of both sides.
fn concave_gap(lhs: f64, rhs: f64, err: f64) -> f64 {
    rhs - lhs - (1e-12 * rhs.abs() + err)
}

/// Geometric concavity of `P` and midpoint concavity of `omega = x P` on the same pairs.
fn concavity_records(seed: u64, count: usize) -> Vec<CheckRecord> {
    let started = Instant::now();
    let pairs = random_pairs(seed, count);
    let jobs: Vec<(f64, (f64, f64))> = CONCAVITY_ORDERS
        .iter()
        .flat_map(|&nu| pairs.iter().map(move |&p| (nu, p)))
        .collect();
    let results: Vec<(Option<Violation>, Option<Violation>)> = jobs
        .par_iter()
        .map(|&(nu, (a, b))| {
            let p = |x: f64| value(QuantityKind::P, nu, x);
            let g = (a * b).sqrt();
            let m = 0.5 * (a + b);
            match (p(a), p(b), p(g), p(m)) {
                (Ok(pa), Ok(pb), Ok(pg), Ok(pm)) => {
                    let err = |v: &ValueWithError| v.value.abs() * v.rel_error_bound;
                    let rhs = (pa.value * pb.value).sqrt();
                    let gap = concave_gap(pg.value, rhs, err(&pg) + rhs * (pa.rel_error_bound + pb.rel_error_bound));
                    let geo = (gap > 0.0).then(|| witness(format!("P b={b}"), nu, a, rhs, pg.value, gap));
                    let (oa, ob, om) = (a * pa.value, b * pb.value, m * pm.value);
                    let rhs = 0.5 * (oa + ob);
                    let gap = concave_gap(om, rhs, m * err(&pm) + 0.5 * (a * err(&pa) + b * err(&pb)));
                    let mid = (gap > 0.0).then(|| witness(format!("omega b={b}"), nu, a, rhs, om, gap));
                    (geo, mid)
                }
                (ra, rb, rg, rm) => {
                    let msg = [ra, rb, rg, rm].into_iter().find_map(Result::err).unwrap_or_default();
                    let w = witness(format!("P: {msg}"), nu, a, f64::NAN, f64::NAN, f64::INFINITY);
                    (Some(w.clone()), Some(w))
                }
            }
        })
        .collect();
    let (geo, mid): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let note = format!("{} pairs per order, seed {seed}, orders {CONCAVITY_ORDERS:?}", pairs.len());
    vec![
        CheckRecord::judged("app/P_geometric_concavity", 1e-12, geo.into_iter().flatten().collect(), started).note(&note),
        CheckRecord::judged("app/omega_midpoint_concavity", 1e-12, mid.into_iter().flatten().collect(), started).note(&note),
    ]
}

/// Statistical and physical consequences of the bounds.
pub fn application_checks(grid: &GridSpec, seed: u64, pairs: usize) -> Vec<CheckRecord> {
    use QuantityKind::*;
    let xs = grid.x_values();
    let mut out = Vec::new();

    let orders: Vec<f64> = (0..=12).map(|i| -1.0 + 0.5 * i as f64).collect();
    let pts = cross(&orders, &GridSpec::linear_points(0.0, 20.0, 200));
    let nc = |nu: f64, x: f64| value(Nc, nu, x).map(|v| v.value).unwrap_or(f64::NAN);
    out.push(pointwise("app/ns_gt_nc", Ns, &pts, Side::Lower, nc));

    let pts = cross(&GIG_ORDERS, &GridSpec::log_points(0.1, 50.0, 200));
    let lo = pointwise("app/veff_range_lower", VEff, &pts, Side::Lower, |_, _| 0.0);
    let hi = pointwise("app/veff_range_upper", VEff, &pts, Side::Upper, |nu, _| 1.0 / (nu - 1.0));
    out.extend([lo, hi]);

    let pts = cross(&[0.25, 0.5, 1.0, 2.0], xs);
    out.push(pointwise("app/b2hat_upper", B2Hat, &pts, Side::Upper, |nu, x| -(x + nu) / (2.0 * x)));
    let pts = cross(&[0.5, 1.0, 2.0], xs);
    out.push(pointwise("app/b2hat_upper_strong", B2Hat, &pts, Side::Upper, |_, _| -1.0));

    let pts = cross(&CONCAVITY_ORDERS, xs);
    out.push(pointwise("app/P_below_inverse_twice_order", P, &pts, Side::Upper, |nu, _| 1.0 / (2.0 * nu)));

    out.extend(concavity_records(seed, pairs));
    out
}
