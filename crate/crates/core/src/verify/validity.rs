use std::time::Instant;

use rayon::prelude::*;

use super::{sort_witnesses, tolerance, CheckRecord, GridSpec, Violation, VerifyError};
use crate::catalog::{BoundSpec, Catalog, Side, Status};
use crate::context::{EvalContext, ValueWithError};
use crate::quantity::{PointEval, QuantityKind};

/// Requested accuracy for sweep values; the claimed error is added to the tolerance anyway.
const SWEEP_TARGET: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub bound_id: String,
    pub nu: f64,
    pub x: f64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutcome {
    pub violations: Vec<Violation>,
    /// Points where the reference value could not be produced.
    pub failures: Vec<PointFailure>,
    /// Number of (bound, point) pairs inside the bound's domain.
    pub evaluated: usize,
}

/// Signed excess of `bound` over `value` in the violating direction, minus `tol`.
pub(crate) fn excess(side: Side, bound: f64, value: f64, tol: f64) -> f64 {
    match side {
        Side::Lower => bound - value - tol,
        Side::Upper => value - bound - tol,
    }
}

struct Values<'a> {
    point: &'a PointEval,
    cache: Vec<(QuantityKind, Result<ValueWithError, String>)>,
}

impl Values<'_> {
    fn get(&mut self, kind: QuantityKind) -> Result<ValueWithError, String> {
        if let Some((_, v)) = self.cache.iter().find(|(k, _)| *k == kind) {
            return v.clone();
        }
        let v = self.point.get(kind, SWEEP_TARGET).map_err(|e| e.to_string());
        self.cache.push((kind, v.clone()));
        v
    }
}

fn check_point(catalog: &Catalog, specs: &[&'static BoundSpec], nu: f64, x: f64) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    let ctx = match EvalContext::new(nu, x) {
        Ok(c) => c,
        Err(e) => {
            for s in specs.iter().filter(|s| s.domain_holds(nu, x)) {
                out.failures.push(PointFailure { bound_id: s.id.into(), nu, x, message: e.to_string() });
            }
            return out;
        }
    };
    let point = PointEval::new(ctx);
    let mut values = Values { point: &point, cache: Vec::new() };
    for spec in specs {
        let eval = catalog.evaluate_spec(spec, nu, x);
        let Some(bound) = eval.value else { continue };
        out.evaluated += 1;
        match values.get(spec.quantity) {
            Ok(v) => {
                let tol = tolerance(v.value, v.rel_error_bound);
                let margin = excess(spec.side, bound, v.value, tol);
                if margin > 0.0 {
                    out.violations.push(Violation {
                        bound_id: spec.id.into(),
                        nu,
                        x,
                        bound_value: bound,
                        true_value: v.value,
                        margin,
                    });
                }
            }
            Err(message) => out.failures.push(PointFailure { bound_id: spec.id.into(), nu, x, message }),
        }
    }
    out
}

/// Check the given bounds at every grid point inside their domains.
pub fn sweep_validity(catalog: &Catalog, ids: &[&str], grid: &GridSpec) -> Result<SweepOutcome, VerifyError> {
    let specs: Vec<&'static BoundSpec> = ids.iter().map(|id| catalog.get(id)).collect::<Result<_, _>>()?;
    let parts: Vec<SweepOutcome> = grid
        .points()
        .par_iter()
        .map(|&(nu, x)| check_point(catalog, &specs, nu, x))
        .collect();
    let mut out = SweepOutcome::default();
    for p in parts {
        out.violations.extend(p.violations);
        out.failures.extend(p.failures);
        out.evaluated += p.evaluated;
    }
    sort_witnesses(&mut out.violations);
    out.failures.sort_by(|a, b| {
        a.bound_id.cmp(&b.bound_id).then(a.nu.total_cmp(&b.nu)).then(a.x.total_cmp(&b.x))
    });
    Ok(out)
}

/// One `validity/<id>` record per proved entry.
pub(crate) fn validity_checks(catalog: &Catalog, grid: &GridSpec) -> Vec<CheckRecord> {
    let started = Instant::now();
    let ids: Vec<&str> = catalog
        .entries()
        .iter()
        .filter(|b| b.status == Status::Proved)
        .map(|b| b.id)
        .collect();
    let sweep = sweep_validity(catalog, &ids, grid).expect("catalog ids resolve");
    ids.iter()
        .map(|id| {
            let witnesses: Vec<Violation> = sweep.violations.iter().filter(|v| v.bound_id == *id).cloned().collect();
            let failures: Vec<&PointFailure> = sweep.failures.iter().filter(|f| f.bound_id == *id).collect();
            let spec = catalog.get(id).expect("listed id");
            let in_domain = grid.points().iter().filter(|&&(nu, x)| spec.domain_holds(nu, x)).count();
            let mut rec = CheckRecord::judged(format!("validity/{id}"), 1e-9, witnesses, started)
                .fail_if(!failures.is_empty())
                .note(format!("{in_domain} points in domain"));
            if spec.guard_added {
                rec = rec.note("domain narrowed from the usual statement");
            }
            if let Some(f) = failures.first() {
                rec = rec.note(format!(
                    "{} evaluation failures, first at nu={} x={}: {}",
                    failures.len(),
                    f.nu,
                    f.x,
                    f.message
                ));
            }
            rec
        })
        .collect()
}

/// The best lower and upper bound must enclose the value wherever both exist.
pub fn enclosure_checks(catalog: &Catalog, grid: &GridSpec) -> Vec<CheckRecord> {
    use QuantityKind::*;
    [PhiI, PhiK, Y, Z, PhiP]
        .into_iter()
        .map(|kind| {
            let started = Instant::now();
            let points: Vec<(f64, f64)> = grid
                .points()
                .into_iter()
                .filter(|&(nu, _)| kind != PhiI || nu >= -0.5)
                .collect();
            let parts: Vec<(Vec<Violation>, usize)> = points
                .par_iter()
                .map(|&(nu, x)| {
                    let best = catalog.best_bounds(kind, nu, x);
                    let sides = [best.lower, best.upper];
                    if sides.iter().all(Option::is_none) {
                        return (Vec::new(), 0);
                    }
                    let v = match EvalContext::new(nu, x).and_then(|c| PointEval::new(c).get(kind, SWEEP_TARGET)) {
                        Ok(v) => v,
                        Err(e) => {
                            return (vec![super::witness(format!("error: {e}"), nu, x, f64::NAN, f64::NAN, f64::INFINITY)], 1)
                        }
                    };
                    let tol = tolerance(v.value, v.rel_error_bound);
                    let w = sides
                        .into_iter()
                        .flatten()
                        .filter_map(|b| {
                            let bound = b.value.expect("applicable");
                            let margin = excess(b.side, bound, v.value, tol);
                            (margin > 0.0).then(|| Violation {
                                bound_id: b.id.into(),
                                nu,
                                x,
                                bound_value: bound,
                                true_value: v.value,
                                margin,
                            })
                        })
                        .collect();
                    (w, 1)
                })
                .collect();
            let enclosed = parts.iter().map(|p| p.1).sum::<usize>();
            let witnesses = parts.into_iter().flat_map(|p| p.0).collect();
            CheckRecord::judged(format!("enclosure/{}", kind.tag()), 1e-9, witnesses, started)
                .note(format!("{enclosed} points with at least one bound"))
        })
        .collect()
}
