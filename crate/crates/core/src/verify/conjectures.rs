//! Informational probes: open conjectures and claims known to be false.
//! Nothing here fails a suite.

use std::time::Instant;

use rayon::prelude::*;

use super::validity::{excess, sweep_validity};
use super::{witness, CheckRecord, GridSpec, Violation};
use crate::catalog::Catalog;
use crate::context::EvalContext;
use crate::deriv::numeric_derivative;
use crate::quantity::{quantity, QuantityKind};

/// `phiI(2, 3)`, the value that puts the Joshi-Bissu bound below the function.
pub const JOSHI_WITNESS_VALUE: f64 = 0.247_316_545_76;
pub const JOSHI_CONFIRM_TOL: f64 = 1e-4;

fn lambda_slopes(nu: f64) -> Vec<(f64, Result<f64, String>)> {
    GridSpec::linear_points(0.0, 20.0, 400)
        .into_par_iter()
        .map(|x| {
            let d = EvalContext::new(nu, x)
                .and_then(|c| numeric_derivative(QuantityKind::Lambda, &c, 1))
                .map_err(|e| e.to_string());
            (x, d)
        })
        .collect()
}

fn lambda_record(id: &str, orders: &[f64]) -> CheckRecord {
    let started = Instant::now();
    let mut notes = Vec::new();
    let mut w = Vec::new();
    for &nu in orders {
        let slopes = lambda_slopes(nu);
        let mut min = (f64::INFINITY, 0.0);
        for (x, d) in &slopes {
            match d {
                Ok(d) if *d < min.0 => min = (*d, *x),
                Ok(_) => {}
                Err(e) => notes.push(format!("nu={nu} x={x}: {e}")),
            }
        }
        notes.push(format!("nu={nu}: min lambda' = {:.6e} at x = {}", min.0, min.1));
        if min.0 <= 0.0 {
            w.push(witness("lambda_increasing", nu, min.1, 0.0, min.0, -min.0));
        }
    }
    CheckRecord::info(id, 0.0, w, started).note(notes.join("; "))
}

/// Largest excess of an unproved bound over the grid.
fn bound_probe(catalog: &Catalog, id: &str, grid: &GridSpec) -> CheckRecord {
    let started = Instant::now();
    let out = sweep_validity(catalog, &[id], grid).expect("catalog id");
    let rec = CheckRecord::info(format!("conjecture/{id}"), 1e-9, out.violations, started)
        .note(format!("{} points in domain", out.evaluated));
    if out.failures.is_empty() {
        rec
    } else {
        rec.note(format!("{} evaluation failures", out.failures.len()))
    }
}

/// Monotonicity of `lambda` and the two open bounds.
pub fn conjecture_probe(catalog: &Catalog, grid: &GridSpec) -> Vec<CheckRecord> {
    let mut out = vec![
        lambda_record("conjecture/lambda_increasing", &[0.0, 0.5, 1.0, 2.0, 5.0]),
        lambda_record("conjecture/lambda_increasing_boundary", &[-0.5]),
    ];
    let g = grid.with_orders(|nu| nu >= -0.5);
    for id in ["turanconj_lower", "turanconj2_upper"] {
        if let Some(g) = &g {
            out.push(bound_probe(catalog, id, g));
        }
    }
    let started = Instant::now();
    let gap = (|| {
        let b = catalog.evaluate_bound("turanconj_lower", 1.0, 1.0).ok()?.value?;
        let v = quantity(QuantityKind::PhiI, &EvalContext::new(1.0, 1.0).ok()?).ok()?.value;
        Some((b, v))
    })();
    let rec = CheckRecord::info("conjecture/turanconj_lower_at_1_1", 0.0, Vec::new(), started);
    out.push(match gap {
        Some((b, v)) => rec.note(format!("bound {b:.6} vs phiI {v:.6}")),
        None => rec.note("evaluation failed"),
    });
    out
}

/// Intervals of consecutive violating grid points, each end refined by one bisection step.
fn reversal_intervals(catalog: &Catalog, id: &str, nu: f64, xs: &[f64], hits: &[f64]) -> Vec<(f64, f64)> {
    let violated = |x: f64| -> bool {
        let Some(b) = catalog.evaluate_bound(id, nu, x).ok().and_then(|e| e.value) else { return false };
        let spec = catalog.get(id).expect("id");
        EvalContext::new(nu, x)
            .and_then(|c| quantity(spec.quantity, &c))
            .map(|v| excess(spec.side, b, v.value, 0.0) > 0.0)
            .unwrap_or(false)
    };
    let mut runs = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !hits.contains(&xs[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < xs.len() && hits.contains(&xs[i + 1]) {
            i += 1;
        }
        let mut lo = xs[start];
        if start > 0 {
            let m = 0.5 * (xs[start - 1] + lo);
            if violated(m) {
                lo = m;
            }
        }
        let mut hi = xs[i];
        if i + 1 < xs.len() {
            let m = 0.5 * (hi + xs[i + 1]);
            if violated(m) {
                hi = m;
            }
        }
        runs.push((lo, hi));
        i += 1;
    }
    runs
}

fn refutation_record(catalog: &Catalog, id: &str, grid: &GridSpec) -> CheckRecord {
    let started = Instant::now();
    let out = sweep_validity(catalog, &[id], grid).expect("catalog id");
    let mut regions = Vec::new();
    for &nu in grid.nu_values() {
        let hits: Vec<f64> = out.violations.iter().filter(|v| v.nu == nu).map(|v| v.x).collect();
        if hits.is_empty() {
            continue;
        }
        let runs = reversal_intervals(catalog, id, nu, grid.x_values(), &hits);
        let text: Vec<String> = runs.iter().map(|(a, b)| format!("[{a:.4}, {b:.4}]")).collect();
        regions.push(format!("nu={nu}: {}", text.join(" ")));
    }
    let found = !out.violations.is_empty();
    CheckRecord::info(format!("refutation/{id}"), 1e-9, out.violations, started)
        .note(if found { "counterexamples found" } else { "no counterexample on this grid" })
        .note(format!("reversal regions {}", regions.join("; ")))
}

/// Witness search for the refuted entries plus the known point `(2, 3)`.
pub fn refutation_probes(catalog: &Catalog, grid: &GridSpec) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if let Some(g) = grid.with_orders(|nu| nu >= 0.0) {
        out.push(refutation_record(catalog, "joshi_turan7", &g));
    }
    let line = GridSpec::new(vec![2.0], GridSpec::linear_points(0.0, 10.0, 200), super::Scale::Linear).expect("grid");
    out.push(refutation_record(catalog, "joshi_turan7", &line));
    out.last_mut().expect("pushed").check_id = "refutation/joshi_turan7@nu=2".into();
    if let Some(g) = grid.with_orders(|nu| nu > 0.0 && nu < 0.5) {
        out.push(refutation_record(catalog, "hamsici_b2hat_upper", &g));
    }

    let started = Instant::now();
    let confirm: Vec<Violation> = EvalContext::new(2.0, 3.0)
        .and_then(|c| quantity(QuantityKind::PhiI, &c))
        .map(|v| {
            let gap = (v.value - JOSHI_WITNESS_VALUE).abs();
            let mut w = Vec::new();
            if gap >= JOSHI_CONFIRM_TOL || v.value <= 0.2 {
                w.push(witness("phiI(2,3)", 2.0, 3.0, JOSHI_WITNESS_VALUE, v.value, gap));
            }
            w
        })
        .unwrap_or_else(|e| vec![witness(format!("phiI(2,3): {e}"), 2.0, 3.0, JOSHI_WITNESS_VALUE, f64::NAN, f64::INFINITY)]);
    out.push(CheckRecord::info("refutation/joshi_turan7_witness_2_3", JOSHI_CONFIRM_TOL, confirm, started));
    out
}
