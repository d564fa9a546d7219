use std::time::Instant;

use rayon::prelude::*;

use super::{witness, CheckRecord, GridSpec, Violation};
use crate::bessel::{k_symmetry_residual, ratio_i, ratio_i_continued_fraction};
use crate::context::EvalContext;
use crate::deriv::numeric_derivative;
use crate::quantity::{PointEval, QuantityKind};

pub const CONSISTENCY_ORDERS: [f64; 10] = [-0.75, -0.5, -0.25, 0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 8.0];
pub const CONSISTENCY_POINTS: usize = 20;

pub const WRONSKIAN_TOL: f64 = 1e-10;
pub const RICCATI_TOL: f64 = 1e-6;
pub const DELTA_TOL: f64 = 1e-6;
pub const DUAL_PATH_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-12;

pub fn consistency_grid() -> GridSpec {
    GridSpec::new(
        CONSISTENCY_ORDERS.to_vec(),
        GridSpec::log_points(1e-2, 100.0, CONSISTENCY_POINTS),
        super::Scale::Logarithmic,
    )
    .expect("fixed grid")
}

/// Relative residuals at one point, in the order of [`LABELS`].
type Residuals = [Result<(f64, f64, f64), String>; 7];

const LABELS: [(&str, f64); 7] = [
    ("wronskian", WRONSKIAN_TOL),
    ("riccati_I", RICCATI_TOL),
    ("riccati_K", RICCATI_TOL),
    ("deltaI", DELTA_TOL),
    ("deltaK", DELTA_TOL),
    ("ratio_I_dual_path", DUAL_PATH_TOL),
    ("K_symmetry", SYMMETRY_TOL),
];

/// `(expected, actual, relative residual)` for every identity at `(nu, x)`.
fn residuals(nu: f64, x: f64) -> Residuals {
    let s = |r: crate::Result<f64>| r.map_err(|e| e.to_string());
    let ctx = EvalContext::new(nu, x).expect("grid inside the box");
    let p = PointEval::new(ctx);
    let val = |k| s(p.value(k).map(|v| v.value));
    let der = |k| s(numeric_derivative(k, &ctx, 1));
    let scale = x * x + nu * nu;
    let rel = |e: f64, a: f64, by: f64| (e, a, (a - e).abs() / by);

    let wronskian = (|| {
        let (y, z, pv) = (val(QuantityKind::Y)?, val(QuantityKind::Z)?, val(QuantityKind::P)?);
        let e = 1.0 / pv;
        Ok(rel(e, y - z, e.abs()))
    })();
    let riccati = |k: QuantityKind| -> Result<(f64, f64, f64), String> {
        let f = val(k)?;
        let d = der(k)?;
        Ok(rel(scale - f * f, x * d, scale))
    };
    let delta = |k: QuantityKind, phi: QuantityKind| -> Result<(f64, f64, f64), String> {
        let e = x * val(phi)?;
        Ok(rel(e, der(k)?, e.abs()))
    };
    let dual = (|| {
        let a = s(ratio_i(&ctx).map(|v| v.value))?;
        let b = ratio_i_continued_fraction(&ctx);
        Ok(rel(a, b, a.abs()))
    })();
    let sym = s(k_symmetry_residual(nu, x)).map(|r| (1.0, 1.0 + r, r));
    [
        wronskian,
        riccati(QuantityKind::Y),
        riccati(QuantityKind::Z),
        delta(QuantityKind::Y, QuantityKind::PhiI),
        delta(QuantityKind::Z, QuantityKind::PhiK),
        dual,
        sym,
    ]
}

/// Wronskian, Riccati and derivative identities, dual paths and symmetry.
pub fn consistency_checks() -> Vec<CheckRecord> {
    let started = Instant::now();
    let grid = consistency_grid();
    let all: Vec<((f64, f64), Residuals)> = grid
        .points()
        .par_iter()
        .map(|&(nu, x)| ((nu, x), residuals(nu, x)))
        .collect();
    LABELS
        .iter()
        .enumerate()
        .map(|(i, &(label, tol))| {
            let mut worst = 0.0f64;
            let w: Vec<Violation> = all
                .iter()
                .filter_map(|&((nu, x), ref r)| match &r[i] {
                    Ok((e, a, res)) => {
                        worst = worst.max(*res);
                        (*res >= tol || res.is_nan()).then(|| witness(label, nu, x, *e, *a, res - tol))
                    }
                    Err(msg) => Some(witness(format!("{label}: {msg}"), nu, x, f64::NAN, f64::NAN, f64::INFINITY)),
                })
                .collect();
            CheckRecord::judged(format!("identity/{label}"), tol, w, started)
                .note(format!("largest relative residual {worst:.3e} over {} points", all.len()))
        })
        .collect()
}
