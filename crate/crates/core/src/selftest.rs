//! Fast closed-form checks of the evaluator.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::{
    eval_i, eval_k, eval_k_reflection, k_symmetry_residual, overlap_pair_i, overlap_pair_k, ratio_i,
    ratio_i_continued_fraction, asymptotic_threshold, PATH_VERSIONS,
};
use crate::context::EvalContext;

const CLOSED_FORM_TOL: f64 = 1e-13;
const OVERLAP_TOL: f64 = 1e-11;
const SYMMETRY_TOL: f64 = 1e-12;
const DUAL_PATH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestItem {
    pub name: String,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub items: Vec<SelftestItem>,
    pub path_versions: Vec<(String, String)>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

struct Run {
    /// Multiplies every evaluator output; 0 in normal runs.
    perturb: f64,
    items: Vec<SelftestItem>,
}

impl Run {
    fn out(&self, v: f64) -> f64 {
        v * (1.0 + self.perturb)
    }

    fn compare(&mut self, name: String, got: Result<f64, String>, want: f64, tol: f64) {
        let rel_error = match got {
            Ok(g) => ((g - want) / want).abs(),
            Err(_) => f64::INFINITY,
        };
        self.items.push(SelftestItem { name, rel_error, tolerance: tol, passed: rel_error < tol });
    }

    fn residual(&mut self, name: String, r: Result<f64, String>, tol: f64) {
        let rel_error = r.unwrap_or(f64::INFINITY).abs();
        self.items.push(SelftestItem { name, rel_error, tolerance: tol, passed: rel_error < tol });
    }
}

fn ctx(nu: f64, x: f64) -> EvalContext {
    EvalContext::new(nu, x).expect("fixed points inside the box")
}

fn i_val(nu: f64, x: f64) -> Result<f64, String> {
    eval_i(&ctx(nu, x), 1e-12).map(|v| v.value).map_err(|e| e.to_string())
}

fn k_val(nu: f64, x: f64) -> Result<f64, String> {
    eval_k(&ctx(nu, x), 1e-12).map(|v| v.value).map_err(|e| e.to_string())
}

pub fn selftest() -> SelftestReport {
    selftest_perturbed(0.0)
}

/// Same checks with every evaluator output scaled by `1 + perturb`.
pub fn selftest_perturbed(perturb: f64) -> SelftestReport {
    let mut run = Run { perturb, items: Vec::new() };
    for x in [0.1, 1.0, 5.0, 40.0] {
        let s = (2.0 / (PI * x)).sqrt();
        let got = i_val(0.5, x).map(|v| run.out(v));
        run.compare(format!("I_1/2({x})"), got, s * x.sinh(), CLOSED_FORM_TOL);
        let got = i_val(-0.5, x).map(|v| run.out(v));
        run.compare(format!("I_-1/2({x})"), got, s * x.cosh(), CLOSED_FORM_TOL);
        let got = k_val(0.5, x).map(|v| run.out(v));
        run.compare(format!("K_1/2({x})"), got, (PI / (2.0 * x)).sqrt() * (-x).exp(), CLOSED_FORM_TOL);
    }
    for (nu, x) in [(0.3, 0.7), (2.5, 3.0), (7.25, 12.0)] {
        let r = k_symmetry_residual(nu, x).map(|r| run.out(1.0 + r) - 1.0).map_err(|e| e.to_string());
        run.residual(format!("K symmetry nu={nu} x={x}"), r, SYMMETRY_TOL);
    }
    // I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x
    for (nu, x) in [(0.0, 0.5), (0.5, 2.0), (1.0, 1.0), (3.3, 7.0), (6.0, 45.0)] {
        let w = (|| -> Result<f64, String> {
            Ok(run.out(i_val(nu, x)? * k_val(nu + 1.0, x)? + i_val(nu + 1.0, x)? * k_val(nu, x)?))
        })();
        run.compare(format!("Wronskian nu={nu} x={x}"), w, 1.0 / x, CLOSED_FORM_TOL);
    }
    for nu in [0.0, 1.5, 4.0] {
        let x = asymptotic_threshold(nu) + 1.0;
        let (a, s) = overlap_pair_i(nu, x);
        run.compare(format!("I overlap nu={nu} x={x}"), Ok(run.out(a)), s, OVERLAP_TOL);
        let k = overlap_pair_k(nu, x).map_err(|e| e.to_string());
        match k {
            Ok((a, q)) => run.compare(format!("K overlap nu={nu} x={x}"), Ok(run.out(a)), q, OVERLAP_TOL),
            Err(e) => run.compare(format!("K overlap nu={nu} x={x}"), Err(e), 1.0, OVERLAP_TOL),
        }
    }
    for (nu, x) in [(0.3, 1.0), (1.7, 0.4)] {
        let direct = k_val(nu, x);
        let refl = eval_k_reflection(&ctx(nu, x)).ok_or_else(|| "reflection not applicable".to_string());
        let got = refl.map(|v| run.out(v));
        run.compare(format!("K reflection nu={nu} x={x}"), got, direct.unwrap_or(f64::NAN), OVERLAP_TOL);
    }
    for (nu, x) in [(0.0, 1.0), (2.5, 0.2), (10.0, 30.0)] {
        let c = ctx(nu, x);
        let cf = ratio_i_continued_fraction(&c);
        let got = ratio_i(&c).map(|v| run.out(v.value)).map_err(|e| e.to_string());
        run.compare(format!("ratio I dual path nu={nu} x={x}"), got, cf, DUAL_PATH_TOL);
    }
    SelftestReport {
        items: run.items,
        path_versions: PATH_VERSIONS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    }
}
