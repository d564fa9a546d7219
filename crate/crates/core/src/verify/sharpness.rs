use std::time::Instant;

use serde::Serialize;

use super::{witness, CheckRecord, VerifyError};
use crate::catalog::Catalog;
use crate::context::EvalContext;
use crate::quantity::quantity;

/// Sample on which "sharp as x -> inf" is judged.
pub const DECAY_SAMPLE: [f64; 4] = [10.0, 20.0, 50.0, 100.0];
/// Largest relative error allowed at the last sample point.
pub const DECAY_TERMINAL: f64 = 0.02;
/// Extra point reported alongside the decay sample.
pub const FAR_POINT: f64 = 500.0;
/// Argument at which "sharp as x -> 0" is judged.
pub const NEAR_ZERO: f64 = 1e-4;
pub const NEAR_ZERO_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub bound_id: String,
    pub nu: f64,
    pub xs: Vec<f64>,
    pub rel_errors: Vec<f64>,
    pub monotone: bool,
    pub terminal: f64,
}

impl SharpnessReport {
    pub fn decays(&self, terminal_limit: f64) -> bool {
        self.monotone && self.terminal < terminal_limit
    }
}

/// Relative error `|bound - value| / |value|` of one entry along `xs`.
pub fn sharpness_decay(catalog: &Catalog, id: &str, xs: &[f64], nu: f64) -> Result<SharpnessReport, VerifyError> {
    let spec = catalog.get(id)?;
    let mut rel_errors = Vec::with_capacity(xs.len());
    for &x in xs {
        let bound = catalog
            .evaluate_spec(spec, nu, x)
            .value
            .ok_or_else(|| VerifyError::Evaluation(format!("{id} not applicable at nu={nu}, x={x}")))?;
        let v = EvalContext::new(nu, x)
            .and_then(|c| quantity(spec.quantity, &c))
            .map_err(|e| VerifyError::Evaluation(e.to_string()))?
            .value;
        rel_errors.push((bound - v).abs() / v.abs());
    }
    let monotone = rel_errors.windows(2).all(|w| w[1] < w[0]);
    Ok(SharpnessReport {
        bound_id: spec.id.to_string(),
        nu,
        xs: xs.to_vec(),
        terminal: *rel_errors.last().unwrap_or(&f64::NAN),
        rel_errors,
        monotone,
    })
}

/// Entries expected to be sharp at infinity, with the order they are sampled at.
pub const DECAY_CASES: [(&str, f64); 10] = [
    ("turan8_lower", 1.0),
    ("turan9_lower", 1.0),
    ("turan11_upper", 1.0),
    ("turan16_upper", 1.0),
    ("turan19_upper", 2.0),
    ("turan20_lower", 2.0),
    ("turan20_upper", 2.0),
    ("turan24_upper", 2.0),
    ("turan26_lower", 1.0),
    ("turan26_upper", 1.0),
];

/// Entries expected to meet the quantity at zero.
pub const NEAR_ZERO_CASES: [(&str, f64); 4] = [
    ("turan1_upper", 1.0),
    ("turan8_upper", 1.0),
    ("turan16_lower", 1.0),
    ("turan2_lower", 2.0),
];

pub fn sharpness_checks(catalog: &Catalog) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (id, nu) in DECAY_CASES {
        let started = Instant::now();
        let check_id = format!("sharpness/{id}@nu={nu}");
        let rec = match sharpness_decay(catalog, id, &DECAY_SAMPLE, nu) {
            Ok(r) => {
                let w = (!r.decays(DECAY_TERMINAL))
                    .then(|| witness(id, nu, DECAY_SAMPLE[3], DECAY_TERMINAL, r.terminal, r.terminal - DECAY_TERMINAL))
                    .into_iter()
                    .collect();
                let errs: Vec<String> = r.rel_errors.iter().map(|e| format!("{e:.4e}")).collect();
                let far = sharpness_decay(catalog, id, &[FAR_POINT], nu)
                    .map(|f| format!("{:.4e}", f.terminal))
                    .unwrap_or_else(|e| e.to_string());
                CheckRecord::judged(check_id, DECAY_TERMINAL, w, started)
                    .fail_if(!r.monotone)
                    .note(format!(
                        "relative errors at x=10,20,50,100: {}; monotone: {}; at x={FAR_POINT}: {far}",
                        errs.join(", "),
                        r.monotone
                    ))
            }
            Err(e) => CheckRecord::judged(check_id, DECAY_TERMINAL, Vec::new(), started)
                .fail_if(true)
                .note(e.to_string()),
        };
        out.push(rec);
    }
    for (id, nu) in NEAR_ZERO_CASES {
        let started = Instant::now();
        let check_id = format!("sharp_at_zero/{id}@nu={nu}");
        let spec = catalog.get(id).expect("catalog id");
        let bound = catalog.evaluate_spec(spec, nu, NEAR_ZERO).value;
        let value = EvalContext::new(nu, NEAR_ZERO).and_then(|c| quantity(spec.quantity, &c));
        let rec = match (bound, value) {
            (Some(b), Ok(v)) => {
                let gap = (b - v.value).abs();
                let w = (gap >= NEAR_ZERO_TOL)
                    .then(|| witness(id, nu, NEAR_ZERO, b, v.value, gap - NEAR_ZERO_TOL))
                    .into_iter()
                    .collect();
                CheckRecord::judged(check_id, NEAR_ZERO_TOL, w, started).note(format!("gap {gap:.3e}"))
            }
            (_, Err(e)) => CheckRecord::judged(check_id, NEAR_ZERO_TOL, Vec::new(), started).fail_if(true).note(e.to_string()),
            (None, _) => CheckRecord::judged(check_id, NEAR_ZERO_TOL, Vec::new(), started)
                .fail_if(true)
                .note("bound not applicable"),
        };
        out.push(rec);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turan11_decays() {
        let r = sharpness_decay(&Catalog::standard(), "turan11_upper", &DECAY_SAMPLE, 1.0).unwrap();
        assert!(r.monotone, "{:?}", r.rel_errors);
        assert!(r.terminal < 0.02);
    }

    #[test]
    fn turan8_upper_meets_limit_at_zero() {
        let cat = Catalog::standard();
        let b = cat.evaluate_bound("turan8_upper", 1.0, NEAR_ZERO).unwrap().value.unwrap();
        assert!((b - 0.5).abs() < 1e-8);
    }

    #[test]
    fn inapplicable_point_is_error() {
        assert!(sharpness_decay(&Catalog::standard(), "turan11_upper", &[10.0], 0.0).is_err());
    }
}
