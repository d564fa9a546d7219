//! Numerical checks of the catalog and of the identities behind it.
//!
//! Every suite returns [`CheckRecord`]s; [`run`] bundles them into a
//! [`VerificationReport`]. Grid points are evaluated in parallel and merged
//! by a sort on `(check_id, nu, x)`, so the report does not depend on the
//! schedule.

mod applications;
mod conjectures;
mod consistency;
mod limits;
mod sharpness;
mod validity;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError};

pub use applications::application_checks;
pub use conjectures::{conjecture_probe, refutation_probes};
pub use consistency::consistency_checks;
pub use limits::{equality_and_limit_checks, equality_checks, gronwall_probe, limit_checks, GRONWALL_ROOT};
pub use sharpness::{sharpness_checks, sharpness_decay, SharpnessReport};
pub use validity::{enclosure_checks, sweep_validity, PointFailure, SweepOutcome};

pub const DEFAULT_SEED: u64 = 0x5eed_1729;
pub const DEFAULT_RANDOM_PAIRS: usize = 10_000;
/// Witnesses kept per check after sorting; the total is given in the notes.
pub const MAX_WITNESSES: usize = 25;
const REPRODUCIBLE_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

pub const DEFAULT_ORDERS: [f64; 12] = [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("grid has no {0}")]
    EmptyGrid(&'static str),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("unknown suite '{0}' (expected all, validity, sharpness, consistency, applications or conjectures)")]
    UnknownSuite(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Evaluation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    nu_values: Vec<f64>,
    x_values: Vec<f64>,
    scale: Scale,
}

impl GridSpec {
    pub fn new(nu_values: Vec<f64>, x_values: Vec<f64>, scale: Scale) -> Result<Self, VerifyError> {
        if nu_values.is_empty() {
            return Err(VerifyError::EmptyGrid("orders"));
        }
        if x_values.is_empty() {
            return Err(VerifyError::EmptyGrid("arguments"));
        }
        if nu_values.iter().chain(&x_values).any(|v| !v.is_finite()) {
            return Err(VerifyError::BadGrid("non-finite value".into()));
        }
        if x_values[0] <= 0.0 || x_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VerifyError::BadGrid("arguments must be positive and strictly increasing".into()));
        }
        Ok(GridSpec { nu_values, x_values, scale })
    }

    /// `count` points `lo (hi/lo)^(i/count)`, `i = 1..=count`; `lo` itself is excluded.
    pub fn log_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (1..=count).map(|i| lo * (hi / lo).powf(i as f64 / count as f64)).collect();
        if let Some(last) = v.last_mut() {
            *last = hi;
        }
        v
    }

    /// `count` points `lo + (hi - lo) i/count`, `i = 1..=count`.
    pub fn linear_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (1..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
    }

    pub fn nu_values(&self) -> &[f64] {
        &self.nu_values
    }

    pub fn x_values(&self) -> &[f64] {
        &self.x_values
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    /// All `(nu, x)` pairs, order-major.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.nu_values
            .iter()
            .flat_map(|&nu| self.x_values.iter().map(move |&x| (nu, x)))
            .collect()
    }

    pub fn with_orders(&self, keep: impl Fn(f64) -> bool) -> Option<GridSpec> {
        let nu_values: Vec<f64> = self.nu_values.iter().copied().filter(|&nu| keep(nu)).collect();
        (!nu_values.is_empty()).then(|| GridSpec { nu_values, ..self.clone() })
    }
}

impl Default for GridSpec {
    /// Twelve orders and 200 log-spaced arguments in `(1e-3, 100]`.
    fn default() -> Self {
        GridSpec {
            nu_values: DEFAULT_ORDERS.to_vec(),
            x_values: GridSpec::log_points(1e-3, 100.0, 200),
            scale: Scale::Logarithmic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub bound_id: String,
    pub nu: f64,
    pub x: f64,
    pub bound_value: f64,
    pub true_value: f64,
    /// Distance past the bound beyond the tolerance; positive for a recorded violation.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: CheckStatus,
    pub tolerance: f64,
    pub max_violation: f64,
    pub witnesses: Vec<Violation>,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl CheckRecord {
    /// Pass when there are no witnesses and no notes of failure.
    pub(crate) fn judged(id: impl Into<String>, tolerance: f64, witnesses: Vec<Violation>, started: Instant) -> Self {
        let status = if witnesses.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckRecord::build(id.into(), status, tolerance, witnesses, started)
    }

    pub(crate) fn info(id: impl Into<String>, tolerance: f64, witnesses: Vec<Violation>, started: Instant) -> Self {
        CheckRecord::build(id.into(), CheckStatus::Info, tolerance, witnesses, started)
    }

    fn build(check_id: String, status: CheckStatus, tolerance: f64, mut witnesses: Vec<Violation>, started: Instant) -> Self {
        sort_witnesses(&mut witnesses);
        let max_violation = witnesses.iter().map(|w| w.margin).fold(0.0, f64::max);
        let total = witnesses.len();
        witnesses.truncate(MAX_WITNESSES);
        let notes = (total > MAX_WITNESSES).then(|| format!("{total} witnesses, first {MAX_WITNESSES} kept"));
        CheckRecord {
            check_id,
            status,
            tolerance,
            max_violation,
            witnesses,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
            notes,
        }
    }

    pub(crate) fn fail_if(mut self, failed: bool) -> Self {
        if failed {
            self.status = CheckStatus::Fail;
        }
        self
    }

    pub(crate) fn note(mut self, text: impl AsRef<str>) -> Self {
        let text = text.as_ref();
        if text.is_empty() {
            return self;
        }
        self.notes = Some(match self.notes.take() {
            Some(n) => format!("{n}; {text}"),
            None => text.to_string(),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

pub(crate) fn sort_witnesses(w: &mut [Violation]) {
    w.sort_by(|a, b| {
        a.bound_id
            .cmp(&b.bound_id)
            .then(a.nu.total_cmp(&b.nu))
            .then(a.x.total_cmp(&b.x))
    });
}

/// `max(1e-9, 1e-9 |v|)` plus the claimed evaluation error.
pub fn tolerance(value: f64, rel_err: f64) -> f64 {
    (1e-9 * value.abs()).max(1e-9) + rel_err * value.abs()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub generated_at: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Validity,
    Sharpness,
    Consistency,
    Applications,
    Conjectures,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::All,
        Suite::Validity,
        Suite::Sharpness,
        Suite::Consistency,
        Suite::Applications,
        Suite::Conjectures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Validity => "validity",
            Suite::Sharpness => "sharpness",
            Suite::Consistency => "consistency",
            Suite::Applications => "applications",
            Suite::Conjectures => "conjectures",
        }
    }

    fn includes(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    pub grid: GridSpec,
    pub catalog: Catalog,
    pub random_pairs: usize,
    /// Zero the timings and pin the timestamp so that reports compare byte for byte.
    pub reproducible: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: Suite::All,
            seed: DEFAULT_SEED,
            grid: GridSpec::default(),
            catalog: Catalog::standard(),
            random_pairs: DEFAULT_RANDOM_PAIRS,
            reproducible: false,
        }
    }
}

pub fn run(config: &VerifyConfig) -> VerificationReport {
    let suite = config.suite;
    let mut checks = Vec::new();
    if suite.includes(Suite::Validity) {
        checks.extend(validity::validity_checks(&config.catalog, &config.grid));
        checks.extend(enclosure_checks(&config.catalog, &config.grid));
        checks.extend(equality_checks(&config.catalog));
    }
    if suite.includes(Suite::Sharpness) {
        checks.extend(sharpness_checks(&config.catalog));
        checks.extend(limit_checks(&config.grid));
    }
    if suite.includes(Suite::Consistency) {
        checks.extend(consistency_checks());
        checks.extend(gronwall_probe());
    }
    if suite.includes(Suite::Applications) {
        checks.extend(application_checks(&config.grid, config.seed, config.random_pairs));
    }
    if suite.includes(Suite::Conjectures) {
        checks.extend(conjecture_probe(&config.catalog, &config.grid));
        checks.extend(refutation_probes(&config.catalog, &config.grid));
    }
    checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    if config.reproducible {
        for c in &mut checks {
            c.runtime_ms = 0.0;
        }
    }
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Info => summary.info += 1,
        }
    }
    let generated_at = if config.reproducible {
        REPRODUCIBLE_TIMESTAMP.to_string()
    } else {
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    };
    VerificationReport {
        suite: suite.name().to_string(),
        generated_at,
        seed: config.seed,
        checks,
        summary,
    }
}

/// Witness for a scalar check that is not a catalog bound.
pub(crate) fn witness(label: impl Into<String>, nu: f64, x: f64, expected: f64, actual: f64, margin: f64) -> Violation {
    Violation {
        bound_id: label.into(),
        nu,
        x,
        bound_value: expected,
        true_value: actual,
        margin,
    }
}
