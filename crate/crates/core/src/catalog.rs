//! Immutable catalog of Turán-type bounds.
//!
//! Each entry is a closed-form formula in `(nu, x)` with a domain predicate
//! that is total on the supported box: singular denominators and logarithms
//! are rejected before the formula runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::quantity::QuantityKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjecture,
    Refuted,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::Proved, Status::Conjecture, Status::Refuted];

    pub fn name(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Conjecture => "conjecture",
            Status::Refuted => "refuted",
        }
    }
}

impl std::str::FromStr for Status {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        Status::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| CatalogError::UnknownStatus(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    Strict,
    NonStrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SharpAt {
    #[serde(rename = "x->0")]
    XToZero,
    #[serde(rename = "x->inf")]
    XToInfinity,
    #[serde(rename = "equality at nu=1/2")]
    EqualityAtHalf,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown bound id '{0}'")]
    UnknownId(String),
    #[error("unknown status '{0}' (expected proved, conjecture or refuted)")]
    UnknownStatus(String),
}

type Pred = fn(f64, f64) -> bool;
type Formula = fn(f64, f64) -> f64;

#[derive(Clone, Copy)]
pub struct BoundSpec {
    pub id: &'static str,
    pub quantity: QuantityKind,
    pub side: Side,
    pub status: Status,
    pub strictness: Strictness,
    pub domain_text: &'static str,
    pub formula_text: &'static str,
    pub sharp_at: &'static [SharpAt],
    /// Who the inequality is due to.
    pub anchor: &'static str,
    /// The domain is narrower than the one the inequality is usually quoted with.
    pub guard_added: bool,
    domain: Pred,
    formula: Formula,
}

impl fmt::Debug for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundSpec").field("id", &self.id).finish_non_exhaustive()
    }
}

impl BoundSpec {
    pub fn domain_holds(&self, nu: f64, x: f64) -> bool {
        x > 0.0 && (self.domain)(nu, x)
    }

    /// Raw formula value; only meaningful where the domain holds.
    pub fn formula_value(&self, nu: f64, x: f64) -> f64 {
        (self.formula)(nu, x)
    }
}

/// Serializable metadata of one entry.
#[derive(Debug, Clone, Serialize)]
pub struct BoundInfo {
    pub id: &'static str,
    pub quantity: &'static str,
    pub side: Side,
    pub status: Status,
    pub strictness: Strictness,
    pub domain: &'static str,
    pub formula: &'static str,
    pub sharp_at: &'static [SharpAt],
    pub anchor: &'static str,
    pub guard_added: bool,
}

impl From<&BoundSpec> for BoundInfo {
    fn from(b: &BoundSpec) -> Self {
        BoundInfo {
            id: b.id,
            quantity: b.quantity.tag(),
            side: b.side,
            status: b.status,
            strictness: b.strictness,
            domain: b.domain_text,
            formula: b.formula_text,
            sharp_at: b.sharp_at,
            anchor: b.anchor,
            guard_added: b.guard_added,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEvaluation {
    pub id: &'static str,
    pub quantity: QuantityKind,
    pub side: Side,
    pub status: Status,
    pub applicable: bool,
    /// `None` exactly when not applicable.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBounds {
    pub lower: Option<BoundEvaluation>,
    pub upper: Option<BoundEvaluation>,
}

/// Alternative ids that resolve to an existing entry.
pub const ALIASES: &[(&str, &str)] = &[("seguraproof_upper", "tuseg_upper")];

/// Relative window inside which two bound values count as tied.
pub const TIE_TOL: f64 = 4.0 * f64::EPSILON;

fn hyp(x: f64, a: f64) -> f64 {
    x.hypot(a)
}

fn mu(nu: f64) -> f64 {
    nu * nu - 0.25
}

use QuantityKind as Qk;
use SharpAt::*;
use Side::*;
use Status::*;
use Strictness::*;

const NONE: &[SharpAt] = &[];
const AT_ZERO: &[SharpAt] = &[XToZero];
const AT_INF: &[SharpAt] = &[XToInfinity];
const AT_BOTH: &[SharpAt] = &[XToZero, XToInfinity];
const AT_HALF: &[SharpAt] = &[EqualityAtHalf];
const AT_INF_HALF: &[SharpAt] = &[XToInfinity, EqualityAtHalf];

macro_rules! bound {
    ($id:literal, $q:expr, $side:expr, $status:expr, $strict:expr,
     dom: $dt:literal => $d:expr, f: $ft:literal => $f:expr,
     sharp: $sharp:expr, anchor: $anchor:literal, guard: $guard:literal) => {
        BoundSpec {
            id: $id,
            quantity: $q,
            side: $side,
            status: $status,
            strictness: $strict,
            domain_text: $dt,
            formula_text: $ft,
            sharp_at: $sharp,
            anchor: $anchor,
            guard_added: $guard,
            domain: $d,
            formula: $f,
        }
    };
}

static ENTRIES: &[BoundSpec] = &[
    // phiI
    bound!("turan1_lower", Qk::PhiI, Lower, Proved, Strict,
        dom: "nu > -1" => |nu, _| nu > -1.0, f: "0" => |_, _| 0.0,
        sharp: NONE, anchor: "Thiruvenkatachar-Nanjundiah; Joshi-Bissu", guard: false),
    bound!("turan1_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu > -1" => |nu, _| nu > -1.0, f: "1/(nu+1)" => |nu, _| 1.0 / (nu + 1.0),
        sharp: AT_ZERO, anchor: "Joshi-Bissu; Lorch", guard: false),
    bound!("turan8_lower", Qk::PhiI, Lower, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "1/(nu+1/2+sqrt(x^2+(nu+1/2)^2))" => |nu, x| 1.0 / (nu + 0.5 + hyp(x, nu + 0.5)),
        sharp: AT_INF, anchor: "Segura", guard: true),
    bound!("turan8_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "2/(nu+1+sqrt(x^2+(nu+1)^2))" => |nu, x| 2.0 / (nu + 1.0 + hyp(x, nu + 1.0)),
        sharp: AT_ZERO, anchor: "Segura", guard: true),
    bound!("turan9_lower", Qk::PhiI, Lower, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "1/(x+2nu+1)" => |nu, x| 1.0 / (x + 2.0 * nu + 1.0),
        sharp: AT_INF, anchor: "Segura", guard: true),
    bound!("turan9_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "2/(x+nu+1)" => |nu, x| 2.0 / (x + nu + 1.0),
        sharp: NONE, anchor: "Segura", guard: true),
    bound!("turan10_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "2/(x+nu)" => |nu, x| 2.0 / (x + nu),
        sharp: NONE, anchor: "Joshi-Bissu, corrected", guard: false),
    bound!("turan11_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "1/x" => |_, x| 1.0 / x,
        sharp: AT_INF, anchor: "new", guard: false),
    bound!("turan16_lower", Qk::PhiI, Lower, Proved, Strict,
        dom: "nu >= -1/2" => |nu, _| nu >= -0.5,
        f: "((nu+1/2)/(nu+1))/sqrt(x^2+(nu+1/2)^2)" => |nu, x| ((nu + 0.5) / (nu + 1.0)) / hyp(x, nu + 0.5),
        sharp: AT_ZERO, anchor: "new", guard: false),
    bound!("turan16_upper", Qk::PhiI, Upper, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "1/sqrt(x^2+nu^2-1/4)" => |nu, x| 1.0 / (x * x + mu(nu)).sqrt(),
        sharp: AT_INF, anchor: "new", guard: false),
    bound!("turanconj_lower", Qk::PhiI, Lower, Conjecture, Strict,
        dom: "nu >= -1/2" => |nu, _| nu >= -0.5,
        f: "1/sqrt(x^2+(nu+1)^2)" => |nu, x| 1.0 / hyp(x, nu + 1.0),
        sharp: AT_BOTH, anchor: "open", guard: false),
    bound!("joshi_turan7", Qk::PhiI, Upper, Refuted, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "1/(x+nu)" => |nu, x| 1.0 / (x + nu),
        sharp: NONE, anchor: "Joshi-Bissu", guard: false),
    // y
    bound!("turan3_upper", Qk::Y, Upper, Proved, Strict,
        dom: "nu > -1" => |nu, _| nu > -1.0,
        f: "sqrt(x^2+nu^2)" => |nu, x| hyp(x, nu),
        sharp: NONE, anchor: "Gronwall; Phillips-Malin", guard: false),
    bound!("turan13_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "x-1/2" => |_, x| x - 0.5,
        sharp: NONE, anchor: "Gronwall", guard: false),
    bound!("turan14_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "sqrt(x^2+(nu-1/2)^2)-1/2" => |nu, x| hyp(x, nu - 0.5) - 0.5,
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("turan15_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "sqrt(x^2+nu^2-1/4)-1/2" => |nu, x| (x * x + mu(nu)).sqrt() - 0.5,
        sharp: NONE, anchor: "new", guard: false),
    bound!("tuseg_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= -1" => |nu, _| nu >= -1.0,
        f: "sqrt(x^2+(nu+1)^2)-1" => |nu, x| hyp(x, nu + 1.0) - 1.0,
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("tuseg_upper", Qk::Y, Upper, Proved, Strict,
        dom: "nu >= -1/2" => |nu, _| nu >= -0.5,
        f: "sqrt(x^2+(nu+1/2)^2)-1/2" => |nu, x| hyp(x, nu + 0.5) - 0.5,
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("ylog_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "x+nu+(2nu+1)ln((2nu+1)/(x+2nu+1))" => |nu, x| x + nu - (2.0 * nu + 1.0) * (x / (2.0 * nu + 1.0)).ln_1p(),
        sharp: NONE, anchor: "new", guard: true),
    bound!("ylog_upper", Qk::Y, Upper, Proved, Strict,
        dom: "nu > -1" => |nu, _| nu > -1.0,
        f: "2x+nu+2(nu+1)ln((nu+1)/(x+nu+1))" => |nu, x| 2.0 * x + nu - 2.0 * (nu + 1.0) * (x / (nu + 1.0)).ln_1p(),
        sharp: NONE, anchor: "new", guard: false),
    bound!("gro_lower", Qk::Y, Lower, Proved, Strict,
        dom: "nu >= 1/2 and x^2 <= 2nu^3(nu+sqrt(nu^2+1))" =>
            |nu, x| nu >= 0.5 && x * x <= 2.0 * nu.powi(3) * (nu + hyp(nu, 1.0)),
        f: "sqrt(x^2+nu^2)-(x^2+2nu^2)/(2x^2+2nu^2)" => |nu, x| hyp(x, nu) - (x * x + 2.0 * nu * nu) / (2.0 * (x * x + nu * nu)),
        sharp: NONE, anchor: "Gronwall, restricted range", guard: false),
    bound!("turanconj2_upper", Qk::Y, Upper, Conjecture, Strict,
        dom: "nu >= -1/2" => |nu, _| nu >= -0.5,
        f: "sqrt(x^2+(nu+1)^2)-(x^2+2(nu+1)^2)/(2(x^2+(nu+1)^2))" => |nu, x| {
            let n1 = nu + 1.0;
            hyp(x, n1) - (x * x + 2.0 * n1 * n1) / (2.0 * (x * x + n1 * n1))
        },
        sharp: NONE, anchor: "open", guard: false),
    // order ratios
    bound!("turan5_lower", Qk::RatioIPrev, Lower, Proved, Strict,
        dom: "nu >= 0" => |nu, _| nu >= 0.0,
        f: "(-nu+sqrt(x^2+nu^2))/x" => |nu, x| (hyp(x, nu) - nu) / x,
        sharp: NONE, anchor: "classical", guard: false),
    bound!("turan5p_upper", Qk::RatioKPrev, Upper, Proved, Strict,
        dom: "all nu" => |_, _| true,
        f: "(nu+sqrt(x^2+nu^2))/x" => |nu, x| (nu + hyp(x, nu)) / x,
        sharp: NONE, anchor: "Segura", guard: false),
    // phiK
    bound!("turan2_lower", Qk::PhiK, Lower, Proved, Strict,
        dom: "|nu| > 1" => |nu, _| nu.abs() > 1.0,
        f: "1/(1-|nu|)" => |nu, _| 1.0 / (1.0 - nu.abs()),
        sharp: AT_ZERO, anchor: "Ismail-Muldoon; van Haeringen; Laforgia-Natalini", guard: false),
    bound!("turan2_upper", Qk::PhiK, Upper, Proved, Strict,
        dom: "|nu| > 1" => |nu, _| nu.abs() > 1.0,
        f: "0" => |_, _| 0.0,
        sharp: NONE, anchor: "Ismail-Muldoon; van Haeringen; Laforgia-Natalini", guard: false),
    bound!("turan18_lower", Qk::PhiK, Lower, Proved, Strict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-2/(|nu|-1+sqrt(x^2+(|nu|-1)^2))" => |nu, x| -2.0 / (nu.abs() - 1.0 + hyp(x, nu.abs() - 1.0)),
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("turan18_upper", Qk::PhiK, Upper, Proved, Strict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-1/(|nu|-1/2+sqrt(x^2+(|nu|-1/2)^2))" => |nu, x| -1.0 / (nu.abs() - 0.5 + hyp(x, nu.abs() - 0.5)),
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("turan19_lower", Qk::PhiK, Lower, Proved, Strict,
        dom: "|nu| >= 1/2 and x+|nu|-1 > 0" => |nu, x| nu.abs() >= 0.5 && x + nu.abs() - 1.0 > 0.0,
        f: "-2/(x+|nu|-1)" => |nu, x| -2.0 / (x + nu.abs() - 1.0),
        sharp: NONE, anchor: "Segura", guard: true),
    bound!("turan19_upper", Qk::PhiK, Upper, Proved, Strict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-1/(x+2|nu|-1)" => |nu, x| -1.0 / (x + 2.0 * nu.abs() - 1.0),
        sharp: AT_INF, anchor: "Segura", guard: false),
    bound!("turan20_lower", Qk::PhiK, Lower, Proved, NonStrict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-1/x" => |_, x| -1.0 / x,
        sharp: AT_INF_HALF, anchor: "new", guard: false),
    bound!("turan20_upper", Qk::PhiK, Upper, Proved, NonStrict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-(1-mu/x^2)/x" => |nu, x| -(1.0 - mu(nu) / (x * x)) / x,
        sharp: AT_INF_HALF, anchor: "new", guard: false),
    bound!("turan21_lower", Qk::PhiK, Lower, Proved, Strict,
        dom: "|nu| < 1/2" => |nu, _| nu.abs() < 0.5,
        f: "-(1-mu/x^2)/x" => |nu, x| -(1.0 - mu(nu) / (x * x)) / x,
        sharp: AT_INF, anchor: "new", guard: false),
    bound!("turan21_upper", Qk::PhiK, Upper, Proved, Strict,
        dom: "|nu| < 1/2" => |nu, _| nu.abs() < 0.5,
        f: "-1/x" => |_, x| -1.0 / x,
        sharp: AT_INF, anchor: "new", guard: false),
    bound!("turan23_lower", Qk::PhiK, Lower, Proved, NonStrict,
        dom: "|nu| <= 1/2 and x > sqrt(-mu)" => |nu, x| nu.abs() <= 0.5 && x > (-mu(nu)).sqrt(),
        f: "-(4/pi)[arccos(sqrt(-mu)/x)/(2sqrt(x^2+mu)) + sqrt(-mu)/(2x^2)]" => |nu, x| {
            let s = (-mu(nu)).max(0.0).sqrt();
            -(4.0 / std::f64::consts::PI)
                * ((s / x).acos() / (2.0 * (x * x + mu(nu)).sqrt()) + s / (2.0 * x * x))
        },
        sharp: AT_HALF, anchor: "new", guard: false),
    bound!("turan24_upper", Qk::PhiK, Upper, Proved, NonStrict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-1/sqrt(x^2+mu)" => |nu, x| -1.0 / (x * x + mu(nu)).sqrt(),
        sharp: AT_INF_HALF, anchor: "new", guard: false),
    bound!("turan25_upper", Qk::PhiK, Upper, Proved, Strict,
        dom: "all nu" => |_, _| true,
        f: "-1/sqrt(x^2+nu^2)" => |nu, x| -1.0 / hyp(x, nu),
        sharp: NONE, anchor: "new", guard: false),
    // z
    bound!("turan4_upper", Qk::Z, Upper, Proved, Strict,
        dom: "all nu" => |_, _| true,
        f: "-sqrt(x^2+nu^2)" => |nu, x| -hyp(x, nu),
        sharp: NONE, anchor: "Phillips-Malin; Paltsev", guard: false),
    bound!("turan22_lower", Qk::Z, Lower, Proved, NonStrict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-sqrt(x^2+nu^2-1/4)-1/2" => |nu, x| -(x * x + mu(nu)).sqrt() - 0.5,
        sharp: AT_HALF, anchor: "new", guard: false),
    bound!("paltsev_lower", Qk::Z, Lower, Proved, Strict,
        dom: "all nu" => |_, _| true,
        f: "-sqrt(x^2+nu^2)-1/2" => |nu, x| -hyp(x, nu) - 0.5,
        sharp: NONE, anchor: "Paltsev", guard: false),
    bound!("segura74_lower", Qk::Z, Lower, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "-sqrt(x^2+(nu+1/2)^2)-1/2" => |nu, x| -hyp(x, nu + 0.5) - 0.5,
        sharp: NONE, anchor: "Segura", guard: true),
    bound!("segura75_upper", Qk::Z, Upper, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "-sqrt(x^2+(nu-1/2)^2)-1/2" => |nu, x| -hyp(x, nu - 0.5) - 0.5,
        sharp: NONE, anchor: "Segura", guard: false),
    bound!("zint_upper", Qk::Z, Upper, Proved, NonStrict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "-sqrt(x^2+mu)+sqrt(mu)-nu" => |nu, x| -(x * x + mu(nu)).sqrt() + mu(nu).sqrt() - nu,
        sharp: AT_HALF, anchor: "new", guard: false),
    bound!("zlog_lower", Qk::Z, Lower, Proved, Strict,
        dom: "|nu| > 1" => |nu, _| nu.abs() > 1.0,
        f: "-2x-|nu|+2(|nu|-1)ln(1+x/(|nu|-1))" => |nu, x| {
            let a = nu.abs() - 1.0;
            -2.0 * x - nu.abs() + 2.0 * a * (x / a).ln_1p()
        },
        sharp: NONE, anchor: "new", guard: true),
    bound!("zlog_upper", Qk::Z, Upper, Proved, NonStrict,
        dom: "|nu| >= 1/2" => |nu, _| nu.abs() >= 0.5,
        f: "-x-|nu|+(2|nu|-1)ln(1+x/(2|nu|-1)), -x-1/2 at |nu|=1/2" => |nu, x| {
            let a = 2.0 * nu.abs() - 1.0;
            let log_term = if a == 0.0 { 0.0 } else { a * (x / a).ln_1p() };
            -x - nu.abs() + log_term
        },
        sharp: AT_HALF, anchor: "new", guard: false),
    // phiP
    bound!("turan26_lower", Qk::PhiP, Lower, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "([x-(nu+1/2)-sqrt(x^2+(nu+1/2)^2)]sqrt(x^2+mu)+x)/(x sqrt(x^2+mu)[nu+1/2+sqrt(x^2+(nu+1/2)^2)])" => |nu, x| {
            let r = hyp(x, nu + 0.5);
            let s = (x * x + mu(nu)).sqrt();
            ((x - (nu + 0.5) - r) * s + x) / (x * s * (nu + 0.5 + r))
        },
        sharp: AT_INF, anchor: "new", guard: false),
    bound!("turan26_upper", Qk::PhiP, Upper, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "1/(x sqrt(x^2+mu))" => |nu, x| 1.0 / (x * (x * x + mu(nu)).sqrt()),
        sharp: AT_INF, anchor: "new", guard: false),
    // applications
    bound!("b2hat_upper", Qk::B2Hat, Upper, Proved, Strict,
        dom: "nu > 0" => |nu, _| nu > 0.0,
        f: "-(x+nu)/(2x)" => |nu, x| -(x + nu) / (2.0 * x),
        sharp: NONE, anchor: "Hamsici-Martinez, corrected", guard: false),
    bound!("b2hat_upper_strong", Qk::B2Hat, Upper, Proved, Strict,
        dom: "nu >= 1/2" => |nu, _| nu >= 0.5,
        f: "-1" => |_, _| -1.0,
        sharp: NONE, anchor: "Hamsici-Martinez, corrected", guard: false),
    bound!("hamsici_b2hat_upper", Qk::B2Hat, Upper, Refuted, Strict,
        dom: "0 < nu < 1/2" => |nu, _| nu > 0.0 && nu < 0.5,
        f: "-1" => |_, _| -1.0,
        sharp: NONE, anchor: "Hamsici-Martinez", guard: false),
    bound!("veff_lower", Qk::VEff, Lower, Proved, Strict,
        dom: "mu_gig = nu > 1" => |nu, _| nu > 1.0,
        f: "0" => |_, _| 0.0,
        sharp: NONE, anchor: "generalized inverse Gaussian moments", guard: false),
    bound!("veff_upper", Qk::VEff, Upper, Proved, Strict,
        dom: "mu_gig = nu > 1" => |nu, _| nu > 1.0,
        f: "1/(mu_gig-1)" => |nu, _| 1.0 / (nu - 1.0),
        sharp: NONE, anchor: "generalized inverse Gaussian moments", guard: false),
    bound!("ncns_lower", Qk::Ns, Lower, Proved, Strict,
        dom: "nu >= -1" => |nu, _| nu >= -1.0,
        f: "n_c = (x^2/4)/(nu+1+sqrt(x^2+(nu+1)^2))" => |nu, x| (x * x / 4.0) / (nu + 1.0 + hyp(x, nu + 1.0)),
        sharp: NONE, anchor: "Penfold et al.", guard: false),
];

/// The catalog, optionally with deliberately broken entries for fault-injection tests.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    corrupted: BTreeMap<&'static str, f64>,
}

impl Catalog {
    pub fn standard() -> Self {
        Catalog::default()
    }

    /// Push one entry past the true value by `offset * (1 + |value|)`.
    pub fn with_corruption(mut self, id: &str, offset: f64) -> Result<Self, CatalogError> {
        let spec = self.get(id)?;
        self.corrupted.insert(spec.id, offset);
        Ok(self)
    }

    pub fn is_corrupted(&self) -> bool {
        !self.corrupted.is_empty()
    }

    pub fn entries(&self) -> &'static [BoundSpec] {
        ENTRIES
    }

    pub fn get(&self, id: &str) -> Result<&'static BoundSpec, CatalogError> {
        let id = ALIASES.iter().find(|(a, _)| *a == id).map(|(_, t)| *t).unwrap_or(id);
        ENTRIES
            .iter()
            .find(|b| b.id == id)
            .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn evaluate_spec(&self, spec: &'static BoundSpec, nu: f64, x: f64) -> BoundEvaluation {
        let applicable = spec.domain_holds(nu, x);
        let value = applicable.then(|| {
            let v = spec.formula_value(nu, x);
            match self.corrupted.get(spec.id) {
                Some(off) => {
                    let shift = off * (1.0 + v.abs());
                    match spec.side {
                        Lower => v + shift,
                        Upper => v - shift,
                    }
                }
                None => v,
            }
        });
        BoundEvaluation {
            id: spec.id,
            quantity: spec.quantity,
            side: spec.side,
            status: spec.status,
            applicable,
            value,
        }
    }

    pub fn evaluate_bound(&self, id: &str, nu: f64, x: f64) -> Result<BoundEvaluation, CatalogError> {
        Ok(self.evaluate_spec(self.get(id)?, nu, x))
    }

    pub fn applicable(&self, quantity: QuantityKind, nu: f64, x: f64, statuses: &[Status]) -> Vec<BoundEvaluation> {
        ENTRIES
            .iter()
            .filter(|b| b.quantity == quantity && statuses.contains(&b.status))
            .map(|b| self.evaluate_spec(b, nu, x))
            .filter(|e| e.applicable)
            .collect()
    }

    /// Largest applicable proved lower bound and smallest upper bound.
    /// Values within [`TIE_TOL`] of the best count as tied; the smallest id wins.
    pub fn best_bounds(&self, quantity: QuantityKind, nu: f64, x: f64) -> BestBounds {
        let cands = self.applicable(quantity, nu, x, &[Proved]);
        let pick = |side: Side| -> Option<BoundEvaluation> {
            let of_side: Vec<&BoundEvaluation> = cands.iter().filter(|e| e.side == side).collect();
            let best = of_side.iter().filter_map(|e| e.value).fold(None, |acc: Option<f64>, v| {
                Some(match (acc, side) {
                    (None, _) => v,
                    (Some(a), Lower) => a.max(v),
                    (Some(a), Upper) => a.min(v),
                })
            })?;
            let tol = TIE_TOL * best.abs().max(f64::MIN_POSITIVE);
            of_side
                .into_iter()
                .filter(|e| e.value.is_some_and(|v| (v - best).abs() <= tol))
                .min_by_key(|e| e.id)
                .cloned()
        };
        BestBounds { lower: pick(Lower), upper: pick(Upper) }
    }

    pub fn list(&self, status: Option<Status>, quantity: Option<QuantityKind>) -> Vec<BoundInfo> {
        ENTRIES
            .iter()
            .filter(|b| status.is_none_or(|s| b.status == s))
            .filter(|b| quantity.is_none_or(|q| b.quantity == q))
            .map(BoundInfo::from)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> Catalog {
        Catalog::standard()
    }

    fn val(id: &str, nu: f64, x: f64) -> f64 {
        cat().evaluate_bound(id, nu, x).unwrap().value.unwrap()
    }

    #[test]
    fn ids_are_unique_and_sides_suffixes_agree() {
        let mut seen = std::collections::BTreeSet::new();
        for b in ENTRIES {
            assert!(seen.insert(b.id), "duplicate {}", b.id);
            if b.id.ends_with("_lower") {
                assert_eq!(b.side, Lower, "{}", b.id);
            }
            if b.id.ends_with("_upper") {
                assert_eq!(b.side, Upper, "{}", b.id);
            }
        }
        let proved = ENTRIES.iter().filter(|b| b.status == Proved).count();
        assert!(proved >= 40, "{proved}");
    }

    #[test]
    fn formula_examples() {
        assert!((val("turan16_upper", 1.0, 1.0) - 1.0 / 1.75f64.sqrt()).abs() < 1e-15);
        assert!((val("turan16_upper", 1.0, 1.0) - 0.755_929).abs() < 1e-6);
        assert_eq!(val("turan20_lower", 2.0, 2.0), -0.5);
        assert!((val("turan23_lower", 0.5, 3.0) + 1.0 / 3.0).abs() < 1e-15);
        assert!((val("zlog_upper", 0.5, 2.0) + 2.5).abs() < 1e-15);
    }

    #[test]
    fn alias_resolves() {
        let a = cat().evaluate_bound("seguraproof_upper", 1.0, 3.0).unwrap();
        assert_eq!(a.id, "tuseg_upper");
        assert!(matches!(cat().evaluate_bound("nope", 1.0, 1.0), Err(CatalogError::UnknownId(_))));
    }

    #[test]
    fn applicable_examples() {
        let ids = |q, nu, x| -> Vec<&str> {
            cat().applicable(q, nu, x, &[Proved]).iter().map(|e| e.id).collect()
        };
        let phi_i = ids(QuantityKind::PhiI, 1.0, 1.0);
        for id in [
            "turan1_upper", "turan8_lower", "turan8_upper", "turan9_lower", "turan9_upper",
            "turan10_upper", "turan11_upper", "turan16_lower", "turan16_upper",
        ] {
            assert!(phi_i.contains(&id), "{id}");
        }
        assert!(!phi_i.contains(&"turanconj_lower"));
        let phi_k = ids(QuantityKind::PhiK, 0.3, 1.0);
        for id in ["turan21_lower", "turan21_upper", "turan25_upper"] {
            assert!(phi_k.contains(&id), "{id}");
        }
        assert!(!phi_k.iter().any(|id| id.starts_with("turan20") || id.starts_with("turan24")));
        assert!(!ids(QuantityKind::PhiK, 0.3, 0.3).contains(&"turan23_lower"));
        assert!(ids(QuantityKind::PhiK, 0.3, 0.5).contains(&"turan23_lower"));
    }

    #[test]
    fn best_bounds_examples() {
        let b = cat().best_bounds(QuantityKind::PhiI, 1.0, 1.0);
        let (lo, up) = (b.lower.unwrap(), b.upper.unwrap());
        assert_eq!(lo.id, "turan16_lower");
        assert!((lo.value.unwrap() - 0.416_025).abs() < 1e-6);
        assert_eq!(up.id, "turan8_upper");
        assert!((up.value.unwrap() - 0.472_136).abs() < 1e-6);

        // four upper bounds coincide at -1/2 here; the smallest id is reported
        let b = cat().best_bounds(QuantityKind::PhiK, 0.5, 2.0);
        assert_eq!(b.lower.as_ref().unwrap().value, Some(-0.5));
        assert_eq!(b.upper.as_ref().unwrap().value, Some(-0.5));
        assert_eq!(b.upper.unwrap().id, "turan18_upper");
        assert_eq!(b.lower.unwrap().id, "turan20_lower");

        let b = cat().best_bounds(QuantityKind::Y, 1.0, 100.0);
        let up = b.upper.unwrap();
        assert_eq!(up.id, "tuseg_upper");
        assert!((up.value.unwrap() - (10_002.25f64.sqrt() - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn domains_are_total_on_the_box() {
        for b in ENTRIES {
            for i in 0..=60 {
                let nu = -10.0 + 30.0 * i as f64 / 60.0;
                for j in 1..=60 {
                    let x = 500.0 * (j as f64 / 60.0).powi(3);
                    if b.domain_holds(nu, x) {
                        assert!(b.formula_value(nu, x).is_finite(), "{} at ({nu}, {x})", b.id);
                    }
                }
            }
        }
    }

    #[test]
    fn corruption_moves_bound_past_value() {
        let c = cat().with_corruption("turan1_lower", 0.5).unwrap();
        assert_eq!(c.evaluate_bound("turan1_lower", 1.0, 1.0).unwrap().value, Some(0.5));
        assert!(c.is_corrupted());
        assert!(cat().with_corruption("bogus", 0.5).is_err());
    }

    #[test]
    fn dominance_spot_checks() {
        for &x in &[0.5, 1.0, 5.0, 50.0] {
            for &nu in &[0.75, 1.0, 3.0] {
                assert!(val("turan16_upper", nu, x) < val("turan11_upper", nu, x));
            }
            for &nu in &[1.5, 2.0, 5.0] {
                assert!(val("turan24_upper", nu, x) < val("turan18_upper", nu, x));
            }
            for &nu in &[0.5, 1.0, 4.0] {
                assert!(val("turan22_lower", nu, x) > val("paltsev_lower", nu, x));
            }
        }
    }

    #[test]
    fn list_filters() {
        let refuted: Vec<_> = cat().list(Some(Refuted), None).into_iter().map(|b| b.id).collect();
        assert_eq!(refuted, vec!["joshi_turan7", "hamsici_b2hat_upper"]);
        assert!(cat().list(None, Some(QuantityKind::PhiP)).len() == 2);
    }
}
