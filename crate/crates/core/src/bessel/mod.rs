//! Reference evaluation of `I_nu`, `K_nu` and their order ratios.
//!
//! Region choice: the large-argument expansions are used once
//! `x >= 30 + (|nu| + 1)^2`; below that `I` comes from its power series and
//! `K` from trapezoidal quadrature of the cosh integral. Each result carries
//! a claimed relative error.

pub(crate) mod asymptotic;
pub(crate) mod cfrac;
pub(crate) mod quadrature;
pub(crate) mod reflection;
pub(crate) mod series;

use serde::Serialize;

use crate::context::{
    check_target, BesselError, EvalContext, Result, Scaled, ValueWithError, DEFAULT_TARGET,
};
use crate::dd::Dd;

/// Agreement required between the series quotient and the continued fraction.
pub const DUAL_PATH_TOL: f64 = 1e-10;
/// Agreement required between the direct `K` ratios and the recurrence.
pub const RECURRENCE_TOL: f64 = 1e-10;

pub const PATH_VERSIONS: &[(&str, &str)] = &[
    ("series", "1.0"),
    ("asymptotic", "1.0"),
    ("quadrature", "1.0"),
    ("continued-fraction", "1.0"),
    ("reflection", "1.0"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalPath {
    Series,
    Asymptotic,
    Quadrature,
}

impl EvalPath {
    pub fn name(self) -> &'static str {
        match self {
            EvalPath::Series => "series",
            EvalPath::Asymptotic => "asymptotic",
            EvalPath::Quadrature => "quadrature",
        }
    }
}

/// Lower edge of the large-argument region for orders `nu - 1 .. nu + 1`.
pub fn asymptotic_threshold(nu: f64) -> f64 {
    30.0 + (nu.abs() + 1.0).powi(2)
}

pub fn uses_asymptotic(nu: f64, x: f64) -> bool {
    x >= asymptotic_threshold(nu)
}

/// `I_nu` together with `I_{nu+1}/I_nu`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ISide {
    pub ratio_up: Dd,
    pub ratio_err: f64,
    pub value: Scaled,
    pub value_err: f64,
    pub path: EvalPath,
}

/// `K_nu` together with `K_{nu+1}/K_nu` and `K_{nu-1}/K_nu`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KSide {
    pub ratio_up: Dd,
    pub ratio_down: Dd,
    pub ratio_err: f64,
    pub value: Scaled,
    pub value_err: f64,
    pub path: EvalPath,
}

fn i_domain(nu: f64, x: f64) -> BesselError {
    BesselError::Domain {
        what: "I-side quantity".into(),
        nu,
        x,
        reason: "requires nu > -1 or nu = -1".into(),
    }
}

pub(crate) fn i_side(nu: f64, x: f64) -> Result<ISide> {
    if nu == -1.0 {
        // I_{-1} = I_1, so I_0/I_{-1} = 1/(I_1/I_0)
        let base = i_side(0.0, x)?;
        return Ok(ISide {
            ratio_up: base.ratio_up.recip(),
            ratio_err: base.ratio_err,
            value: Scaled { m: base.value.m * base.ratio_up, e: base.value.e },
            value_err: base.value_err + base.ratio_err,
            path: base.path,
        });
    }
    if nu <= -1.0 {
        return Err(i_domain(nu, x));
    }
    let side = if uses_asymptotic(nu, x) {
        let s0 = asymptotic::asym_sum(nu, x, true);
        let s1 = asymptotic::asym_sum(nu + 1.0, x, true);
        let (value, value_err) = asymptotic::i_scaled(x, &s0);
        ISide {
            ratio_up: s1.sum / s0.sum,
            ratio_err: asymptotic::i_error(x, &s0) + asymptotic::i_error(x, &s1),
            value,
            value_err,
            path: EvalPath::Asymptotic,
        }
    } else {
        let s0 = series::normalized_series(nu, x);
        let s1 = series::normalized_series(nu + 1.0, x);
        let (value, value_err) = series::i_scaled(nu, x, &s0);
        let pre = Dd::new(x).mul_f64(0.5) / Dd::sum(nu, 1.0);
        ISide {
            ratio_up: pre * s1.sum / s0.sum,
            ratio_err: s0.rel_err + s1.rel_err + 1e-30,
            value,
            value_err,
            path: EvalPath::Series,
        }
    };
    let cf = cfrac::ratio_i_cf(nu, x);
    let r = side.ratio_up.to_f64();
    if !((cf - r).abs() <= DUAL_PATH_TOL * r.abs()) {
        return Err(BesselError::CrossCheck(format!(
            "I ratio at nu={nu}, x={x}: quotient {r:e} vs continued fraction {cf:e}"
        )));
    }
    Ok(side)
}

pub(crate) fn k_side(nu: f64, x: f64) -> Result<KSide> {
    let side = if uses_asymptotic(nu, x) {
        let s: Vec<_> = [nu - 1.0, nu, nu + 1.0]
            .iter()
            .map(|&a| asymptotic::asym_sum(a, x, false))
            .collect();
        let (value, value_err) = asymptotic::k_scaled(x, &s[1]);
        KSide {
            ratio_up: s[2].sum / s[1].sum,
            ratio_down: s[0].sum / s[1].sum,
            ratio_err: s.iter().map(asymptotic::k_error).sum(),
            value,
            value_err,
            path: EvalPath::Asymptotic,
        }
    } else {
        let q = quadrature::k_quadrature(&[nu - 1.0, nu, nu + 1.0], x)?;
        KSide {
            ratio_up: q.vals[2] / q.vals[1],
            ratio_down: q.vals[0] / q.vals[1],
            ratio_err: q.rel_err.iter().sum(),
            value: Scaled { m: q.vals[1], e: Dd::new(q.e_star) },
            value_err: q.rel_err[1],
            path: EvalPath::Quadrature,
        }
    };
    let via_recurrence = side.ratio_down + Dd::new(2.0 * nu) / Dd::new(x);
    let up = side.ratio_up.to_f64();
    if !((side.ratio_up - via_recurrence).hi.abs() <= RECURRENCE_TOL * up.abs()) {
        return Err(BesselError::CrossCheck(format!(
            "K recurrence at nu={nu}, x={x}: {up:e} vs {:e}",
            via_recurrence.to_f64()
        )));
    }
    Ok(side)
}

/// `K_nu` alone, cheaper than the full triple.
pub(crate) fn k_single(nu: f64, x: f64) -> Result<(Scaled, f64, EvalPath)> {
    if uses_asymptotic(nu, x) {
        let s = asymptotic::asym_sum(nu, x, false);
        let (v, e) = asymptotic::k_scaled(x, &s);
        Ok((v, e, EvalPath::Asymptotic))
    } else {
        let q = quadrature::k_quadrature(&[nu], x)?;
        Ok((Scaled { m: q.vals[0], e: Dd::new(q.e_star) }, q.rel_err[0], EvalPath::Quadrature))
    }
}

/// `I_nu(x)`; orders at or below -1 other than -1 itself are rejected.
pub fn eval_i(ctx: &EvalContext, target_rel_err: f64) -> Result<ValueWithError> {
    check_target(target_rel_err)?;
    let s = i_side(ctx.nu(), ctx.x())?;
    ValueWithError::checked(s.value.value(), s.value_err, target_rel_err)
}

/// `K_nu(x)`, computed from `|nu|`.
pub fn eval_k(ctx: &EvalContext, target_rel_err: f64) -> Result<ValueWithError> {
    check_target(target_rel_err)?;
    let (v, e, _) = k_single(ctx.nu().abs(), ctx.x())?;
    ValueWithError::checked(v.value(), e, target_rel_err)
}

/// `I_{nu+1}(x)/I_nu(x)`, cross-checked against the continued fraction.
pub fn ratio_i(ctx: &EvalContext) -> Result<ValueWithError> {
    let s = i_side(ctx.nu(), ctx.x())?;
    ValueWithError::checked(s.ratio_up, s.ratio_err, DEFAULT_TARGET)
}

/// `K_{nu+1}(x)/K_nu(x)`, cross-checked against the recurrence.
pub fn ratio_k(ctx: &EvalContext) -> Result<ValueWithError> {
    let s = k_side(ctx.nu(), ctx.x())?;
    ValueWithError::checked(s.ratio_up, s.ratio_err, DEFAULT_TARGET)
}

/// `I_{nu+1}/I_nu` from the continued fraction alone.
pub fn ratio_i_continued_fraction(ctx: &EvalContext) -> f64 {
    cfrac::ratio_i_cf(ctx.nu(), ctx.x())
}

/// `K_nu` from the reflection formula; `None` near integer orders or for `x > 2`.
pub fn eval_k_reflection(ctx: &EvalContext) -> Option<f64> {
    reflection::k_reflection(ctx.nu(), ctx.x())
}

/// Both large-argument and small-argument paths at one point, for overlap checks.
pub fn overlap_pair_i(nu: f64, x: f64) -> (f64, f64) {
    let a = asymptotic::i_scaled(x, &asymptotic::asym_sum(nu, x, true)).0.value().to_f64();
    let s = series::i_scaled(nu, x, &series::normalized_series(nu, x)).0.value().to_f64();
    (a, s)
}

pub fn overlap_pair_k(nu: f64, x: f64) -> Result<(f64, f64)> {
    let a = asymptotic::k_scaled(x, &asymptotic::asym_sum(nu, x, false)).0.value().to_f64();
    let q = quadrature::k_quadrature(&[nu], x)?;
    Ok((a, (Scaled { m: q.vals[0], e: Dd::new(q.e_star) }).value().to_f64()))
}

/// Relative gap between `K_{-nu}` and `K_nu` computed on two different node sets.
///
/// The first integral runs alone; the second shares its nodes with order
/// `|nu| + 1`, which moves the peak and the step size.
pub fn k_symmetry_residual(nu: f64, x: f64) -> Result<f64> {
    let a = quadrature::k_quadrature(&[-nu], x)?;
    let b = quadrature::k_quadrature(&[nu, nu.abs() + 1.0], x)?;
    let ratio = (a.vals[0] / b.vals[0]) * Dd::new(a.e_star - b.e_star).exp();
    Ok((ratio - Dd::ONE).to_f64().abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(nu: f64, x: f64) -> EvalContext {
        EvalContext::new(nu, x).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_forms() {
        let i = eval_i(&ctx(0.5, 2.0), 1e-12).unwrap();
        let exact = (2.0 / (std::f64::consts::PI * 2.0)).sqrt() * 2f64.sinh();
        assert!(rel(i.value, exact) < 1e-14);
        let k = eval_k(&ctx(0.5, 1.0), 1e-12).unwrap();
        assert!(rel(k.value, (std::f64::consts::PI / 2.0).sqrt() * (-1f64).exp()) < 1e-14);
        let r = ratio_i(&ctx(0.5, 1.0)).unwrap();
        assert!(rel(r.value, 1.0 / 1f64.tanh() - 1.0) < 1e-14);
        let r = ratio_k(&ctx(0.5, 1.0)).unwrap();
        assert!(rel(r.value, 2.0) < 1e-15);
    }

    #[test]
    fn oracle_points() {
        // f64 series / trapezoid oracles, frozen
        assert!(rel(eval_i(&ctx(0.0, 1.0), 1e-12).unwrap().value, 1.266_065_877_752_008_4) < 1e-12);
        assert!(rel(eval_i(&ctx(1.0, 1.0), 1e-12).unwrap().value, 0.565_159_103_992_485) < 1e-12);
        assert!(rel(eval_k(&ctx(0.0, 1.0), 1e-12).unwrap().value, 0.421_024_438_240_708_3) < 1e-12);
        assert!(rel(ratio_i(&ctx(0.0, 1.0)).unwrap().value, 0.565_159_103_992_485 / 1.266_065_877_752_008_4) < 1e-12);
        assert!(rel(ratio_k(&ctx(0.0, 1.0)).unwrap().value, 0.601_907_230_197_234_6 / 0.421_024_438_240_708_3) < 1e-12);
        assert!(rel(ratio_k(&ctx(1.0, 1.0)).unwrap().value, 1.624_838_898_635_177_5 / 0.601_907_230_197_234_6) < 1e-12);
        let tiny = ratio_i(&ctx(0.0, 1e-6)).unwrap().value;
        assert!(rel(tiny, 5e-7) < 1e-12);
    }

    #[test]
    fn k_symmetry_and_negative_order_one() {
        let a = eval_k(&ctx(-1.0, 1.0), 1e-12).unwrap().value;
        let b = eval_k(&ctx(1.0, 1.0), 1e-12).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn overlap_paths_agree() {
        for &nu in &[0.0, 0.5, 1.0, 2.5] {
            let x = asymptotic_threshold(nu) + 5.0;
            let (a, s) = overlap_pair_i(nu, x);
            assert!(rel(a, s) < 1e-11, "I nu={nu}");
            let (a, q) = overlap_pair_k(nu, x).unwrap();
            assert!(rel(a, q) < 1e-11, "K nu={nu}");
        }
    }

    #[test]
    fn reflection_agrees_with_quadrature() {
        for &(nu, x) in &[(0.3, 0.5), (1.7, 1.0), (2.25, 2.0), (-0.6, 0.01)] {
            let c = ctx(nu, x);
            let r = eval_k_reflection(&c).unwrap();
            let q = eval_k(&c, 1e-12).unwrap().value;
            assert!(rel(r, q) < 1e-11, "nu={nu} x={x}");
        }
    }

    #[test]
    fn target_and_domain_errors() {
        assert!(matches!(eval_i(&ctx(0.0, 1.0), 1e-15), Err(BesselError::TargetTooSmall(_))));
        assert!(matches!(eval_i(&ctx(-1.5, 1.0), 1e-12), Err(BesselError::Domain { .. })));
        assert!(eval_i(&ctx(-1.0, 1.0), 1e-12).is_ok());
    }

    #[test]
    fn large_arguments_stay_finite() {
        let i = eval_i(&ctx(20.0, 500.0), 1e-12).unwrap();
        assert!(i.value.is_finite() && i.value > 1e200);
        let k = eval_k(&ctx(20.0, 1e-3), 1e-12).unwrap();
        assert!(k.value.is_finite() && k.value > 1e70);
        let k = eval_k(&ctx(0.0, 500.0), 1e-12).unwrap();
        assert!(k.value > 0.0 && k.value < 1e-200);
    }
}
