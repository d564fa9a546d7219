//! Derived quantities: log-derivatives, Turánians, products and the
//! application-level combinations built from them.
//!
//! Turánians are formed from order ratios through the three-term
//! recurrences, never by subtracting nearly equal function values.

use std::cell::OnceCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bessel::{i_side, k_side, k_single, EvalPath, ISide, KSide};
use crate::context::{
    check_target, BesselError, EvalContext, Result, Scaled, ValueWithError, DEFAULT_TARGET,
};
use crate::dd::{Dd, DD_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "&'static str", try_from = "String")]
pub enum QuantityKind {
    I,
    K,
    RatioI,
    RatioK,
    RatioIPrev,
    RatioKPrev,
    Y,
    Z,
    PhiI,
    PhiK,
    PhiP,
    P,
    Omega,
    DeltaI,
    DeltaK,
    W,
    U,
    Lambda,
    Q,
    T,
    B2Hat,
    VEff,
    Nc,
    Ns,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 24] = [
        QuantityKind::I,
        QuantityKind::K,
        QuantityKind::RatioI,
        QuantityKind::RatioK,
        QuantityKind::RatioIPrev,
        QuantityKind::RatioKPrev,
        QuantityKind::Y,
        QuantityKind::Z,
        QuantityKind::PhiI,
        QuantityKind::PhiK,
        QuantityKind::PhiP,
        QuantityKind::P,
        QuantityKind::Omega,
        QuantityKind::DeltaI,
        QuantityKind::DeltaK,
        QuantityKind::W,
        QuantityKind::U,
        QuantityKind::Lambda,
        QuantityKind::Q,
        QuantityKind::T,
        QuantityKind::B2Hat,
        QuantityKind::VEff,
        QuantityKind::Nc,
        QuantityKind::Ns,
    ];

    pub fn tag(self) -> &'static str {
        use QuantityKind::*;
        match self {
            I => "I",
            K => "K",
            RatioI => "ratioI",
            RatioK => "ratioK",
            RatioIPrev => "ratioIprev",
            RatioKPrev => "ratioKprev",
            Y => "y",
            Z => "z",
            PhiI => "phiI",
            PhiK => "phiK",
            PhiP => "phiP",
            P => "P",
            Omega => "omega",
            DeltaI => "deltaI",
            DeltaK => "deltaK",
            W => "w",
            U => "u",
            Lambda => "lambda",
            Q => "q",
            T => "t",
            B2Hat => "b2hat",
            VEff => "veff",
            Nc => "nc",
            Ns => "ns",
        }
    }

    pub fn definition(self) -> &'static str {
        use QuantityKind::*;
        match self {
            I => "I_nu(x)",
            K => "K_nu(x)",
            RatioI => "I_{nu+1}(x)/I_nu(x)",
            RatioK => "K_{nu+1}(x)/K_nu(x)",
            RatioIPrev => "I_nu(x)/I_{nu-1}(x)",
            RatioKPrev => "K_nu(x)/K_{nu-1}(x)",
            Y => "x I'_nu(x)/I_nu(x)",
            Z => "x K'_nu(x)/K_nu(x)",
            PhiI => "1 - I_{nu-1} I_{nu+1} / I_nu^2",
            PhiK => "1 - K_{nu-1} K_{nu+1} / K_nu^2",
            PhiP => "1 - P_{nu-1} P_{nu+1} / P_nu^2",
            P => "I_nu(x) K_nu(x)",
            Omega => "x P_nu(x)",
            DeltaI => "I_nu^2 - I_{nu-1} I_{nu+1}",
            DeltaK => "K_nu^2 - K_{nu-1} K_{nu+1}",
            W => "sqrt(x^2 + nu^2) - y",
            U => "sqrt(x^2 + mu) - y",
            Lambda => "y - sqrt(x^2 + (nu+1)^2)",
            Q => "z + sqrt(x^2 + mu)",
            T => "z + sqrt(x^2 + nu^2)",
            B2Hat => "-1/(x phiI)",
            VEff => "-phiK at order mu_gig = nu and argument 1/w_gig = x",
            Nc => "(x^2/4) / (nu + 1 + sqrt(x^2 + (nu+1)^2))",
            Ns => "(x/4) I_{nu+1}(x)/I_nu(x)",
        }
    }

    fn needs_i(self) -> bool {
        use QuantityKind::*;
        matches!(
            self,
            I | RatioI | RatioIPrev | Y | PhiI | PhiP | P | Omega | DeltaI | W | U | Lambda | B2Hat | Ns
        )
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownQuantity(pub String);

impl fmt::Display for UnknownQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown quantity '{}'", self.0)
    }
}

impl std::error::Error for UnknownQuantity {}

impl From<QuantityKind> for &'static str {
    fn from(k: QuantityKind) -> Self {
        k.tag()
    }
}

impl TryFrom<String> for QuantityKind {
    type Error = UnknownQuantity;
    fn try_from(s: String) -> std::result::Result<Self, UnknownQuantity> {
        s.parse()
    }
}

impl FromStr for QuantityKind {
    type Err = UnknownQuantity;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        QuantityKind::ALL
            .iter()
            .copied()
            .find(|k| k.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownQuantity(s.to_string()))
    }
}

/// A double-double value with an absolute error bound.
#[derive(Debug, Clone, Copy)]
struct Approx {
    v: Dd,
    err: f64,
}

impl Approx {
    fn exact(v: Dd) -> Approx {
        Approx { v, err: v.hi.abs() * 4.0 * DD_EPS }
    }

    fn rel(v: Dd, rel: f64) -> Approx {
        Approx { v, err: v.hi.abs() * rel }
    }

    fn rel_err(self) -> f64 {
        self.err / self.v.hi.abs()
    }

    fn round(v: Dd, err: f64) -> Approx {
        Approx { v, err: err + v.hi.abs() * 4.0 * DD_EPS }
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        Approx::round(self.v + o.v, self.err + o.err)
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, o: Approx) -> Approx {
        Approx::round(self.v - o.v, self.err + o.err)
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx { v: -self.v, err: self.err }
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, o: Approx) -> Approx {
        let e = self.v.hi.abs() * o.err + o.v.hi.abs() * self.err + self.err * o.err;
        Approx::round(self.v * o.v, e)
    }
}

impl Div for Approx {
    type Output = Approx;
    fn div(self, o: Approx) -> Approx {
        let q = self.v / o.v;
        let rel = self.rel_err() + o.rel_err() / (1.0 - o.rel_err()).max(0.5);
        Approx::round(q, q.hi.abs() * rel)
    }
}

fn c(v: f64) -> Approx {
    Approx { v: Dd::new(v), err: 0.0 }
}

fn sqrt_a(a: Approx) -> Approx {
    let s = a.v.sqrt();
    Approx::round(s, s.hi.abs() * 0.5 * a.rel_err())
}

/// Lazily evaluated `I` and `K` data at one `(nu, x)`.
pub struct PointEval {
    ctx: EvalContext,
    i: OnceCell<Result<ISide>>,
    k: OnceCell<Result<KSide>>,
    k_alone: OnceCell<Result<(Scaled, f64)>>,
}

impl PointEval {
    pub fn new(ctx: EvalContext) -> Self {
        PointEval { ctx, i: OnceCell::new(), k: OnceCell::new(), k_alone: OnceCell::new() }
    }

    pub fn ctx(&self) -> &EvalContext {
        &self.ctx
    }

    fn i(&self) -> Result<ISide> {
        self.i.get_or_init(|| i_side(self.ctx.nu(), self.ctx.x())).clone()
    }

    fn k(&self) -> Result<KSide> {
        self.k.get_or_init(|| k_side(self.ctx.nu(), self.ctx.x())).clone()
    }

    fn k_value(&self) -> Result<(Scaled, f64)> {
        if let Some(Ok(k)) = self.k.get() {
            return Ok((k.value, k.value_err));
        }
        self.k_alone
            .get_or_init(|| k_single(self.ctx.nu().abs(), self.ctx.x()).map(|(v, e, _)| (v, e)))
            .clone()
    }

    /// Which evaluators served this point so far.
    pub fn paths(&self) -> (Option<EvalPath>, Option<EvalPath>) {
        let i = self.i.get().and_then(|r| r.as_ref().ok()).map(|s| s.path);
        let k = self.k.get().and_then(|r| r.as_ref().ok()).map(|s| s.path).or_else(|| {
            self.k_alone.get().and_then(|r| r.as_ref().ok()).map(|_| {
                if crate::bessel::uses_asymptotic(self.ctx.nu().abs(), self.ctx.x()) {
                    EvalPath::Asymptotic
                } else {
                    EvalPath::Quadrature
                }
            })
        });
        (i, k)
    }

    fn domain(&self, kind: QuantityKind, reason: &str) -> BesselError {
        BesselError::Domain {
            what: kind.tag().to_string(),
            nu: self.ctx.nu(),
            x: self.ctx.x(),
            reason: reason.to_string(),
        }
    }

    fn ri_up(&self) -> Result<Approx> {
        let s = self.i()?;
        Ok(Approx::rel(s.ratio_up, s.ratio_err))
    }

    /// `I_{nu-1}/I_nu = I_{nu+1}/I_nu + 2 nu / x`
    fn ri_down(&self) -> Result<Approx> {
        Ok(self.ri_up()? + self.two_nu_over_x())
    }

    fn rk(&self) -> Result<(Approx, Approx)> {
        let s = self.k()?;
        Ok((Approx::rel(s.ratio_up, s.ratio_err), Approx::rel(s.ratio_down, s.ratio_err)))
    }

    fn two_nu_over_x(&self) -> Approx {
        Approx::exact(Dd::new(2.0 * self.ctx.nu()) / Dd::new(self.ctx.x()))
    }

    fn x2(&self) -> Dd {
        Dd::prod(self.ctx.x(), self.ctx.x())
    }

    fn mu(&self) -> Dd {
        Dd::prod(self.ctx.nu(), self.ctx.nu()).add_f64(-0.25)
    }

    fn y(&self) -> Result<Approx> {
        Ok(c(self.ctx.nu()) + c(self.ctx.x()) * self.ri_up()?)
    }

    fn z(&self) -> Result<Approx> {
        Ok(c(self.ctx.nu()) - c(self.ctx.x()) * self.rk()?.0)
    }

    fn phi_i(&self) -> Result<Approx> {
        Ok(c(1.0) - self.ri_down()? * self.ri_up()?)
    }

    fn phi_k(&self) -> Result<Approx> {
        let (up, down) = self.rk()?;
        Ok(c(1.0) - down * up)
    }

    fn approx(&self, kind: QuantityKind) -> Result<Approx> {
        use QuantityKind::*;
        let nu = self.ctx.nu();
        let x = self.ctx.x();
        let i_val = || -> Result<Approx> {
            let s = self.i()?;
            Ok(Approx::rel(s.value.value(), s.value_err))
        };
        let k_val = || -> Result<Approx> {
            let (v, e) = self.k_value()?;
            Ok(Approx::rel(v.value(), e))
        };
        let p_val = || -> Result<Approx> {
            let s = self.i()?;
            let (kv, ke) = self.k_value()?;
            Ok(Approx::rel(s.value.mul(kv).value(), s.value_err + ke))
        };
        Ok(match kind {
            I => i_val()?,
            K => k_val()?,
            RatioI => self.ri_up()?,
            RatioK => self.rk()?.0,
            RatioIPrev => c(1.0) / self.ri_down()?,
            RatioKPrev => c(1.0) / self.rk()?.1,
            Y => self.y()?,
            Z => self.z()?,
            PhiI => self.phi_i()?,
            PhiK => self.phi_k()?,
            PhiP => {
                let (up, down) = self.rk()?;
                c(1.0) - (self.ri_down()? * self.ri_up()?) * (down * up)
            }
            P => p_val()?,
            Omega => c(x) * p_val()?,
            DeltaI => {
                let v = i_val()?;
                v * v * self.phi_i()?
            }
            DeltaK => {
                let s = self.k()?;
                let v = Approx::rel(s.value.value(), s.value_err);
                v * v * self.phi_k()?
            }
            W => sqrt_a(Approx::exact(self.x2() + Dd::prod(nu, nu))) - self.y()?,
            U => {
                let r = self.x2() + self.mu();
                if r.hi < 0.0 {
                    return Err(self.domain(kind, "needs x^2 + mu >= 0"));
                }
                sqrt_a(Approx::exact(r)) - self.y()?
            }
            Lambda => {
                let n1 = Dd::sum(nu, 1.0);
                self.y()? - sqrt_a(Approx::exact(self.x2() + n1 * n1))
            }
            Q => {
                let r = self.x2() + self.mu();
                if r.hi < 0.0 {
                    return Err(self.domain(kind, "needs x^2 + mu >= 0"));
                }
                self.z()? + sqrt_a(Approx::exact(r))
            }
            T => self.z()? + sqrt_a(Approx::exact(self.x2() + Dd::prod(nu, nu))),
            B2Hat => -(c(1.0) / (c(x) * self.phi_i()?)),
            VEff => -self.phi_k()?,
            Nc => {
                let n1 = Dd::sum(nu, 1.0);
                let den = Approx::exact(n1) + sqrt_a(Approx::exact(self.x2() + n1 * n1));
                Approx::exact(self.x2().mul_f64(0.25)) / den
            }
            Ns => c(x * 0.25) * self.ri_up()?,
        })
    }

    /// Double-double value with its relative error claim.
    pub(crate) fn value_dd(&self, kind: QuantityKind) -> Result<(Dd, f64)> {
        let a = self.approx(kind)?;
        Ok((a.v, a.rel_err()))
    }

    pub fn get(&self, kind: QuantityKind, target_rel_err: f64) -> Result<ValueWithError> {
        check_target(target_rel_err)?;
        if kind.needs_i() && self.ctx.nu() <= -1.0 && self.ctx.nu() != -1.0 {
            return Err(self.domain(kind, "requires nu > -1"));
        }
        let a = self.approx(kind)?;
        ValueWithError::checked(a.v, a.rel_err(), target_rel_err)
    }

    pub fn value(&self, kind: QuantityKind) -> Result<ValueWithError> {
        self.get(kind, DEFAULT_TARGET)
    }
}

/// Evaluate one quantity at the default tolerance.
pub fn quantity(kind: QuantityKind, ctx: &EvalContext) -> Result<ValueWithError> {
    PointEval::new(*ctx).get(kind, DEFAULT_TARGET)
}

pub fn quantity_with_target(
    kind: QuantityKind,
    ctx: &EvalContext,
    target_rel_err: f64,
) -> Result<ValueWithError> {
    PointEval::new(*ctx).get(kind, target_rel_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use QuantityKind::*;

    fn q(kind: QuantityKind, nu: f64, x: f64) -> f64 {
        quantity(kind, &EvalContext::new(nu, x).unwrap()).unwrap().value
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn serializes_as_tag() {
        assert_eq!(serde_json::to_string(&PhiI).unwrap(), "\"phiI\"");
        assert_eq!(serde_json::from_str::<QuantityKind>("\"b2hat\"").unwrap(), B2Hat);
        assert!(serde_json::from_str::<QuantityKind>("\"nope\"").is_err());
    }

    #[test]
    fn tags_round_trip() {
        for k in QuantityKind::ALL {
            assert_eq!(k.tag().parse::<QuantityKind>().unwrap(), k);
        }
        assert!("nope".parse::<QuantityKind>().is_err());
    }

    #[test]
    fn half_order_closed_forms() {
        for &x in &[1e-3, 0.4, 3.577_847_594, 12.0, 80.0, 450.0] {
            let y = q(Y, 0.5, x);
            let exact = if x < 1e-2 { 0.5 + x * x / 3.0 - x.powi(4) / 45.0 } else { x / x.tanh() - 0.5 };
            assert!(rel(y, exact) < 1e-13, "y at {x}");
            assert!(rel(q(Z, 0.5, x), -x - 0.5) < 1e-14);
            assert!(rel(q(PhiK, 0.5, x), -1.0 / x) < 1e-13);
            if x > 0.01 {
                let p = (1.0 - (-2.0 * x).exp()) / (2.0 * x);
                assert!(rel(q(P, 0.5, x), p) < 1e-13, "P at {x}");
            }
        }
        assert!((q(Y, 0.5, 3.577_847_594) - 3.083_436_3).abs() < 1e-6);
    }

    #[test]
    fn oracle_turanians() {
        // oracles: f64 series for I, f64 trapezoid for K, then the definitions
        let i0 = 1.266_065_877_752_008_4;
        let i1 = 0.565_159_103_992_485;
        let i2 = i0 - 2.0 * i1;
        let k0 = 0.421_024_438_240_708_3;
        let k1 = 0.601_907_230_197_234_6;
        let k2 = 1.624_838_898_635_177_5;
        let phi_i = 1.0 - i0 * i2 / (i1 * i1);
        let phi_k = 1.0 - k0 * k2 / (k1 * k1);
        assert!((q(PhiI, 1.0, 1.0) - phi_i).abs() < 1e-12);
        assert!((q(PhiK, 1.0, 1.0) - phi_k).abs() < 1e-12);
        assert!((q(PhiP, 1.0, 1.0) - (phi_i + phi_k - phi_i * phi_k)).abs() < 1e-12);
        assert!((q(PhiI, 1.0, 1.0) - 0.461_926).abs() < 1e-5);
    }

    #[test]
    fn composition_identities() {
        for &(nu, x) in &[(0.3, 0.7), (1.0, 1.0), (2.5, 9.0), (5.0, 80.0)] {
            let fi = q(PhiI, nu, x);
            let fk = q(PhiK, nu, x);
            assert!(rel(q(PhiP, nu, x), fi + fk - fi * fk) < 1e-12);
            let i = q(I, nu, x);
            let k = q(K, nu, x);
            assert!(rel(q(DeltaI, nu, x), i * i * fi) < 1e-12);
            assert!(rel(q(DeltaK, nu, x), k * k * fk) < 1e-12);
            assert!(rel(q(P, nu, x), i * k) < 1e-12);
            assert!(rel(q(Y, nu, x) - q(Z, nu, x), 1.0 / (i * k)) < 1e-12);
        }
    }

    #[test]
    fn order_minus_one_mirrors_order_one() {
        assert!(rel(q(Y, -1.0, 2.0), q(Y, 1.0, 2.0)) < 1e-14);
        assert!(rel(q(I, -1.0, 2.0), q(I, 1.0, 2.0)) < 1e-14);
        assert!(quantity(Y, &EvalContext::new(-1.5, 2.0).unwrap()).is_err());
    }

    #[test]
    fn application_examples() {
        let ns = q(Ns, 0.0, 1.0);
        let nc = q(Nc, 0.0, 1.0);
        assert!((ns - 0.111_60).abs() < 1e-4 && (nc - 0.25 / (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let v = q(VEff, 5.0, 1.0);
        assert!(v > 0.0 && v < 0.25);
    }

    #[test]
    fn domain_of_u_and_q() {
        let ctx = EvalContext::new(0.0, 0.3).unwrap();
        assert!(matches!(quantity(U, &ctx), Err(BesselError::Domain { .. })));
        assert!(matches!(quantity(Q, &ctx), Err(BesselError::Domain { .. })));
    }
}
