//! Central differences with one Richardson step.

use crate::context::{BesselError, EvalContext, Result};
use crate::dd::Dd;
use crate::quantity::{PointEval, QuantityKind};

/// `max(1e-5, 1e-5 x)`
pub fn step(x: f64) -> f64 {
    (1e-5 * x).max(1e-5)
}

fn value_at(kind: QuantityKind, ctx: &EvalContext, x: f64) -> Result<Dd> {
    Ok(PointEval::new(ctx.with_x(x)?).value_dd(kind)?.0)
}

/// First or second derivative in `x` of a quantity.
pub fn numeric_derivative(kind: QuantityKind, ctx: &EvalContext, order: u8) -> Result<f64> {
    let x = ctx.x();
    let h = step(x);
    if x <= 2.0 * h || ctx.with_x(x + h).is_err() {
        return Err(BesselError::Domain {
            what: format!("derivative of {kind}"),
            nu: ctx.nu(),
            x,
            reason: "needs x - 2h > 0 and x + h inside the supported range".into(),
        });
    }
    let f = |xx: f64| value_at(kind, ctx, xx);
    match order {
        1 => {
            let d = |h: f64| -> Result<Dd> {
                let (xp, xm) = (x + h, x - h);
                Ok((f(xp)? - f(xm)?) / Dd::sum(xp, -xm))
            };
            let (d1, d2) = (d(h)?, d(h / 2.0)?);
            Ok((d2.mul_f64(4.0) - d1).div_f64(3.0).to_f64())
        }
        2 => {
            let f0 = f(x)?;
            let d = |h: f64| -> Result<Dd> {
                let (xp, xm) = (x + h, x - h);
                let hp = Dd::sum(xp, -x);
                let hm = Dd::sum(x, -xm);
                // non-uniform three-point formula on the rounded abscissae
                let a = (f(xp)? - f0) / hp;
                let b = (f0 - f(xm)?) / hm;
                Ok((a - b).mul_f64(2.0) / (hp + hm))
            };
            let (d1, d2) = (d(h)?, d(h / 2.0)?);
            Ok((d2.mul_f64(4.0) - d1).div_f64(3.0).to_f64())
        }
        _ => Err(BesselError::Domain {
            what: format!("derivative of {kind}"),
            nu: ctx.nu(),
            x,
            reason: format!("order {order} not supported (use 1 or 2)"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QuantityKind::*;

    fn ctx(nu: f64, x: f64) -> EvalContext {
        EvalContext::new(nu, x).unwrap()
    }

    #[test]
    fn half_order_closed_forms() {
        let d = numeric_derivative(Y, &ctx(0.5, 1.0), 1).unwrap();
        let s = 1f64.sinh();
        let exact = 1.0 / 1f64.tanh() - 1.0 / (s * s);
        assert!((d - exact).abs() < 1e-12);
        assert!((d - 0.588_973_624_533).abs() < 1e-11);
        for &x in &[0.01, 1.0, 37.0, 200.0] {
            let d = numeric_derivative(Z, &ctx(0.5, x), 1).unwrap();
            assert!((d + 1.0).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn y_prime_is_x_phi() {
        let d = numeric_derivative(Y, &ctx(1.0, 1.0), 1).unwrap();
        assert!((d - 0.461_919_527_273_239_6).abs() < 1e-10);
    }

    #[test]
    fn second_derivative_of_z_half_vanishes() {
        let d = numeric_derivative(Z, &ctx(0.5, 2.0), 2).unwrap();
        assert!(d.abs() < 1e-9);
        let d = numeric_derivative(Y, &ctx(0.5, 1.0), 2).unwrap();
        // d^2/dx^2 (x coth x) = 2 (x coth x - 1) / sinh^2 x
        let s = 1f64.sinh();
        let exact = 2.0 * (1.0 / 1f64.tanh() - 1.0) / (s * s);
        assert!((d - exact).abs() < 1e-9);
    }

    #[test]
    fn boundary_rejected() {
        assert!(numeric_derivative(Y, &ctx(1.0, 1.5e-5), 1).is_err());
        assert!(numeric_derivative(Y, &ctx(1.0, 500.0), 1).is_err());
        assert!(numeric_derivative(Y, &ctx(1.0, 1.0), 3).is_err());
    }
}
