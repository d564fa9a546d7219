//! Tabulated quantity and bound columns for the three comparison plots.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::{Catalog, Side};
use crate::context::EvalContext;
use crate::quantity::{quantity, QuantityKind};
use crate::verify::tolerance;

pub const FIGURE_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
}

impl FigureId {
    pub const ALL: [FigureId; 3] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
        }
    }

    pub fn spec(self) -> FigureSpec {
        match self {
            FigureId::Fig1 => FigureSpec {
                id: self,
                quantity: QuantityKind::PhiI,
                nu: 1.0,
                x_max: 10.0,
                bounds: &["turan8_lower", "turan8_upper", "turan11_upper", "turan16_lower", "turan16_upper"],
            },
            FigureId::Fig2 => FigureSpec {
                id: self,
                quantity: QuantityKind::PhiK,
                nu: 2.0,
                x_max: 10.0,
                bounds: &["turan18_lower", "turan18_upper", "turan20_lower", "turan20_upper"],
            },
            FigureId::Fig3 => FigureSpec {
                id: self,
                quantity: QuantityKind::PhiP,
                nu: 1.0,
                x_max: 6.0,
                bounds: &["turan26_lower", "turan26_upper"],
            },
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = FigureError;
    fn from_str(s: &str) -> Result<Self, FigureError> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| FigureError::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FigureError {
    #[error("unknown figure '{0}' (expected fig1, fig2 or fig3)")]
    UnknownFigure(String),
    #[error("evaluation failed at x={x}: {message}")]
    Evaluation { x: f64, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub quantity: QuantityKind,
    pub nu: f64,
    pub x_max: f64,
    pub bounds: &'static [&'static str],
}

impl FigureSpec {
    /// `x_max i / 400` for `i = 1..=400`; zero is left out.
    pub fn x_values(&self) -> Vec<f64> {
        (1..=FIGURE_POINTS).map(|i| self.x_max * i as f64 / FIGURE_POINTS as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub x: f64,
    pub value: f64,
    pub rel_err: f64,
    /// One per entry of [`FigureSpec::bounds`]; `NaN` outside the domain.
    pub bounds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub spec: FigureSpec,
    pub rows: Vec<FigureRow>,
}

/// A bound column on the wrong side of the quantity column.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingViolation {
    pub bound_id: &'static str,
    pub x: f64,
    pub bound_value: f64,
    pub value: f64,
}

pub fn figure_data(catalog: &Catalog, id: FigureId) -> Result<FigureData, FigureError> {
    let spec = id.spec();
    let rows = spec
        .x_values()
        .into_par_iter()
        .map(|x| {
            let v = EvalContext::new(spec.nu, x)
                .and_then(|c| quantity(spec.quantity, &c))
                .map_err(|e| FigureError::Evaluation { x, message: e.to_string() })?;
            let bounds = spec
                .bounds
                .iter()
                .map(|b| {
                    catalog
                        .evaluate_bound(b, spec.nu, x)
                        .ok()
                        .and_then(|e| e.value)
                        .unwrap_or(f64::NAN)
                })
                .collect();
            Ok(FigureRow { x, value: v.value, rel_err: v.rel_error_bound, bounds })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FigureData { spec, rows })
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

impl FigureData {
    /// `x,<quantity>,<bound ids...>` with 17 significant digits and LF endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,");
        s.push_str(self.spec.quantity.tag());
        for b in self.spec.bounds {
            s.push(',');
            s.push_str(b);
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(s, "{},{}", num(r.x), num(r.value));
            for b in &r.bounds {
                let _ = write!(s, ",{}", num(*b));
            }
            s.push('\n');
        }
        s
    }

    pub fn ordering_violations(&self, catalog: &Catalog) -> Vec<OrderingViolation> {
        let mut out = Vec::new();
        for r in &self.rows {
            let tol = tolerance(r.value, r.rel_err);
            for (id, &b) in self.spec.bounds.iter().zip(&r.bounds) {
                if b.is_nan() {
                    continue;
                }
                let side = catalog.get(id).map(|s| s.side).unwrap_or(Side::Lower);
                let wrong = match side {
                    Side::Lower => b > r.value + tol,
                    Side::Upper => b < r.value - tol,
                };
                if wrong {
                    out.push(OrderingViolation { bound_id: id, x: r.x, bound_value: b, value: r.value });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_headers() {
        let s = FigureId::Fig3.spec();
        let xs = s.x_values();
        assert_eq!(xs.len(), 400);
        assert_eq!(xs[0], 6.0 / 400.0);
        assert_eq!(xs[399], 6.0);
        let d = figure_data(&Catalog::standard(), FigureId::Fig3).unwrap();
        let csv = d.to_csv();
        assert!(csv.starts_with("x,phiP,turan26_lower,turan26_upper\n"));
        assert_eq!(csv.lines().count(), 401);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn fig1_last_row_is_enclosed() {
        let cat = Catalog::standard();
        let d = figure_data(&cat, FigureId::Fig1).unwrap();
        let last = d.rows.last().unwrap();
        assert_eq!(last.x, 10.0);
        assert!(last.bounds[0] < last.value && last.value < last.bounds[1]);
        assert!(d.ordering_violations(&cat).is_empty());
    }

    #[test]
    fn names_parse() {
        for f in FigureId::ALL {
            assert_eq!(f.name().parse::<FigureId>().unwrap(), f);
        }
        assert!("fig4".parse::<FigureId>().is_err());
    }
}
