//! Information distances between two densities of the same space.

use std::cell::Cell;
use std::f64::consts::{LN_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::densities::{integrate_radial, RadialDensity};
use crate::error::{Error, Result};
use crate::quadrature::{Quadrature, QuadratureSpec};

fn same_space(a: &RadialDensity, b: &RadialDensity) -> Result<()> {
    if a.space() == b.space() {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// The tighter of the two quadrature specs, so that the result does not
/// depend on argument order.
fn joint_spec(a: &RadialDensity, b: &RadialDensity) -> QuadratureSpec {
    let (sa, sb) = (a.spec(), b.spec());
    QuadratureSpec {
        rel_tol: sa.rel_tol.min(sb.rel_tol),
        abs_tol: sa.abs_tol.min(sb.abs_tol),
        max_refinement: sa.max_refinement.max(sb.max_refinement),
    }
}

/// `K(a‖b) = ∫ a ln(a/b) 4πx² dx`.
pub fn kullback(a: &RadialDensity, b: &RadialDensity) -> Result<f64> {
    kullback_quadrature(a, b)?.into_result("Kullback-Leibler divergence")
}

/// [`kullback`] with its quadrature record, converged or not.
pub fn kullback_quadrature(a: &RadialDensity, b: &RadialDensity) -> Result<Quadrature> {
    same_space(a, b)?;
    let mismatch = Cell::new(None);
    let q = integrate_radial(
        |x| {
            let va = a.eval(x);
            if va <= 0.0 {
                return 0.0;
            }
            let ln_b = b.ln_eval(x);
            if ln_b == f64::NEG_INFINITY {
                mismatch.set(Some(x));
                return 0.0;
            }
            4.0 * PI * x * x * va * (a.ln_eval(x) - ln_b)
        },
        &[a.support()],
        &joint_spec(a, b),
    );
    a.check()?;
    b.check()?;
    if let Some(at) = mismatch.get() {
        return Err(Error::SupportMismatch { at });
    }
    Ok(q)
}

/// `SK = K(a‖b) + K(b‖a)`.
pub fn symmetrized_kullback(a: &RadialDensity, b: &RadialDensity) -> Result<f64> {
    Ok(kullback(a, b)? + kullback(b, a)?)
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `v ln(v/m)` with `m = (v + w)/2`, written through `ln w - ln v` so that
/// identical inputs give exactly zero.
fn mixture_term(v: f64, ln_v: f64, ln_w: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        v * (LN_2 - softplus(ln_w - ln_v))
    }
}

/// `J = H((a+b)/2) - H(a)/2 - H(b)/2`, integrated as the single pointwise
/// sum `½[a ln(a/m) + b ln(b/m)]` with `m = (a+b)/2`.
pub fn jensen_shannon(a: &RadialDensity, b: &RadialDensity) -> Result<f64> {
    jensen_shannon_quadrature(a, b)?.into_result("Jensen-Shannon divergence")
}

/// [`jensen_shannon`] with its quadrature record.
pub fn jensen_shannon_quadrature(a: &RadialDensity, b: &RadialDensity) -> Result<Quadrature> {
    same_space(a, b)?;
    let mut supports = [a.support(), b.support()];
    supports.sort_by(|x, y| x.unwrap_or(f64::INFINITY).total_cmp(&y.unwrap_or(f64::INFINITY)));
    let q = integrate_radial(
        |x| {
            let (la, lb) = (a.ln_eval(x), b.ln_eval(x));
            let pointwise = 0.5 * (mixture_term(a.eval(x), la, lb) + mixture_term(b.eval(x), lb, la));
            4.0 * PI * x * x * pointwise
        },
        &supports,
        &joint_spec(a, b),
    );
    a.check()?;
    b.check()?;
    Ok(q)
}

/// Smallest number of trials after which two densities are told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trials {
    Finite(u64),
    Unbounded,
}

impl fmt::Display for Trials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trials::Finite(n) => write!(f, "{n}"),
            Trials::Unbounded => f.write_str("inf"),
        }
    }
}

/// Smallest `L` with `√J > 1/√(2L)`: `floor(1/(2J)) + 1`.
pub fn min_trials(j: f64) -> Result<Trials> {
    if !(0.0..=LN_2 + 1e-12).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "Jensen-Shannon value {j} is outside [0, ln 2]"
        )));
    }
    if j == 0.0 {
        return Ok(Trials::Unbounded);
    }
    let bound = (1.0 / (2.0 * j)).floor();
    if bound >= u64::MAX as f64 {
        return Ok(Trials::Unbounded);
    }
    Ok(Trials::Finite(bound as u64 + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub k_ab: f64,
    pub k_ba: f64,
    pub sk: f64,
    pub j: f64,
    pub min_trials: Trials,
}

pub fn distance_report(a: &RadialDensity, b: &RadialDensity) -> Result<DistanceReport> {
    // tiny negative values are quadrature noise around zero
    let k_ab = kullback(a, b)?.max(0.0);
    let k_ba = kullback(b, a)?.max(0.0);
    let j = jensen_shannon(a, b)?.clamp(0.0, LN_2);
    Ok(DistanceReport {
        k_ab,
        k_ba,
        sk: k_ab + k_ba,
        j,
        min_trials: min_trials(j)?,
    })
}
