//! Browser bindings for the demo page in `www/`.
//!
//! Each export wraps a plain Rust function of the same name with an
//! `_inner` suffix so the numbers can be tested natively.

use atominfo::basis::hydrogenic_fixture;
use atominfo::densities::{position_density, RadialDensity};
use atominfo::distances::distance_report;
use atominfo::measures::{complexity, complexity_max};
use atominfo::models::{asymptotic_density, thomas_fermi_density};
use atominfo::quadrature::QuadratureSpec;
use atominfo::report::{compute_report, report_table};
use wasm_bindgen::prelude::*;

fn js(e: atominfo::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Radial profiles `4πr²ρ(r)` of a hydrogenic density and two model
/// densities on a shared grid, with the distances from the hydrogenic one.
#[wasm_bindgen]
pub struct Profiles {
    r: Vec<f64>,
    hydrogenic: Vec<f64>,
    asymptotic: Vec<f64>,
    thomas_fermi: Vec<f64>,
    /// symmetrized Kullback and Jensen-Shannon against each model
    #[wasm_bindgen(readonly)]
    pub sk_asymptotic: f64,
    #[wasm_bindgen(readonly)]
    pub j_asymptotic: f64,
    #[wasm_bindgen(readonly)]
    pub sk_thomas_fermi: f64,
    #[wasm_bindgen(readonly)]
    pub j_thomas_fermi: f64,
}

#[wasm_bindgen]
impl Profiles {
    #[wasm_bindgen(getter)]
    pub fn r(&self) -> Vec<f64> {
        self.r.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn hydrogenic(&self) -> Vec<f64> {
        self.hydrogenic.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn asymptotic(&self) -> Vec<f64> {
        self.asymptotic.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn thomas_fermi(&self) -> Vec<f64> {
        self.thomas_fermi.clone()
    }
}

fn radial(d: &RadialDensity, r: &[f64]) -> Vec<f64> {
    r.iter()
        .map(|&x| 4.0 * std::f64::consts::PI * x * x * d.eval(x))
        .collect()
}

pub fn profiles_inner(zeta: f64, i1: f64, tf_z: u32, r_max: f64, points: usize) -> atominfo::Result<Profiles> {
    if !(r_max > 0.0) || points < 2 {
        return Err(atominfo::Error::InvalidParameter(
            "need r_max > 0 and at least two points".into(),
        ));
    }
    let spec = QuadratureSpec::default();
    let h = position_density(&hydrogenic_fixture(zeta)?, spec)?;
    let a = asymptotic_density(i1, spec)?;
    let tf = thomas_fermi_density(tf_z, spec)?;
    let r: Vec<f64> = (0..points).map(|i| r_max * i as f64 / (points - 1) as f64).collect();
    let to_a = distance_report(&h, &a)?;
    let to_tf = distance_report(&h, &tf)?;
    Ok(Profiles {
        hydrogenic: radial(&h, &r),
        asymptotic: radial(&a, &r),
        thomas_fermi: radial(&tf, &r),
        r,
        sk_asymptotic: to_a.sk,
        j_asymptotic: to_a.j,
        sk_thomas_fermi: to_tf.sk,
        j_thomas_fermi: to_tf.j,
    })
}

#[wasm_bindgen]
pub fn profiles(zeta: f64, i1: f64, tf_z: u32, r_max: f64, points: usize) -> Result<Profiles, JsError> {
    profiles_inner(zeta, i1, tf_z, r_max, points).map_err(js)
}

/// `Γ_{α,β}(Δ)` sampled on `[0, 1]` together with its closed-form maximum.
#[wasm_bindgen]
pub struct ComplexityCurve {
    delta: Vec<f64>,
    gamma: Vec<f64>,
    #[wasm_bindgen(readonly)]
    pub gamma_max: f64,
    #[wasm_bindgen(readonly)]
    pub delta_star: f64,
}

#[wasm_bindgen]
impl ComplexityCurve {
    #[wasm_bindgen(getter)]
    pub fn delta(&self) -> Vec<f64> {
        self.delta.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn gamma(&self) -> Vec<f64> {
        self.gamma.clone()
    }
}

pub fn complexity_curve_inner(alpha: f64, beta: f64, points: usize) -> atominfo::Result<ComplexityCurve> {
    let (gamma_max, delta_star) = complexity_max(alpha, beta)?;
    let n = points.max(2);
    let delta: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let gamma = delta
        .iter()
        .map(|&d| complexity(d, alpha, beta).map(|p| p.gamma))
        .collect::<atominfo::Result<_>>()?;
    Ok(ComplexityCurve {
        delta,
        gamma,
        gamma_max,
        delta_star,
    })
}

#[wasm_bindgen]
pub fn complexity_curve(alpha: f64, beta: f64, points: usize) -> Result<ComplexityCurve, JsError> {
    complexity_curve_inner(alpha, beta, points).map_err(js)
}

/// Full report row for a one-electron atom with exponent `zeta`, as a JSON
/// object keyed by column name.
pub fn hydrogenic_report_inner(zeta: f64, alpha: f64, beta: f64) -> atominfo::Result<String> {
    let report = compute_report(&hydrogenic_fixture(zeta)?, &[(alpha, beta)], QuadratureSpec::default())?;
    Ok(report_table(&[report], None).to_json()[0].to_string())
}

#[wasm_bindgen]
pub fn hydrogenic_report(zeta: f64, alpha: f64, beta: f64) -> Result<String, JsError> {
    hydrogenic_report_inner(zeta, alpha, beta).map_err(js)
}
