//! Model position densities: the exponential tail fixed by the first
//! ionization potential, and Sommerfeld's Thomas–Fermi form.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::densities::{DensityProfile, RadialDensity, Space};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadratureSpec};

struct Asymptotic {
    prefactor: f64,
    rate: f64,
}

impl DensityProfile for Asymptotic {
    fn value(&self, r: f64) -> f64 {
        self.prefactor * (-self.rate * r).exp()
    }

    fn ln_value(&self, r: f64) -> f64 {
        self.prefactor.ln() - self.rate * r
    }
}

/// `ρ(r) = (2I₁)^{3/2}/π · exp(-2√(2I₁) r)`, normalized in closed form.
pub fn asymptotic_density(i1: f64, spec: QuadratureSpec) -> Result<RadialDensity> {
    if !(i1 > 0.0) || !i1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ionization potential must be positive, got {i1}"
        )));
    }
    let two_i = 2.0 * i1;
    let profile = Asymptotic {
        prefactor: two_i.powf(1.5) / PI,
        rate: 2.0 * two_i.sqrt(),
    };
    Ok(RadialDensity::exact(Space::Position, Arc::new(profile), spec))
}

/// Sommerfeld's parameters with `C_norm` fixed for one `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThomasFermiParams {
    pub z: u32,
    pub alpha_tf: f64,
    pub d: f64,
    pub c: f64,
    pub mu: f64,
    pub c_norm: f64,
}

impl ThomasFermiParams {
    /// Fixes `C_norm` with one quadrature of the unnormalized form.
    pub fn new(z: u32, spec: &QuadratureSpec) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidParameter("Thomas-Fermi density needs Z >= 1".into()));
        }
        let mut params = Self {
            z,
            alpha_tf: 12f64.powf(2.0 / 3.0),
            d: 0.772,
            c: 3.886,
            mu: 0.885341 / (z as f64).cbrt(),
            c_norm: 1.0,
        };
        let q = integrate_semi_infinite(|r| 4.0 * PI * r * r * params.unnormalized(r), spec);
        params.c_norm = 1.0 / q.into_result("Thomas-Fermi normalization")?;
        Ok(params)
    }

    fn prefactor(&self) -> f64 {
        let z = self.z as f64;
        2f64.powf(1.5) * z.powf(1.5) / (3.0 * PI * PI)
    }

    fn ratio(&self, r: f64) -> f64 {
        (r / (self.mu * self.alpha_tf)).powf(self.d)
    }

    fn unnormalized(&self, r: f64) -> f64 {
        self.prefactor() / r.powf(1.5) * (1.0 + self.ratio(r)).powf(-1.5 * self.c)
    }
}

struct ThomasFermi(ThomasFermiParams);

impl DensityProfile for ThomasFermi {
    fn value(&self, r: f64) -> f64 {
        self.0.c_norm * self.0.unnormalized(r)
    }

    fn ln_value(&self, r: f64) -> f64 {
        let p = &self.0;
        (p.c_norm * p.prefactor()).ln() - 1.5 * r.ln() - 1.5 * p.c * p.ratio(r).ln_1p()
    }
}

/// Unit-normalized Thomas–Fermi position density for atomic number `z`.
pub fn thomas_fermi_density(z: u32, spec: QuadratureSpec) -> Result<RadialDensity> {
    let params = ThomasFermiParams::new(z, &spec)?;
    Ok(thomas_fermi_from(params, spec))
}

pub fn thomas_fermi_from(params: ThomasFermiParams, spec: QuadratureSpec) -> RadialDensity {
    RadialDensity::exact(Space::Position, Arc::new(ThomasFermi(params)), spec)
}
