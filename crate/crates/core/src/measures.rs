//! Scalar information measures of one system: Shannon entropies and their
//! bounds, Onicescu information energy, Landsberg order and the SDL
//! complexity `Γ_{α,β} = Δ^α Ω^β`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::densities::{entropy_density, MomentSet, RadialDensity, Space};
use crate::error::{Error, Result};

/// `S = -∫ d ln d 4πx² dx` in nats.
pub fn shannon_entropy(d: &RadialDensity) -> Result<f64> {
    d.integrate(|x, _| entropy_density(d, x))
}

pub fn total_entropy(s_r: f64, s_k: f64) -> f64 {
    s_r + s_k
}

/// `3(1 + ln π)`, the lower bound on `S_r + S_k`.
pub fn entropy_floor() -> f64 {
    3.0 * (1.0 + PI.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBounds {
    pub s_r_min: f64,
    pub s_r_max: f64,
    pub s_k_min: f64,
    pub s_k_max: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl EntropyBounds {
    /// Describe the first of the three inequalities that fails, allowing
    /// `slack` on every side.
    pub fn violation(&self, s_r: f64, s_k: f64, slack: f64) -> Option<String> {
        let s = s_r + s_k;
        let checks = [
            ("S_r", self.s_r_min, s_r, self.s_r_max),
            ("S_k", self.s_k_min, s_k, self.s_k_max),
            ("S", self.s_min, s, self.s_max),
        ];
        checks
            .iter()
            .find(|(_, lo, v, hi)| !(*lo - slack <= *v && *v <= *hi + slack))
            .map(|(name, lo, v, hi)| format!("{name} = {v:.8} outside [{lo:.8}, {hi:.8}]"))
    }

    pub fn contains(&self, s_r: f64, s_k: f64, slack: f64) -> bool {
        self.violation(s_r, s_k, slack).is_none()
    }
}

/// Limits on `S_r`, `S_k` and `S` from `⟨r²⟩` and the kinetic energy.
pub fn entropy_bounds(m: &MomentSet) -> Result<EntropyBounds> {
    let r2 = m.mean_square_radius;
    let t = m.kinetic_energy;
    if !(r2 > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "moments must be positive (<r^2> = {r2}, T = {t})"
        )));
    }
    let half = 1.5 * (1.0 + PI.ln());
    let radial = 1.5 * (2.0 / 3.0 * r2).ln();
    let kinetic = 1.5 * (4.0 / 3.0 * t).ln();
    Ok(EntropyBounds {
        s_r_min: half - kinetic,
        s_r_max: half + radial,
        s_k_min: half - radial,
        s_k_max: half + kinetic,
        s_min: entropy_floor(),
        s_max: entropy_floor() + 1.5 * (8.0 / 9.0 * r2 * t).ln(),
    })
}

// Onicescu -------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnicescuSet {
    pub e_r: f64,
    pub e_k: f64,
    /// `O = 1/(E_r E_k)`
    pub o: f64,
}

/// `E = ∫ d² 4πx² dx` in each space and the content `O = 1/(E_r E_k)`.
pub fn onicescu(rho: &RadialDensity, n: &RadialDensity) -> Result<OnicescuSet> {
    if rho.space() != Space::Position || n.space() != Space::Momentum {
        return Err(Error::SpaceMismatch);
    }
    let e_r = information_energy(rho)?;
    let e_k = information_energy(n)?;
    Ok(OnicescuSet {
        e_r,
        e_k,
        o: 1.0 / (e_r * e_k),
    })
}

pub fn information_energy(d: &RadialDensity) -> Result<f64> {
    d.integrate(|_, v| v * v)
}

/// `E = Σ p_i²` of a discrete distribution; lies in `[1/k, 1]`.
pub fn discrete_information_energy(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidParameter(
            "probabilities must be non-negative and non-empty".into(),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
    }
    Ok(p.iter().map(|v| v * v).sum())
}

/// `∫ g² dx = 1/(2σ√π)` for the one-dimensional normal density.
pub fn gaussian_information_energy(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    Ok(1.0 / (2.0 * sigma * PI.sqrt()))
}

// Order and complexity -------------------------------------------------------

/// Landsberg order `Ω = 1 - S/S_max` and disorder `Δ = S/S_max`.
pub fn order_parameter(s: f64, s_max: f64) -> Result<(f64, f64)> {
    if !(s_max > 0.0) {
        return Err(Error::InvalidParameter(format!("S_max must be positive, got {s_max}")));
    }
    let delta = s / s_max;
    Ok((1.0 - delta, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityPoint {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub omega: f64,
    pub gamma: f64,
}

fn pow0(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else {
        base.powf(exponent)
    }
}

fn check_strength(alpha: f64, beta: f64, strict: bool) -> Result<()> {
    let ok = |v: f64| v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
    if ok(alpha) && ok(beta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "complexity strengths must be {} (got alpha={alpha}, beta={beta})",
            if strict { "positive" } else { "non-negative" }
        )))
    }
}

/// `Γ_{α,β} = Δ^α (1-Δ)^β` with `0⁰ = 1`.
pub fn complexity(delta: f64, alpha: f64, beta: f64) -> Result<ComplexityPoint> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "disorder must lie in [0, 1], got {delta}"
        )));
    }
    check_strength(alpha, beta, false)?;
    let omega = 1.0 - delta;
    Ok(ComplexityPoint {
        alpha,
        beta,
        delta,
        omega,
        gamma: pow0(delta, alpha) * pow0(omega, beta),
    })
}

/// Largest `Γ_{α,β}` over `Δ`, and the `Δ` where it occurs.
pub fn complexity_max(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_strength(alpha, beta, true)?;
    let sum = alpha + beta;
    let gamma = (alpha * alpha.ln() + beta * beta.ln() - sum * sum.ln()).exp();
    Ok((gamma, alpha / sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::hydrogenic_fixture;
    use crate::densities::{momentum_density, position_density};
    use crate::quadrature::QuadratureSpec;

    #[test]
    fn uniform_ball_entropy() {
        for r in [0.5, 1.0, 3.0] {
            let d = RadialDensity::uniform_ball(r, QuadratureSpec::default()).unwrap();
            let want = (4.0 * PI * r.powi(3) / 3.0).ln();
            assert!((shannon_entropy(&d).unwrap() - want).abs() <= 1e-9 * want.abs());
        }
        let unit = RadialDensity::uniform_ball(1.0, QuadratureSpec::default()).unwrap();
        assert!((shannon_entropy(&unit).unwrap() - 1.43241).abs() < 1e-5);
    }

    #[test]
    fn hydrogen_entropies_scale_with_z() {
        let spec = QuadratureSpec::default();
        let s1 = shannon_entropy(&position_density(&hydrogenic_fixture(1.0).unwrap(), spec).unwrap()).unwrap();
        let k1 = shannon_entropy(&momentum_density(&hydrogenic_fixture(1.0).unwrap(), spec).unwrap()).unwrap();
        for z in [0.5f64, 2.0] {
            let b = hydrogenic_fixture(z).unwrap();
            let sr = shannon_entropy(&position_density(&b, spec).unwrap()).unwrap();
            let sk = shannon_entropy(&momentum_density(&b, spec).unwrap()).unwrap();
            assert!((sr - (s1 - 3.0 * z.ln())).abs() < 1e-8, "z={z}");
            assert!((sk - (k1 + 3.0 * z.ln())).abs() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn bounds_for_hydrogen_moments() {
        let b = entropy_bounds(&MomentSet {
            mean_square_radius: 3.0,
            mean_square_momentum: 1.0,
            kinetic_energy: 0.5,
        })
        .unwrap();
        assert!((b.s_min - 6.43419).abs() < 1e-5);
        assert!((b.s_max - (b.s_min + 1.5 * (4.0f64 / 3.0).ln())).abs() < 1e-14);
        assert!((b.s_max - 6.86571).abs() < 1e-5);
        assert!(b.s_r_min <= b.s_r_max && b.s_k_min <= b.s_k_max);
        let sr = 3.0 + PI.ln();
        let sk = (32.0 * PI * PI).ln() - 10.0 / 3.0;
        assert!(b.contains(sr, sk, 0.0));
        assert!(b.violation(sr + 5.0, sk, 0.0).unwrap().starts_with("S_r"));
        assert!(entropy_bounds(&MomentSet {
            mean_square_radius: 0.0,
            mean_square_momentum: 1.0,
            kinetic_energy: 0.5
        })
        .is_err());
    }

    #[test]
    fn onicescu_for_hydrogen() {
        let spec = QuadratureSpec::default();
        let b = hydrogenic_fixture(1.0).unwrap();
        let rho = position_density(&b, spec).unwrap();
        let n = momentum_density(&b, spec).unwrap();
        let set = onicescu(&rho, &n).unwrap();
        assert!((set.e_r - 1.0 / (8.0 * PI)).abs() < 1e-12);
        // E_k = 256/π³ · B(3/2, 13/2)/2
        let e_k = 256.0 / PI.powi(3) * 0.5 * beta_half_integer(3, 13);
        assert!((set.e_k - e_k).abs() < 1e-9 * e_k);
        assert!((set.o - 120.267).abs() < 0.05);
        assert!(onicescu(&n, &rho).is_err());
    }

    // B(a/2, b/2) for odd a, b via Γ of half integers
    fn beta_half_integer(a: u32, b: u32) -> f64 {
        let gamma_half = |m: u32| -> f64 {
            // Γ(m/2) for odd m
            let mut g = PI.sqrt();
            let mut x = 0.5;
            while x < m as f64 / 2.0 - 0.25 {
                g *= x;
                x += 1.0;
            }
            g
        };
        let gamma_int = |m: u32| -> f64 { (1..m).map(|v| v as f64).product() };
        gamma_half(a) * gamma_half(b) / gamma_int((a + b) / 2)
    }

    #[test]
    fn discrete_energy_extremes() {
        assert_eq!(discrete_information_energy(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((discrete_information_energy(&[0.25; 4]).unwrap() - 0.25).abs() < 1e-15);
        assert!(discrete_information_energy(&[0.5, 0.6]).is_err());
        assert!(discrete_information_energy(&[]).is_err());
    }

    #[test]
    fn gaussian_energy() {
        assert!((gaussian_information_energy(1.0).unwrap() - 0.2820948).abs() < 1e-7);
        assert!((gaussian_information_energy(0.5).unwrap() - 0.5641896).abs() < 1e-7);
        assert!(gaussian_information_energy(0.0).is_err());
    }

    #[test]
    fn order_and_complexity() {
        assert_eq!(order_parameter(2.0, 2.0).unwrap(), (0.0, 1.0));
        assert_eq!(order_parameter(0.0, 2.0).unwrap(), (1.0, 0.0));
        assert!(order_parameter(1.0, 0.0).is_err());

        assert_eq!(complexity(0.5, 1.0, 1.0).unwrap().gamma, 0.25);
        assert_eq!(complexity(0.0, 0.0, 0.0).unwrap().gamma, 1.0);
        assert_eq!(complexity(1.0, 0.0, 3.0).unwrap().gamma, 0.0);
        assert!((complexity(2.0 / 3.0, 2.0, 1.0).unwrap().gamma - 4.0 / 27.0).abs() < 1e-15);
        assert!(complexity(1.2, 1.0, 1.0).is_err());
        assert!(complexity(0.5, -1.0, 1.0).is_err());

        assert_eq!(complexity_max(1.0, 1.0).unwrap(), (0.25, 0.5));
        let (g, d) = complexity_max(2.0, 2.0).unwrap();
        assert!((g - 0.0625).abs() < 1e-15 && d == 0.5);
        assert!(complexity_max(0.0, 1.0).is_err());
    }
}
