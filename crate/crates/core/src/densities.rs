//! Spherically averaged, unit-normalized electron densities in position and
//! momentum space, their moments, and local entropy curves.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::basis::{AtomBasis, Orbital};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_interval, integrate_semi_infinite, Quadrature, QuadratureSpec};
use crate::transform::{radial_to_momentum, MomentumRadial, RadialFunction};

/// Residual of `∫ρ dV − 1` above which the density is rescaled.
pub const RENORMALIZE_ABOVE: f64 = 1e-9;
/// Residual above which construction fails instead of rescaling.
pub const NORMALIZATION_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Position => "position",
            Space::Momentum => "momentum",
        })
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "position" | "r" => Ok(Space::Position),
            "momentum" | "k" => Ok(Space::Momentum),
            other => Err(Error::InvalidParameter(format!(
                "unknown space `{other}` (expected position or momentum)"
            ))),
        }
    }
}

/// Pointwise shape of a density before normalization.
pub trait DensityProfile: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `ln value(x)`; override when the value itself underflows.
    fn ln_value(&self, x: f64) -> f64 {
        self.value(x).ln()
    }

    /// Radius beyond which the profile is identically zero.
    fn support(&self) -> Option<f64> {
        None
    }

    /// A numerical failure met while evaluating, if any.
    fn failure(&self) -> Option<Error> {
        None
    }
}

// STO radial functions -------------------------------------------------------

/// `R_nl(r) = Σ C N r^(n-1) e^(-ζr)` with the normalization folded into the
/// coefficients.
#[derive(Debug, Clone)]
pub struct StoRadial {
    terms: Vec<(f64, i32, f64)>,
    zeta_min: f64,
}

pub fn sto_radial(orbital: &Orbital) -> Result<StoRadial> {
    let terms = orbital
        .terms
        .iter()
        .map(|&(c, p)| Ok((c * p.normalization()?, p.n as i32 - 1, p.zeta)))
        .collect::<Result<Vec<_>>>()?;
    let zeta_min = terms.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    Ok(StoRadial { terms, zeta_min })
}

impl StoRadial {
    /// The polynomial-exponential sum with `e^(-ζ_min r)` factored out.
    fn reduced(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, p, zeta)| c * r.powi(p) * (-(zeta - self.zeta_min) * r).exp())
            .sum()
    }

    /// `ln |R(r)|`, finite far past the point where `R` itself underflows.
    pub fn ln_abs(&self, r: f64) -> f64 {
        self.reduced(r).abs().ln() - self.zeta_min * r
    }
}

impl RadialFunction for StoRadial {
    fn eval(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, p, zeta)| c * r.powi(p) * (-zeta * r).exp())
            .sum()
    }
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

struct PositionProfile {
    orbitals: Vec<(f64, StoRadial)>,
}

impl DensityProfile for PositionProfile {
    fn value(&self, r: f64) -> f64 {
        self.orbitals
            .iter()
            .map(|(w, radial)| {
                let v = radial.eval(r);
                w * v * v
            })
            .sum()
    }

    fn ln_value(&self, r: f64) -> f64 {
        log_sum_exp(self.orbitals.iter().map(|(w, radial)| w.ln() + 2.0 * radial.ln_abs(r)))
    }
}

struct MomentumProfile {
    orbitals: Vec<(f64, MomentumRadial<StoRadial>)>,
    cache: Mutex<HashMap<u64, f64>>,
    failure: Mutex<Option<Quadrature>>,
}

impl DensityProfile for MomentumProfile {
    fn value(&self, k: f64) -> f64 {
        if let Some(&v) = self.cache.lock().unwrap().get(&k.to_bits()) {
            return v;
        }
        let mut total = 0.0;
        for (w, radial) in &self.orbitals {
            let q = radial.quadrature(k);
            if !q.converged {
                self.failure.lock().unwrap().get_or_insert(q);
            }
            total += w * q.value * q.value;
        }
        self.cache.lock().unwrap().insert(k.to_bits(), total);
        total
    }

    fn failure(&self) -> Option<Error> {
        self.failure.lock().unwrap().map(|q| Error::Quadrature {
            what: "momentum transform",
            value: q.value,
            error: q.error,
        })
    }
}

struct UniformBall {
    radius: f64,
}

impl DensityProfile for UniformBall {
    fn value(&self, r: f64) -> f64 {
        if r <= self.radius {
            3.0 / (4.0 * PI * self.radius.powi(3))
        } else {
            0.0
        }
    }

    fn support(&self) -> Option<f64> {
        Some(self.radius)
    }
}

// RadialDensity --------------------------------------------------------------

/// A unit-normalized spherically symmetric density `d(x)` with
/// `∫ d 4πx² dx = 1`.
#[derive(Clone)]
pub struct RadialDensity {
    space: Space,
    profile: Arc<dyn DensityProfile>,
    scale: f64,
    raw_norm: f64,
    spec: QuadratureSpec,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("space", &self.space)
            .field("scale", &self.scale)
            .field("raw_norm", &self.raw_norm)
            .finish_non_exhaustive()
    }
}

impl RadialDensity {
    /// Wrap a profile, checking its normalization by quadrature and
    /// rescaling small residuals away.
    pub fn normalized(space: Space, profile: Arc<dyn DensityProfile>, spec: QuadratureSpec) -> Result<Self> {
        let mut d = Self::exact(space, profile, spec);
        let norm = d.integrate(|_, v| v)?;
        let residual = (norm - 1.0).abs();
        if !(residual <= NORMALIZATION_LIMIT) {
            return Err(Error::Normalization {
                residual,
                tolerance: NORMALIZATION_LIMIT,
            });
        }
        d.raw_norm = norm;
        if residual > RENORMALIZE_ABOVE {
            d.scale = 1.0 / norm;
        }
        Ok(d)
    }

    /// Wrap a profile known to be normalized in closed form.
    pub fn exact(space: Space, profile: Arc<dyn DensityProfile>, spec: QuadratureSpec) -> Self {
        Self {
            space,
            profile,
            scale: 1.0,
            raw_norm: 1.0,
            spec,
        }
    }

    /// Uniform density `3/(4πR³)` inside a ball of radius `R`.
    pub fn uniform_ball(radius: f64, spec: QuadratureSpec) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self::exact(Space::Position, Arc::new(UniformBall { radius }), spec))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// `∫ profile dV` before any rescaling.
    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }

    pub fn support(&self) -> Option<f64> {
        self.profile.support()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.profile.value(x)
    }

    pub fn ln_eval(&self, x: f64) -> f64 {
        if self.support().is_some_and(|s| x > s) {
            return f64::NEG_INFINITY;
        }
        self.scale.ln() + self.profile.ln_value(x)
    }

    /// Surface any failure recorded while evaluating the profile.
    pub fn check(&self) -> Result<()> {
        match self.profile.failure() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// `∫ g(x, d(x)) 4πx² dx` over the support.
    pub fn integrate(&self, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
        let q = integrate_radial(|x| 4.0 * PI * x * x * g(x, self.eval(x)), &[self.support()], &self.spec);
        self.check()?;
        q.into_result("density functional")
    }
}

/// `∫₀^∞ f`, split at every finite support radius so that no rule crosses a
/// jump. `None` in `supports` means unbounded support.
pub(crate) fn integrate_radial<F: Fn(f64) -> f64>(f: F, supports: &[Option<f64>], spec: &QuadratureSpec) -> Quadrature {
    let mut ends: Vec<f64> = supports.iter().flatten().copied().collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let unbounded = supports.iter().any(Option::is_none) || supports.is_empty();
    let mut total = Quadrature {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    let mut add = |q: Quadrature| {
        total.value += q.value;
        total.error += q.error;
        total.evaluations += q.evaluations;
        total.converged &= q.converged;
    };
    let mut lo = 0.0;
    for &hi in &ends {
        add(integrate_interval(&f, lo, hi, spec));
        lo = hi;
    }
    if unbounded {
        if lo == 0.0 {
            add(integrate_semi_infinite(&f, spec));
        } else {
            add(integrate_semi_infinite(|y| f(lo + y), spec));
        }
    }
    total
}

fn orbital_weights(basis: &AtomBasis) -> Result<Vec<(f64, &Orbital)>> {
    let z = basis.electrons();
    if !(z > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "atom {} has no electrons",
            basis.symbol
        )));
    }
    Ok(basis
        .orbitals
        .iter()
        .filter(|o| o.occupancy > 0.0)
        .map(|o| (o.occupancy / (4.0 * PI * z), o))
        .collect())
}

/// `ρ(r) = (1/4πZ) Σ occ R_nl(r)²`.
pub fn position_density(basis: &AtomBasis, spec: QuadratureSpec) -> Result<RadialDensity> {
    let orbitals = orbital_weights(basis)?
        .into_iter()
        .map(|(w, o)| Ok((w, sto_radial(o)?)))
        .collect::<Result<Vec<_>>>()?;
    RadialDensity::normalized(Space::Position, Arc::new(PositionProfile { orbitals }), spec)
}

/// `n(k) = (1/4πZ) Σ occ R̃_nl(k)²` with each `R̃` from the Bessel transform.
pub fn momentum_density(basis: &AtomBasis, spec: QuadratureSpec) -> Result<RadialDensity> {
    let orbitals = orbital_weights(basis)?
        .into_iter()
        .map(|(w, o)| Ok((w, radial_to_momentum(sto_radial(o)?, o.l, spec))))
        .collect::<Result<Vec<_>>>()?;
    let profile = MomentumProfile {
        orbitals,
        cache: Mutex::new(HashMap::new()),
        failure: Mutex::new(None),
    };
    RadialDensity::normalized(Space::Momentum, Arc::new(profile), spec)
}

// Moments and local entropy -------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    /// `⟨r²⟩`
    pub mean_square_radius: f64,
    /// `⟨k²⟩`
    pub mean_square_momentum: f64,
    /// `T = ⟨k²⟩/2`, Hartree per electron.
    pub kinetic_energy: f64,
}

pub fn moments(rho: &RadialDensity, n: &RadialDensity) -> Result<MomentSet> {
    if rho.space() != Space::Position || n.space() != Space::Momentum {
        return Err(Error::SpaceMismatch);
    }
    let r2 = rho.integrate(|r, v| r * r * v)?;
    let k2 = n.integrate(|k, v| k * k * v)?;
    Ok(MomentSet {
        mean_square_radius: r2,
        mean_square_momentum: k2,
        kinetic_energy: 0.5 * k2,
    })
}

/// `-d ln d` with `0 ln 0 = 0`, evaluated through `ln d` so that it stays
/// accurate where `d` is tiny.
pub(crate) fn entropy_density(d: &RadialDensity, x: f64) -> f64 {
    let v = d.eval(x);
    if v <= 0.0 {
        return 0.0;
    }
    -v * d.ln_eval(x)
}

/// `S^LOC(x) = -4πx² d(x) ln d(x)` on the given grid.
pub fn local_entropy_curve(d: &RadialDensity, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(&x) = grid.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::InvalidParameter(format!("grid points must be >= 0, got {x}")));
    }
    let curve = grid
        .iter()
        .map(|&x| (x, 4.0 * PI * x * x * entropy_density(d, x)))
        .collect();
    d.check()?;
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{hydrogenic_fixture, SlaterPrimitive};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn sto_radial_closed_forms() {
        let one = |n, zeta, c| Orbital {
            n,
            l: 0,
            occupancy: 1.0,
            terms: vec![(c, SlaterPrimitive::new(n, zeta).unwrap())],
        };
        let r1 = sto_radial(&one(1, 1.0, 1.0)).unwrap();
        assert!((r1.eval(0.0) - 2.0).abs() < 1e-15);
        let r2 = sto_radial(&one(2, 1.0, 1.0)).unwrap();
        let n2 = 32f64.sqrt() / 24f64.sqrt();
        assert!((n2 - 1.1547005).abs() < 1e-7);
        assert!((r2.eval(1.0) - 0.42479).abs() < 1e-5);

        let mut split = one(1, 1.0, 0.5);
        split.terms.push((0.5, SlaterPrimitive::new(1, 1.0).unwrap()));
        let rs = sto_radial(&split).unwrap();
        for r in [0.0, 0.3, 2.0, 9.0] {
            assert!((rs.eval(r) - r1.eval(r)).abs() < 1e-15);
        }
        assert!(matches!(
            sto_radial(&one(13, 1.0, 1.0)),
            Err(Error::UnsupportedPrincipal(13))
        ));
    }

    #[test]
    fn ln_abs_survives_underflow() {
        let o = Orbital {
            n: 2,
            l: 0,
            occupancy: 1.0,
            terms: vec![
                (0.3, SlaterPrimitive::new(1, 5.0).unwrap()),
                (0.8, SlaterPrimitive::new(2, 1.5).unwrap()),
            ],
        };
        let r = sto_radial(&o).unwrap();
        assert!((r.ln_abs(2.0) - r.eval(2.0).abs().ln()).abs() < 1e-12);
        let n = SlaterPrimitive::new(2, 1.5).unwrap().normalization().unwrap();
        let far = 1000.0;
        let want = (0.8 * n * far).ln() - 1.5 * far;
        assert_eq!(r.eval(far), 0.0);
        assert!((r.ln_abs(far) - want).abs() < 1e-9);
    }

    #[test]
    fn hydrogen_position_density() {
        let d = position_density(&hydrogenic_fixture(1.0).unwrap(), spec()).unwrap();
        assert!((d.eval(1.0) - (-2.0f64).exp() / PI).abs() < 1e-15);
        assert!((d.eval(1.0) - 0.043074).abs() < 1e-5);
        assert!((d.raw_norm() - 1.0).abs() < 1e-12);
        let d2 = position_density(&hydrogenic_fixture(2.0).unwrap(), spec()).unwrap();
        assert!((d2.eval(0.0) - 8.0 / PI).abs() < 1e-13);
        for r in [0.1f64, 1.0, 5.0] {
            let want = 8.0 * (-4.0 * r).exp() / PI;
            assert!((d2.eval(r) - want).abs() <= 1e-12 * want);
            assert!((d2.ln_eval(r) - want.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn hydrogen_momentum_density() {
        let n = momentum_density(&hydrogenic_fixture(1.0).unwrap(), spec()).unwrap();
        for k in [0.0f64, 0.2, 1.0, 3.0, 25.0] {
            let want = 8.0 / (PI * PI * (1.0 + k * k).powi(4));
            assert!((n.eval(k) - want).abs() <= 1e-8 * want, "k={k}");
        }
        assert!((n.raw_norm() - 1.0).abs() < 1e-9);
        n.check().unwrap();
    }

    #[test]
    fn hydrogen_moments() {
        for (z, r2, t) in [(1.0, 3.0, 0.5), (2.0, 0.75, 2.0)] {
            let basis = hydrogenic_fixture(z).unwrap();
            let m = moments(
                &position_density(&basis, spec()).unwrap(),
                &momentum_density(&basis, spec()).unwrap(),
            )
            .unwrap();
            assert!((m.mean_square_radius - r2).abs() < 1e-8, "{m:?}");
            assert!((m.kinetic_energy - t).abs() < 1e-8, "{m:?}");
            assert!(m.mean_square_radius * m.mean_square_momentum >= 2.25);
        }
    }

    #[test]
    fn moments_reject_swapped_spaces() {
        let basis = hydrogenic_fixture(1.0).unwrap();
        let rho = position_density(&basis, spec()).unwrap();
        assert!(matches!(moments(&rho, &rho), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn normalization_failure_is_reported() {
        let mut basis = hydrogenic_fixture(1.0).unwrap();
        basis.orbitals[0].terms[0].0 = 1.1;
        let err = position_density(&basis, spec()).unwrap_err();
        assert!(matches!(err, Error::Normalization { .. }));
        assert!(err.is_numerical());

        // a residual inside the limit is rescaled away
        basis.orbitals[0].terms[0].0 = 1.0 + 1e-6;
        let d = position_density(&basis, spec()).unwrap();
        assert!((d.eval(0.5) - (-1.0f64).exp() / PI).abs() < 1e-13);
    }

    #[test]
    fn local_entropy_signs() {
        let h = position_density(&hydrogenic_fixture(1.0).unwrap(), spec()).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        assert!(local_entropy_curve(&h, &grid).unwrap().iter().all(|&(_, v)| v >= 0.0));

        // ρ(0) = 8/π > 1 for z = 2
        let dense = position_density(&hydrogenic_fixture(2.0).unwrap(), spec()).unwrap();
        let curve = local_entropy_curve(&dense, &[0.05, 0.1]).unwrap();
        assert!(curve.iter().all(|&(_, v)| v < 0.0));

        let n = momentum_density(&hydrogenic_fixture(2.0).unwrap(), spec()).unwrap();
        assert!(local_entropy_curve(&n, &grid).unwrap().iter().all(|&(_, v)| v >= 0.0));
        assert!(local_entropy_curve(&h, &[-1.0]).is_err());
    }

    #[test]
    fn momentum_density_below_one() {
        let n = momentum_density(&hydrogenic_fixture(3.0).unwrap(), spec()).unwrap();
        let mut k = 0.0;
        while k < 60.0 {
            let v = n.eval(k);
            assert!(v > 0.0 && v < 1.0, "k={k}: {v}");
            k += 0.37;
        }
    }

    #[test]
    fn uniform_ball_support() {
        let d = RadialDensity::uniform_ball(2.0, spec()).unwrap();
        assert_eq!(d.eval(2.5), 0.0);
        assert_eq!(d.ln_eval(2.5), f64::NEG_INFINITY);
        assert!((d.integrate(|_, v| v).unwrap() - 1.0).abs() < 1e-12);
        assert!(RadialDensity::uniform_ball(0.0, spec()).is_err());
    }

    #[test]
    fn space_parsing() {
        assert_eq!("Momentum".parse::<Space>().unwrap(), Space::Momentum);
        assert_eq!("r".parse::<Space>().unwrap(), Space::Position);
        assert!("phase".parse::<Space>().is_err());
    }
}
