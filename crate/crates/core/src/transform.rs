//! Radial position-to-momentum transform with a spherical Bessel kernel.
//!
//! `R̃(k) = sqrt(2/π) ∫₀^∞ r² R(r) j_l(kr) dr`, the unitary convention: a
//! position-normalized radial function maps to a momentum-normalized one.
//! The phase `i^(-l)` is dropped since only `|R̃|²` is used.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::bessel::{spherical_bessel_j, trig_coefficients};
use crate::error::Result;
use crate::quadrature::{
    integrate_interval, integrate_semi_infinite, ooura_estimate, tanh_sinh_node, DeSequence, Estimate, Oscillation,
    Quadrature, QuadratureSpec,
};

/// A real function of a radius or wavenumber `x >= 0`.
pub trait RadialFunction: Send + Sync {
    fn eval(&self, x: f64) -> f64;
}

impl<F> RadialFunction for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Phase `kr` at which the integrand switches from direct quadrature to the
/// oscillatory rule: eight half periods.
const SPLIT_PHASE_HALF_PERIODS: u32 = 8;

/// The momentum-space radial function `R̃_l(k)` of a position-space `R(r)`,
/// evaluated on demand. `R` must decay at least exponentially.
pub struct MomentumRadial<R> {
    radial: R,
    l: u32,
    spec: QuadratureSpec,
    extent: f64,
}

/// Build the momentum-space counterpart of `radial` for angular momentum `l`.
pub fn radial_to_momentum<R: RadialFunction>(radial: R, l: u32, spec: QuadratureSpec) -> MomentumRadial<R> {
    let extent = effective_extent(&radial);
    MomentumRadial {
        radial,
        l,
        spec: spec.relative_only(),
        extent,
    }
}

/// Radius beyond which `r³|R(r)|` stays below 1e-22 of its maximum, probed on
/// a geometric grid from 2^-10 to 2^60.
fn effective_extent<R: RadialFunction>(radial: &R) -> f64 {
    let grid = (-80..=480).map(|i| f64::powf(2.0, i as f64 / 8.0));
    let samples: Vec<(f64, f64)> = grid.map(|r| (r, (r * r * r * radial.eval(r)).abs())).collect();
    let peak = samples
        .iter()
        .map(|&(_, v)| v)
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let last = samples
        .iter()
        .rposition(|&(_, v)| v.is_finite() && v > 1e-22 * peak)
        .unwrap_or(0);
    samples.get(last + 1).map_or(samples[last].0, |&(r, _)| r)
}

impl<R: RadialFunction> MomentumRadial<R> {
    pub fn l(&self) -> u32 {
        self.l
    }

    /// Radius past which the position-space integrand is negligible.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// `R̃(k)` as a value or a quadrature failure.
    pub fn try_eval(&self, k: f64) -> Result<f64> {
        self.quadrature(k).into_result("momentum transform")
    }

    /// Full quadrature record for `R̃(k)`.
    pub fn quadrature(&self, k: f64) -> Quadrature {
        let prefactor = FRAC_2_PI.sqrt();
        let k = k.abs();
        let mut q = if k == 0.0 {
            if self.l == 0 {
                integrate_semi_infinite(|r| r * r * self.radial.eval(r), &self.spec)
            } else {
                Quadrature {
                    value: 0.0,
                    error: 0.0,
                    evaluations: 0,
                    converged: true,
                }
            }
        } else {
            let split_phase = SPLIT_PHASE_HALF_PERIODS.max(self.l + 2) as f64 * PI;
            if k * self.extent <= split_phase {
                let l = self.l;
                integrate_interval(
                    |r| r * r * self.radial.eval(r) * spherical_bessel_j(l, k * r),
                    0.0,
                    self.extent,
                    &self.spec,
                )
            } else {
                self.split_transform(k, split_phase)
            }
        };
        q.value *= prefactor;
        q.error *= prefactor;
        q
    }

    /// Direct quadrature on `[0, a]` with `ka` a multiple of π, then the
    /// Ooura–Mori rule on `[a, ∞)` where `j_l` is written as
    /// `s_l(kr) sin(kr) + c_l(kr) cos(kr)`. Because `sin(ka) = 0`, shifting
    /// `r = a + y` leaves `±sin(ky)` and `±cos(ky)`.
    fn split_transform(&self, k: f64, split_phase: f64) -> Quadrature {
        let l = self.l;
        let a = split_phase / k;
        let half_periods = (split_phase / PI).round() as i64;
        let sign = if half_periods % 2 == 0 { 1.0 } else { -1.0 };

        let near = |r: f64| r * r * self.radial.eval(r) * spherical_bessel_j(l, k * r);
        let tail_sin = |y: f64| {
            let r = a + y;
            r * r * self.radial.eval(r) * trig_coefficients(l, k * r).0
        };
        let tail_cos = |y: f64| {
            let r = a + y;
            r * r * self.radial.eval(r) * trig_coefficients(l, k * r).1
        };

        let mut head = DeSequence::new(&near, |t| tanh_sinh_node(0.0, a, t));
        let mut previous: Option<f64> = None;
        let mut evaluations = 0;
        let mut error = f64::INFINITY;
        let mut total = 0.0;
        for level in 0..=self.spec.max_refinement {
            let h: Estimate = head.next_estimate();
            let s = ooura_estimate(&tail_sin, k, Oscillation::Sine, level);
            let c = ooura_estimate(&tail_cos, k, Oscillation::Cosine, level);
            evaluations = h.evaluations + evaluations + s.evaluations + c.evaluations;
            total = h.value + sign * (s.value + c.value);
            let abs_sum = h.abs_sum + s.abs_sum + c.abs_sum;
            let finite = h.finite && s.finite && c.finite;
            if let Some(prev) = previous {
                error = (total - prev).abs();
                let floor = 64.0 * f64::EPSILON * abs_sum;
                if finite && level >= 2 && error <= (self.spec.rel_tol * total.abs()).max(floor) {
                    return Quadrature {
                        value: total,
                        error,
                        evaluations,
                        converged: true,
                    };
                }
            }
            previous = Some(total);
        }
        Quadrature {
            value: total,
            error,
            evaluations,
            converged: false,
        }
    }
}

impl<R: RadialFunction> RadialFunction for MomentumRadial<R> {
    /// Best estimate; use [`MomentumRadial::try_eval`] to see failures.
    fn eval(&self, k: f64) -> f64 {
        self.quadrature(k).value
    }
}
