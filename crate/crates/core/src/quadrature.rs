//! Double-exponential quadrature on finite and semi-infinite domains.
//!
//! Three rules share one trapezoidal engine in a transformed variable `t`:
//!
//! * tanh-sinh, `x = c + w tanh(π/2 sinh t)`, for finite intervals;
//! * exp-sinh, `x = exp(π/2 sinh t)`, for `[0, ∞)`; it tolerates integrable
//!   singularities at the origin and both exponential and algebraic tails;
//! * the Ooura–Mori rule for `∫₀^∞ f(x) sin(ωx) dx` and its cosine twin, whose
//!   nodes slide onto the zeros of the oscillating factor so that large `ω`
//!   costs no more than small `ω`.
//!
//! Step sizes are halved until two successive estimates agree to the
//! requested tolerance, or until their difference reaches the round-off floor
//! set by the magnitude of the summed terms.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and refinement depth for every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinement: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_refinement: 12,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_refinement: u32) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must satisfy rel_tol > 0 and abs_tol >= 0 (got {rel_tol}, {abs_tol})"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_refinement,
        })
    }

    /// Same spec without the absolute floor; used where the integral may be
    /// many orders of magnitude below one yet still needs relative accuracy.
    pub fn relative_only(self) -> Self {
        Self { abs_tol: 0.0, ..self }
    }

    fn accepts(&self, value: f64, error: f64, abs_sum: f64) -> bool {
        let floor = 64.0 * f64::EPSILON * abs_sum;
        error <= (self.rel_tol * value.abs()).max(self.abs_tol).max(floor)
    }
}

/// Outcome of one quadrature: best estimate, error estimate and whether the
/// requested tolerance was met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Quadrature {
    pub fn into_result(self, what: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                what,
                value: self.value,
                error: self.error,
            })
        }
    }
}

/// Integrate `f` over `[0, ∞)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Quadrature {
    let mut seq = DeSequence::new(&f, exp_sinh_node);
    drive(&mut seq, spec)
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut seq = DeSequence::new(&f, move |t| tanh_sinh_node(lo, hi, t));
    let mut q = drive(&mut seq, spec);
    q.value *= sign;
    q
}

/// Oscillating factor of a Fourier-type integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oscillation {
    Sine,
    Cosine,
}

/// Integrate `f(x)·sin(ωx)` or `f(x)·cos(ωx)` over `[0, ∞)` with the
/// Ooura–Mori rule. `omega` must be positive.
pub fn integrate_fourier<F: Fn(f64) -> f64>(f: F, omega: f64, kind: Oscillation, spec: &QuadratureSpec) -> Quadrature {
    let mut evaluations = 0;
    let mut previous: Option<Estimate> = None;
    let mut last = Estimate::default();
    for level in 0..=spec.max_refinement {
        let est = ooura_estimate(&f, omega, kind, level);
        evaluations += est.evaluations;
        if let Some(prev) = previous {
            let error = (est.value - prev.value).abs();
            if est.finite && spec.accepts(est.value, error, est.abs_sum) {
                return Quadrature {
                    value: est.value,
                    error,
                    evaluations,
                    converged: true,
                };
            }
        }
        last = est;
        previous = Some(est);
    }
    Quadrature {
        value: last.value,
        error: previous.map_or(f64::INFINITY, |p| (p.value - last.value).abs()),
        evaluations,
        converged: false,
    }
}

// Trapezoidal engine -------------------------------------------------------

const COARSE_STEP: f64 = 0.5;
const T_LIMIT: f64 = 6.5;
const TAIL_RATIO: f64 = 1e-20;
const MIN_LEVELS: u32 = 2;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Estimate {
    pub value: f64,
    pub abs_sum: f64,
    pub evaluations: usize,
    pub finite: bool,
}

fn exp_sinh_node(t: f64) -> Option<(f64, f64)> {
    let u = FRAC_PI_2 * t.sinh();
    let x = u.exp();
    let w = FRAC_PI_2 * t.cosh() * x;
    (x > 0.0 && x.is_finite() && w.is_finite()).then_some((x, w))
}

pub(crate) fn tanh_sinh_node(lo: f64, hi: f64, t: f64) -> Option<(f64, f64)> {
    let half = 0.5 * (hi - lo);
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    // distance from the nearer endpoint, computed without cancellation
    let d = half * 2.0 * e / (1.0 + e);
    if d <= 0.0 {
        return None;
    }
    let x = if t < 0.0 { lo + d } else { hi - d };
    if x <= lo || x >= hi {
        return None;
    }
    let w = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    Some((x, w))
}

/// Successive trapezoidal estimates for a double-exponential map, reusing
/// every node of the coarser levels.
pub(crate) struct DeSequence<'a, F, N> {
    f: &'a F,
    node: N,
    t_lo: f64,
    t_hi: f64,
    sum: f64,
    abs_sum: f64,
    level: u32,
    evaluations: usize,
    finite: bool,
}

impl<'a, F, N> DeSequence<'a, F, N>
where
    F: Fn(f64) -> f64,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    pub(crate) fn new(f: &'a F, node: N) -> Self {
        Self {
            f,
            node,
            t_lo: 0.0,
            t_hi: 0.0,
            sum: 0.0,
            abs_sum: 0.0,
            level: 0,
            evaluations: 0,
            finite: true,
        }
    }

    fn term(&mut self, t: f64) -> Option<f64> {
        let (x, w) = (self.node)(t)?;
        self.evaluations += 1;
        Some(w * (self.f)(x))
    }

    /// Coarse level: walk outwards from `t = 0` until the terms die off,
    /// fixing the window used by every finer level.
    fn first(&mut self) -> Estimate {
        let centre = self.term(0.0).unwrap_or(0.0);
        let mut max_term = centre.abs();
        self.sum = centre;
        self.abs_sum = centre.abs();
        if !centre.is_finite() {
            self.finite = false;
        }
        for direction in [1.0, -1.0] {
            let mut small = 0;
            let mut edge = 0.0;
            let mut j = 1;
            loop {
                let t = direction * j as f64 * COARSE_STEP;
                if t.abs() > T_LIMIT {
                    break;
                }
                let Some(term) = self.term(t) else { break };
                if !term.is_finite() {
                    if small == 0 {
                        self.finite = false;
                    }
                    break;
                }
                self.sum += term;
                self.abs_sum += term.abs();
                max_term = max_term.max(term.abs());
                edge = t;
                if term.abs() <= TAIL_RATIO * max_term {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                j += 1;
            }
            if direction > 0.0 {
                self.t_hi = edge;
            } else {
                self.t_lo = edge;
            }
        }
        self.estimate(COARSE_STEP)
    }

    fn estimate(&self, h: f64) -> Estimate {
        Estimate {
            value: h * self.sum,
            abs_sum: h * self.abs_sum,
            evaluations: self.evaluations,
            finite: self.finite,
        }
    }

    /// Next estimate: the coarse level first, then halve the step each call.
    pub(crate) fn next_estimate(&mut self) -> Estimate {
        if self.level == 0 {
            self.level = 1;
            return self.first();
        }
        let h = COARSE_STEP / f64::powi(2.0, self.level as i32);
        let mut j = (self.t_lo / h).ceil() as i64;
        if j % 2 == 0 {
            j += 1;
        }
        while (j as f64) * h <= self.t_hi {
            let t = j as f64 * h;
            if let Some(term) = self.term(t) {
                if term.is_finite() {
                    self.sum += term;
                    self.abs_sum += term.abs();
                } else {
                    self.finite = false;
                }
            }
            j += 2;
        }
        self.level += 1;
        self.estimate(h)
    }
}

fn drive<F, N>(seq: &mut DeSequence<'_, F, N>, spec: &QuadratureSpec) -> Quadrature
where
    F: Fn(f64) -> f64,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    let mut prev = seq.next_estimate();
    let mut error = f64::INFINITY;
    for level in 1..=spec.max_refinement {
        let est = seq.next_estimate();
        error = (est.value - prev.value).abs();
        prev = est;
        if level >= MIN_LEVELS && est.finite && spec.accepts(est.value, error, est.abs_sum) {
            return Quadrature {
                value: est.value,
                error,
                evaluations: est.evaluations,
                converged: true,
            };
        }
    }
    Quadrature {
        value: prev.value,
        error,
        evaluations: prev.evaluations,
        converged: false,
    }
}

// Ooura–Mori rule ------------------------------------------------------------

const OOURA_BETA: f64 = 0.25;
const OOURA_COARSE_STEP: f64 = 0.25;
const OOURA_T_LIMIT: f64 = 7.0;

/// The sliding map `φ(t) = t / (1 − exp(−u(t)))` with
/// `u(t) = 2t + α(1 − e^{−t}) + β(e^t − 1)`. Returns `(φ, φ', φ − t)`.
fn ooura_map(t: f64, alpha: f64) -> Option<(f64, f64, f64)> {
    let beta = OOURA_BETA;
    if t.abs() < 1e-8 {
        let c1 = 2.0 + alpha + beta;
        let c2 = beta - alpha;
        let phi0 = 1.0 / c1;
        let dphi0 = (c1 * c1 - c2) / (2.0 * c1 * c1);
        let phi = phi0 + dphi0 * t;
        return Some((phi, dphi0, phi - t));
    }
    let u = 2.0 * t + alpha * (1.0 - (-t).exp()) + beta * t.exp_m1();
    if u < -700.0 {
        return None;
    }
    let du = 2.0 + alpha * (-t).exp() + beta * t.exp();
    let e = (-u).exp();
    let one_minus_e = -(-u).exp_m1();
    let phi = t / one_minus_e;
    let dphi = (one_minus_e - t * du * e) / (one_minus_e * one_minus_e);
    let excess = t * e / one_minus_e;
    (phi.is_finite() && dphi.is_finite()).then_some((phi, dphi, excess))
}

pub(crate) fn ooura_estimate<F: Fn(f64) -> f64>(f: &F, omega: f64, kind: Oscillation, level: u32) -> Estimate {
    let h = OOURA_COARSE_STEP / f64::powi(2.0, level as i32);
    let m = PI / h;
    let alpha = OOURA_BETA / (1.0 + m * (1.0 + m).ln() / (4.0 * PI)).sqrt();
    let offset = match kind {
        Oscillation::Sine => 0.0,
        Oscillation::Cosine => 0.5,
    };
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut max_term: f64 = 0.0;
    let mut evaluations = 0;
    let mut finite = true;

    let mut term_at = |n: i64| -> Option<f64> {
        let t = (n as f64 - offset) * h;
        let (phi, dphi, excess) = ooura_map(t, alpha)?;
        let x = m * phi / omega;
        // the oscillating factor at the node, (-1)^n sin(M(φ - t)) for t >= 0
        let wave = if t >= 0.0 {
            let s = (m * excess).sin();
            if n % 2 == 0 {
                s
            } else {
                -s
            }
        } else {
            match kind {
                Oscillation::Sine => (m * phi).sin(),
                Oscillation::Cosine => (m * phi).cos(),
            }
        };
        if wave == 0.0 || dphi == 0.0 {
            return Some(0.0);
        }
        evaluations += 1;
        Some(f(x) * wave * dphi)
    };

    for direction in [1i64, -1] {
        let mut small = 0;
        let mut n: i64 = if direction > 0 { 1 } else { 0 };
        loop {
            let t = (n as f64 - offset) * h;
            if t.abs() > OOURA_T_LIMIT {
                break;
            }
            let Some(term) = term_at(n) else { break };
            if !term.is_finite() {
                if small == 0 {
                    finite = false;
                }
                break;
            }
            sum += term;
            abs_sum += term.abs();
            max_term = max_term.max(term.abs());
            if term.abs() <= TAIL_RATIO * max_term && (direction < 0 || t > 1.0) {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            n += direction;
        }
    }
    let scale = PI / omega;
    Estimate {
        value: scale * sum,
        abs_sum: scale * abs_sum,
        evaluations,
        finite,
    }
}
