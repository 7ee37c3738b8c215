use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::lattice::{BackgroundField, GaugeField, SpinorField};
use crate::scalar::Real;
use crate::solver::energy::{energy, energy_gradient};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub max_iter: usize,
    /// Converged once the energy drops below this value.
    pub tol: T,
    pub initial_step: T,
    /// Backtracking factor.
    pub shrink: T,
    /// Armijo sufficient-decrease constant.
    pub armijo: T,
    /// A trial step below this floor ends the run with [`SolveStatus::LineSearchFailure`].
    pub step_floor: T,
    /// Iterates with `min|Ψ|` below this value are counted as near the non-free locus.
    pub low_amplitude_threshold: T,
    /// Treat [`SolveStatus::MaxIterations`] as a failure.
    pub require_convergence: bool,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            tol: T::lit(1e-10),
            initial_step: T::one(),
            shrink: T::half(),
            armijo: T::lit(1e-4),
            step_floor: T::lit(1e-14),
            low_amplitude_threshold: T::lit(1e-3),
            require_convergence: false,
        }
    }
}

impl<T: Real> SolveOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.tol >= T::zero()) {
            return bad("tol must be >= 0");
        }
        if !(self.initial_step > T::zero()) || !self.initial_step.is_finite() {
            return bad("initial_step must be positive and finite");
        }
        if !(self.shrink > T::zero() && self.shrink < T::one()) {
            return bad("shrink must lie in (0, 1)");
        }
        if !(self.armijo > T::zero() && self.armijo < T::one()) {
            return bad("armijo must lie in (0, 1)");
        }
        if !(self.step_floor > T::zero()) {
            return bad("step_floor must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    LineSearchFailure,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max_iterations",
            SolveStatus::LineSearchFailure => "line_search_failure",
        }
    }
}

/// Diagnostics emitted once per accepted iterate (iteration 0 is the initial state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    pub energy: T,
    /// Accepted step length; zero for the initial state.
    pub step: T,
    pub min_amplitude: T,
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub status: SolveStatus,
    pub a: GaugeField<T>,
    pub psi: SpinorField<T>,
    pub alpha: T,
    /// Energy of every accepted iterate, starting with the initial one.
    pub energy_trace: Vec<T>,
    pub iterations: usize,
    /// Iterates (including the initial one) with `min|Ψ|` below the configured threshold.
    pub low_amplitude_iterates: usize,
    pub wall_time: Duration,
}

impl<T: Real> SolveReport<T> {
    pub fn final_energy(&self) -> T {
        *self.energy_trace.last().expect("trace holds the initial energy")
    }

    pub fn failed(&self, options: &SolveOptions<T>) -> bool {
        match self.status {
            SolveStatus::Converged => false,
            SolveStatus::MaxIterations => options.require_convergence,
            SolveStatus::LineSearchFailure => true,
        }
    }
}

/// Projected gradient descent for the blown-up system at fixed `α`.
pub fn solve<T: Real>(
    a0: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi0: &SpinorField<T>,
    alpha: T,
    options: &SolveOptions<T>,
) -> Result<SolveReport<T>> {
    solve_with_observer(a0, b, psi0, alpha, options, &mut |_| {})
}

/// As [`solve`], calling `observer` for the initial state and every accepted step.
///
/// `Ψ` is renormalized to `‖Ψ‖_{L²} = 1` before the first evaluation and after
/// every step; link angles stay wrapped. Steps use backtracking from
/// `initial_step` until `E(trial) ≤ E − armijo·t·‖∇E‖²`.
pub fn solve_with_observer<T: Real>(
    a0: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi0: &SpinorField<T>,
    alpha: T,
    options: &SolveOptions<T>,
    observer: &mut dyn FnMut(&IterationRecord<T>),
) -> Result<SolveReport<T>> {
    options.validate()?;
    let start = Instant::now();
    let norm0 = psi0.norm();
    if !(norm0 > T::zero()) || !norm0.is_finite() {
        return Err(Error::InvalidParameter("initial spinor must have positive finite norm".into()));
    }
    let mut a = a0.clone();
    let mut psi = psi0.scale(norm0.recip());
    let mut e = energy(&a, b, &psi, alpha)?;
    let mut trace = vec![e];
    let mut min_amp = psi.min_amplitude();
    let mut low = usize::from(min_amp < options.low_amplitude_threshold);
    observer(&IterationRecord { iteration: 0, energy: e, step: T::zero(), min_amplitude: min_amp });

    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;
    loop {
        if e < options.tol {
            status = SolveStatus::Converged;
            break;
        }
        if iterations >= options.max_iter {
            break;
        }
        let grad = energy_gradient(&a, b, &psi, alpha)?;
        let g2 = grad.norm_sqr();
        let mut t = options.initial_step;
        let accepted = loop {
            let trial_a = a.add_scaled(&grad.links, -t);
            let moved = psi.add_scaled(&grad.spinor, -t);
            let norm = moved.norm();
            if norm > T::zero() && norm.is_finite() {
                let trial_psi = moved.scale(norm.recip());
                let trial_e = energy(&trial_a, b, &trial_psi, alpha)?;
                if trial_e <= e - options.armijo * t * g2 {
                    break Some((trial_a, trial_psi, trial_e));
                }
            }
            t = t * options.shrink;
            if t < options.step_floor {
                break None;
            }
        };
        let Some((na, npsi, ne)) = accepted else {
            status = SolveStatus::LineSearchFailure;
            break;
        };
        a = na;
        psi = npsi;
        e = ne;
        iterations += 1;
        trace.push(e);
        min_amp = psi.min_amplitude();
        if min_amp < options.low_amplitude_threshold {
            low += 1;
        }
        observer(&IterationRecord { iteration: iterations, energy: e, step: t, min_amplitude: min_amp });
    }

    Ok(SolveReport {
        status,
        a,
        psi,
        alpha,
        energy_trace: trace,
        iterations,
        low_amplitude_iterates: low,
        wall_time: start.elapsed(),
    })
}
