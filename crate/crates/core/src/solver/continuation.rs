use crate::error::{Error, Result};
use crate::lattice::{BackgroundField, GaugeField, SpinorField};
use crate::scalar::Real;
use crate::solver::descent::{solve_with_observer, IterationRecord, SolveOptions, SolveStatus};
use crate::solver::residual::blowup_residual;

/// One rung of the `α`-ladder.
#[derive(Debug, Clone)]
pub struct ContinuationState<T> {
    pub alpha: T,
    /// `ε = tan α`.
    pub epsilon: T,
    pub a: GaugeField<T>,
    pub psi: SpinorField<T>,
    pub energy: T,
    pub residual_norm: T,
    pub min_amplitude: T,
    pub iterations: usize,
    pub status: SolveStatus,
    pub energy_trace: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct ContinuationOutcome<T> {
    /// Rungs in schedule order, including a failed rung if one ended the run.
    pub rungs: Vec<ContinuationState<T>>,
    /// Index of the rung whose solve failed; later rungs were not attempted.
    pub failed_rung: Option<usize>,
}

pub fn validate_schedule<T: Real>(schedule: &[T]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("alpha schedule is empty".into()));
    }
    for &alpha in schedule {
        if !(alpha >= T::zero() && alpha < T::FRAC_PI_2()) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, pi/2)")));
        }
    }
    if schedule.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("alpha schedule must be strictly decreasing".into()));
    }
    Ok(())
}

/// Solves at each `α` of a strictly decreasing schedule, warm-starting every
/// rung from the previous rung's solution.
pub fn continue_alpha<T: Real>(
    schedule: &[T],
    a0: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi0: &SpinorField<T>,
    options: &SolveOptions<T>,
) -> Result<ContinuationOutcome<T>> {
    continue_alpha_with_observer(schedule, a0, b, psi0, options, &mut |_, _| {})
}

/// As [`continue_alpha`]; `observer` receives the rung index with every iteration record.
pub fn continue_alpha_with_observer<T: Real>(
    schedule: &[T],
    a0: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi0: &SpinorField<T>,
    options: &SolveOptions<T>,
    observer: &mut dyn FnMut(usize, &IterationRecord<T>),
) -> Result<ContinuationOutcome<T>> {
    validate_schedule(schedule)?;
    let mut rungs = Vec::with_capacity(schedule.len());
    let mut a = a0.clone();
    let mut psi = psi0.clone();
    for (index, &alpha) in schedule.iter().enumerate() {
        let report = solve_with_observer(&a, b, &psi, alpha, options, &mut |r| observer(index, r))?;
        let residual = blowup_residual(&report.a, b, &report.psi, alpha)?;
        let failed = report.failed(options);
        let state = ContinuationState {
            alpha,
            epsilon: alpha.tan(),
            energy: report.final_energy(),
            residual_norm: residual.norm(),
            min_amplitude: report.psi.min_amplitude(),
            iterations: report.iterations,
            status: report.status,
            energy_trace: report.energy_trace,
            a: report.a,
            psi: report.psi,
        };
        a = state.a.clone();
        psi = state.psi.clone();
        rungs.push(state);
        if failed {
            return Ok(ContinuationOutcome { rungs, failed_rung: Some(index) });
        }
    }
    Ok(ContinuationOutcome { rungs, failed_rung: None })
}
