//! Residuals and least-squares energy of the blown-up equations, the projected
//! descent solver and the `α`-continuation driver.

mod continuation;
mod descent;
mod energy;
pub mod init;
mod residual;

pub use continuation::{
    continue_alpha, continue_alpha_with_observer, validate_schedule, ContinuationOutcome, ContinuationState,
};
pub use descent::{solve, solve_with_observer, IterationRecord, SolveOptions, SolveReport, SolveStatus};
pub use energy::{energy, energy_gradient, energy_gradient_unprojected, energy_terms, EnergyGradient, EnergyTerms};
pub use residual::{blowup_residual, dirac_residual, rescale, sw_residual, BlowupResidual};
