//! Diagnostics for degenerate configurations: the horizontal Fueter residual, the
//! thresholded zero set with its components, a Hölder exponent fit, `ℤ/2`
//! monodromy for `n = 2`, and the weighted homology class of the zero curves.

mod class;
pub mod fixtures;
mod holder;
mod horizontal;
mod monodromy;
mod zero_set;

pub use class::{zero_set_class, ComponentData, Orientation};
pub use holder::{distance_to_zero_set, holder_exponent, HolderOptions};
pub use horizontal::{horizontal_fueter_residual, horizontal_projection};
pub use monodromy::{level_zero_representative, quotient_invariant, z2_monodromy, MonodromyOptions};
pub use zero_set::{zero_set, HolderFit, MonodromyEntry, ZeroComponent, ZeroSetReport};

use crate::scalar::Real;

/// Default threshold `δ = 10⁻³ · max|Ψ|`.
pub fn default_threshold<T: Real>(amplitude: &[T]) -> T {
    amplitude.iter().copied().fold(T::zero(), T::max) * T::lit(1e-3)
}
