//! Seeded initial configurations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{GaugeField, LatticeGeometry, SpinorField};
use crate::quat::{Quaternion, SpinorValue};
use crate::scalar::Real;

/// Deterministic generator for a seed; ChaCha keeps streams identical across platforms.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Links uniform in `(−π, π]` scaled by `link_amplitude`, spinor coefficients
/// standard normal, then normalized to `‖Ψ‖_{L²} = 1`.
pub fn random_state<T: Real>(
    geometry: LatticeGeometry<T>,
    n: usize,
    link_amplitude: T,
    seed: u64,
) -> (GaugeField<T>, SpinorField<T>) {
    let mut rng = seeded_rng(seed);
    let a = GaugeField::random(geometry, link_amplitude, &mut rng);
    let psi = SpinorField::random_normal(geometry, n, &mut rng).normalized();
    (a, psi)
}

/// The pointwise value `(q₀, q₀j, q₀, q₀j, …)`, with a trailing zero for odd `n`; `μ` vanishes on it.
pub fn paired_value<T: Real>(q0: Quaternion<T>, n: usize) -> SpinorValue<T> {
    let mut comps: Vec<Quaternion<T>> = (0..n)
        .map(|k| if k % 2 == 0 { q0 } else { q0 * Quaternion::j() })
        .collect();
    if n % 2 == 1 && n > 1 {
        comps[n - 1] = Quaternion::zero();
    }
    SpinorValue::new(comps)
}

/// Exact solution for every `α`: `a = 0` and the constant unit-norm field built
/// from [`paired_value`] with `q₀ = 1`. For `n = 1` no nonzero constant has `μ = 0`,
/// so the field is `(1)` and only the Dirac equation holds.
pub fn constant_state<T: Real>(geometry: LatticeGeometry<T>, n: usize) -> (GaugeField<T>, SpinorField<T>) {
    let psi = SpinorField::constant(geometry, &paired_value(Quaternion::one(), n)).normalized();
    (GaugeField::zero(geometry), psi)
}
