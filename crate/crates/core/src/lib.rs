//! Lattice laboratory for the Seiberg–Witten equations with `n` spinors and
//! target `(ℍⁿ, U(1))` on the flat periodic 3-torus.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix it to double precision, which is
//! what the solver, snapshots and command-line tools use.
//!
//! Conventions:
//! * `I₁, I₂, I₃` are left multiplication by `i, j, k` and pair with `∂₁, ∂₂, ∂₃`.
//! * `U(1)` acts on `Ψ ∈ ℍⁿ` by right multiplication with `e^{iθ}`.
//! * `μ(Ψ) = ½ Σ_k ψ_k i ψ̄_k`, and curvature enters as `F ↦ (F₂₃, F₃₁, F₁₂)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fueter;
pub mod lattice;
pub mod quat;
pub mod scalar;
pub mod snapshot;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Real;
pub use snapshot::Snapshot;

pub type Quaternion64 = quat::Quaternion<f64>;
pub type SpinorValue64 = quat::SpinorValue<f64>;
pub type ImaginaryTriple64 = quat::ImaginaryTriple<f64>;
pub type Geometry64 = lattice::LatticeGeometry<f64>;
pub type GaugeField64 = lattice::GaugeField<f64>;
pub type BackgroundField64 = lattice::BackgroundField<f64>;
pub type SpinorField64 = lattice::SpinorField<f64>;
pub type ZeroSetReport64 = fueter::ZeroSetReport<f64>;
