//! Quaternionic algebra of the target `ℍⁿ` with its right `U(1)` action.

mod quaternion;
mod spinor;

pub use quaternion::{quat_mul, Quaternion};
pub use spinor::{
    apply_complex_structure, killing_field, moment_map, Axis, ImaginaryTriple, SpinorValue,
};

pub(crate) use spinor::{moment_map_slice, norm_sqr};
