//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the lattice fields are built on (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossless for `f64`; rounds for `f32`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let two_pi = T::TAU();
    let pi = T::PI();
    let mut r = theta - two_pi * ((theta + pi) / two_pi).floor();
    // r is now in [-π, π); move the lower endpoint up
    if r <= -pi {
        r = r + two_pi;
    }
    r
}

/// Sequential compensated (Kahan–Babuška) sum.
///
/// Evaluation order is the iteration order, so results are reproducible bit-for-bit.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}
