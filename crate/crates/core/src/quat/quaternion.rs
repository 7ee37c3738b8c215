use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::scalar::Real;

/// Quaternion `w + x i + y j + z k` with the Hamilton product (`ij = k`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Embeds a complex number `re + im·i` into the `span{1, i}` subalgebra.
    pub fn from_complex(c: Complex<T>) -> Self {
        Self::new(c.re, c.im, T::zero(), T::zero())
    }

    /// `e^{iθ}`, the unit complex number viewed as a quaternion.
    pub fn phase(theta: T) -> Self {
        Self::new(theta.cos(), theta.sin(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product on `ℍ ≅ ℝ⁴`, equal to `Re(p̄ q)`.
    pub fn dot(self, other: Self) -> T {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(self.norm_sqr().recip())
    }

    /// Imaginary part as an `(i, j, k)` coefficient triple.
    pub fn imag(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    /// The complex part `w + x i`.
    pub fn complex_part(self) -> Complex<T> {
        Complex::new(self.w, self.x)
    }

    /// Right multiplication by a complex number embedded in `span{1, i}`.
    pub fn mul_complex(self, c: Complex<T>) -> Self {
        self * Self::from_complex(c)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Hamilton product `p q`.
pub fn quat_mul<T: Real>(p: Quaternion<T>, q: Quaternion<T>) -> Quaternion<T> {
    p * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = Quaternion<f64>;

    /// Left-multiplication matrix of `p` acting on `ℝ⁴`, written out from the
    /// multiplication table of the basis `1, i, j, k` (columns are `p·1, p·i, p·j, p·k`).
    fn left_matrix(p: Q) -> [[f64; 4]; 4] {
        let (a, b, c, d) = (p.w, p.x, p.y, p.z);
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ]
    }

    fn oracle_mul(p: Q, q: Q) -> Q {
        let m = left_matrix(p);
        let v = q.to_array();
        let mut out = [0.0; 4];
        for (r, row) in m.iter().enumerate() {
            out[r] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        Q::from_array(out)
    }

    fn close(p: Q, q: Q, tol: f64) -> bool {
        (p - q).norm() <= tol
    }

    #[test]
    fn defining_relations() {
        let (i, j, k) = (Q::i(), Q::j(), Q::k());
        assert_eq!(quat_mul(i, j), k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -Q::one());
        assert_eq!(i * j * k, -Q::one());
        let q = Q::new(0.3, -1.2, 2.0, 0.7);
        assert_eq!(Q::one() * q, q);
        assert_eq!(q * Q::one(), q);
    }

    #[test]
    fn bilinearity_example_against_matrix_oracle() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = Q::new(s, s, 0.0, 0.0);
        let expected = Q::new(0.0, 0.0, s, s);
        assert!(close(p * Q::j(), expected, 1e-15));
        assert!(close(oracle_mul(p, Q::j()), expected, 1e-15));
    }

    #[test]
    fn phase_is_unit_complex() {
        let e = Q::phase(0.4);
        assert!((e.norm() - 1.0).abs() < 1e-15);
        assert!(close(e * Q::phase(-0.4), Q::one(), 1e-15));
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(w, x, y, z)| Q::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn product_matches_matrix_oracle(p in arb_q(), q in arb_q()) {
            prop_assert!(close(p * q, oracle_mul(p, q), 1e-12));
        }

        #[test]
        fn norm_is_multiplicative(p in arb_q(), q in arb_q()) {
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn conjugation_reverses_products(p in arb_q(), q in arb_q()) {
            prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12));
        }
    }
}
