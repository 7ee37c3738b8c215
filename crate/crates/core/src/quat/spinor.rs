use std::ops::{Add, Neg, Sub};

use crate::quat::quaternion::Quaternion;
use crate::scalar::Real;

/// One of the three coordinate directions; doubles as the index of the
/// complex structure `I₁ = i·`, `I₂ = j·`, `I₃ = k·` paired with `∂/∂x_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            0 => Some(Axis::X1),
            1 => Some(Axis::X2),
            2 => Some(Axis::X3),
            _ => None,
        }
    }

    /// The unit imaginary `i`, `j` or `k` that realizes `I_axis`.
    pub fn unit<T: Real>(self) -> Quaternion<T> {
        match self {
            Axis::X1 => Quaternion::i(),
            Axis::X2 => Quaternion::j(),
            Axis::X3 => Quaternion::k(),
        }
    }
}

/// Value in `𝔲(1) ⊗ ℝ³ ≅ Im ℍ`, coefficients of `(i, j, k)`.
///
/// Curvature 2-forms are mapped to triples by `F ↦ (F₂₃, F₃₁, F₁₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImaginaryTriple<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

impl<T: Real> ImaginaryTriple<T> {
    pub const fn new(c1: T, c2: T, c3: T) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_quaternion(q: Quaternion<T>) -> Self {
        Self::new(q.x, q.y, q.z)
    }

    pub fn to_quaternion(self) -> Quaternion<T> {
        Quaternion::new(T::zero(), self.c1, self.c2, self.c3)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn component(self, axis: Axis) -> T {
        self.to_array()[axis.index()]
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.c1 * s, self.c2 * s, self.c3 * s)
    }

    pub fn dot(self, o: Self) -> T {
        self.c1 * o.c1 + self.c2 * o.c2 + self.c3 * o.c3
    }

    pub fn norm_sqr(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }
}

impl<T: Real> Add for ImaginaryTriple<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl<T: Real> Sub for ImaginaryTriple<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}

impl<T: Real> Neg for ImaginaryTriple<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2, -self.c3)
    }
}

/// An `n`-tuple of quaternions: the value of `Ψ` at one point.
///
/// `U(1)` acts by right multiplication with `e^{iθ}` on every component, and
/// `SU(n)` acts on the right through the complex structure "right
/// multiplication by `i`". Left multiplication by `i, j, k` therefore commutes
/// with both actions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpinorValue<T> {
    pub components: Vec<Quaternion<T>>,
}

impl<T: Real> SpinorValue<T> {
    pub fn new(components: Vec<Quaternion<T>>) -> Self {
        assert!(!components.is_empty(), "spinor value needs n >= 1 components");
        Self { components }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Quaternion::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.components)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.components.iter().map(|q| q.scale(s)).collect())
    }

    /// `Ψ ↦ Ψ · e^{iθ}`.
    pub fn u1_act(&self, theta: T) -> Self {
        let e = Quaternion::phase(theta);
        Self::new(self.components.iter().map(|&q| q * e).collect())
    }

    /// Real inner product `Σ_k Re(φ̄_k ψ_k)`.
    pub fn dot(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.dot(*b))
            .sum()
    }
}

impl<T: Real> Add for &SpinorValue<T> {
    type Output = SpinorValue<T>;
    fn add(self, o: Self) -> SpinorValue<T> {
        SpinorValue::new(self.components.iter().zip(&o.components).map(|(a, b)| *a + *b).collect())
    }
}

impl<T: Real> Sub for &SpinorValue<T> {
    type Output = SpinorValue<T>;
    fn sub(self, o: Self) -> SpinorValue<T> {
        SpinorValue::new(self.components.iter().zip(&o.components).map(|(a, b)| *a - *b).collect())
    }
}

pub(crate) fn norm_sqr<T: Real>(v: &[Quaternion<T>]) -> T {
    v.iter().map(|q| q.norm_sqr()).sum()
}

/// Left-multiplies every component by the unit imaginary of `axis`.
pub fn apply_complex_structure<T: Real>(axis: Axis, v: &SpinorValue<T>) -> SpinorValue<T> {
    let u = axis.unit::<T>();
    SpinorValue::new(v.components.iter().map(|&q| u * q).collect())
}

/// Hyperkähler moment map `μ(Ψ) = ½ Σ_k ψ_k i ψ̄_k` of the right `U(1)` action.
///
/// Under `ℍ ≅ ℂ²`, `a + j b ↦ (a, b)`, this is the trace-free Hermitian matrix
/// `H = ΨΨ* − ½|Ψ|²` read as `H₁₁ i + Im(H₁₂) j − Re(H₁₂) k`.
pub fn moment_map<T: Real>(psi: &SpinorValue<T>) -> ImaginaryTriple<T> {
    moment_map_slice(&psi.components)
}

pub(crate) fn moment_map_slice<T: Real>(psi: &[Quaternion<T>]) -> ImaginaryTriple<T> {
    let i = Quaternion::<T>::i();
    let mut acc = Quaternion::zero();
    for &q in psi {
        acc += q * i * q.conj();
    }
    ImaginaryTriple::from_quaternion(acc).scale(T::half())
}

/// Killing field of `ξ ∈ 𝔲(1) ≅ ℝ`: `ψ_k ↦ ψ_k · (iξ)`.
pub fn killing_field<T: Real>(xi: T, psi: &SpinorValue<T>) -> SpinorValue<T> {
    let v = Quaternion::i().scale(xi);
    SpinorValue::new(psi.components.iter().map(|&q| q * v).collect())
}
