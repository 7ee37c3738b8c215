use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::geometry::LatticeGeometry;
use crate::quat::{Axis, Quaternion};
use crate::scalar::Real;

/// Fixed `SU(n)` link matrices, one per (site, axis), row-major, site-major / axis-minor.
///
/// A matrix acts on `Ψ ∈ ℍⁿ` from the right: `(Ψ·B)_k = Σ_l ψ_l B_lk`, the complex
/// entries multiplying each quaternion on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundField<T> {
    geometry: LatticeGeometry<T>,
    n: usize,
    entries: Vec<Complex<T>>,
    identity: bool,
}

impl<T: Real> BackgroundField<T> {
    /// Unitarity deviation above which matrices are projected back onto `SU(n)` on load.
    pub const TOLERANCE: f64 = 1e-12;

    pub fn identity(geometry: LatticeGeometry<T>, n: usize) -> Self {
        let id = identity_matrix::<T>(n);
        let entries = (0..geometry.link_count()).flat_map(|_| id.iter().copied()).collect();
        Self { geometry, n, entries, identity: true }
    }

    /// Independent Haar-like random `SU(n)` matrix on every link.
    pub fn random<R: Rng + ?Sized>(geometry: LatticeGeometry<T>, n: usize, rng: &mut R) -> Self {
        let mut entries = Vec::with_capacity(geometry.link_count() * n * n);
        for _ in 0..geometry.link_count() {
            let mut m: Vec<Complex<T>> = (0..n * n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(T::lit(re), T::lit(im))
                })
                .collect();
            project_special_unitary(&mut m, n);
            entries.extend(m);
        }
        Self { geometry, n, entries, identity: false }
    }

    /// Builds a field from raw entries. Links deviating from `SU(n)` by more than
    /// [`Self::TOLERANCE`] are re-unitarized; the result must then be within tolerance.
    pub fn from_entries(geometry: LatticeGeometry<T>, n: usize, mut entries: Vec<Complex<T>>) -> Result<Self> {
        let expected = geometry.link_count() * n * n;
        if entries.len() != expected {
            return Err(Error::GeometryMismatch(format!(
                "expected {expected} background entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite background entry".into()));
        }
        let tol = T::lit(Self::TOLERANCE);
        for m in entries.chunks_mut(n * n) {
            if su_deviation(m, n) > tol {
                project_special_unitary(m, n);
                let dev = su_deviation(m, n);
                if !(dev <= tol) {
                    return Err(Error::InvalidParameter(format!(
                        "background link cannot be projected to SU({n}): deviation {dev}"
                    )));
                }
            }
        }
        let id = identity_matrix::<T>(n);
        let identity = entries.chunks(n * n).all(|m| m == id.as_slice());
        Ok(Self { geometry, n, entries, identity })
    }

    pub fn geometry(&self) -> &LatticeGeometry<T> {
        &self.geometry
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn matrix(&self, site: usize, axis: Axis) -> &[Complex<T>] {
        let nn = self.n * self.n;
        let off = (3 * site + axis.index()) * nn;
        &self.entries[off..off + nn]
    }

    /// Largest deviation from `SU(n)` over all links.
    pub fn max_deviation(&self) -> T {
        self.entries
            .chunks(self.n * self.n)
            .fold(T::zero(), |m, c| m.max(su_deviation(c, self.n)))
    }
}

fn identity_matrix<T: Real>(n: usize) -> Vec<Complex<T>> {
    let mut m = vec![Complex::new(T::zero(), T::zero()); n * n];
    for k in 0..n {
        m[k * n + k] = Complex::new(T::one(), T::zero());
    }
    m
}

/// `out = psi · M` (right action, `M` row-major) or `psi · M†` when `adjoint`.
pub(crate) fn right_act<T: Real>(psi: &[Quaternion<T>], m: &[Complex<T>], adjoint: bool, out: &mut [Quaternion<T>]) {
    let n = psi.len();
    for k in 0..n {
        let mut acc = Quaternion::zero();
        for l in 0..n {
            let c = if adjoint { m[k * n + l].conj() } else { m[l * n + k] };
            acc += psi[l].mul_complex(c);
        }
        out[k] = acc;
    }
}

/// `max(‖M M† − 1‖_max, |det M − 1|)`.
pub(crate) fn su_deviation<T: Real>(m: &[Complex<T>], n: usize) -> T {
    let mut dev = T::zero();
    for r in 0..n {
        for c in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                s = s + m[r * n + k] * m[c * n + k].conj();
            }
            if r == c {
                s = s - Complex::new(T::one(), T::zero());
            }
            dev = dev.max(s.norm());
        }
    }
    let det = determinant(m, n);
    dev.max((det - Complex::new(T::one(), T::zero())).norm())
}

/// Modified Gram–Schmidt on the rows, then the determinant phase is divided out.
pub(crate) fn project_special_unitary<T: Real>(m: &mut [Complex<T>], n: usize) {
    for r in 0..n {
        for _pass in 0..2 {
            for p in 0..r {
                let mut dot = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    dot = dot + m[p * n + k].conj() * m[r * n + k];
                }
                for k in 0..n {
                    let v = m[p * n + k] * dot;
                    m[r * n + k] = m[r * n + k] - v;
                }
            }
        }
        let norm = (0..n).map(|k| m[r * n + k].norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        for k in 0..n {
            m[r * n + k] = m[r * n + k] / norm;
        }
    }
    let det = determinant(m, n);
    let phase = det.arg() / T::from_usize(n).unwrap();
    let fix = Complex::from_polar(T::one(), -phase);
    for v in m.iter_mut() {
        *v = *v * fix;
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant<T: Real>(m: &[Complex<T>], n: usize) -> Complex<T> {
    let mut a = m.to_vec();
    let mut det = Complex::new(T::one(), T::zero());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().partial_cmp(&a[y * n + col].norm()).unwrap())
            .unwrap();
        if a[pivot * n + col].norm() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det = det * d;
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            for k in col..n {
                let v = a[col * n + k] * f;
                a[r * n + k] = a[r * n + k] - v;
            }
        }
    }
    det
}
