use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::background::{right_act, BackgroundField};
use crate::lattice::gauge::{GaugeField, TripleField};
use crate::lattice::geometry::LatticeGeometry;
use crate::quat::{moment_map_slice, norm_sqr, Axis, Quaternion, SpinorValue};
use crate::scalar::{compensated_sum, Real};

/// A [`SpinorValue`] on every site, stored site-major (`data[site * n + k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField<T> {
    geometry: LatticeGeometry<T>,
    n: usize,
    data: Vec<Quaternion<T>>,
}

impl<T: Real> SpinorField<T> {
    pub fn zero(geometry: LatticeGeometry<T>, n: usize) -> Self {
        Self { geometry, n, data: vec![Quaternion::zero(); geometry.site_count() * n] }
    }

    pub fn from_data(geometry: LatticeGeometry<T>, n: usize, data: Vec<Quaternion<T>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("spinor count n must be positive".into()));
        }
        if data.len() != geometry.site_count() * n {
            return Err(Error::GeometryMismatch(format!(
                "expected {} quaternions, got {}",
                geometry.site_count() * n,
                data.len()
            )));
        }
        Ok(Self { geometry, n, data })
    }

    pub fn constant(geometry: LatticeGeometry<T>, value: &SpinorValue<T>) -> Self {
        let n = value.n();
        let data = (0..geometry.site_count()).flat_map(|_| value.components.iter().copied()).collect();
        Self { geometry, n, data }
    }

    /// Independent standard normal coefficients (not normalized).
    pub fn random_normal<R: Rng + ?Sized>(geometry: LatticeGeometry<T>, n: usize, rng: &mut R) -> Self {
        let data = (0..geometry.site_count() * n)
            .map(|_| {
                let mut c = [T::zero(); 4];
                for v in &mut c {
                    let x: f64 = rng.sample(StandardNormal);
                    *v = T::lit(x);
                }
                Quaternion::from_array(c)
            })
            .collect();
        Self { geometry, n, data }
    }

    pub fn geometry(&self) -> &LatticeGeometry<T> {
        &self.geometry
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Quaternion<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Quaternion<T>] {
        &mut self.data
    }

    pub fn site(&self, site: usize) -> &[Quaternion<T>] {
        &self.data[site * self.n..(site + 1) * self.n]
    }

    pub fn site_mut(&mut self, site: usize) -> &mut [Quaternion<T>] {
        let n = self.n;
        &mut self.data[site * n..(site + 1) * n]
    }

    pub fn value(&self, site: usize) -> SpinorValue<T> {
        SpinorValue::new(self.site(site).to_vec())
    }

    pub fn set_value(&mut self, site: usize, value: &SpinorValue<T>) {
        assert_eq!(value.n(), self.n);
        self.site_mut(site).copy_from_slice(&value.components);
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        self.geometry.ensure_same(&other.geometry)?;
        if self.n != other.n {
            return Err(Error::GeometryMismatch(format!("spinor counts {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn scale(&self, s: T) -> Self {
        Self { geometry: self.geometry, n: self.n, data: self.data.iter().map(|q| q.scale(s)).collect() }
    }

    /// `self + t·other`.
    pub fn add_scaled(&self, other: &Self, t: T) -> Self {
        assert_eq!(self.data.len(), other.data.len());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a + b.scale(t)).collect();
        Self { geometry: self.geometry, n: self.n, data }
    }

    /// Unweighted coefficient inner product `Σ_x Σ_k ⟨φ_k(x), ψ_k(x)⟩`.
    pub fn coefficient_dot(&self, other: &Self) -> T {
        compensated_sum(self.data.iter().zip(&other.data).map(|(a, b)| a.dot(*b)))
    }

    pub fn norm_sqr(&self) -> T {
        self.geometry.cell_volume() * compensated_sum(self.data.iter().map(|q| q.norm_sqr()))
    }

    /// `‖Ψ‖_{L²}`.
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Rescaled to unit `L²` norm. Panics on the zero field.
    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        assert!(norm > T::zero(), "cannot normalize the zero spinor field");
        self.scale(norm.recip())
    }

    /// Pointwise `|Ψ(x)|`.
    pub fn amplitude(&self) -> Vec<T> {
        (0..self.geometry.site_count()).map(|s| norm_sqr(self.site(s)).sqrt()).collect()
    }

    pub fn min_amplitude(&self) -> T {
        self.amplitude().into_iter().fold(T::infinity(), T::min)
    }

    pub fn max_amplitude(&self) -> T {
        self.amplitude().into_iter().fold(T::zero(), T::max)
    }

    /// Pointwise moment map `μ(Ψ(x))`.
    pub fn moment_map(&self) -> TripleField<T> {
        let values = (0..self.geometry.site_count()).map(|s| moment_map_slice(self.site(s))).collect();
        TripleField::new(self.geometry, values).expect("site count matches")
    }

    /// Maps every site value through `f`.
    pub fn map_sites(&self, mut f: impl FnMut(usize, &[Quaternion<T>], &mut [Quaternion<T>])) -> Self {
        let mut out = Self::zero(self.geometry, self.n);
        for s in 0..self.geometry.site_count() {
            let n = self.n;
            f(s, &self.data[s * n..(s + 1) * n], &mut out.data[s * n..(s + 1) * n]);
        }
        out
    }
}

/// `h³ Σ_x Re⟨Φ(x), Ψ(x)⟩`.
pub fn l2_inner<T: Real>(phi: &SpinorField<T>, psi: &SpinorField<T>) -> Result<T> {
    phi.ensure_compatible(psi)?;
    Ok(phi.geometry.cell_volume() * phi.coefficient_dot(psi))
}

pub(crate) fn check_inputs<T: Real>(psi: &SpinorField<T>, a: &GaugeField<T>, b: &BackgroundField<T>) -> Result<()> {
    psi.geometry().ensure_same(a.geometry())?;
    psi.geometry().ensure_same(b.geometry())?;
    if b.n() != psi.n() {
        return Err(Error::GeometryMismatch(format!(
            "background acts on n = {}, spinor has n = {}",
            b.n(),
            psi.n()
        )));
    }
    Ok(())
}

/// Parallel transport of `Ψ` to `site` from its neighbour along `±axis`:
///
/// * forward: `(Ψ(x+e_j)·B_j(x))·e^{iθ_j(x)}`
/// * backward: `(Ψ(x−e_j)·B_j(x−e_j)†)·e^{−iθ_j(x−e_j)}`
pub(crate) fn transport<T: Real>(
    psi: &SpinorField<T>,
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    site: usize,
    axis: Axis,
    forward: bool,
    scratch: &mut [Quaternion<T>],
    out: &mut [Quaternion<T>],
) {
    let g = psi.geometry();
    let (from, link_site, sign) = if forward {
        (g.forward(site, axis), site, T::one())
    } else {
        let back = g.backward(site, axis);
        (back, back, -T::one())
    };
    let phase = Quaternion::phase(sign * a.angle(link_site, axis));
    if b.is_identity() {
        for (o, q) in out.iter_mut().zip(psi.site(from)) {
            *o = *q * phase;
        }
    } else {
        right_act(psi.site(from), b.matrix(link_site, axis), !forward, scratch);
        for (o, q) in out.iter_mut().zip(scratch.iter()) {
            *o = *q * phase;
        }
    }
}

/// Centered covariant difference `(T₊Ψ − T₋Ψ)/(2h)` along `axis`.
pub fn covariant_derivative<T: Real>(
    psi: &SpinorField<T>,
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    axis: Axis,
) -> Result<SpinorField<T>> {
    check_inputs(psi, a, b)?;
    let n = psi.n();
    let inv_2h = (T::two() * psi.geometry().spacing()).recip();
    let mut scratch = vec![Quaternion::zero(); n];
    let mut plus = vec![Quaternion::zero(); n];
    let mut minus = vec![Quaternion::zero(); n];
    let mut out = SpinorField::zero(*psi.geometry(), n);
    for s in 0..psi.geometry().site_count() {
        transport(psi, a, b, s, axis, true, &mut scratch, &mut plus);
        transport(psi, a, b, s, axis, false, &mut scratch, &mut minus);
        for (k, o) in out.site_mut(s).iter_mut().enumerate() {
            *o = (plus[k] - minus[k]).scale(inv_2h);
        }
    }
    Ok(out)
}
