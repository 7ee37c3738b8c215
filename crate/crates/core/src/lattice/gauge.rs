use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::geometry::LatticeGeometry;
use crate::lattice::spinor_field::SpinorField;
use crate::quat::{Axis, ImaginaryTriple, Quaternion};
use crate::scalar::{compensated_sum, wrap_angle, Real};

/// A coordinate 2-plane of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    P12,
    P23,
    P31,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::P12, Plane::P23, Plane::P31];

    /// The axis orthogonal to the plane; also the slot of the plane in an
    /// [`ImaginaryTriple`] under `F ↦ (F₂₃, F₃₁, F₁₂)`.
    pub fn normal(self) -> Axis {
        match self {
            Plane::P23 => Axis::X1,
            Plane::P31 => Axis::X2,
            Plane::P12 => Axis::X3,
        }
    }

    pub fn from_normal(axis: Axis) -> Self {
        match axis {
            Axis::X1 => Plane::P23,
            Axis::X2 => Plane::P31,
            Axis::X3 => Plane::P12,
        }
    }

    /// The oriented pair `(p, q)` spanning the plane, with `(normal, p, q)` cyclic.
    pub fn spanning_axes(self) -> (Axis, Axis) {
        let c = self.normal().index();
        (
            Axis::from_index((c + 1) % 3).unwrap(),
            Axis::from_index((c + 2) % 3).unwrap(),
        )
    }
}

/// Compact `U(1)` link angles `θ_j(x) ∈ (−π, π]`, stored site-major, axis-minor.
///
/// The parallel transport from `x + e_j` to `x` multiplies on the right by `e^{iθ_j(x)}`,
/// so `θ_j / h` approximates the connection component `a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField<T> {
    geometry: LatticeGeometry<T>,
    angles: Vec<T>,
}

impl<T: Real> GaugeField<T> {
    pub fn zero(geometry: LatticeGeometry<T>) -> Self {
        Self { geometry, angles: vec![T::zero(); geometry.link_count()] }
    }

    /// Wraps every angle into `(−π, π]`.
    pub fn from_angles(geometry: LatticeGeometry<T>, angles: Vec<T>) -> Result<Self> {
        if angles.len() != geometry.link_count() {
            return Err(Error::GeometryMismatch(format!(
                "expected {} link angles, got {}",
                geometry.link_count(),
                angles.len()
            )));
        }
        Ok(Self { geometry, angles: angles.into_iter().map(wrap_angle).collect() })
    }

    /// Uniform angles in `(−π, π]` multiplied by `amplitude`.
    pub fn random<R: Rng + ?Sized>(geometry: LatticeGeometry<T>, amplitude: T, rng: &mut R) -> Self {
        let pi = std::f64::consts::PI;
        let angles = (0..geometry.link_count())
            .map(|_| wrap_angle(amplitude * T::lit(rng.random_range(-pi..pi))))
            .collect();
        Self { geometry, angles }
    }

    /// `quanta` flux quanta spread evenly over every plaquette of `plane`:
    /// each plaquette of the plane carries `2π·quanta/N²`, all others zero.
    pub fn uniform_flux(geometry: LatticeGeometry<T>, plane: Plane, quanta: i64) -> Self {
        let n = geometry.sites_per_axis();
        let nf = T::from_usize(n).unwrap();
        let m = T::from_i64(quanta).unwrap();
        let (p, q) = plane.spanning_axes();
        let mut field = Self::zero(geometry);
        for site in 0..geometry.site_count() {
            let c = geometry.coords(site);
            let xp = T::from_usize(c[p.index()]).unwrap();
            let xq = T::from_usize(c[q.index()]).unwrap();
            field.set(site, q, T::TAU() * m * xp / (nf * nf));
            if c[p.index()] == n - 1 {
                field.set(site, p, -T::TAU() * m * xq / nf);
            }
        }
        field
    }

    pub fn geometry(&self) -> &LatticeGeometry<T> {
        &self.geometry
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn angle(&self, site: usize, axis: Axis) -> T {
        self.angles[3 * site + axis.index()]
    }

    pub fn set(&mut self, site: usize, axis: Axis, theta: T) {
        self.angles[3 * site + axis.index()] = wrap_angle(theta);
    }

    /// Adds `step·direction[link]` to every link angle, re-wrapping.
    pub fn add_scaled(&self, direction: &[T], step: T) -> Self {
        assert_eq!(direction.len(), self.angles.len());
        let angles = self
            .angles
            .iter()
            .zip(direction)
            .map(|(&t, &d)| wrap_angle(t + step * d))
            .collect();
        Self { geometry: self.geometry, angles }
    }

    /// Pointwise sum of link angles, re-wrapped.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.geometry.ensure_same(&other.geometry)?;
        Ok(self.add_scaled(&other.angles, T::one()))
    }
}

/// Wrapped plaquette angles, one per site and plane; the plaquette of plane
/// `(p, q)` at `x` is `θ_p(x) + θ_q(x+e_p) − θ_p(x+e_q) − θ_q(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaquetteField<T> {
    geometry: LatticeGeometry<T>,
    angles: Vec<T>,
}

impl<T: Real> PlaquetteField<T> {
    pub fn geometry(&self) -> &LatticeGeometry<T> {
        &self.geometry
    }

    pub fn angle(&self, site: usize, plane: Plane) -> T {
        self.angles[3 * site + plane.normal().index()]
    }

    /// Continuum curvature estimate `(F₂₃, F₃₁, F₁₂) = angles / h²` at a site.
    pub fn curvature(&self, site: usize) -> ImaginaryTriple<T> {
        let h2 = self.geometry.spacing().powi(2);
        let b = 3 * site;
        ImaginaryTriple::new(self.angles[b], self.angles[b + 1], self.angles[b + 2]).scale(h2.recip())
    }

    pub fn to_triples(&self) -> TripleField<T> {
        TripleField {
            geometry: self.geometry,
            values: (0..self.geometry.site_count()).map(|s| self.curvature(s)).collect(),
        }
    }

    /// Largest `|angle|` over all plaquettes; values close to `π` sit near the wrap boundary.
    pub fn max_abs_angle(&self) -> T {
        self.angles.iter().fold(T::zero(), |m, a| m.max(a.abs()))
    }

    /// Number of plaquettes with `|angle| > π − margin`.
    pub fn near_wrap_count(&self, margin: T) -> usize {
        let limit = T::PI() - margin;
        self.angles.iter().filter(|a| a.abs() > limit).count()
    }
}

/// One [`ImaginaryTriple`] per site.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleField<T> {
    geometry: LatticeGeometry<T>,
    values: Vec<ImaginaryTriple<T>>,
}

impl<T: Real> TripleField<T> {
    pub fn new(geometry: LatticeGeometry<T>, values: Vec<ImaginaryTriple<T>>) -> Result<Self> {
        if values.len() != geometry.site_count() {
            return Err(Error::GeometryMismatch(format!(
                "expected {} triples, got {}",
                geometry.site_count(),
                values.len()
            )));
        }
        Ok(Self { geometry, values })
    }

    pub fn geometry(&self) -> &LatticeGeometry<T> {
        &self.geometry
    }

    pub fn values(&self) -> &[ImaginaryTriple<T>] {
        &self.values
    }

    pub fn scale(&self, s: T) -> Self {
        Self { geometry: self.geometry, values: self.values.iter().map(|v| v.scale(s)).collect() }
    }

    /// `h³ Σ_x |v(x)|²`.
    pub fn norm_sqr(&self) -> T {
        self.geometry.cell_volume() * compensated_sum(self.values.iter().map(|v| v.norm_sqr()))
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }
}

/// Plaquette curvature of a link field.
pub fn curvature<T: Real>(a: &GaugeField<T>) -> PlaquetteField<T> {
    let g = *a.geometry();
    let mut angles = vec![T::zero(); g.link_count()];
    for site in 0..g.site_count() {
        for plane in Plane::ALL {
            angles[3 * site + plane.normal().index()] = wrap_angle(raw_plaquette(a, site, plane));
        }
    }
    PlaquetteField { geometry: g, angles }
}

pub(crate) fn raw_plaquette<T: Real>(a: &GaugeField<T>, site: usize, plane: Plane) -> T {
    let g = a.geometry();
    let (p, q) = plane.spanning_axes();
    a.angle(site, p) + a.angle(g.forward(site, p), q) - a.angle(g.forward(site, q), p) - a.angle(site, q)
}

/// The four links of a plaquette with their orientation signs.
pub(crate) fn plaquette_links<T: Real>(
    g: &LatticeGeometry<T>,
    site: usize,
    plane: Plane,
) -> [(usize, Axis, i8); 4] {
    let (p, q) = plane.spanning_axes();
    [(site, p, 1), (g.forward(site, p), q, 1), (g.forward(site, q), p, -1), (site, q, -1)]
}

/// Gauge transformation by site angles `g`:
/// `θ_j(x) ↦ θ_j(x) − g(x+e_j) + g(x)` and `Ψ(x) ↦ Ψ(x)·e^{i g(x)}`.
///
/// This is the sign for which `∇ = d + K_a` is covariant.
pub fn gauge_transform<T: Real>(
    g: &[T],
    a: &GaugeField<T>,
    psi: &SpinorField<T>,
) -> Result<(GaugeField<T>, SpinorField<T>)> {
    let geom = *a.geometry();
    geom.ensure_same(psi.geometry())?;
    if g.len() != geom.site_count() {
        return Err(Error::GeometryMismatch(format!(
            "gauge function has {} values for {} sites",
            g.len(),
            geom.site_count()
        )));
    }
    let mut out_a = a.clone();
    for site in 0..geom.site_count() {
        for ax in Axis::ALL {
            let t = a.angle(site, ax) - g[geom.forward(site, ax)] + g[site];
            out_a.set(site, ax, t);
        }
    }
    let n = psi.n();
    let mut data = psi.data().to_vec();
    for site in 0..geom.site_count() {
        let e = Quaternion::phase(g[site]);
        for q in &mut data[site * n..(site + 1) * n] {
            *q = *q * e;
        }
    }
    Ok((out_a, SpinorField::from_data(geom, n, data)?))
}

/// Sum of wrapped plaquette angles of `plane` over the coordinate 2-torus at
/// `slice` along the normal axis, divided by `2π` (unrounded).
pub fn flux<T: Real>(a: &GaugeField<T>, plane: Plane, slice: usize) -> T {
    let g = a.geometry();
    let n = g.sites_per_axis();
    let (p, q) = plane.spanning_axes();
    let normal = plane.normal();
    let mut values = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let mut c = [0usize; 3];
            c[p.index()] = u;
            c[q.index()] = v;
            c[normal.index()] = slice % n;
            let site = g.site(c);
            values.push(wrap_angle(raw_plaquette(a, site, plane)));
        }
    }
    compensated_sum(values) / T::TAU()
}

/// Integer Chern flux through a coordinate 2-torus: the pairing of `c₁(L)` with it.
pub fn chern_flux<T: Real>(a: &GaugeField<T>, plane: Plane, slice: usize) -> i64 {
    flux(a, plane, slice).round().to_i64().unwrap_or(0)
}

/// `(flux₂₃, flux₃₁, flux₁₂)` at slice 0, i.e. the components of `c₁(L)` in the
/// basis dual to the coordinate 2-tori.
pub fn chern_vector<T: Real>(a: &GaugeField<T>) -> [i64; 3] {
    [Plane::P23, Plane::P31, Plane::P12].map(|p| chern_flux(a, p, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn geom(n: usize) -> LatticeGeometry<f64> {
        LatticeGeometry::new(n, 1.0).unwrap()
    }

    fn random_gauge_function(g: &LatticeGeometry<f64>, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..g.site_count()).map(|_| rng.random_range(-PI..PI)).collect()
    }

    /// Link field `θ_j(x) = g(x+e_j) − g(x)` written out directly.
    fn pure_gauge(g: &LatticeGeometry<f64>, f: &[f64]) -> GaugeField<f64> {
        let mut a = GaugeField::zero(*g);
        for s in 0..g.site_count() {
            for ax in Axis::ALL {
                a.set(s, ax, f[g.forward(s, ax)] - f[s]);
            }
        }
        a
    }

    #[test]
    fn angles_are_wrapped() {
        let g = geom(4);
        let a = GaugeField::from_angles(g, vec![3.0 * PI; g.link_count()]).unwrap();
        assert!(a.angles().iter().all(|&t| t > -PI && t <= PI));
        assert!(GaugeField::from_angles(g, vec![0.0; 5]).is_err());
    }

    #[test]
    fn pure_gauge_is_flat() {
        let g = geom(4);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = random_gauge_function(&g, &mut rng);
        let f_plaq = curvature(&pure_gauge(&g, &f));
        assert!(f_plaq.max_abs_angle() < 1e-12);
    }

    #[test]
    fn uniform_flux_is_one_quantum() {
        for n in [4, 5, 8] {
            let g = geom(n);
            for plane in Plane::ALL {
                let a = GaugeField::uniform_flux(g, plane, 1);
                let f = curvature(&a);
                let expected = 2.0 * PI / (n * n) as f64;
                for s in 0..g.site_count() {
                    for other in Plane::ALL {
                        let want = if other == plane { expected } else { 0.0 };
                        assert!((f.angle(s, other) - want).abs() < 1e-12, "n={n} {plane:?} {other:?}");
                    }
                }
                for slice in 0..n {
                    assert!((flux(&a, plane, slice) - 1.0).abs() < 1e-12);
                    assert_eq!(chern_flux(&a, plane, slice), 1);
                }
            }
        }
        let g = geom(6);
        let a = GaugeField::uniform_flux(g, Plane::P23, 2);
        assert_eq!(chern_vector(&a), [2, 0, 0]);
        assert_eq!(chern_vector(&GaugeField::zero(g)), [0, 0, 0]);
    }

    #[test]
    fn cube_sums_vanish_mod_two_pi() {
        let g = geom(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = GaugeField::random(g, 1.0, &mut rng);
        let f = curvature(&a);
        for s in 0..g.site_count() {
            let mut total = 0.0;
            for plane in Plane::ALL {
                let ax = plane.normal();
                total += f.angle(g.forward(s, ax), plane) - f.angle(s, plane);
            }
            let turns = total / (2.0 * PI);
            assert!((turns - turns.round()).abs() < 1e-12, "{total}");
        }
    }

    #[test]
    fn flux_additivity_without_wraps() {
        let g = geom(8);
        let a = GaugeField::uniform_flux(g, Plane::P12, 1);
        let b = GaugeField::uniform_flux(g, Plane::P12, 2);
        let c = GaugeField::uniform_flux(g, Plane::P31, 1);
        let ab = a.compose(&b).unwrap();
        assert_eq!(chern_flux(&ab, Plane::P12, 3), 3);
        let ac = a.compose(&c).unwrap();
        assert_eq!(chern_vector(&ac), [0, 1, 1]);
    }

    #[test]
    fn gauge_transform_properties() {
        let g = geom(4);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = GaugeField::random(g, 1.0, &mut rng);
        let psi = SpinorField::random_normal(g, 2, &mut rng);

        let zero = vec![0.0; g.site_count()];
        let (a0, p0) = gauge_transform(&zero, &a, &psi).unwrap();
        assert_eq!(a0, a);
        assert_eq!(p0, psi);

        let g1 = random_gauge_function(&g, &mut rng);
        let g2 = random_gauge_function(&g, &mut rng);
        let (a1, p1) = gauge_transform(&g1, &a, &psi).unwrap();
        let f = curvature(&a);
        let f1 = curvature(&a1);
        for s in 0..g.site_count() {
            for plane in Plane::ALL {
                let d = wrap_angle(f.angle(s, plane) - f1.angle(s, plane));
                assert!(d.abs() < 1e-12);
            }
        }

        let (a12, p12) = gauge_transform(&g2, &a1, &p1).unwrap();
        let sum: Vec<f64> = g1.iter().zip(&g2).map(|(x, y)| x + y).collect();
        let (a_sum, p_sum) = gauge_transform(&sum, &a, &psi).unwrap();
        for (x, y) in a12.angles().iter().zip(a_sum.angles()) {
            assert!(wrap_angle(x - y).abs() < 1e-12);
        }
        for (x, y) in p12.data().iter().zip(p_sum.data()) {
            assert!((*x - *y).norm() < 1e-12);
        }
    }
}
