use crate::error::Result;
use crate::lattice::{
    check_inputs, plaquette_links, transport, BackgroundField, GaugeField, Plane, SpinorField, TripleField,
};
use crate::quat::{Axis, Quaternion};
use crate::scalar::{compensated_sum, Real};
use crate::solver::residual::{curvature_residual, dirac_residual, mixing};

/// The two halves of the least-squares functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms<T> {
    /// `½‖DΨ‖²`.
    pub dirac: T,
    /// `½‖sin²α F − cos²α μ(Ψ)‖²`.
    pub curvature: T,
}

impl<T: Real> EnergyTerms<T> {
    pub fn total(&self) -> T {
        self.dirac + self.curvature
    }
}

pub fn energy_terms<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    alpha: T,
) -> Result<EnergyTerms<T>> {
    let (s, c) = mixing(alpha)?;
    let d = dirac_residual(a, b, psi)?;
    let r = curvature_residual(a, psi, s, c);
    Ok(EnergyTerms { dirac: T::half() * d.norm_sqr(), curvature: T::half() * r.norm_sqr() })
}

/// `½‖DΨ‖² + ½‖sin²α·F_A − cos²α·μ(Ψ)‖²`.
pub fn energy<T: Real>(a: &GaugeField<T>, b: &BackgroundField<T>, psi: &SpinorField<T>, alpha: T) -> Result<T> {
    energy_terms(a, b, psi, alpha).map(|e| e.total())
}

/// First variation of the energy with respect to the raw lattice coefficients:
/// one entry per link angle (site-major, axis-minor) and one quaternion per
/// spinor component.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGradient<T> {
    pub links: Vec<T>,
    pub spinor: SpinorField<T>,
}

impl<T: Real> EnergyGradient<T> {
    /// Euclidean pairing with a direction `(δθ, δΨ)`.
    pub fn dot(&self, links: &[T], spinor: &SpinorField<T>) -> T {
        compensated_sum(self.links.iter().zip(links).map(|(a, b)| *a * *b)) + self.spinor.coefficient_dot(spinor)
    }

    pub fn norm_sqr(&self) -> T {
        compensated_sum(self.links.iter().map(|v| *v * *v)) + self.spinor.coefficient_dot(&self.spinor)
    }
}

/// Gradient with the spinor part projected orthogonally to `Ψ` (tangent to the unit sphere).
pub fn energy_gradient<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    alpha: T,
) -> Result<EnergyGradient<T>> {
    let mut g = energy_gradient_unprojected(a, b, psi, alpha)?;
    let pp = psi.coefficient_dot(psi);
    if pp > T::zero() {
        let coeff = g.spinor.coefficient_dot(psi) / pp;
        g.spinor = g.spinor.add_scaled(psi, -coeff);
    }
    Ok(g)
}

/// Full gradient in `(θ, Ψ)` without the sphere projection.
pub fn energy_gradient_unprojected<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    alpha: T,
) -> Result<EnergyGradient<T>> {
    check_inputs(psi, a, b)?;
    let (s, c) = mixing(alpha)?;
    let geom = *psi.geometry();
    let n = psi.n();
    let vol = geom.cell_volume();

    let dpsi = dirac_residual(a, b, psi)?;
    let curv = curvature_residual(a, psi, s, c);

    // Ψ: h³ D(DΨ) + cos²α h³ r ψ_k i
    let ddpsi = dirac_residual(a, b, &dpsi)?;
    let i = Quaternion::<T>::i();
    let spinor = ddpsi.map_sites(|site, dd, out| {
        let r = curv.values()[site].to_quaternion();
        for k in 0..n {
            out[k] = (dd[k] + (r * psi.site(site)[k] * i).scale(c)).scale(vol);
        }
    });

    let mut links = vec![T::zero(); geom.link_count()];
    accumulate_dirac_link_gradient(a, b, psi, &dpsi, &mut links);
    accumulate_curvature_link_gradient(&curv, s, &mut links);
    Ok(EnergyGradient { links, spinor })
}

/// `∂(½h³Σ|DΨ|²)/∂θ_j(y) = ½h² [⟨R(y), I_j T₊Ψ(y) i⟩ + ⟨R(y+e_j), I_j T₋Ψ(y+e_j) i⟩]`, `R = DΨ`.
fn accumulate_dirac_link_gradient<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    residual: &SpinorField<T>,
    links: &mut [T],
) {
    let geom = psi.geometry();
    let n = psi.n();
    let weight = T::half() * geom.spacing().powi(2);
    let i = Quaternion::<T>::i();
    let mut scratch = vec![Quaternion::zero(); n];
    let mut moved = vec![Quaternion::zero(); n];
    for y in 0..geom.site_count() {
        for ax in Axis::ALL {
            let u = ax.unit::<T>();
            let mut acc = T::zero();
            transport(psi, a, b, y, ax, true, &mut scratch, &mut moved);
            for k in 0..n {
                acc = acc + residual.site(y)[k].dot(u * moved[k] * i);
            }
            let up = geom.forward(y, ax);
            transport(psi, a, b, up, ax, false, &mut scratch, &mut moved);
            for k in 0..n {
                acc = acc + residual.site(up)[k].dot(u * moved[k] * i);
            }
            links[3 * y + ax.index()] = links[3 * y + ax.index()] + weight * acc;
        }
    }
}

/// Each plaquette angle `P` enters `F = P/h²`, so `∂/∂θ = ± h·sin²α·r`.
fn accumulate_curvature_link_gradient<T: Real>(curv: &TripleField<T>, s: T, links: &mut [T]) {
    let geom = curv.geometry();
    let weight = geom.spacing() * s;
    for x in 0..geom.site_count() {
        let r = curv.values()[x];
        for plane in Plane::ALL {
            let coeff = weight * r.component(plane.normal());
            for (site, axis, sign) in plaquette_links(geom, x, plane) {
                let idx = 3 * site + axis.index();
                links[idx] = if sign > 0 { links[idx] + coeff } else { links[idx] - coeff };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gauge_transform, LatticeGeometry};
    use crate::quat::SpinorValue;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn exact_constant(g: LatticeGeometry<f64>) -> SpinorField<f64> {
        let q0 = Quaternion::new(1.0, 0.5, -0.5, 0.25);
        SpinorField::constant(g, &SpinorValue::new(vec![q0, q0 * Quaternion::j()])).normalized()
    }

    struct Instance {
        a: GaugeField<f64>,
        b: BackgroundField<f64>,
        psi: SpinorField<f64>,
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, random_b: bool) -> Instance {
        let g = LatticeGeometry::<f64>::new(4, 1.3).unwrap();
        Instance {
            a: GaugeField::random(g, 0.6, rng),
            b: if random_b { BackgroundField::random(g, n, rng) } else { BackgroundField::identity(g, n) },
            psi: SpinorField::random_normal(g, n, rng).normalized(),
        }
    }

    #[test]
    fn exact_solution_has_zero_energy_and_gradient() {
        let g = LatticeGeometry::<f64>::new(4, 1.0).unwrap();
        let a = GaugeField::zero(g);
        let b = BackgroundField::identity(g, 2);
        let psi = exact_constant(g);
        for alpha in [0.0, PI / 8.0, FRAC_PI_4, FRAC_PI_2] {
            assert!(energy(&a, &b, &psi, alpha).unwrap() < 1e-24);
            let grad = energy_gradient(&a, &b, &psi, alpha).unwrap();
            assert!(grad.norm_sqr() < 1e-24);
        }
        assert!(energy(&a, &b, &psi, -0.1).is_err());
    }

    #[test]
    fn doubling_spinor_at_right_angle() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let inst = random_instance(&mut rng, 2, true);
        let e1 = energy_terms(&inst.a, &inst.b, &inst.psi, FRAC_PI_2).unwrap();
        let e2 = energy_terms(&inst.a, &inst.b, &inst.psi.scale(2.0), FRAC_PI_2).unwrap();
        assert!((e2.dirac - 4.0 * e1.dirac).abs() <= 1e-12 * e2.dirac);
        // cos²(π/2) is ~1e-33 in floating point: the μ contribution is below roundoff
        assert!((e2.curvature - e1.curvature).abs() <= 1e-12 * e1.curvature);
    }

    /// Central differences along random directions, the spinor direction made
    /// tangent to the sphere.
    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let step = 1e-5;
        for (n, random_b) in [(1, false), (2, false), (2, true), (3, true)] {
            let inst = random_instance(&mut rng, n, random_b);
            for alpha in [0.0, 0.4, FRAC_PI_4, 1.2] {
                let grad = energy_gradient(&inst.a, &inst.b, &inst.psi, alpha).unwrap();
                for _ in 0..5 {
                    let dl: Vec<f64> = (0..inst.a.angles().len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let mut dp = SpinorField::random_normal(*inst.psi.geometry(), n, &mut rng);
                    let proj = dp.coefficient_dot(&inst.psi) / inst.psi.coefficient_dot(&inst.psi);
                    dp = dp.add_scaled(&inst.psi, -proj);
                    let e = |t: f64| {
                        energy(&inst.a.add_scaled(&dl, t), &inst.b, &inst.psi.add_scaled(&dp, t), alpha).unwrap()
                    };
                    let fd = (e(step) - e(-step)) / (2.0 * step);
                    let an = grad.dot(&dl, &dp);
                    assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-8), "n={n} alpha={alpha}: fd={fd} an={an}");
                }
            }
        }
    }

    #[test]
    fn energy_and_gradient_are_gauge_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let inst = random_instance(&mut rng, 2, true);
        let geom = *inst.psi.geometry();
        let gf: Vec<f64> = (0..geom.site_count()).map(|_| rng.random_range(-PI..PI)).collect();
        let (ag, pg) = gauge_transform(&gf, &inst.a, &inst.psi).unwrap();
        let alpha = 0.7;
        let e = energy(&inst.a, &inst.b, &inst.psi, alpha).unwrap();
        let eg = energy(&ag, &inst.b, &pg, alpha).unwrap();
        assert!((e - eg).abs() <= 1e-12 * e);

        let grad = energy_gradient(&inst.a, &inst.b, &inst.psi, alpha).unwrap();
        let gradg = energy_gradient(&ag, &inst.b, &pg, alpha).unwrap();
        let scale = grad.norm_sqr().sqrt();
        for (x, y) in grad.links.iter().zip(&gradg.links) {
            assert!((x - y).abs() <= 1e-11 * scale);
        }
        let (_, moved) = gauge_transform(&gf, &inst.a, &grad.spinor).unwrap();
        assert!(moved.add_scaled(&gradg.spinor, -1.0).norm() <= 1e-11 * grad.spinor.norm());
    }

    #[test]
    fn projected_gradient_is_tangent() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let inst = random_instance(&mut rng, 2, false);
        let g = energy_gradient(&inst.a, &inst.b, &inst.psi, 0.3).unwrap();
        let raw = energy_gradient_unprojected(&inst.a, &inst.b, &inst.psi, 0.3).unwrap();
        assert!(g.spinor.coefficient_dot(&inst.psi).abs() < 1e-12 * raw.spinor.norm());
        assert_eq!(g.links, raw.links);
    }
}
