use crate::error::{Error, Result};
use crate::lattice::{check_inputs, curvature, transport, BackgroundField, GaugeField, SpinorField, TripleField};
use crate::quat::{Axis, ImaginaryTriple, Quaternion};
use crate::scalar::Real;

/// Twisted Dirac operator `DΨ = Σ_j I_j ∇_j^{a⊗B} Ψ` with the centered stencil.
///
/// Symmetric with respect to [`crate::lattice::l2_inner`].
pub fn dirac_residual<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
) -> Result<SpinorField<T>> {
    check_inputs(psi, a, b)?;
    let n = psi.n();
    let inv_2h = (T::two() * psi.geometry().spacing()).recip();
    let mut scratch = vec![Quaternion::zero(); n];
    let mut plus = vec![Quaternion::zero(); n];
    let mut minus = vec![Quaternion::zero(); n];
    let mut out = SpinorField::zero(*psi.geometry(), n);
    for s in 0..psi.geometry().site_count() {
        let mut acc = vec![Quaternion::zero(); n];
        for ax in Axis::ALL {
            transport(psi, a, b, s, ax, true, &mut scratch, &mut plus);
            transport(psi, a, b, s, ax, false, &mut scratch, &mut minus);
            let u = ax.unit::<T>();
            for k in 0..n {
                acc[k] += u * (plus[k] - minus[k]);
            }
        }
        for (o, v) in out.site_mut(s).iter_mut().zip(acc) {
            *o = v.scale(inv_2h);
        }
    }
    Ok(out)
}

/// `sin²α` and `cos²α`, the weights of `F` and `μ` in the blown-up equation.
pub(crate) fn mixing<T: Real>(alpha: T) -> Result<(T, T)> {
    if !(alpha >= T::zero() && alpha <= T::FRAC_PI_2()) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, pi/2]")));
    }
    let (s, c) = alpha.sin_cos();
    Ok((s * s, c * c))
}

/// `weight_f·F_a − weight_mu·μ(Ψ)` per site.
pub(crate) fn curvature_residual<T: Real>(
    a: &GaugeField<T>,
    psi: &SpinorField<T>,
    weight_f: T,
    weight_mu: T,
) -> TripleField<T> {
    let f = curvature(a).to_triples();
    let mu = psi.moment_map();
    let values: Vec<ImaginaryTriple<T>> = f
        .values()
        .iter()
        .zip(mu.values())
        .map(|(f, m)| f.scale(weight_f) - m.scale(weight_mu))
        .collect();
    TripleField::new(*psi.geometry(), values).expect("same geometry")
}

/// Residual of the `ε`-family: `(DΨ, ε²F_a − μ(Ψ))`.
///
/// `ε = 1` is the undeformed system and `ε = 0` leaves `−μ(Ψ)` as the second component.
pub fn sw_residual<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    epsilon: T,
) -> Result<(SpinorField<T>, TripleField<T>)> {
    if !(epsilon >= T::zero()) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be finite and >= 0")));
    }
    let dirac = dirac_residual(a, b, psi)?;
    Ok((dirac, curvature_residual(a, psi, epsilon * epsilon, T::one())))
}

/// Residual of the blown-up system at mixing angle `α`.
#[derive(Debug, Clone)]
pub struct BlowupResidual<T> {
    /// `‖Ψ‖_{L²} − 1`.
    pub norm_defect: T,
    /// `DΨ`.
    pub dirac: SpinorField<T>,
    /// `sin²α·F_A − cos²α·μ(Ψ)`.
    pub curvature: TripleField<T>,
}

impl<T: Real> BlowupResidual<T> {
    /// `sqrt(‖DΨ‖² + ‖sin²α F − cos²α μ‖²)`; the norm defect is reported separately.
    pub fn norm(&self) -> T {
        (self.dirac.norm_sqr() + self.curvature.norm_sqr()).sqrt()
    }
}

pub fn blowup_residual<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    alpha: T,
) -> Result<BlowupResidual<T>> {
    let (s, c) = mixing(alpha)?;
    let dirac = dirac_residual(a, b, psi)?;
    Ok(BlowupResidual {
        norm_defect: psi.norm() - T::one(),
        dirac,
        curvature: curvature_residual(a, psi, s, c),
    })
}

/// `(a, u) ↦ (a, u/r)` together with `ε = 1/r`.
///
/// If `(a, u)` solves the undeformed equations, the image solves the `ε`-family at `ε = 1/r`.
pub fn rescale<T: Real>(a: &GaugeField<T>, u: &SpinorField<T>, r: T) -> Result<(GaugeField<T>, SpinorField<T>, T)> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("rescaling factor r = {r} must be positive")));
    }
    Ok((a.clone(), u.scale(r.recip()), r.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{l2_inner, LatticeGeometry};
    use crate::quat::SpinorValue;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact_constant(g: LatticeGeometry<f64>) -> SpinorField<f64> {
        let q0 = Quaternion::new(0.4, -0.3, 0.8, 0.2);
        SpinorField::constant(g, &SpinorValue::new(vec![q0, q0 * Quaternion::j()])).normalized()
    }

    #[test]
    fn dirac_of_constant_vanishes() {
        let g = LatticeGeometry::<f64>::new(4, 1.0).unwrap();
        let psi = exact_constant(g);
        let d = dirac_residual(&GaugeField::zero(g), &BackgroundField::identity(g, 2), &psi).unwrap();
        assert_eq!(d.norm(), 0.0);
    }

    /// `u(x) = x₁ i + x₂ j − 2 x₃ k` satisfies `i·i + j·j + k·(−2k) = 0`, so the
    /// centered stencil annihilates it away from the periodic seam.
    #[test]
    fn linear_fueter_map_interior() {
        let g = LatticeGeometry::<f64>::new(8, 2.0).unwrap();
        let mut psi = SpinorField::zero(g, 1);
        for s in 0..g.site_count() {
            let [x1, x2, x3] = g.position(s);
            psi.site_mut(s)[0] = Quaternion::new(0.0, x1, x2, -2.0 * x3);
        }
        let d = dirac_residual(&GaugeField::zero(g), &BackgroundField::identity(g, 1), &psi).unwrap();
        let mut checked = 0;
        for s in 0..g.site_count() {
            let c = g.coords(s);
            if c.iter().all(|&x| x >= 1 && x <= 6) {
                assert!(d.site(s)[0].norm() < 1e-12, "site {c:?}: {:?}", d.site(s)[0]);
                checked += 1;
            }
        }
        assert_eq!(checked, 216);
        // and the seam is where periodicity breaks the linear map
        assert!(d.site(g.site([0, 3, 3]))[0].norm() > 1.0);
    }

    #[test]
    fn dirac_is_symmetric_and_linear() {
        let g = LatticeGeometry::<f64>::new(4, 1.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for n in [1, 2, 3] {
            let a = GaugeField::random(g, 1.0, &mut rng);
            let b = BackgroundField::random(g, n, &mut rng);
            let phi = SpinorField::random_normal(g, n, &mut rng);
            let psi = SpinorField::random_normal(g, n, &mut rng);
            let dphi = dirac_residual(&a, &b, &phi).unwrap();
            let dpsi = dirac_residual(&a, &b, &psi).unwrap();
            let lhs = l2_inner(&dphi, &psi).unwrap();
            let rhs = l2_inner(&phi, &dpsi).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()), "n={n} {lhs} {rhs}");

            let combo = phi.add_scaled(&psi, -2.5);
            let dcombo = dirac_residual(&a, &b, &combo).unwrap();
            let expect = dphi.add_scaled(&dpsi, -2.5);
            assert!(dcombo.add_scaled(&expect, -1.0).norm() <= 1e-12 * expect.norm());
        }
    }

    #[test]
    fn sw_residual_contract() {
        let g = LatticeGeometry::<f64>::new(4, 1.0).unwrap();
        let a = GaugeField::zero(g);
        let b = BackgroundField::identity(g, 2);
        let psi = exact_constant(g);
        for eps in [0.0, 0.3, 1.0, 5.0] {
            let (d, c) = sw_residual(&a, &b, &psi, eps).unwrap();
            assert_eq!(d.norm(), 0.0);
            assert!(c.max_abs() < 1e-15);
        }
        assert!(sw_residual(&a, &b, &psi, -0.1).is_err());

        // ε = 0 leaves −μ(Ψ)
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = GaugeField::random(g, 0.5, &mut rng);
        let psi = SpinorField::random_normal(g, 2, &mut rng);
        let (_, c0) = sw_residual(&a, &b, &psi, 0.0).unwrap();
        let mu = psi.moment_map();
        for (x, m) in c0.values().iter().zip(mu.values()) {
            assert_eq!(*x, -*m);
        }
    }

    #[test]
    fn blowup_residual_contract() {
        let g = LatticeGeometry::<f64>::new(4, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = GaugeField::random(g, 0.5, &mut rng);
        let b = BackgroundField::identity(g, 2);
        let psi = SpinorField::random_normal(g, 2, &mut rng);

        let quarter = blowup_residual(&a, &b, &psi, std::f64::consts::FRAC_PI_4).unwrap();
        let (_, eq2) = sw_residual(&a, &b, &psi, 1.0).unwrap();
        for (x, y) in quarter.curvature.values().iter().zip(eq2.values()) {
            assert!((*x - y.scale(0.5)).norm() <= 1e-14 * (1.0 + y.norm()));
        }

        let zero = blowup_residual(&a, &b, &psi, 0.0).unwrap();
        let (_, eq4) = sw_residual(&a, &b, &psi, 0.0).unwrap();
        assert_eq!(zero.curvature, eq4);

        assert!((zero.norm_defect - (psi.norm() - 1.0)).abs() < 1e-15);
        assert!(zero.norm_defect.abs() > 1e-3);
        let unit = blowup_residual(&a, &b, &psi.normalized(), 0.3).unwrap();
        assert!(unit.norm_defect.abs() < 1e-14);

        assert!(blowup_residual(&a, &b, &psi, -0.01).is_err());
        assert!(blowup_residual(&a, &b, &psi, 1.6).is_err());
    }

    #[test]
    fn rescale_contract() {
        let g = LatticeGeometry::<f64>::new(4, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let a = GaugeField::random(g, 0.5, &mut rng);
        let u = SpinorField::random_normal(g, 2, &mut rng);
        let (a1, u1, e1) = rescale(&a, &u, 1.0).unwrap();
        assert_eq!((a1, u1.clone(), e1), (a.clone(), u.clone(), 1.0));
        let (_, u3, e3) = rescale(&a, &u, 3.0).unwrap();
        assert!((u3.norm() - u.norm() / 3.0).abs() < 1e-14);
        assert!((e3 - 1.0 / 3.0).abs() < 1e-16);
        let (_, back, _) = rescale(&a, &u3, 1.0 / 3.0).unwrap();
        assert!(back.add_scaled(&u, -1.0).norm() < 1e-14 * u.norm());
        assert!(rescale(&a, &u, 0.0).is_err());
        assert!(rescale(&a, &u, -2.0).is_err());

        // an exact solution of the undeformed equations stays exact
        let b = BackgroundField::identity(g, 2);
        let exact = exact_constant(g).scale(7.0);
        let (a2, u2, eps) = rescale(&GaugeField::zero(g), &exact, 2.0).unwrap();
        let (d, c) = sw_residual(&a2, &b, &u2, eps).unwrap();
        assert!((d.norm_sqr() + c.norm_sqr()).sqrt() < 1e-12);
    }
}
