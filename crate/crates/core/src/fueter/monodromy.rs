use crate::error::{Error, Result};
use crate::lattice::SpinorField;
use crate::quat::{moment_map_slice, norm_sqr, Quaternion};
use crate::scalar::Real;

/// `w = ψ₁ ψ̄₂`, invariant under `Ψ ↦ Ψ e^{iθ}`.
///
/// On `μ⁻¹(0)` this is purely imaginary with `|w| = |Ψ|²/2`, so it loses one real
/// dimension of the four-dimensional quotient and cannot detect the `±1` ambiguity;
/// see [`level_zero_representative`].
pub fn quotient_invariant<T: Real>(psi: &[Quaternion<T>]) -> Quaternion<T> {
    psi[0] * psi[1].conj()
}

/// Representative `p ∈ ℍ` of the orbit of `(ψ₁, ψ₂) ∈ μ⁻¹(0)`, defined up to sign.
///
/// On the zero level `ψ₂ = ψ₁ j e^{iφ}`. The gauge `e^{−iφ/2}` brings the pair to
/// `(p, p j)` with `p = ψ₁ e^{−iφ/2}`; the half angle is where the sign comes from.
/// `None` when `ψ₁` vanishes or `ψ₁⁻¹ψ₂` has no component along `jℂ`.
pub fn level_zero_representative<T: Real>(psi: &[Quaternion<T>]) -> Option<Quaternion<T>> {
    let (p1, p2) = (psi[0], psi[1]);
    if p1.norm_sqr() == T::zero() {
        return None;
    }
    let c = (-Quaternion::j() * p1.inverse() * p2).complex_part();
    if c.norm_sqr() == T::zero() {
        return None;
    }
    let phi = c.im.atan2(c.re);
    Some(p1 * Quaternion::phase(-phi * T::half()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyOptions<T> {
    /// Sites on the loop need `|Ψ| > delta`.
    pub delta: T,
    /// Sites on the loop need `|μ(Ψ)| ≤ mu_tolerance·|Ψ|²`.
    pub mu_tolerance: T,
    /// Consecutive representatives must differ by less than this angle.
    pub max_step_angle: T,
}

impl<T: Real> MonodromyOptions<T> {
    pub fn new(delta: T) -> Self {
        Self { delta, mu_tolerance: T::lit(1e-6), max_step_angle: T::FRAC_PI_2() }
    }
}

/// Transports the sign of [`level_zero_representative`] around a closed loop of
/// neighbouring sites and returns the holonomy (`+1` or `−1`) together with the
/// largest step angle seen.
///
/// The loop may repeat its first site at the end.
pub fn z2_monodromy<T: Real>(
    psi: &SpinorField<T>,
    path: &[usize],
    options: &MonodromyOptions<T>,
) -> Result<(i8, T)> {
    if psi.n() != 2 {
        return Err(Error::InvalidParameter(format!("monodromy needs n = 2, got n = {}", psi.n())));
    }
    if !(options.max_step_angle > T::zero() && options.max_step_angle <= T::FRAC_PI_2()) {
        return Err(Error::InvalidParameter("max_step_angle must lie in (0, pi/2]".into()));
    }
    let g = psi.geometry();
    let path = match path {
        [first, .., last] if first == last => &path[..path.len() - 1],
        _ => path,
    };
    if path.len() < 2 {
        return Err(Error::InvalidLoop(format!("{} distinct sites", path.len())));
    }
    if let Some(&bad) = path.iter().find(|&&s| s >= g.site_count()) {
        return Err(Error::InvalidLoop(format!("site {bad} out of range")));
    }
    for k in 0..path.len() {
        let (s, t) = (path[k], path[(k + 1) % path.len()]);
        if g.neighbor_step(s, t).is_none() {
            return Err(Error::InvalidLoop(format!("sites {s} and {t} are not neighbours")));
        }
    }

    let mut reps = Vec::with_capacity(path.len());
    for &s in path {
        let v = psi.site(s);
        let r2 = norm_sqr(v);
        if !(r2.sqrt() > options.delta) {
            return Err(Error::LoopTouchesZeroSet { site: s });
        }
        let mu = moment_map_slice(v).norm();
        if !(mu <= options.mu_tolerance * r2) {
            return Err(Error::MomentMapConstraint {
                max: (mu / r2).as_f64(),
                tolerance: options.mu_tolerance.as_f64(),
            });
        }
        let p = level_zero_representative(v).ok_or(Error::LoopTouchesZeroSet { site: s })?;
        reps.push(p.scale(p.norm().recip()));
    }

    let mut current = reps[0];
    let mut worst = T::zero();
    for k in 1..=reps.len() {
        let next = reps[k % reps.len()];
        let c = current.dot(next);
        let aligned = if c < T::zero() { -next } else { next };
        let angle = T::two() * (current - aligned).norm().atan2((current + aligned).norm());
        if !(angle < options.max_step_angle) {
            return Err(Error::Unresolvable {
                step: k - 1,
                angle: angle.as_f64(),
                limit: options.max_step_angle.as_f64(),
            });
        }
        worst = worst.max(angle);
        current = aligned;
    }
    let sign = if current.dot(reps[0]) > T::zero() { 1 } else { -1 };
    Ok((sign, worst))
}
