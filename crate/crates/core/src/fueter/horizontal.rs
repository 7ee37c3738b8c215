use crate::error::{Error, Result};
use crate::lattice::{BackgroundField, GaugeField, SpinorField};
use crate::quat::{moment_map_slice, norm_sqr, Quaternion};
use crate::scalar::Real;
use crate::solver::dirac_residual;

/// Removes from `field(x)` its components along `qΨ(x)i` for `q ∈ {1, i, j, k}`.
///
/// These four vectors are orthogonal with common length `|Ψ(x)|`, so the map is the
/// pointwise orthogonal projection onto the complement of the Killing direction and
/// its three rotations. Sites where `Ψ` vanishes are left untouched.
pub fn horizontal_projection<T: Real>(psi: &SpinorField<T>, field: &SpinorField<T>) -> Result<SpinorField<T>> {
    psi.ensure_compatible(field)?;
    let n = psi.n();
    let units = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
    let mut basis = vec![Quaternion::zero(); n];
    Ok(field.map_sites(|s, v, out| {
        out.copy_from_slice(v);
        let p = psi.site(s);
        let r2 = norm_sqr(p);
        if r2 == T::zero() {
            return;
        }
        for q in units {
            for (b, &pk) in basis.iter_mut().zip(p) {
                *b = q * pk * Quaternion::i();
            }
            let c = out.iter().zip(&basis).map(|(o, b)| o.dot(*b)).sum::<T>() / r2;
            for (o, b) in out.iter_mut().zip(&basis) {
                *o -= b.scale(c);
            }
        }
    }))
}

/// Horizontal part of `DΨ` and its `L²` norm.
///
/// Requires `|μ(Ψ(x))| ≤ mu_tolerance` at every site.
pub fn horizontal_fueter_residual<T: Real>(
    a: &GaugeField<T>,
    b: &BackgroundField<T>,
    psi: &SpinorField<T>,
    mu_tolerance: T,
) -> Result<(SpinorField<T>, T)> {
    let worst = (0..psi.geometry().site_count())
        .map(|s| moment_map_slice(psi.site(s)).norm())
        .fold(T::zero(), T::max);
    if !(worst <= mu_tolerance) {
        return Err(Error::MomentMapConstraint { max: worst.as_f64(), tolerance: mu_tolerance.as_f64() });
    }
    let d = dirac_residual(a, b, psi)?;
    let horizontal = horizontal_projection(psi, &d)?;
    let norm = horizontal.norm();
    Ok((horizontal, norm))
}
