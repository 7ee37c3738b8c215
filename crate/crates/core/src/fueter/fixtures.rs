//! Synthetic configurations with known degeneration data.
//!
//! Offsets and centers are in lattice units; amplitudes and distances are physical.

use crate::lattice::{LatticeGeometry, Plane, SpinorField};
use crate::quat::{Axis, Quaternion, SpinorValue};
use crate::scalar::Real;

/// The two axes transverse to `axis`, in increasing order.
pub fn transverse(axis: Axis) -> (Axis, Axis) {
    match axis {
        Axis::X1 => (Axis::X2, Axis::X3),
        Axis::X2 => (Axis::X1, Axis::X3),
        Axis::X3 => (Axis::X1, Axis::X2),
    }
}

/// Minimum-image displacement from `center` to `coord` on a circle of `n` sites.
fn displacement<T: Real>(coord: usize, center: T, n: usize) -> T {
    let n = T::from_usize(n).unwrap();
    let d = T::from_usize(coord).unwrap() - center;
    d - n * (d / n).round()
}

/// Transverse displacement (lattice units) of `site` from the line parallel to `axis` through `offset`.
pub fn transverse_displacement<T: Real>(g: &LatticeGeometry<T>, site: usize, axis: Axis, offset: [T; 2]) -> [T; 2] {
    let c = g.coords(site);
    let (p, q) = transverse(axis);
    let n = g.sites_per_axis();
    [displacement(c[p.index()], offset[0], n), displacement(c[q.index()], offset[1], n)]
}

/// `dist(x, Z)^γ` where `Z` is the union of lines parallel to `axis` through the given offsets.
pub fn lines_distance_amplitude<T: Real>(g: &LatticeGeometry<T>, axis: Axis, offsets: &[[T; 2]], gamma: T) -> Vec<T> {
    let h = g.spacing();
    (0..g.site_count())
        .map(|s| {
            let d = offsets
                .iter()
                .map(|&o| {
                    let [u, v] = transverse_displacement(g, s, axis, o);
                    (u * u + v * v).sqrt() * h
                })
                .fold(T::infinity(), T::min);
            d.powf(gamma)
        })
        .collect()
}

/// `dist(x, Z)^γ` for a single line wrapping in the `axis` direction.
pub fn line_distance_amplitude<T: Real>(g: &LatticeGeometry<T>, axis: Axis, offset: [T; 2], gamma: T) -> Vec<T> {
    lines_distance_amplitude(g, axis, &[offset], gamma)
}

/// `Ψ = ρ^{1/2} (1, j e^{i w ϑ})` with `(ρ, ϑ)` polar coordinates about the `x₃`-line through `center`.
///
/// Every value lies in `μ⁻¹(0)`. The gauge-fixed representative is `ρ^{1/2} e^{−i w ϑ/2}`,
/// so a loop winding once around the line has sign `(−1)^w`. `ϑ` jumps on the planes
/// half a box away from the line; loops must not cross them.
pub fn half_winding_field<T: Real>(g: &LatticeGeometry<T>, center: [T; 2], winding: i64) -> SpinorField<T> {
    let mut psi = SpinorField::zero(*g, 2);
    let h = g.spacing();
    let w = T::from_i64(winding).unwrap();
    for s in 0..g.site_count() {
        let [u, v] = transverse_displacement(g, s, Axis::X3, center);
        let rho = (u * u + v * v).sqrt() * h;
        let amp = rho.sqrt();
        let theta = v.atan2(u);
        let first = Quaternion::one().scale(amp);
        let second = (Quaternion::j() * Quaternion::phase(w * theta)).scale(amp);
        psi.set_value(s, &SpinorValue::new(vec![first, second]));
    }
    psi
}

/// Closed square path of side `side` starting at `corner`, running `+p, +q, −p, −q` for
/// `(p, q) = plane.spanning_axes()`. The starting site is not repeated at the end.
pub fn square_loop<T: Real>(g: &LatticeGeometry<T>, corner: [usize; 3], side: usize, plane: Plane) -> Vec<usize> {
    let (p, q) = plane.spanning_axes();
    let mut path = Vec::with_capacity(4 * side);
    let mut site = g.site(corner);
    for (axis, dir) in [(p, 1), (q, 1), (p, -1), (q, -1)] {
        for _ in 0..side {
            path.push(site);
            site = g.shift(site, axis, dir);
        }
    }
    path
}

/// Sites of the straight line wrapping in the `axis` direction through `through`.
pub fn wrapping_line<T: Real>(g: &LatticeGeometry<T>, axis: Axis, through: [usize; 3]) -> Vec<usize> {
    let start = g.site(through);
    (0..g.sites_per_axis()).map(|t| g.shift(start, axis, t as i64)).collect()
}
