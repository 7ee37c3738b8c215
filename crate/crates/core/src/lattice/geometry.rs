use crate::error::{Error, Result};
use crate::quat::Axis;
use crate::scalar::Real;

/// Periodic cubic lattice with `sites_per_axis` points on each side of a box of side `length`.
///
/// Sites are numbered `x₁ + N (x₂ + N x₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGeometry<T> {
    sites_per_axis: usize,
    length: T,
}

impl<T: Real> LatticeGeometry<T> {
    pub const MIN_SITES: usize = 4;

    pub fn new(sites_per_axis: usize, length: T) -> Result<Self> {
        if sites_per_axis < Self::MIN_SITES {
            return Err(Error::InvalidParameter(format!(
                "N = {sites_per_axis} violates N >= {}",
                Self::MIN_SITES
            )));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!("L = {length} violates L > 0")));
        }
        Ok(Self { sites_per_axis, length })
    }

    pub fn sites_per_axis(&self) -> usize {
        self.sites_per_axis
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn spacing(&self) -> T {
        self.length / T::from_usize(self.sites_per_axis).unwrap()
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().powi(3)
    }

    pub fn site_count(&self) -> usize {
        self.sites_per_axis.pow(3)
    }

    pub fn link_count(&self) -> usize {
        3 * self.site_count()
    }

    pub fn site(&self, coords: [usize; 3]) -> usize {
        let n = self.sites_per_axis;
        (coords[0] % n) + n * ((coords[1] % n) + n * (coords[2] % n))
    }

    /// Site index from possibly out-of-range signed coordinates, wrapped periodically.
    pub fn site_wrapped(&self, coords: [i64; 3]) -> usize {
        let n = self.sites_per_axis as i64;
        self.site([
            coords[0].rem_euclid(n) as usize,
            coords[1].rem_euclid(n) as usize,
            coords[2].rem_euclid(n) as usize,
        ])
    }

    pub fn coords(&self, site: usize) -> [usize; 3] {
        let n = self.sites_per_axis;
        [site % n, (site / n) % n, site / (n * n)]
    }

    pub fn forward(&self, site: usize, axis: Axis) -> usize {
        self.shift(site, axis, 1)
    }

    pub fn backward(&self, site: usize, axis: Axis) -> usize {
        self.shift(site, axis, -1)
    }

    pub fn shift(&self, site: usize, axis: Axis, steps: i64) -> usize {
        let c = self.coords(site);
        let mut s = [c[0] as i64, c[1] as i64, c[2] as i64];
        s[axis.index()] += steps;
        self.site_wrapped(s)
    }

    /// Physical position `h·(x₁, x₂, x₃)` of a site inside `[0, L)³`.
    pub fn position(&self, site: usize) -> [T; 3] {
        let h = self.spacing();
        let c = self.coords(site);
        [0, 1, 2].map(|i| h * T::from_usize(c[i]).unwrap())
    }

    /// Euclidean distance on the torus between two physical points.
    pub fn periodic_distance(&self, a: [T; 3], b: [T; 3]) -> T {
        let l = self.length;
        let half = l * T::half();
        let mut s = T::zero();
        for i in 0..3 {
            let mut d = (a[i] - b[i]) % l;
            if d > half {
                d = d - l;
            } else if d < -half {
                d = d + l;
            }
            s = s + d * d;
        }
        s.sqrt()
    }

    /// Whether two sites are nearest neighbours (periodic); returns the axis and direction.
    pub fn neighbor_step(&self, from: usize, to: usize) -> Option<(Axis, i64)> {
        Axis::ALL.into_iter().find_map(|ax| {
            if self.forward(from, ax) == to {
                Some((ax, 1))
            } else if self.backward(from, ax) == to {
                Some((ax, -1))
            } else {
                None
            }
        })
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::GeometryMismatch(format!(
                "N={} L={} vs N={} L={}",
                self.sites_per_axis, self.length, other.sites_per_axis, other.length
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_degenerate() {
        assert!(LatticeGeometry::new(3, 1.0).is_err());
        assert!(LatticeGeometry::new(4, 0.0).is_err());
        assert!(LatticeGeometry::new(4, f64::NAN).is_err());
        let msg = LatticeGeometry::new(3, 1.0).unwrap_err().to_string();
        assert!(msg.contains("N >= 4"), "{msg}");
    }

    #[test]
    fn periodic_indexing() {
        let g = LatticeGeometry::new(5, 2.5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        for s in 0..g.site_count() {
            assert_eq!(g.site(g.coords(s)), s);
            for ax in Axis::ALL {
                assert_eq!(g.shift(s, ax, 5), s);
                assert_eq!(g.backward(g.forward(s, ax), ax), s);
                assert_eq!(g.neighbor_step(s, g.forward(s, ax)), Some((ax, 1)));
            }
        }
        assert_eq!(g.site_wrapped([-1, 5, 7]), g.site([4, 0, 2]));
    }

    #[test]
    fn torus_distance() {
        let g = LatticeGeometry::new(8, 8.0).unwrap();
        assert_eq!(g.periodic_distance([0.0, 0.0, 0.0], [7.0, 0.0, 0.0]), 1.0);
        assert_eq!(g.periodic_distance([1.0, 1.0, 0.0], [4.0, 5.0, 0.0]), 5.0);
    }
}
