use crate::error::{Error, Result};
use crate::fueter::zero_set::{HolderFit, ZeroSetReport};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderOptions<T> {
    /// Inner annulus radius in units of the lattice spacing.
    pub inner: T,
    /// Outer annulus radius in units of the lattice spacing.
    pub outer: T,
    pub min_samples: usize,
    pub min_r_squared: T,
}

impl<T: Real> Default for HolderOptions<T> {
    fn default() -> Self {
        Self { inner: T::two(), outer: T::lit(6.0), min_samples: 8, min_r_squared: T::lit(0.9) }
    }
}

/// Distance from every site to the nearest zero-cell center, or `∞` beyond `radius` lattice units.
pub fn distance_to_zero_set<T: Real>(report: &ZeroSetReport<T>, radius: T) -> Vec<T> {
    let g = &report.geometry;
    let r = radius.ceil().to_i64().unwrap_or(0).max(0);
    let mut best = vec![i64::MAX; g.site_count()];
    for &z in &report.cells {
        let c = g.coords(z).map(|x| x as i64);
        for d3 in -r..=r {
            for d2 in -r..=r {
                for d1 in -r..=r {
                    let d = d1 * d1 + d2 * d2 + d3 * d3;
                    let s = g.site_wrapped([c[0] + d1, c[1] + d2, c[2] + d3]);
                    if d < best[s] {
                        best[s] = d;
                    }
                }
            }
        }
    }
    let h = g.spacing();
    best.into_iter()
        .map(|d| {
            let d = T::from_i64(d).unwrap().sqrt();
            if d <= radius { d * h } else { T::infinity() }
        })
        .collect()
}

/// Least-squares slope of `log|Ψ|` against `log dist(·, Z)` over the annulus.
pub fn holder_exponent<T: Real>(
    amplitude: &[T],
    report: &ZeroSetReport<T>,
    options: &HolderOptions<T>,
) -> Result<HolderFit<T>> {
    if report.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    if amplitude.len() != report.geometry.site_count() {
        return Err(Error::GeometryMismatch("amplitude length differs from the site count".into()));
    }
    if !(options.inner >= T::zero() && options.outer >= options.inner) {
        return Err(Error::InvalidParameter("annulus needs 0 <= inner <= outer".into()));
    }
    let h = report.geometry.spacing();
    let dist = distance_to_zero_set(report, options.outer);
    let (lo, hi) = (options.inner * h, options.outer * h);
    let samples: Vec<(T, T)> = dist
        .iter()
        .zip(amplitude)
        .filter(|&(&d, &a)| d >= lo && d <= hi && d > T::zero() && a > T::zero())
        .map(|(&d, &a)| (d.ln(), a.ln()))
        .collect();
    if samples.len() < options.min_samples {
        return Err(Error::InsufficientSamples { found: samples.len(), needed: options.min_samples });
    }
    let count = T::from_usize(samples.len()).unwrap();
    let mx = samples.iter().map(|s| s.0).sum::<T>() / count;
    let my = samples.iter().map(|s| s.1).sum::<T>() / count;
    let sxx: T = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
    let sxy: T = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
    let syy: T = samples.iter().map(|s| (s.1 - my).powi(2)).sum();
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let r_squared = if sxx > T::zero() && syy > T::zero() { (sxy * sxy) / (sxx * syy) } else { T::zero() };
    if !(r_squared >= options.min_r_squared) {
        return Err(Error::PoorFit { r_squared: r_squared.as_f64(), threshold: options.min_r_squared.as_f64() });
    }
    Ok(HolderFit { exponent: slope, r_squared, samples: samples.len() })
}
