use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::quat::Axis;
use crate::scalar::Real;

/// A connected piece of the thresholded set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroComponent {
    /// Member sites in ascending order.
    pub sites: Vec<usize>,
    /// Rank of the lattice of periods the component picks up in the universal cover.
    pub period_rank: usize,
    /// Primitive generator of the period lattice when the rank is 1, with its first
    /// nonzero entry positive; `[0, 0, 0]` otherwise.
    pub winding: [i64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderFit<T> {
    pub exponent: T,
    pub r_squared: T,
    pub samples: usize,
}

/// Loop holonomy in `ℍ/±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyEntry<T> {
    pub loop_id: String,
    pub sign: i8,
    pub max_step_angle: T,
}

/// Thresholded zero set and the diagnostics computed on it.
///
/// Each site is the center of one dual cell, so a cell belongs to the set exactly
/// when its site amplitude is below `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetReport<T> {
    pub geometry: LatticeGeometry<T>,
    pub threshold: T,
    /// Ascending site indices.
    pub cells: Vec<usize>,
    pub components: Vec<ZeroComponent>,
    pub holder: Option<HolderFit<T>>,
    pub monodromies: Vec<MonodromyEntry<T>>,
    pub class: Option<[i64; 3]>,
}

impl<T: Real> ZeroSetReport<T> {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Component index of every site, `None` off the set.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.geometry.site_count()];
        for (c, comp) in self.components.iter().enumerate() {
            for &s in &comp.sites {
                labels[s] = Some(c);
            }
        }
        labels
    }

    /// `key = value` lines; arrays are bracketed and comma separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = &self.geometry;
        let _ = writeln!(out, "sites_per_axis = {}", g.sites_per_axis());
        let _ = writeln!(out, "length = {:e}", g.length().as_f64());
        let _ = writeln!(out, "threshold = {:e}", self.threshold.as_f64());
        let _ = writeln!(out, "cell_count = {}", self.cells.len());
        let _ = writeln!(out, "cells = {}", array(&self.cells));
        let _ = writeln!(out, "component_count = {}", self.components.len());
        for (c, comp) in self.components.iter().enumerate() {
            let _ = writeln!(out, "component.{c}.size = {}", comp.sites.len());
            let _ = writeln!(out, "component.{c}.period_rank = {}", comp.period_rank);
            let _ = writeln!(out, "component.{c}.winding = {}", array(&comp.winding));
            let _ = writeln!(out, "component.{c}.sites = {}", array(&comp.sites));
        }
        match &self.holder {
            Some(fit) => {
                let _ = writeln!(out, "holder.exponent = {:e}", fit.exponent.as_f64());
                let _ = writeln!(out, "holder.r_squared = {:e}", fit.r_squared.as_f64());
                let _ = writeln!(out, "holder.samples = {}", fit.samples);
            }
            None => {
                let _ = writeln!(out, "holder = none");
            }
        }
        let _ = writeln!(out, "monodromy_count = {}", self.monodromies.len());
        for m in &self.monodromies {
            let _ = writeln!(out, "monodromy.{}.sign = {}", m.loop_id, m.sign);
            let _ = writeln!(out, "monodromy.{}.max_step_angle = {:e}", m.loop_id, m.max_step_angle.as_f64());
        }
        match self.class {
            Some(k) => {
                let _ = writeln!(out, "class = {}", array(&k));
            }
            None => {
                let _ = writeln!(out, "class = none");
            }
        }
        out
    }
}

fn array<V: std::fmt::Display>(values: &[V]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Cells with amplitude below `delta`, labelled into 6-connected periodic components.
///
/// Components are numbered in order of their smallest site index and explored
/// breadth-first, so the labelling is deterministic.
pub fn zero_set<T: Real>(geometry: &LatticeGeometry<T>, amplitude: &[T], delta: T) -> Result<ZeroSetReport<T>> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    if amplitude.len() != geometry.site_count() {
        return Err(Error::GeometryMismatch(format!(
            "{} amplitudes for {} sites",
            amplitude.len(),
            geometry.site_count()
        )));
    }
    let inside: Vec<bool> = amplitude.iter().map(|&v| v < delta).collect();
    let cells: Vec<usize> = (0..inside.len()).filter(|&s| inside[s]).collect();

    let n = geometry.sites_per_axis() as i64;
    let mut label = vec![usize::MAX; inside.len()];
    let mut lift = vec![[0i64; 3]; inside.len()];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for &seed in &cells {
        if label[seed] != usize::MAX {
            continue;
        }
        let id = components.len();
        label[seed] = id;
        lift[seed] = geometry.coords(seed).map(|c| c as i64);
        queue.push_back(seed);
        let mut sites = Vec::new();
        let mut periods = Vec::new();
        while let Some(u) = queue.pop_front() {
            sites.push(u);
            for ax in Axis::ALL {
                for dir in [1i64, -1] {
                    let v = geometry.shift(u, ax, dir);
                    if !inside[v] {
                        continue;
                    }
                    let mut expected = lift[u];
                    expected[ax.index()] += dir;
                    if label[v] == usize::MAX {
                        label[v] = id;
                        lift[v] = expected;
                        queue.push_back(v);
                    } else {
                        let diff = [0, 1, 2].map(|i| (expected[i] - lift[v][i]) / n);
                        if diff != [0, 0, 0] {
                            periods.push(diff);
                        }
                    }
                }
            }
        }
        sites.sort_unstable();
        let (period_rank, winding) = period_lattice(&periods);
        components.push(ZeroComponent { sites, period_rank, winding });
    }

    Ok(ZeroSetReport {
        geometry: *geometry,
        threshold: delta,
        cells,
        components,
        holder: None,
        monodromies: Vec::new(),
        class: None,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rank of the integer span of `periods` and, for rank 1, its normalized generator.
fn period_lattice(periods: &[[i64; 3]]) -> (usize, [i64; 3]) {
    let Some(&first) = periods.first() else {
        return (0, [0; 3]);
    };
    let g = first.iter().fold(0, |acc, &x| gcd(acc, x));
    let unit = first.map(|x| x / g);
    if let Some(&other) = periods.iter().find(|&&p| cross(unit, p) != [0; 3]) {
        let normal = cross(unit, other);
        let rank = if periods.iter().any(|&p| dot(normal, p) != 0) { 3 } else { 2 };
        return (rank, [0; 3]);
    }
    let uu = dot(unit, unit);
    let k = periods.iter().fold(0, |acc, &p| gcd(acc, dot(p, unit) / uu));
    let mut gen = unit.map(|x| x * k);
    if gen.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        gen = gen.map(|x| -x);
    }
    (1, gen)
}
