//! Property suite behind `gsw check`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::time::{Duration, Instant};

use gsw_core::fueter::{
    fixtures, holder_exponent, horizontal_projection, z2_monodromy, zero_set, zero_set_class, ComponentData,
    HolderOptions, MonodromyOptions, Orientation,
};
use gsw_core::lattice::{gauge_transform, l2_inner, BackgroundField, GaugeField, LatticeGeometry, Plane, SpinorField};
use gsw_core::quat::{apply_complex_structure, killing_field, moment_map, Axis, ImaginaryTriple, Quaternion, SpinorValue};
use gsw_core::solver::init::{constant_state, paired_value, seeded_rng};
use gsw_core::solver::{blowup_residual, dirac_residual, energy, energy_gradient_unprojected, rescale, sw_residual};
use gsw_core::Snapshot;
use rand::Rng;

type Q = Quaternion<f64>;
type MomentMap = fn(&SpinorValue<f64>) -> ImaginaryTriple<f64>;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    /// Largest error over all samples, in the unit named by `measure`.
    pub measured: f64,
    pub tolerance: f64,
    pub measure: &'static str,
    pub samples: usize,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.measured.is_finite() && self.measured < self.tolerance
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckSettings {
    pub seed: u64,
    /// Test hook: evaluate the algebraic moment-map identities with `½Σψ j ψ̄`.
    pub perturb_moment_map: bool,
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self { seed: 0x5eed, perturb_moment_map: false }
    }
}

fn perturbed_moment_map(psi: &SpinorValue<f64>) -> ImaginaryTriple<f64> {
    let mut acc = Q::zero();
    for &q in &psi.components {
        acc += q * Q::j() * q.conj();
    }
    ImaginaryTriple::from_quaternion(acc).scale(0.5)
}

fn rand_q<R: Rng>(rng: &mut R) -> Q {
    Q::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

fn rand_spinor<R: Rng>(rng: &mut R, n: usize) -> SpinorValue<f64> {
    SpinorValue::new((0..n).map(|_| rand_q(rng)).collect())
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// Left-multiplication matrix of `p` acting on `(w, x, y, z)`.
fn left_matrix(p: Q) -> [[f64; 4]; 4] {
    [
        [p.w, -p.x, -p.y, -p.z],
        [p.x, p.w, -p.z, p.y],
        [p.y, p.z, p.w, -p.x],
        [p.z, -p.y, p.x, p.w],
    ]
}

fn matrix_product(p: Q, q: Q) -> Q {
    let m = left_matrix(p);
    let v = q.to_array();
    Q::from_array([0, 1, 2, 3].map(|r| (0..4).map(|c| m[r][c] * v[c]).sum()))
}

fn spinor_diff(a: &SpinorValue<f64>, b: &SpinorValue<f64>) -> f64 {
    (a - b).norm()
}

struct Runner {
    results: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, name: &'static str, tolerance: f64, measure: &'static str, body: impl FnOnce() -> (f64, usize)) {
        let start = Instant::now();
        let (measured, samples) = body();
        self.results.push(CheckResult { name, measured, tolerance, measure, samples, elapsed: start.elapsed() });
    }
}

pub const ALGEBRA_SAMPLES: usize = 1000;

/// Quaternion and complex-structure identities plus the moment-map identities.
pub fn algebra_checks(settings: &CheckSettings) -> Vec<CheckResult> {
    let mm: MomentMap = if settings.perturb_moment_map { perturbed_moment_map } else { moment_map };
    let mut r = Runner { results: Vec::new() };
    let seed = settings.seed;

    r.run("quaternion_unit_relations", 1e-12, "abs", || {
        let (i, j, k, one) = (Q::i(), Q::j(), Q::k(), Q::one());
        let pairs = [
            (i * i, -one),
            (j * j, -one),
            (k * k, -one),
            (i * j * k, -one),
            (i * j, k),
            (j * k, i),
            (k * i, j),
            (j * i, -k),
        ];
        (pairs.iter().map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max), pairs.len())
    });

    r.run("hamilton_product_vs_matrix", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|_| {
                let (p, q) = (rand_q(&mut rng), rand_q(&mut rng));
                rel((p * q - matrix_product(p, q)).norm(), p.norm() * q.norm())
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    r.run("quaternion_norm_and_associativity", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 1);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|_| {
                let (p, q, s) = (rand_q(&mut rng), rand_q(&mut rng), rand_q(&mut rng));
                let scale = p.norm() * q.norm();
                let norm = rel(((p * q).norm() - scale).abs(), scale);
                let assoc = rel(((p * q) * s - p * (q * s)).norm(), scale * s.norm());
                let conj = rel(((p * q).conj() - q.conj() * p.conj()).norm(), scale);
                norm.max(assoc).max(conj)
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    r.run("complex_structure_relations", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 2);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|t| {
                let v = rand_spinor(&mut rng, 1 + t % 4);
                let i = |ax, v: &SpinorValue<f64>| apply_complex_structure(ax, v);
                let scale = v.norm();
                let mut worst: f64 = 0.0;
                for ax in Axis::ALL {
                    worst = worst.max(spinor_diff(&i(ax, &i(ax, &v)), &v.scale(-1.0)));
                }
                let (x1, x2, x3) = (Axis::X1, Axis::X2, Axis::X3);
                worst = worst.max(spinor_diff(&i(x1, &i(x2, &v)), &i(x3, &v)));
                worst = worst.max(spinor_diff(&i(x2, &i(x3, &v)), &i(x1, &v)));
                worst = worst.max(spinor_diff(&i(x3, &i(x1, &v)), &i(x2, &v)));
                rel(worst, scale)
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    r.run("moment_map_homogeneity", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 3);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|t| {
                let v = rand_spinor(&mut rng, 1 + t % 4);
                let s: f64 = rng.random_range(-5.0..5.0);
                let lhs = mm(&v.scale(s));
                let rhs = mm(&v).scale(s * s);
                rel((lhs - rhs).norm(), s * s * v.norm_sqr())
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    r.run("moment_map_u1_invariance", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 4);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|t| {
                let v = rand_spinor(&mut rng, 1 + t % 4);
                let theta: f64 = rng.random_range(-10.0..10.0);
                rel((mm(&v.u1_act(theta)) - mm(&v)).norm(), v.norm_sqr())
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    // dμ_a(v) = −⟨I_a K(Ψ), v⟩ with K(Ψ) = Ψ i; μ is quadratic, so the central
    // difference is exact up to roundoff.
    r.run("moment_map_generates_u1_action", 1e-10, "rel", || {
        let mut rng = seeded_rng(seed + 5);
        let worst = (0..ALGEBRA_SAMPLES)
            .map(|t| {
                let n = 1 + t % 4;
                let (p, v) = (rand_spinor(&mut rng, n), rand_spinor(&mut rng, n));
                let step = 1e-3;
                let plus = mm(&(&p + &v.scale(step)));
                let minus = mm(&(&p + &v.scale(-step)));
                let dmu = (plus - minus).scale(0.5 / step);
                let k = killing_field(1.0, &p);
                let mut worst: f64 = 0.0;
                for ax in Axis::ALL {
                    let expect = -apply_complex_structure(ax, &k).dot(&v);
                    worst = worst.max((dmu.component(ax) - expect).abs());
                }
                rel(worst, p.norm() * v.norm())
            })
            .fold(0.0, f64::max);
        (worst, ALGEBRA_SAMPLES)
    });

    r.results
}

struct Instance {
    a: GaugeField<f64>,
    b: BackgroundField<f64>,
    psi: SpinorField<f64>,
}

fn random_instance<R: Rng>(rng: &mut R, n: usize, amplitude: f64) -> Instance {
    let g = LatticeGeometry::new(4, 1.0 + rng.random_range(0.0..2.0)).expect("valid geometry");
    Instance {
        a: GaugeField::random(g, amplitude, rng),
        b: BackgroundField::random(g, n, rng),
        psi: SpinorField::random_normal(g, n, rng),
    }
}

pub const RESCALE_SAMPLES: usize = 100;
pub const GAUGE_SAMPLES: usize = 100;
pub const GRADIENT_DIRECTIONS: usize = 50;

/// `(a, u/r)` at `ε = 1/r` against `(1/r)·DΨ` and `(1/r²)·(F − μ(u))`, componentwise.
pub fn rescale_identity(seed: u64) -> (f64, usize) {
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for t in 0..RESCALE_SAMPLES {
        let inst = random_instance(&mut rng, 1 + t % 3, 0.6);
        let r: f64 = 10f64.powf(rng.random_range(-1.0..2.0));
        let (d2, c2) = sw_residual(&inst.a, &inst.b, &inst.psi, 1.0).expect("compatible");
        let (a3, u3, eps) = rescale(&inst.a, &inst.psi, r).expect("positive r");
        let (d3, c3) = sw_residual(&a3, &inst.b, &u3, eps).expect("compatible");
        let dscale = d2.data().iter().map(|q| q.norm()).fold(0.0, f64::max) / r;
        for (x, y) in d3.data().iter().zip(d2.data()) {
            worst = worst.max(rel((*x - y.scale(1.0 / r)).norm(), dscale));
        }
        let cscale = c2.max_abs() / (r * r);
        for (x, y) in c3.values().iter().zip(c2.values()) {
            worst = worst.max(rel((*x - y.scale(1.0 / (r * r))).norm(), cscale));
        }
    }
    (worst, RESCALE_SAMPLES)
}

/// Energy and residual norms before and after random gauge transformations.
pub fn gauge_invariance(seed: u64) -> (f64, usize) {
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for t in 0..GAUGE_SAMPLES {
        let inst = random_instance(&mut rng, 1 + t % 3, 0.4);
        let g: Vec<f64> =
            (0..inst.a.geometry().site_count()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let alpha: f64 = rng.random_range(0.0..FRAC_PI_2);
        let eps: f64 = rng.random_range(0.0..3.0);
        let (a2, p2) = gauge_transform(&g, &inst.a, &inst.psi).expect("compatible");
        let quantities = |a: &GaugeField<f64>, p: &SpinorField<f64>| {
            let blow = blowup_residual(a, &inst.b, p, alpha).expect("valid");
            let (d, c) = sw_residual(a, &inst.b, p, eps).expect("valid");
            [energy(a, &inst.b, p, alpha).expect("valid"), blow.dirac.norm(), blow.curvature.norm(), blow.norm(), d.norm(), c.norm()]
        };
        for (x, y) in quantities(&inst.a, &inst.psi).iter().zip(quantities(&a2, &p2)) {
            worst = worst.max(rel((x - y).abs(), x.abs()));
        }
    }
    (worst, GAUGE_SAMPLES)
}

/// Analytic directional derivatives against central differences with step `1e−5`
/// on a `4³`, `n = 2` instance.
pub fn gradient_check(seed: u64) -> (f64, usize) {
    let mut rng = seeded_rng(seed);
    let inst = random_instance(&mut rng, 2, 0.4);
    let alpha = 0.6;
    let grad = energy_gradient_unprojected(&inst.a, &inst.b, &inst.psi, alpha).expect("valid");
    let step = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..GRADIENT_DIRECTIONS {
        let dl: Vec<f64> = (0..inst.a.angles().len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dp = SpinorField::random_normal(*inst.psi.geometry(), 2, &mut rng);
        let e = |t: f64| energy(&inst.a.add_scaled(&dl, t), &inst.b, &inst.psi.add_scaled(&dp, t), alpha).expect("valid");
        let fd = (e(step) - e(-step)) / (2.0 * step);
        let an = grad.dot(&dl, &dp);
        worst = worst.max(rel((fd - an).abs(), an.abs()));
    }
    (worst, GRADIENT_DIRECTIONS)
}

/// Energy of the constant solution `(q₀, q₀j)/‖·‖`, `a = 0`, `B = id` at `α ∈ {π/4, π/8, 0}`.
pub fn exact_solution_energy() -> (f64, usize) {
    let g = LatticeGeometry::new(4, 2.0).expect("valid geometry");
    let q0 = Q::new(0.3, -0.5, 0.7, 0.1);
    let psi = SpinorField::constant(g, &paired_value(q0, 2)).normalized();
    let b = BackgroundField::identity(g, 2);
    let a = GaugeField::zero(g);
    let alphas = [FRAC_PI_4, FRAC_PI_8, 0.0];
    let worst = alphas.iter().map(|&al| energy(&a, &b, &psi, al).expect("valid")).fold(0.0, f64::max);
    (worst, alphas.len())
}

pub fn run_all(settings: &CheckSettings) -> Vec<CheckResult> {
    let mut r = Runner { results: algebra_checks(settings) };
    let seed = settings.seed;

    r.run("rescale_identity", 1e-12, "rel", || rescale_identity(seed + 10));
    r.run("gauge_invariance", 1e-12, "rel", || gauge_invariance(seed + 11));
    r.run("gradient_finite_difference", 1e-6, "rel", || gradient_check(seed + 12));

    r.run("dirac_symmetry", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 13);
        let mut worst: f64 = 0.0;
        for t in 0..10 {
            let inst = random_instance(&mut rng, 1 + t % 3, 1.0);
            let phi = SpinorField::random_normal(*inst.psi.geometry(), inst.psi.n(), &mut rng);
            let lhs = l2_inner(&dirac_residual(&inst.a, &inst.b, &phi).unwrap(), &inst.psi).unwrap();
            let rhs = l2_inner(&phi, &dirac_residual(&inst.a, &inst.b, &inst.psi).unwrap()).unwrap();
            worst = worst.max(rel((lhs - rhs).abs(), lhs.abs().max(rhs.abs())));
        }
        (worst, 10)
    });

    r.run("exact_solution_energy", 1e-24, "abs", exact_solution_energy);

    r.run("snapshot_round_trip", 0.5, "mismatched words", || {
        let mut rng = seeded_rng(seed + 14);
        let inst = random_instance(&mut rng, 2, 1.0);
        let snap = Snapshot::new(0.3, inst.a, inst.b, inst.psi).unwrap();
        let back = Snapshot::from_bytes(&snap.to_bytes());
        let mismatched = match back {
            Ok(back) => snap.to_bytes().iter().zip(back.to_bytes()).filter(|(x, y)| **x != *y).count() as f64
                + if back == snap { 0.0 } else { 1.0 },
            Err(_) => f64::INFINITY,
        };
        (mismatched, 1)
    });

    r.run("horizontal_projection", 1e-12, "rel", || {
        let mut rng = seeded_rng(seed + 15);
        let g = LatticeGeometry::new(4, 2.0).unwrap();
        let mut psi = SpinorField::zero(g, 2);
        for s in 0..g.site_count() {
            let q = rand_q(&mut rng);
            psi.set_value(s, &SpinorValue::new(vec![q, q * Q::j() * Q::phase(rng.random_range(-3.0..3.0))]));
        }
        let a = GaugeField::random(g, 1.0, &mut rng);
        let b = BackgroundField::random(g, 2, &mut rng);
        let d = dirac_residual(&a, &b, &psi).unwrap();
        let h = horizontal_projection(&psi, &d).unwrap();
        let hh = horizontal_projection(&psi, &h).unwrap();
        let kicked = d.map_sites(|s, v, out| {
            let k = killing_field(0.8, &psi.value(s));
            for (o, (&x, &y)) in out.iter_mut().zip(v.iter().zip(&k.components)) {
                *o = x + y;
            }
        });
        let hk = horizontal_projection(&psi, &kicked).unwrap();
        let scale = d.norm();
        let contraction = (h.norm() - scale).max(0.0);
        let worst = rel(hh.add_scaled(&h, -1.0).norm(), scale)
            .max(rel(hk.add_scaled(&h, -1.0).norm(), scale))
            .max(rel(contraction, scale));
        (worst, 1)
    });

    r.run("holder_fixture", 0.05, "abs", || {
        let g = LatticeGeometry::<f64>::new(16, 1.0).unwrap();
        let mut worst: f64 = 0.0;
        for gamma in [0.5, 1.0] {
            let amp = fixtures::line_distance_amplitude(&g, Axis::X3, [8.0, 8.0], gamma);
            let fit = zero_set(&g, &amp, 1e-9)
                .and_then(|z| holder_exponent(&amp, &z, &HolderOptions::default()))
                .map(|f| (f.exponent - gamma).abs());
            worst = worst.max(fit.unwrap_or(f64::INFINITY));
        }
        (worst, 2)
    });

    r.run("monodromy_fixture", 0.5, "wrong signs", || {
        let g = LatticeGeometry::new(16, 1.0).unwrap();
        let psi = fixtures::half_winding_field(&g, [8.0, 8.0], 1);
        let opts = MonodromyOptions::new(1e-3);
        let cases = [
            (fixtures::square_loop(&g, [6, 6, 0], 4, Plane::P12), -1),
            (fixtures::square_loop(&g, [10, 9, 3], 3, Plane::P12), 1),
        ];
        let wrong = cases
            .iter()
            .filter(|(path, want)| z2_monodromy(&psi, path, &opts).map(|m| m.0).ok() != Some(*want as i8))
            .count();
        (wrong as f64, cases.len())
    });

    r.run("zero_set_class_fixture", 0.5, "abs", || {
        let g = LatticeGeometry::new(12, 1.0).unwrap();
        let amp = fixtures::line_distance_amplitude(&g, Axis::X1, [6.0, 6.0], 1.0);
        let class = zero_set(&g, &amp, 1e-9)
            .and_then(|z| zero_set_class(&z, &[ComponentData::new(2, Orientation::Positive)]));
        let err = match class {
            Ok(k) => k.iter().zip([2, 0, 0]).map(|(x, y)| (x - y).abs()).sum::<i64>() as f64,
            Err(_) => f64::INFINITY,
        };
        (err, 1)
    });

    r.run("constant_state_is_exact", 1e-24, "abs", || {
        let g = LatticeGeometry::new(4, 1.0).unwrap();
        let (a, psi) = constant_state(g, 2);
        (energy(&a, &BackgroundField::identity(g, 2), &psi, FRAC_PI_4).unwrap(), 1)
    });

    r.results
}

pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = format!(
        "{:<34} {:>10} {:>12} {:>17} {:>8} {:>9}  {}\n",
        "check", "tolerance", "measured", "measure", "samples", "time_ms", "result"
    );
    for r in results {
        out.push_str(&format!(
            "{:<34} {:>10.1e} {:>12.3e} {:>17} {:>8} {:>9.1}  {}\n",
            r.name,
            r.tolerance,
            r.measured,
            r.measure,
            r.samples,
            r.elapsed.as_secs_f64() * 1e3,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}
