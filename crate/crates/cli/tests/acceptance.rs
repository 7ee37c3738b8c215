//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use gsw_cli::check::{
    algebra_checks, exact_solution_energy, gauge_invariance, gradient_check, rescale_identity, CheckSettings,
    ALGEBRA_SAMPLES, GAUGE_SAMPLES, GRADIENT_DIRECTIONS, RESCALE_SAMPLES,
};
use gsw_core::fueter::{
    fixtures, holder_exponent, horizontal_fueter_residual, horizontal_projection, z2_monodromy, zero_set,
    zero_set_class, ComponentData, HolderOptions, MonodromyOptions, Orientation,
};
use gsw_core::lattice::{chern_vector, BackgroundField, GaugeField, LatticeGeometry, Plane, SpinorField};
use gsw_core::quat::{apply_complex_structure, killing_field, Axis, Quaternion, SpinorValue};
use gsw_core::solver::init::{constant_state, random_state, seeded_rng};
use gsw_core::solver::{dirac_residual, solve, SolveOptions, SolveStatus};
use gsw_core::Snapshot;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let results = algebra_checks(&CheckSettings::default());
    let elapsed = start.elapsed();
    let worst = results.iter().map(|r| r.measured).fold(0.0, f64::max);
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    let enough = results.iter().filter(|r| r.name != "quaternion_unit_relations").all(|r| r.samples >= ALGEBRA_SAMPLES);
    outcome(
        failed.is_empty() && enough && elapsed < Duration::from_secs(1),
        format!("{} identities, worst rel err {worst:.2e} (< 1e-12), {:.3} s (< 1 s){}", results.len(), secs(elapsed),
            if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join(", ")) }),
    )
}

fn rescale() -> Outcome {
    let (worst, samples) = rescale_identity(0x5eed + 10);
    outcome(worst < 1e-12 && samples >= RESCALE_SAMPLES, format!("{samples} samples on 4^3, worst rel err {worst:.2e} (< 1e-12)"))
}

fn gauge() -> Outcome {
    let (worst, samples) = gauge_invariance(0x5eed + 11);
    outcome(worst < 1e-12 && samples >= GAUGE_SAMPLES, format!("{samples} transformations, worst rel err {worst:.2e} (< 1e-12)"))
}

fn gradient() -> Outcome {
    let start = Instant::now();
    let (worst, samples) = gradient_check(0x5eed + 12);
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-6 && samples >= GRADIENT_DIRECTIONS && elapsed < Duration::from_secs(10),
        format!("{samples} directions on 4^3, n = 2, worst rel err {worst:.2e} (< 1e-6), {:.3} s (< 10 s)", secs(elapsed)),
    )
}

fn exact_solution() -> Outcome {
    let (worst, _) = exact_solution_energy();
    let g = LatticeGeometry::new(8, 8.0).unwrap();
    let (a, psi) = constant_state(g, 2);
    let b = BackgroundField::identity(g, 2);
    let mut iterations = Vec::new();
    let mut all_converged = true;
    for alpha in [FRAC_PI_4, FRAC_PI_8, 0.0] {
        match solve(&a, &b, &psi, alpha, &SolveOptions::default()) {
            Ok(r) => {
                all_converged &= r.status == SolveStatus::Converged;
                iterations.push(r.iterations);
            }
            Err(_) => all_converged = false,
        }
    }
    outcome(
        worst < 1e-24 && all_converged && iterations.iter().all(|&k| k == 0) && iterations.len() == 3,
        format!("max energy {worst:.2e} (< 1e-24), solve iterations {iterations:?} (all 0, converged)"),
    )
}

fn solver_property() -> Outcome {
    let g = LatticeGeometry::new(8, 8.0).unwrap();
    let (a, psi) = random_state(g, 2, 0.5, 20240611);
    let b = BackgroundField::identity(g, 2);
    let start = Instant::now();
    let report = solve(&a, &b, &psi, FRAC_PI_4, &SolveOptions::default());
    let elapsed = start.elapsed();
    match report {
        Ok(r) => {
            let violations = r.energy_trace.windows(2).filter(|w| w[1] > w[0]).count();
            outcome(
                violations == 0 && elapsed < Duration::from_secs(300) && r.status != SolveStatus::LineSearchFailure,
                format!(
                    "8^3, n = 2: {} after {} iterations, energy {:.4e} -> {:.4e}, {violations} increases, {:.1} s (< 300 s)",
                    r.status.as_str(),
                    r.iterations,
                    r.energy_trace[0],
                    r.final_energy(),
                    secs(elapsed)
                ),
            )
        }
        Err(e) => outcome(false, format!("solve failed: {e}")),
    }
}

fn horizontal() -> Outcome {
    let mut rng = seeded_rng(7);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_vertical: f64 = 0.0;
    let mut worst_mu: f64 = 0.0;
    let trials = 20;
    for t in 0..trials {
        let n = 2 + 2 * (t % 2);
        let g = LatticeGeometry::new(4, rng.random_range(1.0..3.0)).unwrap();
        let mut psi = SpinorField::zero(g, n);
        for s in 0..g.site_count() {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n / 2 {
                let q = Quaternion::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                let phi: f64 = rng.random_range(-3.0..3.0);
                v.push(q);
                v.push(q * Quaternion::j() * Quaternion::phase(phi));
            }
            psi.set_value(s, &SpinorValue::new(v));
        }
        worst_mu = worst_mu.max(psi.moment_map().max_abs());
        let a = GaugeField::random(g, 1.0, &mut rng);
        let b = BackgroundField::random(g, n, &mut rng);
        let d = dirac_residual(&a, &b, &psi).unwrap();
        let Ok((h, hn)) = horizontal_fueter_residual(&a, &b, &psi, 1e-12) else {
            return outcome(false, "moment-map tolerance rejected a level-zero field".into());
        };
        worst_ratio = worst_ratio.max((hn - d.norm()) / d.norm());
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
        let kicked = d.map_sites(|s, v, out| {
            let k = killing_field(1.0, &psi.value(s));
            let mut vertical = k.scale(c[0]);
            for (ax, &ci) in Axis::ALL.iter().zip(&c[1..]) {
                vertical = &vertical + &apply_complex_structure(*ax, &k).scale(ci);
            }
            for ((o, &x), &y) in out.iter_mut().zip(v).zip(&vertical.components) {
                *o = x + y;
            }
        });
        let moved = horizontal_projection(&psi, &kicked).unwrap();
        worst_vertical = worst_vertical.max(moved.add_scaled(&h, -1.0).norm() / d.norm());
    }
    outcome(
        worst_ratio <= 1e-12 && worst_vertical < 1e-12 && worst_mu < 1e-12,
        format!(
            "{trials} level-zero fields (max |mu| {worst_mu:.1e}): (|P D| - |D|)/|D| <= {worst_ratio:.2e}, vertical kick moves P D by {worst_vertical:.2e} (< 1e-12)"
        ),
    )
}

fn degeneration() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let g = LatticeGeometry::new(16, 1.0).unwrap();
    for gamma in [0.5f64, 1.0] {
        let amp = fixtures::line_distance_amplitude(&g, Axis::X3, [8.0, 8.0], gamma);
        let fit = zero_set(&g, &amp, 1e-9).and_then(|z| holder_exponent(&amp, &z, &HolderOptions::default()));
        match fit {
            Ok(f) => {
                pass &= (f.exponent - gamma).abs() <= 0.05;
                notes.push(format!("gamma {gamma} -> {:.4}", f.exponent));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("gamma {gamma}: {e}"));
            }
        }
    }

    let psi = fixtures::half_winding_field(&g, [8.0, 8.0], 1);
    let opts = MonodromyOptions::new(1e-3);
    let around = z2_monodromy(&psi, &fixtures::square_loop(&g, [6, 6, 0], 4, Plane::P12), &opts).map(|m| m.0);
    let contractible: Vec<_> = [([10, 9, 3], 3), ([1, 1, 5], 4), ([11, 2, 9], 2)]
        .iter()
        .map(|&(corner, side)| z2_monodromy(&psi, &fixtures::square_loop(&g, corner, side, Plane::P12), &opts).map(|m| m.0))
        .collect();
    pass &= around.as_ref().ok() == Some(&-1) && contractible.iter().all(|m| m.as_ref().ok() == Some(&1));
    notes.push(format!(
        "monodromy around {} / contractible {}",
        around.map_or("error".into(), |s| s.to_string()),
        contractible.iter().map(|m| m.as_ref().map_or("error".into(), |s| s.to_string())).collect::<Vec<_>>().join(",")
    ));

    let g = LatticeGeometry::new(12, 1.0).unwrap();
    let amp = fixtures::line_distance_amplitude(&g, Axis::X1, [6.0, 6.0], 1.0);
    let class = zero_set(&g, &amp, 1e-9).and_then(|z| zero_set_class(&z, &[ComponentData::new(2, Orientation::Positive)]));
    let c1 = chern_vector(&GaugeField::uniform_flux(g, Plane::P23, 1));
    let expected = c1.map(|c| 2 * c);
    pass &= class.as_ref().ok() == Some(&[2, 0, 0]) && expected == [2, 0, 0];
    notes.push(format!("class {:?} vs 2 c1(L) = {expected:?}", class.map_err(|e| e.to_string())));

    outcome(pass, notes.join("; "))
}

fn io() -> Outcome {
    let mut notes = Vec::new();
    let mut rng = seeded_rng(99);
    let g = LatticeGeometry::new(5, 2.5).unwrap();
    let snap = Snapshot::new(
        0.4,
        GaugeField::random(g, 2.0, &mut rng),
        BackgroundField::random(g, 3, &mut rng),
        SpinorField::random_normal(g, 3, &mut rng),
    )
    .unwrap();
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("state.gsw");
    snap.write(&path).unwrap();
    let back = Snapshot::read(&path).unwrap();
    let bits = |s: &Snapshot| -> Vec<u64> {
        let mut v: Vec<u64> = s.a.angles().iter().map(|x| x.to_bits()).collect();
        v.extend(s.psi.data().iter().flat_map(|q| [q.w, q.x, q.y, q.z]).map(f64::to_bits));
        v
    };
    let round_trip = back == snap && bits(&back) == bits(&snap) && fs::read(&path).unwrap() == snap.to_bytes();
    notes.push(format!("snapshot round trip {}", if round_trip { "bit-exact" } else { "differs" }));

    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "seed = 4\nn = 2\n[geometry]\nsites = 6\nlength = 6.0\n[background]\nsource = \"identity\"\n\
         [schedule]\nalpha = [0.7, 0.3]\n[init]\nkind = \"random\"\nlink_amplitude = 0.4\n[solver]\nmax_iter = 25\n",
    )
    .unwrap();
    let gsw = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_gsw")).args(args).output().unwrap();
    let mut csvs = Vec::new();
    for run in ["one", "two"] {
        let out = dir.path().join(run);
        let res = gsw(&["continue", "--quiet", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        csvs.push((res.status.code(), ["diagnostics.csv", "summary.csv"].map(|f| fs::read(out.join(f)).ok())));
    }
    let identical = csvs[0].0 == Some(0) && csvs[0] == csvs[1] && csvs[0].1.iter().all(Option::is_some);
    notes.push(format!("repeated seeded run CSVs {}", if identical { "identical" } else { "differ" }));

    let check = gsw(&["check", "--quiet"]).status.code();
    notes.push(format!("check exit {check:?}"));
    outcome(round_trip && identical && check == Some(0), notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("algebra suite", algebra),
        ("rescaling identity", rescale),
        ("gauge invariance", gauge),
        ("gradient check", gradient),
        ("exact-solution fixture", exact_solution),
        ("solver monotonicity", solver_property),
        ("horizontal residual", horizontal),
        ("degeneration diagnostics", degeneration),
        ("snapshot and CLI I/O", io),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failures += usize::from(!o.pass);
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
