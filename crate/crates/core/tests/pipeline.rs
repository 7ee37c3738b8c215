use gsw_core::fueter::{default_threshold, fixtures, z2_monodromy, zero_set, MonodromyOptions};
use gsw_core::lattice::{gauge_transform, BackgroundField, LatticeGeometry, Plane};
use gsw_core::solver::init::{random_state, seeded_rng};
use gsw_core::solver::{blowup_residual, continue_alpha, energy, solve, SolveOptions, SolveStatus};
use gsw_core::{Geometry64, Snapshot};
use rand::Rng;

fn short(max_iter: usize) -> SolveOptions<f64> {
    SolveOptions { max_iter, ..SolveOptions::default() }
}

#[test]
fn warm_started_ladder_lowers_each_rung() {
    let g: Geometry64 = LatticeGeometry::new(6, 6.0).unwrap();
    let (a, psi) = random_state(g, 2, 0.4, 31);
    let b = BackgroundField::identity(g, 2);
    let schedule = [1.2, 0.9, 0.5];
    let out = continue_alpha(&schedule, &a, &b, &psi, &short(60)).unwrap();
    assert_eq!(out.failed_rung, None);
    assert_eq!(out.rungs.len(), 3);
    for (k, rung) in out.rungs.iter().enumerate() {
        assert_eq!(rung.alpha, schedule[k]);
        assert!((rung.epsilon - schedule[k].tan()).abs() < 1e-15);
        assert!(rung.energy_trace.windows(2).all(|w| w[1] <= w[0]));
        let start = if k == 0 { &psi } else { &out.rungs[k - 1].psi };
        let start_a = if k == 0 { &a } else { &out.rungs[k - 1].a };
        // warm start: each rung begins where the previous one ended
        let e0 = energy(start_a, &b, &start.normalized(), rung.alpha).unwrap();
        assert!((rung.energy_trace[0] - e0).abs() <= 1e-12 * e0.max(1.0));
        let r = blowup_residual(&rung.a, &b, &rung.psi, rung.alpha).unwrap();
        assert!((r.norm() - rung.residual_norm).abs() <= 1e-12 * r.norm().max(1.0));
    }
}

#[test]
fn descent_commutes_with_gauge() {
    let g: Geometry64 = LatticeGeometry::new(4, 3.0).unwrap();
    let (a, psi) = random_state(g, 2, 0.3, 5);
    let b = BackgroundField::identity(g, 2);
    let mut rng = seeded_rng(6);
    let gauge: Vec<f64> = (0..g.site_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let (a2, psi2) = gauge_transform(&gauge, &a, &psi).unwrap();
    let r1 = solve(&a, &b, &psi, 0.7, &short(15)).unwrap();
    let r2 = solve(&a2, &b, &psi2, 0.7, &short(15)).unwrap();
    assert_eq!(r1.iterations, r2.iterations);
    for (x, y) in r1.energy_trace.iter().zip(&r2.energy_trace) {
        assert!((x - y).abs() <= 1e-10 * x.abs());
    }
    assert!((r1.psi.min_amplitude() - r2.psi.min_amplitude()).abs() < 1e-10);
}

#[test]
fn solved_state_survives_snapshot_and_analysis() {
    let g: Geometry64 = LatticeGeometry::new(6, 4.0).unwrap();
    let (a, psi) = random_state(g, 2, 0.2, 77);
    let b = BackgroundField::identity(g, 2);
    let report = solve(&a, &b, &psi, 0.6, &short(30)).unwrap();
    assert_ne!(report.status, SolveStatus::LineSearchFailure);
    let snap = Snapshot::new(0.6, report.a.clone(), b.clone(), report.psi.clone()).unwrap();
    let back = Snapshot::from_bytes(&snap.to_bytes()).unwrap();
    assert_eq!(back, snap);
    let e = energy(&back.a, &back.b, &back.psi, back.alpha).unwrap();
    assert_eq!(e.to_bits(), report.final_energy().to_bits());
    let amp = back.psi.amplitude();
    let z = zero_set(back.geometry(), &amp, default_threshold(&amp)).unwrap();
    assert_eq!(z.cells.len(), amp.iter().filter(|&&v| v < default_threshold(&amp)).count());
}

#[test]
fn half_winding_sign_is_local_to_the_line() {
    let g: Geometry64 = LatticeGeometry::new(16, 2.0).unwrap();
    let psi = fixtures::half_winding_field(&g, [8.0, 8.0], 1);
    let opts = MonodromyOptions::new(1e-3);
    let sign = |corner: [usize; 3], side: usize| z2_monodromy(&psi, &fixtures::square_loop(&g, corner, side, Plane::P12), &opts).unwrap().0;
    for x3 in [0, 5, 15] {
        assert_eq!(sign([5, 5, x3], 6), -1);
        assert_eq!(sign([7, 7, x3], 2), -1);
    }
    assert_eq!(sign([1, 1, 2], 4), 1);
    // a doubled winding is invisible to a ℤ/2 sign
    let twice = fixtures::half_winding_field(&g, [8.0, 8.0], 2);
    let path = fixtures::square_loop(&g, [5, 5, 0], 6, Plane::P12);
    assert_eq!(z2_monodromy(&twice, &path, &opts).unwrap().0, 1);
}
