use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gsw_core::fueter::{
    default_threshold, holder_exponent, horizontal_fueter_residual, z2_monodromy, zero_set, zero_set_class,
    MonodromyEntry, MonodromyOptions,
};
use gsw_core::lattice::{chern_vector, GaugeField, SpinorField};
use gsw_core::solver::init::{constant_state, random_state};
use gsw_core::solver::{continue_alpha_with_observer, solve_with_observer, SolveStatus};
use gsw_core::Snapshot;

use crate::check::{render_table, run_all, CheckSettings};
use crate::config::{background, read_matching_snapshot, AnalysisConfig, InitKind, ResolvedRun};
use crate::error::{CliError, CliResult, Exit};
use crate::output::{ensure_dir, float, line_plot_svg, write_text, CsvTable, Manifest};

fn say(quiet: bool, text: impl AsRef<str>) {
    if !quiet {
        println!("{}", text.as_ref());
    }
}

fn initial_state(run: &ResolvedRun) -> CliResult<(GaugeField<f64>, SpinorField<f64>)> {
    let (g, n) = (run.geometry, run.config.n);
    Ok(match run.config.init.kind {
        InitKind::Random => random_state(g, n, run.config.init.link_amplitude.unwrap_or(0.0), run.seed),
        InitKind::Constant => constant_state(g, n),
        InitKind::Snapshot => {
            let path = run.config.init.path.as_ref().expect("validated");
            let snap = read_matching_snapshot(path, &g, n)?;
            (snap.a, snap.psi)
        }
    })
}

fn zero_cell_count(psi: &SpinorField<f64>, analysis: &AnalysisConfig) -> usize {
    let amp = psi.amplitude();
    let delta = analysis.delta.unwrap_or_else(|| default_threshold(&amp)).max(f64::MIN_POSITIVE);
    amp.iter().filter(|&&v| v < delta).count()
}

/// One solve at the first schedule rung.
pub fn solve(run: &ResolvedRun, quiet: bool) -> CliResult<()> {
    let start = Instant::now();
    let b = background(run)?;
    let (a0, psi0) = initial_state(run)?;
    let alpha = run.config.schedule.alpha[0];
    ensure_dir(&run.out_dir)?;

    let mut table = CsvTable::create(&run.out_dir.join("diagnostics.csv"), &["iter", "energy", "step", "min_amp"])?;
    let mut write_error = None;
    let report = solve_with_observer(&a0, &b, &psi0, alpha, &run.options, &mut |r| {
        if write_error.is_none() {
            let row = [r.iteration.to_string(), float(r.energy), float(r.step), float(r.min_amplitude)];
            write_error = table.row(&row).err();
        }
    })
    .map_err(|e| CliError::solver(format!("solve: {e}")))?;
    if let Some(e) = write_error {
        return Err(e);
    }
    table.finish()?;

    let snapshot = Snapshot::new(alpha, report.a.clone(), b, report.psi.clone())
        .map_err(|e| CliError::solver(format!("snapshot: {e}")))?;
    let snap_path = run.out_dir.join("snapshot.gsw");
    snapshot.write(&snap_path).map_err(|e| CliError::io(&snap_path, e))?;

    let failed = report.failed(&run.options);
    let manifest = Manifest {
        command: "solve",
        status: if failed { "failed" } else { "ok" },
        wall_time: start.elapsed(),
        config: &run.config,
        artifacts: vec!["snapshot.gsw".into(), "diagnostics.csv".into(), "manifest.toml".into()],
        extra: vec![
            ("solver_status", report.status.as_str().into()),
            ("iterations", (report.iterations as i64).into()),
            ("final_energy", report.final_energy().into()),
            ("low_amplitude_iterates", (report.low_amplitude_iterates as i64).into()),
        ],
    };
    manifest.write(&run.out_dir)?;

    say(
        quiet,
        format!(
            "solve: alpha = {alpha}, {} after {} iterations, energy = {:.6e}, min|Psi| = {:.6e}",
            report.status.as_str(),
            report.iterations,
            report.final_energy(),
            report.psi.min_amplitude()
        ),
    );
    if failed {
        return Err(CliError::solver(format!(
            "solver ended with {} after {} iterations (energy {:.6e})",
            report.status.as_str(),
            report.iterations,
            report.final_energy()
        )));
    }
    Ok(())
}

/// The full `α`-ladder with per-rung snapshots, a summary table and a plot.
pub fn continuation(run: &ResolvedRun, quiet: bool) -> CliResult<()> {
    let start = Instant::now();
    let b = background(run)?;
    let (a0, psi0) = initial_state(run)?;
    let schedule = &run.config.schedule.alpha;
    ensure_dir(&run.out_dir)?;

    let mut diag = CsvTable::create(
        &run.out_dir.join("diagnostics.csv"),
        &["rung", "iter", "energy", "step", "min_amp"],
    )?;
    let mut write_error = None;
    let outcome = continue_alpha_with_observer(schedule, &a0, &b, &psi0, &run.options, &mut |rung, r| {
        if write_error.is_none() {
            let row = [
                (rung + 1).to_string(),
                r.iteration.to_string(),
                float(r.energy),
                float(r.step),
                float(r.min_amplitude),
            ];
            write_error = diag.row(&row).err();
        }
    })
    .map_err(|e| CliError::solver(format!("continue: {e}")))?;
    if let Some(e) = write_error {
        return Err(e);
    }
    diag.finish()?;

    let mut summary = CsvTable::create(
        &run.out_dir.join("summary.csv"),
        &["alpha", "epsilon", "energy", "residual", "min_amp", "zero_cells", "status", "iterations"],
    )?;
    let mut artifacts = Vec::new();
    let mut points = Vec::new();
    for (k, rung) in outcome.rungs.iter().enumerate() {
        let name = format!("rung_{:03}.gsw", k + 1);
        let path = run.out_dir.join(&name);
        Snapshot::new(rung.alpha, rung.a.clone(), b.clone(), rung.psi.clone())
            .and_then(|s| s.write(&path))
            .map_err(|e| CliError::io(&path, e))?;
        artifacts.push(name);
        summary.row(&[
            float(rung.alpha),
            float(rung.epsilon),
            float(rung.energy),
            float(rung.residual_norm),
            float(rung.min_amplitude),
            zero_cell_count(&rung.psi, &run.config.analysis).to_string(),
            rung.status.as_str().to_string(),
            rung.iterations.to_string(),
        ])?;
        points.push((rung.epsilon, rung.min_amplitude));
        say(
            quiet,
            format!(
                "rung {}: alpha = {}, {} after {} iterations, energy = {:.6e}, min|Psi| = {:.6e}",
                k + 1,
                rung.alpha,
                rung.status.as_str(),
                rung.iterations,
                rung.energy,
                rung.min_amplitude
            ),
        );
    }
    summary.finish()?;
    let svg = line_plot_svg("min |Psi| along the continuation", "epsilon = tan(alpha)", "min |Psi|", &points);
    write_text(&run.out_dir.join("min_amplitude.svg"), &svg)?;
    artifacts.extend(["diagnostics.csv", "summary.csv", "min_amplitude.svg", "manifest.toml"].map(String::from));

    let mut extra = vec![("rungs_completed", (outcome.rungs.len() as i64).into())];
    if let Some(k) = outcome.failed_rung {
        extra.push(("failed_rung", ((k + 1) as i64).into()));
    }
    let manifest = Manifest {
        command: "continue",
        status: if outcome.failed_rung.is_some() { "partial" } else { "ok" },
        wall_time: start.elapsed(),
        config: &run.config,
        artifacts,
        extra,
    };
    manifest.write(&run.out_dir)?;

    if let Some(k) = outcome.failed_rung {
        let rung = &outcome.rungs[k];
        return Err(CliError::new(
            Exit::PartialContinuation,
            format!(
                "rung {} (alpha = {}) ended with {} after {} iterations; artifacts of rungs 1..{} kept",
                k + 1,
                rung.alpha,
                rung.status.as_str(),
                rung.iterations,
                k
            ),
        ));
    }
    debug_assert!(outcome.rungs.iter().all(|r| r.status != SolveStatus::LineSearchFailure));
    Ok(())
}

fn quoted(text: impl std::fmt::Display) -> String {
    format!("\"{}\"", text.to_string().replace('\\', "\\\\").replace('"', "\\\""))
}

/// Zero-set analysis of a snapshot; writes `report.txt` and returns its path.
pub fn analyze(snapshot: &Path, analysis: &AnalysisConfig, out: Option<PathBuf>, quiet: bool) -> CliResult<PathBuf> {
    let snap = Snapshot::read(snapshot).map_err(|e| CliError::snapshot(format!("{}: {e}", snapshot.display())))?;
    let g = *snap.geometry();
    let amp = snap.psi.amplitude();
    let delta = analysis.delta.unwrap_or_else(|| default_threshold(&amp)).max(f64::MIN_POSITIVE);
    let mut report = zero_set(&g, &amp, delta).map_err(|e| CliError::config(format!("zero set: {e}")))?;
    let mut notes = String::new();

    match holder_exponent(&amp, &report, &analysis.holder_options()) {
        Ok(fit) => report.holder = Some(fit),
        Err(e) => {
            let _ = writeln!(notes, "holder.error = {}", quoted(e));
        }
    }

    let loop_options = MonodromyOptions {
        delta,
        mu_tolerance: analysis.loop_mu_tolerance,
        max_step_angle: analysis.max_step_angle,
    };
    for lp in &analysis.loops {
        match z2_monodromy(&snap.psi, &lp.sites, &loop_options) {
            Ok((sign, max_step_angle)) => {
                report.monodromies.push(MonodromyEntry { loop_id: lp.id.clone(), sign, max_step_angle })
            }
            Err(e) => {
                let _ = writeln!(notes, "monodromy.{}.error = {}", lp.id, quoted(e));
            }
        }
    }

    match analysis
        .component_data(report.components.len())
        .and_then(|data| zero_set_class(&report, &data).map_err(|e| e.to_string()))
    {
        Ok(class) => report.class = Some(class),
        Err(e) => {
            let _ = writeln!(notes, "class.error = {}", quoted(e));
        }
    }

    let mut text = String::new();
    let _ = writeln!(text, "snapshot = {}", quoted(snapshot.display()));
    let _ = writeln!(text, "alpha = {:e}", snap.alpha);
    let _ = writeln!(text, "n = {}", snap.psi.n());
    let _ = writeln!(text, "max_amplitude = {:e}", amp.iter().copied().fold(0.0, f64::max));
    let _ = writeln!(text, "min_amplitude = {:e}", amp.iter().copied().fold(f64::INFINITY, f64::min));
    let c1 = chern_vector(&snap.a);
    let _ = writeln!(text, "chern = [{}, {}, {}]", c1[0], c1[1], c1[2]);
    match horizontal_fueter_residual(&snap.a, &snap.b, &snap.psi, analysis.mu_tolerance) {
        Ok((_, norm)) => {
            let _ = writeln!(text, "horizontal_residual = {norm:e}");
        }
        Err(e) => {
            let _ = writeln!(text, "horizontal_residual = none");
            let _ = writeln!(notes, "horizontal_residual.error = {}", quoted(e));
        }
    }
    text.push_str(&report.to_text());
    text.push_str(&notes);

    let dir = match out {
        Some(d) => d,
        None => snapshot.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")),
    };
    ensure_dir(&dir)?;
    let path = dir.join("report.txt");
    write_text(&path, &text)?;
    say(
        quiet,
        format!(
            "analyze: {} zero cells in {} components (delta = {delta:e}); report at {}",
            report.cells.len(),
            report.components.len(),
            path.display()
        ),
    );
    Ok(path)
}

pub fn check(settings: &CheckSettings, quiet: bool) -> CliResult<()> {
    let results = run_all(settings);
    let table = render_table(&results);
    if !quiet {
        print!("{table}");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        say(quiet, format!("all {} checks passed", results.len()));
        Ok(())
    } else {
        if quiet {
            eprint!("{table}");
        }
        Err(CliError::new(Exit::CheckFailed, format!("failed checks: {}", failed.join(", "))))
    }
}
