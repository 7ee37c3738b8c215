//! TOML run configuration.
//!
//! ```toml
//! seed = 7
//! n = 2
//!
//! [geometry]
//! sites = 8
//! length = 4.0
//!
//! [background]
//! source = "identity"        # or "file" with path = "b.gsw"
//!
//! [schedule]
//! alpha = [0.7853981633974483, 0.4]
//!
//! [init]
//! kind = "random"            # "constant", or "snapshot" with path = "..."
//! link_amplitude = 0.3
//!
//! [solver]                   # every key optional
//! max_iter = 2000
//!
//! [output]
//! dir = "runs/a"
//!
//! [analysis]                 # every key optional
//! multiplicities = [2]
//! orientations = [1]
//! [[analysis.loops]]
//! id = "around"
//! sites = [0, 1, 17, 16]
//! ```
//!
//! A `manifest.toml` written by a run holds this document under `[config]` and
//! is accepted in its place.

use std::fs;
use std::path::{Path, PathBuf};

use gsw_core::fueter::{ComponentData, HolderOptions, MonodromyOptions, Orientation};
use gsw_core::lattice::{BackgroundField, LatticeGeometry};
use gsw_core::solver::{validate_schedule, SolveOptions};
use gsw_core::Snapshot;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub n: usize,
    pub geometry: GeometryConfig,
    pub background: BackgroundConfig,
    pub schedule: ScheduleConfig,
    pub init: InitConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub sites: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackgroundSource {
    Identity,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundConfig {
    pub source: BackgroundSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Random,
    Constant,
    Snapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    pub kind: InitKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub initial_step: f64,
    pub shrink: f64,
    pub armijo: f64,
    pub step_floor: f64,
    pub low_amplitude_threshold: f64,
    pub require_convergence: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolveOptions::<f64>::default();
        Self {
            max_iter: o.max_iter,
            tol: o.tol,
            initial_step: o.initial_step,
            shrink: o.shrink,
            armijo: o.armijo,
            step_floor: o.step_floor,
            low_amplitude_threshold: o.low_amplitude_threshold,
            require_convergence: o.require_convergence,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolveOptions<f64> {
        SolveOptions {
            max_iter: self.max_iter,
            tol: self.tol,
            initial_step: self.initial_step,
            shrink: self.shrink,
            armijo: self.armijo,
            step_floor: self.step_floor,
            low_amplitude_threshold: self.low_amplitude_threshold,
            require_convergence: self.require_convergence,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub id: String,
    pub sites: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Absolute zero-set threshold; `10⁻³·max|Ψ|` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub holder_inner: f64,
    pub holder_outer: f64,
    pub holder_min_samples: usize,
    pub holder_min_r_squared: f64,
    /// Pointwise bound on `|μ|` for the horizontal residual.
    pub mu_tolerance: f64,
    /// Bound on `|μ|/|Ψ|²` along monodromy loops.
    pub loop_mu_tolerance: f64,
    pub max_step_angle: f64,
    pub multiplicities: Vec<u32>,
    /// `+1` or `−1` per component.
    pub orientations: Vec<i64>,
    pub loops: Vec<LoopConfig>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let h = HolderOptions::<f64>::default();
        let m = MonodromyOptions::<f64>::new(0.0);
        Self {
            delta: None,
            holder_inner: h.inner,
            holder_outer: h.outer,
            holder_min_samples: h.min_samples,
            holder_min_r_squared: h.min_r_squared,
            mu_tolerance: 1e-8,
            loop_mu_tolerance: m.mu_tolerance,
            max_step_angle: m.max_step_angle,
            multiplicities: Vec::new(),
            orientations: Vec::new(),
            loops: Vec::new(),
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> CliResult<()> {
        if let Some(d) = self.delta {
            if !(d > 0.0) {
                return Err(CliError::config(format!("analysis.delta = {d} violates delta > 0")));
            }
        }
        if !(self.holder_inner >= 0.0 && self.holder_outer >= self.holder_inner) {
            return Err(CliError::config("analysis holder annulus needs 0 <= holder_inner <= holder_outer"));
        }
        if !(self.max_step_angle > 0.0 && self.max_step_angle <= std::f64::consts::FRAC_PI_2) {
            return Err(CliError::config("analysis.max_step_angle must lie in (0, pi/2]"));
        }
        if let Some(o) = self.orientations.iter().find(|&&o| o != 1 && o != -1) {
            return Err(CliError::config(format!("analysis.orientations entry {o} is not +1 or -1")));
        }
        if self.multiplicities.contains(&0) {
            return Err(CliError::config("analysis.multiplicities entries must be positive"));
        }
        Ok(())
    }

    pub fn holder_options(&self) -> HolderOptions<f64> {
        HolderOptions {
            inner: self.holder_inner,
            outer: self.holder_outer,
            min_samples: self.holder_min_samples,
            min_r_squared: self.holder_min_r_squared,
        }
    }

    /// Per-component data for `count` components, or the reason it is unavailable.
    pub fn component_data(&self, count: usize) -> Result<Vec<ComponentData>, String> {
        if count == 0 {
            return Ok(Vec::new());
        }
        if self.orientations.len() != count || self.multiplicities.len() != count {
            return Err(format!(
                "{count} components but {} multiplicities and {} orientations configured",
                self.multiplicities.len(),
                self.orientations.len()
            ));
        }
        Ok(self
            .multiplicities
            .iter()
            .zip(&self.orientations)
            .map(|(&m, &o)| ComponentData { multiplicity: m, orientation: Orientation::from_sign(o) })
            .collect())
    }
}

/// Everything a run needs, checked and resolved.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    /// Effective configuration, echoed into the manifest.
    pub config: RunConfig,
    pub geometry: LatticeGeometry<f64>,
    pub seed: u64,
    pub options: SolveOptions<f64>,
    pub out_dir: PathBuf,
}

fn parse_document(text: &str) -> CliResult<RunConfig> {
    let table: toml::Table = toml::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
    let table = match (table.get("run"), table.get("config")) {
        (Some(_), Some(toml::Value::Table(inner))) => inner.clone(),
        _ => table,
    };
    table.try_into().map_err(|e: toml::de::Error| CliError::config(format!("config: {}", e.message())))
}

pub fn load(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut config = parse_document(&text)?;
    let base = std::path::absolute(path.parent().unwrap_or(Path::new(".")))
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let rebase = |p: &mut Option<PathBuf>| {
        if let Some(p) = p {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    };
    rebase(&mut config.background.path);
    rebase(&mut config.init.path);
    Ok(config)
}

/// The `[analysis]` table of a run configuration or manifest, ignoring everything else.
pub fn load_analysis(path: &Path) -> CliResult<AnalysisConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::config(format!("config: {e}")))?;
    let table = match table.get("config") {
        Some(toml::Value::Table(inner)) if table.contains_key("run") => inner.clone(),
        _ => table,
    };
    let analysis = match table.get("analysis") {
        Some(v) => v
            .clone()
            .try_into()
            .map_err(|e: toml::de::Error| CliError::config(format!("analysis: {}", e.message())))?,
        None => AnalysisConfig::default(),
    };
    analysis.validate()?;
    Ok(analysis)
}

/// Applies command-line overrides and validates every invariant.
pub fn resolve(mut config: RunConfig, seed: Option<u64>, out: Option<PathBuf>) -> CliResult<ResolvedRun> {
    if seed.is_some() {
        config.seed = seed;
    }
    if out.is_some() {
        config.output.dir = out;
    }
    if let Some(dir) = config.output.dir.as_mut() {
        if let Ok(abs) = std::path::absolute(&*dir) {
            *dir = abs;
        }
    }
    let seed = config
        .seed
        .ok_or_else(|| CliError::config("seed is mandatory: set `seed` or pass --seed"))?;
    let out_dir = config
        .output
        .dir
        .clone()
        .ok_or_else(|| CliError::config("output directory missing: set [output] dir or pass --out"))?;
    let geometry = LatticeGeometry::new(config.geometry.sites, config.geometry.length)
        .map_err(|e| CliError::config(format!("geometry: {e}")))?;
    if config.n == 0 {
        return Err(CliError::config("n = 0 violates n >= 1"));
    }
    validate_schedule(&config.schedule.alpha).map_err(|e| CliError::config(format!("schedule: {e}")))?;
    let options = config.solver.options();
    options.validate().map_err(|e| CliError::config(format!("solver: {e}")))?;
    match config.background.source {
        BackgroundSource::Identity => {}
        BackgroundSource::File if config.background.path.is_none() => {
            return Err(CliError::config("background source \"file\" needs a path"));
        }
        BackgroundSource::File => {}
    }
    match config.init.kind {
        InitKind::Random => match config.init.link_amplitude {
            Some(a) if a >= 0.0 && a.is_finite() => {}
            Some(a) => return Err(CliError::config(format!("init.link_amplitude = {a} violates amplitude >= 0"))),
            None => return Err(CliError::config("init kind \"random\" needs link_amplitude")),
        },
        InitKind::Snapshot if config.init.path.is_none() => {
            return Err(CliError::config("init kind \"snapshot\" needs a path"));
        }
        _ => {}
    }
    config.analysis.validate()?;
    Ok(ResolvedRun { config, geometry, seed, options, out_dir })
}

/// Reads a snapshot named by the configuration and checks it against the run geometry.
pub fn read_matching_snapshot(path: &Path, geometry: &LatticeGeometry<f64>, n: usize) -> CliResult<Snapshot> {
    let snap = Snapshot::read(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    if snap.geometry() != geometry || snap.psi.n() != n {
        return Err(CliError::config(format!(
            "{}: snapshot has N = {}, L = {}, n = {}, run needs N = {}, L = {}, n = {n}",
            path.display(),
            snap.geometry().sites_per_axis(),
            snap.geometry().length(),
            snap.psi.n(),
            geometry.sites_per_axis(),
            geometry.length()
        )));
    }
    Ok(snap)
}

pub fn background(run: &ResolvedRun) -> CliResult<BackgroundField<f64>> {
    match (&run.config.background.source, &run.config.background.path) {
        (BackgroundSource::File, Some(path)) => Ok(read_matching_snapshot(path, &run.geometry, run.config.n)?.b),
        _ => Ok(BackgroundField::identity(run.geometry, run.config.n)),
    }
}

pub fn to_toml(config: &RunConfig) -> String {
    toml::to_string(config).expect("config serializes")
}
