//! Artifact writers: CSV tables, the run manifest and the SVG plot.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::config::{to_toml, RunConfig};
use crate::error::{CliError, CliResult};

/// Shortest form that still carries 17 significant digits.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// A CSV file with a fixed header, written row by row.
pub struct CsvTable {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl CsvTable {
    pub fn create(path: &Path, header: &[&str]) -> CliResult<Self> {
        let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
        writer.write_record(header).map_err(|e| CliError::io(path, e))?;
        Ok(Self { path: path.to_path_buf(), writer })
    }

    pub fn row(&mut self, fields: &[String]) -> CliResult<()> {
        self.writer.write_record(fields).map_err(|e| CliError::io(&self.path, e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

pub struct Manifest<'a> {
    pub command: &'a str,
    pub status: &'a str,
    pub wall_time: Duration,
    pub config: &'a RunConfig,
    pub artifacts: Vec<String>,
    pub extra: Vec<(&'a str, toml::Value)>,
}

impl Manifest<'_> {
    pub fn render(&self) -> String {
        let mut run = toml::Table::new();
        run.insert("command".into(), self.command.into());
        run.insert("status".into(), self.status.into());
        run.insert("tool".into(), "gsw".into());
        run.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        run.insert("wall_time_seconds".into(), self.wall_time.as_secs_f64().into());
        for (k, v) in &self.extra {
            run.insert((*k).into(), v.clone());
        }
        let artifacts: Vec<toml::Value> = self.artifacts.iter().map(|a| a.as_str().into()).collect();
        run.insert("artifacts".into(), artifacts.into());
        let config: toml::Table = toml::from_str(&to_toml(self.config)).expect("config echo parses");
        let section = |name: &str, table: toml::Table| {
            let mut doc = toml::Table::new();
            doc.insert(name.into(), table.into());
            toml::to_string(&doc).expect("manifest serializes")
        };
        format!("{}\n{}", section("run", run), section("config", config))
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        write_text(&dir.join("manifest.toml"), &self.render())
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect()
}

/// Padded range; a degenerate range is widened around its value.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1e-12);
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Line plot with markers, as a standalone SVG document.
pub fn line_plot_svg(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (90.0, 20.0, 40.0, 60.0);
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    let (x0, x1) = range(finite.iter().map(|p| p.0));
    let (y0, y1) = range(finite.iter().map(|p| p.1));
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let sy = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"  <rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"  <text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"  <rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - left - right,
        h - top - bottom
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(s, r#"  <line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, h - bottom, h - bottom + 5.0);
        let _ = writeln!(s, r#"  <text x="{x:.2}" y="{}" text-anchor="middle">{t:.3e}</text>"#, h - bottom + 18.0);
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(s, r#"  <line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(s, r#"  <text x="{}" y="{:.2}" text-anchor="end">{t:.3e}</text>"#, left - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"  <text x="{}" y="{}" text-anchor="middle">{}</text>"#, (left + w - right) / 2.0, h - 15.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"  <text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (top + h - bottom) / 2.0,
        escape(y_label)
    );
    if !finite.is_empty() {
        let path: Vec<String> = finite.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"  <polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
        for &(x, y) in &finite {
            let _ = writeln!(s, r#"  <circle cx="{:.2}" cy="{:.2}" r="3.5" fill="steelblue"/>"#, sx(x), sy(y));
        }
    }
    s.push_str("</svg>\n");
    s
}
