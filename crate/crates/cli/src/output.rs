use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cavmag::dynamics::TimeSeries;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const SERIES_COLUMNS: [&str; 6] = ["t", "deltaN", "n1", "n2", "deltan", "phase"];

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// `# `-prefixed reproducibility header: tool version and the fully
/// resolved configuration, master seed first.
pub fn header(cfg: &RunConfig) -> String {
    let mut out = format!("# cavmag {}\n", env!("CARGO_PKG_VERSION"));
    for line in cfg.to_toml().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn series_rows(series: &TimeSeries) -> impl Iterator<Item = [f64; 6]> + '_ {
    (0..series.len()).map(|i| {
        [
            series.t[i],
            series.delta_atoms[i],
            series.n1[i],
            series.n2[i],
            series.delta_photons[i],
            series.phase[i],
        ]
    })
}

/// CSV with a header row and the given columns, one row per entry.
pub fn csv(cfg: &RunConfig, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header(cfg);
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt17).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn series_csv(cfg: &RunConfig, series: &TimeSeries) -> String {
    csv(cfg, &SERIES_COLUMNS, series_rows(series).map(|r| r.to_vec()))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config: &'a RunConfig,
    report: &'a T,
}

/// JSON document carrying the resolved config and seed next to `report`.
pub fn json_report<T: Serialize>(cfg: &RunConfig, report: &T) -> String {
    let env = Envelope {
        tool: "cavmag",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config: cfg,
        report,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
