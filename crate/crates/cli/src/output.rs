//! CSV and JSON emission. Floats carry 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use elastica::flow::Snapshot;
use elastica::{EocTable, RunFailure, Trajectory};
use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::error::{CliError, Result};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const EOC_FILE: &str = "eoc.csv";

/// Round-trip safe scientific notation, independent of locale.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_name(step: usize) -> String {
    format!("step_{step:09}.csv")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(CliError::csv(path))
}

fn write_rows(path: &Path, header: Vec<String>, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(&header).map_err(CliError::csv(path))?;
    for row in rows {
        w.write_record(&row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn write_diagnostics(path: &Path, traj: &Trajectory) -> Result<()> {
    let first = traj.snapshots.first().map(|s| s.diagnostics);
    let has_err = first.is_some_and(|d| d.err.is_some());
    let has_monitor = first.is_some_and(|d| d.monitor.is_some());
    let has_rotation = first.is_some_and(|d| d.rotation_index.is_some());
    let mut header: Vec<String> = ["t", "energy", "length", "sigma"].map(String::from).to_vec();
    if has_err {
        header.push("err".into());
    }
    if has_monitor {
        header.push("monitor".into());
    }
    if has_rotation {
        header.push("rotation_index".into());
    }
    let rows = traj.snapshots.iter().map(|s| {
        let d = &s.diagnostics;
        let mut row = vec![fmt_float(s.t), fmt_float(d.energy), fmt_float(d.length), fmt_float(d.sigma)];
        if has_err {
            row.push(d.err.map_or_else(String::new, fmt_float));
        }
        if has_monitor {
            row.push(d.monitor.map_or_else(String::new, fmt_float));
        }
        if has_rotation {
            row.push(d.rotation_index.map_or_else(String::new, |r| r.to_string()));
        }
        row
    });
    write_rows(path, header, rows)
}

pub fn write_snapshot(path: &Path, snap: &Snapshot<f64>, nodes: &[f64]) -> Result<()> {
    let dim = snap.state.dim();
    let mut header: Vec<String> = ["t", "j", "u_j"].map(String::from).to_vec();
    header.extend((1..=dim).map(|c| format!("x{c}")));
    header.extend((1..=dim).map(|c| format!("y{c}")));
    let rows = (0..snap.state.len()).map(|j| {
        let mut row = vec![fmt_float(snap.t), j.to_string(), fmt_float(nodes[j])];
        row.extend(snap.state.vertex(j).iter().map(|&v| fmt_float(v)));
        row.extend(snap.curvature.vertex(j).iter().map(|&v| fmt_float(v)));
        row
    });
    write_rows(path, header, rows)
}

#[derive(Serialize)]
struct Manifest<'a> {
    status: &'static str,
    config: &'a ResolvedConfig,
    diagnostics: &'static str,
    snapshots: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<FailureReport>,
}

#[derive(Serialize)]
struct FailureReport {
    step: usize,
    error: String,
}

/// Writes diagnostics, one snapshot file per recorded step and the
/// manifest into `cfg.out_dir`.
pub fn write_run(cfg: &ResolvedConfig, traj: &Trajectory, failure: Option<&RunFailure>) -> Result<PathBuf> {
    let dir = &cfg.out_dir;
    let snap_dir = dir.join(SNAPSHOT_DIR);
    fs::create_dir_all(&snap_dir).map_err(CliError::io(&snap_dir))?;
    write_diagnostics(&dir.join(DIAGNOSTICS_FILE), traj)?;
    let nodes = traj.grid.nodes();
    let mut names = Vec::with_capacity(traj.snapshots.len());
    for snap in &traj.snapshots {
        let name = snapshot_name(snap.step);
        write_snapshot(&snap_dir.join(&name), snap, nodes)?;
        names.push(format!("{SNAPSHOT_DIR}/{name}"));
    }
    let manifest = Manifest {
        status: if failure.is_some() { "failed" } else { "completed" },
        config: cfg,
        diagnostics: DIAGNOSTICS_FILE,
        snapshots: names,
        failure: failure.map(|f| FailureReport {
            step: f.step,
            error: f.error.to_string(),
        }),
    };
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(path)
}

pub fn write_eoc(path: &Path, table: &EocTable) -> Result<()> {
    let header = ["N", "h", "m_T", "delta", "err", "eoc"].map(String::from).to_vec();
    let rows = table.rows.iter().map(|r| {
        vec![
            r.vertices.to_string(),
            fmt_float(r.h),
            r.steps.to_string(),
            fmt_float(r.delta),
            fmt_float(r.err),
            r.eoc.map_or_else(|| "NaN".to_string(), fmt_float),
        ]
    });
    write_rows(path, header, rows)
}

/// Plain-text rendering in the layout of a convergence table.
pub fn format_eoc(table: &EocTable) -> String {
    let mut out = format!(
        "{:>6} {:>11} {:>8} {:>12} {:>12} {:>8}\n",
        "N", "h", "m_T", "delta", "err", "eoc"
    );
    for r in &table.rows {
        let eoc = r.eoc.map_or_else(|| "--".to_string(), |e| format!("{e:.4}"));
        out.push_str(&format!(
            "{:>6} {:>11.5} {:>8} {:>12.5e} {:>12.4e} {:>8}\n",
            r.vertices, r.h, r.steps, r.delta, r.err, eoc
        ));
    }
    out
}
