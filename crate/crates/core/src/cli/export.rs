use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::batch::{aggregate, BatchRun, RunSummary};
use crate::error::{Error, Result};
use crate::sim::{compute_metrics, RunRecord};

pub const TRAJECTORIES_FILE: &str = "trajectories.csv";
pub const RECORD_FILE: &str = "record.json";
pub const SUMMARIES_FILE: &str = "summaries.json";
pub const TRACES_FILE: &str = "traces.csv";
pub const SCATTER_FILE: &str = "scatter.csv";
pub const BOUNDARIES_FILE: &str = "boundaries.csv";

const TRAJECTORY_HEADER: &str = "t,entity,x,y,z,vx,vy,vz,role,phase";

/// Trajectory CSV text: one line per drone and one for the platform per
/// logged tick. The platform has empty role and phase columns.
pub fn trajectories_csv(record: &RunRecord) -> String {
    let mut out = String::with_capacity(64 * record.rows.len() * 4);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for row in &record.rows {
        for d in &row.drones {
            let (p, v) = (d.position, d.velocity);
            let _ = writeln!(
                out,
                "{:.6},drone{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
                row.t,
                d.id,
                p.x,
                p.y,
                p.z,
                v.x,
                v.y,
                v.z,
                d.role.label(),
                d.phase.label()
            );
        }
        let (p, v) = (row.platform.position, row.platform.velocity);
        let _ = writeln!(
            out,
            "{:.6},platform,{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},,",
            row.t, p.x, p.y, p.z, v.x, v.y, v.z
        );
    }
    out
}

pub fn export_trajectories(record: &RunRecord, path: &Path) -> Result<()> {
    fs::write(path, trajectories_csv(record)).map_err(|e| Error::io(path, e))
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: format!("{}:{}:{}", path.display(), e.line(), e.column()),
        message: e.to_string(),
    })
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes `<out>/<scenario>-seed<N>/{trajectories.csv, record.json}` per run
/// and `<out>/summaries.json`.
pub fn write_batch(runs: &[BatchRun], out: &Path) -> Result<()> {
    create_dir(out)?;
    for run in runs {
        let dir = out.join(format!("{}-seed{}", run.summary.scenario, run.summary.seed));
        create_dir(&dir)?;
        export_trajectories(&run.record, &dir.join(TRAJECTORIES_FILE))?;
        write_json(&run.record, &dir.join(RECORD_FILE))?;
    }
    let summaries: Vec<&RunSummary> = runs.iter().map(|r| &r.summary).collect();
    write_json(&summaries, &out.join(SUMMARIES_FILE))
}

/// Every `<dir>/<run>/record.json`, sorted by run directory name.
pub fn load_records(dir: &Path) -> Result<Vec<(String, RunRecord)>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut runs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path().join(RECORD_FILE);
        if path.is_file() {
            runs.push((entry.file_name().to_string_lossy().into_owned(), read_json(&path)?));
        }
    }
    runs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(runs)
}

/// Figure data for external plotting: top-view traces, touchdown versus
/// target scatter and per-run boundary radii. Returns the written paths.
pub fn emit_plot_data(records: &[(String, RunRecord)], out: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::config("plot data needs at least one record"));
    }
    create_dir(out)?;
    let mut traces = String::from("run,entity,t,x,y\n");
    let mut scatter = String::from("run,drone,target_x,target_y,touchdown_x,touchdown_y,error\n");
    let mut boundaries = String::from("run,seed,boundary_radius\n");
    for (name, record) in records {
        for row in &record.rows {
            for d in &row.drones {
                let _ = writeln!(traces, "{name},drone{},{:.6},{:.6},{:.6}", d.id, row.t, d.position.x, d.position.y);
            }
            let p = row.platform.position;
            let _ = writeln!(traces, "{name},platform,{:.6},{:.6},{:.6}", row.t, p.x, p.y);
        }
        let Ok(metrics) = compute_metrics(record) else { continue };
        for (td, err) in record.touchdowns.iter().zip(&metrics.errors) {
            let [tx, ty] = record.config.formation[td.drone];
            let p = td.platform_frame;
            let _ = writeln!(scatter, "{name},{},{tx:.6},{ty:.6},{:.6},{:.6},{:.6}", td.drone, p.x, p.y, err.error);
        }
        let _ = writeln!(boundaries, "{name},{},{:.6}", record.config.seed, metrics.boundary_radius);
    }
    let files = [(TRACES_FILE, traces), (SCATTER_FILE, scatter), (BOUNDARIES_FILE, boundaries)];
    let mut written = Vec::new();
    for (file, text) in files {
        let path = out.join(file);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Per-run table plus batch aggregate for `<dir>/summaries.json`.
pub fn report(dir: &Path) -> Result<String> {
    let summaries: Vec<RunSummary> = read_json(&dir.join(SUMMARIES_FILE))?;
    let cm = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{:.2}", v * 100.0));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<32} {:>6} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "scenario", "seed", "end", "mean cm", "rmse cm", "bound cm", "elections", "wall s"
    );
    for s in &summaries {
        let end = serde_json::to_value(s.termination).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<32} {:>6} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9.3}",
            s.scenario,
            s.seed,
            end,
            cm(s.mean_error),
            cm(s.rmse),
            cm(s.boundary_radius),
            s.elections,
            s.runtime_s
        );
    }
    let a = aggregate(&summaries);
    let _ = writeln!(
        out,
        "{} runs, {} all landed; mean error {} cm, max error {} cm, mean rmse {} cm",
        a.runs,
        a.all_landed,
        cm(a.mean_error),
        cm(a.max_error),
        cm(a.mean_rmse)
    );
    Ok(out)
}
