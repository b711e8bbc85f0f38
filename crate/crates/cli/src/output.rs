//! Plot-ready data emission: trajectory CSVs with a fixed, versioned schema
//! and JSON reports. Floats are printed with full precision in a fixed
//! format so identical runs produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qflow_core::heatflow::FlowTrajectory;

pub const TRAJECTORY_SCHEMA: &str = "qflow.trajectory.v1";

fn fmt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.17e}"),
        None => String::new(),
    }
}

pub fn trajectory_csv(traj: &FlowTrajectory) -> String {
    let mut out = String::new();
    out.push_str(&format!("# schema: {TRAJECTORY_SCHEMA}\n"));
    out.push_str("t,mass,cheeger,entropy,fisher,moment,s_bound,step_residual\n");
    for d in &traj.diagnostics {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(Some(d.time)),
            fmt(Some(d.mass)),
            fmt(Some(d.cheeger)),
            fmt(d.entropy),
            fmt(d.fisher),
            fmt(d.moment),
            fmt(d.moment_bound),
            fmt(Some(d.residual)),
        ));
    }
    out
}

pub fn write_trajectory_csv(path: &Path, traj: &FlowTrajectory) -> std::io::Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(trajectory_csv(traj).as_bytes())
}

/// Checkpoint: the raw state vectors as a JSON array of arrays.
pub fn write_checkpoint(path: &Path, traj: &FlowTrajectory) -> std::io::Result<()> {
    let states: Vec<&[f64]> = traj.states.iter().map(|s| s.values()).collect();
    let text = serde_json::to_string(&states).expect("states serialize");
    fs::write(path, text)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    fs::write(path, text)
}

/// Output directory resolution: explicit flag, then config, then the
/// QFLOW_OUT environment variable, then ./qflow-out.
pub fn resolve_out_dir(flag: Option<&Path>, config: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = config {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var("QFLOW_OUT") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from("qflow-out")
}
