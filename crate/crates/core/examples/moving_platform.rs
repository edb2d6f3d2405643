//! Landing on a platform driving a straight line at 0.5 m/s. Pass a path to
//! also write the trajectory CSV.

use std::path::PathBuf;

use swarm_landing::cli::export_trajectories;
use swarm_landing::sim::{compute_metrics, run_scenario, ScenarioConfig, TrajectoryKind};

fn main() -> swarm_landing::Result<()> {
    let config = ScenarioConfig { trajectory: TrajectoryKind::Line, platform_speed: 0.5, seed: 2, ..ScenarioConfig::default() };
    let record = run_scenario(&config)?;
    let last = record.rows.last().expect("a run logs at least one row");
    println!("{:?} after {:.2} s, platform at x = {:.2} m", record.termination, record.duration(), last.platform.position.x);
    for e in compute_metrics(&record)?.errors {
        println!("drone {}: {:.2} cm from its slot", e.drone, e.error * 100.0);
    }
    if let Some(path) = std::env::args().nth(1).map(PathBuf::from) {
        export_trajectories(&record, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
