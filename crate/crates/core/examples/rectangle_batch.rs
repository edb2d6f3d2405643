//! Five seeds of the rectangular circuit with a leader guiding two blind
//! followers, run in parallel and aggregated.

use swarm_landing::cli::{aggregate, run_batch};
use swarm_landing::sim::{FaultEvent, FaultKind, ScenarioConfig, TrajectoryKind};

fn main() -> swarm_landing::Result<()> {
    let config = ScenarioConfig {
        trajectory: TrajectoryKind::Rectangle,
        rectangle_extents: [4.0, 2.0],
        faults: [1, 2].map(|drone| FaultEvent { t: 2.0, drone, kind: FaultKind::CameraLoss }).to_vec(),
        ..ScenarioConfig::default()
    };
    let summaries = run_batch("rectangle", &config, 5, 1)?;
    for s in &summaries {
        let errs: Vec<String> = s.errors.iter().map(|e| format!("{:.2}", e.error * 100.0)).collect();
        println!("seed {}: {:?}, errors [{}] cm, {:.2} s wall", s.seed, s.termination, errs.join(", "), s.runtime_s);
    }
    let a = aggregate(&summaries);
    println!(
        "{}/{} runs landed; mean error {:.2} cm, max {:.2} cm",
        a.all_landed,
        a.runs,
        a.mean_error.unwrap_or(f64::NAN) * 100.0,
        a.max_error.unwrap_or(f64::NAN) * 100.0
    );
    Ok(())
}
