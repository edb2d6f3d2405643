//! Three drones land in formation on a stationary platform.

use swarm_landing::sim::{compute_metrics, run_scenario, ScenarioConfig};

fn main() -> swarm_landing::Result<()> {
    let config = ScenarioConfig { seed: 1, ..ScenarioConfig::default() };
    let record = run_scenario(&config)?;
    println!("{:?} after {:.2} s ({} logged ticks)", record.termination, record.duration(), record.rows.len());
    for td in &record.touchdowns {
        let [x, y] = config.formation[td.drone];
        println!(
            "drone {} touched down at t {:.2} s on ({:+.3}, {:+.3}), slot ({x:+.3}, {y:+.3})",
            td.drone, td.t, td.platform_frame.x, td.platform_frame.y
        );
    }
    let m = compute_metrics(&record)?;
    println!("rmse {:.2} cm, boundary radius {:.2} cm, min separation {:.3} m", m.rmse * 100.0, m.boundary_radius * 100.0, m.min_separation_pre_landing);
    Ok(())
}
