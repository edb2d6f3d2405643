//! Two cameras fail mid-approach; the remaining drone is elected leader and
//! guides the others down before landing itself.

use swarm_landing::sim::{run_scenario, EventKind, FaultEvent, FaultKind, ScenarioConfig};

fn main() -> swarm_landing::Result<()> {
    let faults = [1, 2].map(|drone| FaultEvent { t: 2.0, drone, kind: FaultKind::CameraLoss }).to_vec();
    let config = ScenarioConfig { faults, seed: 4, ..ScenarioConfig::default() };
    let record = run_scenario(&config)?;
    for e in &record.events {
        let what = match &e.kind {
            EventKind::Fault { drone, kind } => format!("drone {drone}: {kind:?}"),
            EventKind::Election { leader } => format!("drone {leader} elected leader"),
            EventKind::RoleChange { drone, from, to } => format!("drone {drone}: {} -> {}", from.label(), to.label()),
            EventKind::PhaseChange { drone, from, to } => format!("drone {drone}: {} -> {}", from.label(), to.label()),
            EventKind::Abort => "abort".to_string(),
        };
        println!("{:>6.2} s  {what}", e.t);
    }
    println!("{:?}, {} election(s)", record.termination, record.elections());
    Ok(())
}
