//! Mode switching when two of three cameras fail and later recover.

use swarm_landing::geometry::Pose;
use swarm_landing::state::DroneState;
use swarm_landing::swarm::{leader_cost, ModeManager};

fn main() {
    let mut drones: Vec<DroneState> = [(0.0, 0.0), (1.5, 0.2), (0.6, -0.8)]
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| DroneState::new(id, Pose::translation(x, y, 1.0)))
        .collect();
    let timeline = [[true, true, true], [true, false, true], [true, false, true], [true, false, true], [true, true, true]];
    let mut manager = ModeManager::new();
    for (tick, health) in timeline.iter().enumerate() {
        for (d, ok) in drones.iter_mut().zip(health) {
            d.camera_ok = *ok;
        }
        if tick == 1 {
            let blind = drones[1].position();
            for d in drones.iter().filter(|d| d.camera_ok) {
                println!("  cost of drone {} guiding drone 1: {:.3}", d.id, leader_cost(d.position(), blind));
            }
        }
        let decision = manager.update(&drones, health);
        for (d, (_, role)) in drones.iter_mut().zip(&decision.roles) {
            d.role = *role;
        }
        let roles: Vec<String> = decision.roles.iter().map(|(id, r)| format!("{id}={}", r.label())).collect();
        println!("tick {tick}: cameras {health:?} -> {:?}, elected {:?}, roles [{}]", decision.mode, decision.elected, roles.join(" "));
    }
}
