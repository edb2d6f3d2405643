//! Flies a point through an artificial potential field past one obstacle.

use swarm_landing::geometry::Vec3;
use swarm_landing::planning::{total_potential, velocity_command, ApfParams, Obstacle};

fn main() -> swarm_landing::Result<()> {
    let params = ApfParams::default();
    let goal = Vec3::new(2.0, 0.0, 0.0);
    let obstacles = [Obstacle::new(Vec3::new(1.0, 0.05, 0.0))];
    let dt = 0.02;
    let mut p = Vec3::new(0.0, 0.0, 0.0);
    let mut closest = f64::INFINITY;
    println!("{:>6} {:>8} {:>8} {:>9}", "t", "x", "y", "U");
    for k in 0..=400 {
        closest = closest.min((p - obstacles[0].position).norm());
        if k % 25 == 0 {
            let u = total_potential(p, goal, &obstacles, &params)?;
            println!("{:>6.2} {:>8.3} {:>8.3} {:>9.4}", k as f64 * dt, p.x, p.y, u);
        }
        p = p + velocity_command(p, goal, &obstacles, &params)? * dt;
    }
    println!("final distance to goal {:.4} m, closest obstacle approach {:.3} m", (p - goal).norm(), closest);
    Ok(())
}
