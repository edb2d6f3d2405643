//! Tracks a platform moving at 0.5 m/s from noisy pose fixes, then coasts
//! through a two-second gap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use swarm_landing::geometry::{Pose, Vec3};
use swarm_landing::swarm::{PlatformTracker, TrackerGains};

fn main() {
    let mut tracker = PlatformTracker::new(TrackerGains::default());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, 0.02).unwrap();
    let dt = 1.0 / 30.0;
    for k in 0..=300 {
        let t = k as f64 * dt;
        let truth = Vec3::new(0.5 * t, 0.0, 0.0);
        let gap = (5.0..7.0).contains(&t);
        let fix = (!gap).then(|| Pose::from_yaw(truth + Vec3::new(noise.sample(&mut rng), noise.sample(&mut rng), 0.0), 0.0));
        tracker.update(t, fix.as_ref());
        if k % 30 == 0 {
            let e = tracker.predict(t).expect("tracker has a fix");
            println!(
                "t {t:>5.2}{}: position error {:.3} m, velocity {:.3} m/s",
                if gap { " (coasting)" } else { "" },
                (e.position - truth).horizontal_norm(),
                e.velocity.x
            );
        }
    }
}
