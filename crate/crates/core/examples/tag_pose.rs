//! Projects a platform tag into a downward camera, detects it with pixel
//! noise and recovers its pose.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swarm_landing::geometry::Pose;
use swarm_landing::perception::{camera_pose, detect_tags, estimate_tag_pose, CameraModel, TagSpec};
use swarm_landing::state::{CameraMount, DroneState};

fn main() -> swarm_landing::Result<()> {
    let tag = TagSpec::with_id(0);
    let tag_pose = Pose::from_yaw(Default::default(), 0.4);
    for (sigma, height) in [(0.0, 1.0), (0.5, 1.0), (0.5, 2.0), (0.5, 3.5), (0.5, 4.5)] {
        let cam = CameraModel::default().with_noise(sigma);
        let mut drone = DroneState::new(0, Pose::translation(0.1, -0.05, height));
        drone.camera_mount = CameraMount::DownwardFacing;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obs = detect_tags(0.0, &drone, &cam, &[(tag, tag_pose)], &mut rng)?;
        let Some(o) = obs.first() else {
            println!("sigma {sigma} px, height {height} m: not detected");
            continue;
        };
        let in_camera = estimate_tag_pose(o, &cam, &tag)?;
        let world = camera_pose(&drone.pose, CameraMount::DownwardFacing).compose(&in_camera);
        let (dp, dr) = world.difference(&tag_pose);
        println!("sigma {sigma} px, height {height} m: range {:.3} m, position error {:.4} m, rotation error {:.4} rad", o.range, dp, dr);
    }
    Ok(())
}
