//! Per-agent and world state carried between simulation ticks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{wrap_angle, Pose, Vec3};

pub type DroneId = usize;

/// Platform half extents in its own frame: x along the heading, y to the left.
pub const PLATFORM_HALF_EXTENTS: (f64, f64) = (0.225, 0.285);

/// Platform tag centers in the platform frame.
pub const PLATFORM_TAG_OFFSETS: [(f64, f64); 2] = [(0.0, 0.17), (0.0, -0.17)];

/// Tag ids of the two platform tags.
pub const PLATFORM_TAG_IDS: [u32; 2] = [0, 1];

/// Tag id of the marker on top of drone `id`.
pub fn drone_tag_id(id: DroneId) -> u32 {
    10 + id as u32
}

/// Inverse of [`drone_tag_id`].
pub fn drone_for_tag(tag_id: u32) -> Option<DroneId> {
    tag_id.checked_sub(10).map(|i| i as DroneId)
}

/// Height of the top-mounted drone tag above the body origin.
pub const DRONE_TAG_HEIGHT: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CameraMount {
    ForwardFacing,
    DownwardFacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Mode 1: localizes the platform with its own camera.
    Homogeneous,
    /// Mode 2: camera turned down, relays platform and follower positions.
    Leader,
    /// Mode 2: guided by the given leader.
    Follower(DroneId),
    /// Mission aborted, no working camera anywhere.
    Blind,
}

impl Role {
    pub fn label(&self) -> String {
        match self {
            Role::Homogeneous => "homogeneous".into(),
            Role::Leader => "leader".into(),
            Role::Follower(l) => format!("follower:{l}"),
            Role::Blind => "blind".into(),
        }
    }
}

/// Flight phase. Only moves forward: Idle → Tracking → Landing → Landed.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Idle,
    Tracking,
    Landing,
    Landed,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Idle => "idle",
            Phase::Tracking => "tracking",
            Phase::Landing => "landing",
            Phase::Landed => "landed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroneState {
    pub id: DroneId,
    pub pose: Pose,
    pub velocity: Vec3,
    pub camera_ok: bool,
    pub camera_mount: CameraMount,
    /// While the mount rotates the camera yields no detections.
    pub camera_ready_at: f64,
    pub role: Role,
    pub phase: Phase,
}

impl DroneState {
    pub fn new(id: DroneId, pose: Pose) -> Self {
        DroneState {
            id,
            pose,
            velocity: Vec3::ZERO,
            camera_ok: true,
            camera_mount: CameraMount::ForwardFacing,
            camera_ready_at: 0.0,
            role: Role::Homogeneous,
            phase: Phase::Idle,
        }
    }

    pub fn position(&self) -> Vec3 {
        self.pose.position
    }

    /// Moves the phase forward; returns false (and keeps the phase) for a
    /// regression or no-op.
    pub fn advance_phase(&mut self, next: Phase) -> bool {
        if next > self.phase {
            self.phase = next;
            true
        } else {
            false
        }
    }

    pub fn camera_available(&self, t: f64) -> bool {
        self.camera_ok && t >= self.camera_ready_at
    }

    /// World pose of the top-mounted tag.
    pub fn tag_pose(&self) -> Pose {
        self.pose
            .compose(&Pose::translation(0.0, 0.0, DRONE_TAG_HEIGHT))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformState {
    pub x: f64,
    pub y: f64,
    /// Radians in `[-π, π)`.
    pub heading: f64,
    pub speed: f64,
    pub tag_poses: [Pose; 2],
}

impl PlatformState {
    pub fn new(x: f64, y: f64, heading: f64, speed: f64) -> Self {
        let heading = wrap_angle(heading);
        let pose = Pose::from_yaw(Vec3::new(x, y, 0.0), heading);
        let tag_poses = PLATFORM_TAG_OFFSETS
            .map(|(ox, oy)| pose.compose(&Pose::translation(ox, oy, 0.0)));
        PlatformState {
            x,
            y,
            heading,
            speed: speed.max(0.0),
            tag_poses,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose::from_yaw(Vec3::new(self.x, self.y, 0.0), self.heading)
    }

    pub fn velocity(&self) -> Vec3 {
        Vec3::new(
            self.speed * self.heading.cos(),
            self.speed * self.heading.sin(),
            0.0,
        )
    }

    /// World point of a platform-frame offset on the deck.
    pub fn deck_point(&self, dx: f64, dy: f64) -> Vec3 {
        self.pose().transform_point(Vec3::new(dx, dy, 0.0))
    }

    /// Expresses a world point in the platform frame.
    pub fn to_platform_frame(&self, p: Vec3) -> Vec3 {
        self.pose().inverse().transform_point(p)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let local = self.to_platform_frame(p);
        local.x.abs() <= PLATFORM_HALF_EXTENTS.0 && local.y.abs() <= PLATFORM_HALF_EXTENTS.1
    }
}

#[derive(Debug, Clone)]
pub struct WorldState {
    pub t: f64,
    pub drones: Vec<DroneState>,
    pub platform: PlatformState,
    pub rng: ChaCha8Rng,
}

impl WorldState {
    pub fn new(drones: Vec<DroneState>, platform: PlatformState, seed: u64) -> Self {
        WorldState {
            t: 0.0,
            drones,
            platform,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn drone(&self, id: DroneId) -> Option<&DroneState> {
        self.drones.iter().find(|d| d.id == id)
    }
}
