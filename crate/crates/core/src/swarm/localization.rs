use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Pose, Vec3};
use crate::perception::{camera_pose, TagObservation};
use crate::state::{
    drone_for_tag, CameraMount, DroneId, DroneState, DRONE_TAG_HEIGHT, PLATFORM_TAG_IDS,
    PLATFORM_TAG_OFFSETS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateSource {
    /// The drone's own camera (ego pose from onboard odometry).
    OwnCamera,
    /// Relayed from the leader's downward camera.
    LeaderCamera,
}

/// Position fix for one drone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationEstimate {
    pub drone_id: DroneId,
    pub position: Vec3,
    pub source: EstimateSource,
    pub timestamp: f64,
}

impl LocalizationEstimate {
    pub fn age(&self, t: f64) -> f64 {
        t - self.timestamp
    }

    pub fn is_stale(&self, t: f64, timeout: f64) -> bool {
        self.age(t) > timeout
    }
}

/// Per-follower result of [`leader_guidance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Guidance {
    Fix(LocalizationEstimate),
    /// The follower's tag is not in the leader's image this tick.
    NotVisible(DroneId),
}

/// Platform pose on the ground plane implied by the platform-tag
/// observations.
///
/// Each tag implies a platform pose; headings are combined by circular mean
/// and the implied deck centres, re-derived with that shared heading, are
/// averaged. Tag positions come from intersecting the camera ray with the
/// deck plane `z = 0`, which is far better conditioned than the recovered
/// depth.
pub fn fuse_platform_estimate(
    observations: &[TagObservation],
    observer: &Pose,
    mount: CameraMount,
) -> Result<Pose> {
    let cam = camera_pose(observer, mount);
    let tags: Vec<(Pose, (f64, f64))> = observations
        .iter()
        .filter_map(|obs| {
            let slot = PLATFORM_TAG_IDS.iter().position(|&id| id == obs.tag_id)?;
            let mut tag = cam.compose(&obs.relative_pose);
            tag.position = onto_deck(cam.position, tag.position);
            Some((tag, PLATFORM_TAG_OFFSETS[slot]))
        })
        .collect();
    if tags.is_empty() {
        return Err(Error::EstimateUnavailable("no platform tag in view".into()));
    }
    let headings: Vec<f64> = tags
        .iter()
        .map(|(tag, (ox, oy))| tag.compose(&Pose::translation(-ox, -oy, 0.0)).heading())
        .collect();
    let heading = if headings.len() == 1 {
        headings[0]
    } else {
        let (s, c) = headings.iter().fold((0.0, 0.0), |(s, c), h| (s + h.sin(), c + h.cos()));
        s.atan2(c)
    };
    let (sin, cos) = heading.sin_cos();
    let n = tags.len() as f64;
    let centre = tags.iter().fold(Vec3::ZERO, |acc, (tag, (ox, oy))| {
        let offset = Vec3::new(cos * ox - sin * oy, sin * ox + cos * oy, 0.0);
        acc + (tag.position - offset).horizontal()
    }) / n;
    Ok(Pose::from_yaw(centre, heading))
}

/// Point where the ray from `eye` through `p` meets `z = 0`; `p` itself
/// if the ray does not descend.
fn onto_deck(eye: Vec3, p: Vec3) -> Vec3 {
    let drop = eye.z - p.z;
    if drop <= 1e-6 || eye.z <= 0.0 {
        return p;
    }
    eye + (p - eye) * (eye.z / drop)
}

/// World positions of the followers seen by the leader's downward camera.
///
/// Every id in `followers` yields either a fix or a not-visible marker.
pub fn leader_guidance(
    leader: &DroneState,
    observations: &[TagObservation],
    followers: &[DroneId],
) -> Result<Vec<Guidance>> {
    if leader.camera_mount != CameraMount::DownwardFacing {
        return Err(Error::EstimateUnavailable(format!(
            "leader {} camera is not facing down",
            leader.id
        )));
    }
    let cam = camera_pose(&leader.pose, leader.camera_mount);
    Ok(followers
        .iter()
        .map(|&id| {
            observations
                .iter()
                .find(|o| drone_for_tag(o.tag_id) == Some(id))
                .map(|o| {
                    let tag = cam.compose(&o.relative_pose);
                    Guidance::Fix(LocalizationEstimate {
                        drone_id: id,
                        position: tag.position - Vec3::Z * DRONE_TAG_HEIGHT,
                        source: EstimateSource::LeaderCamera,
                        timestamp: o.timestamp,
                    })
                })
                .unwrap_or(Guidance::NotVisible(id))
        })
        .collect())
}

/// Platform state as believed by a tracker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlatformEstimate {
    /// Deck center, `z = 0`.
    pub position: Vec3,
    pub velocity: Vec3,
    pub heading: f64,
    /// Time the estimate refers to.
    pub t: f64,
    /// Time of the last tag fix.
    pub last_fix: f64,
}

impl PlatformEstimate {
    pub fn pose(&self) -> Pose {
        Pose::from_yaw(self.position, self.heading)
    }

    /// World point of a platform-frame offset.
    pub fn deck_point(&self, dx: f64, dy: f64) -> Vec3 {
        self.pose().transform_point(Vec3::new(dx, dy, 0.0))
    }

    /// Constant-velocity extrapolation to time `t`.
    pub fn predict(&self, t: f64) -> PlatformEstimate {
        let dt = t - self.t;
        PlatformEstimate { position: self.position + self.velocity * dt, t, ..*self }
    }
}

/// Alpha-beta gains for [`PlatformTracker`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerGains {
    pub alpha: f64,
    pub beta: f64,
    pub heading: f64,
}

impl Default for TrackerGains {
    fn default() -> Self {
        TrackerGains { alpha: 0.3, beta: 0.05, heading: 0.12 }
    }
}

/// Alpha-beta filter over platform fixes; coasts at constant velocity
/// between fixes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PlatformTracker {
    gains: TrackerGains,
    state: Option<PlatformEstimate>,
}

impl PlatformTracker {
    pub fn new(gains: TrackerGains) -> Self {
        PlatformTracker { gains, state: None }
    }

    pub fn estimate(&self) -> Option<&PlatformEstimate> {
        self.state.as_ref()
    }

    /// Estimate extrapolated to `t`.
    pub fn predict(&self, t: f64) -> Option<PlatformEstimate> {
        self.state.map(|s| s.predict(t))
    }

    pub fn reset(&mut self) {
        self.state = None;
    }

    /// Advances to `t`, folding in a fix when one is available.
    pub fn update(&mut self, t: f64, fix: Option<&Pose>) {
        let Some(prev) = self.state else {
            if let Some(f) = fix {
                self.state = Some(PlatformEstimate {
                    position: f.position.horizontal(),
                    velocity: Vec3::ZERO,
                    heading: f.heading(),
                    t,
                    last_fix: t,
                });
            }
            return;
        };
        let mut next = prev.predict(t);
        if let Some(f) = fix {
            let dt = t - prev.t;
            let r = f.position.horizontal() - next.position;
            let g = self.gains;
            next.position += r * g.alpha;
            if dt > 0.0 {
                next.velocity += r * (g.beta / dt);
            }
            next.heading = wrap_angle(next.heading + g.heading * wrap_angle(f.heading() - next.heading));
            next.last_fix = t;
        }
        self.state = Some(next);
    }
}
