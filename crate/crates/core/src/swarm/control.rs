use serde::{Deserialize, Serialize};

use super::election::camera_mount_command;
use super::localization::{LocalizationEstimate, PlatformEstimate};
use crate::error::{Error, Result};
use crate::geometry::{clamp_speed, Vec3};
use crate::planning::{velocity_command, ApfParams, Obstacle};
use crate::state::{CameraMount, DroneId, Phase, Role, WorldState, PLATFORM_HALF_EXTENTS};

/// Landing offsets on the deck plus the leader's station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormationSpec {
    /// Platform-frame `(dx, dy)` target for drone `i`.
    pub offsets: Vec<(f64, f64)>,
    pub leader_altitude: f64,
    /// Horizontal distance the leader keeps behind the platform.
    pub leader_lag: f64,
}

impl Default for FormationSpec {
    fn default() -> Self {
        FormationSpec {
            offsets: vec![(0.0, 0.15), (-0.13, -0.10), (0.13, -0.10)],
            leader_altitude: 2.0,
            leader_lag: 0.5,
        }
    }
}

impl FormationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.offsets.is_empty() {
            return Err(Error::config("formation needs at least one offset"));
        }
        for (i, &(dx, dy)) in self.offsets.iter().enumerate() {
            if !(dx.abs() <= PLATFORM_HALF_EXTENTS.0 && dy.abs() <= PLATFORM_HALF_EXTENTS.1) {
                return Err(Error::config(format!(
                    "formation offset {i} ({dx}, {dy}) lies outside the platform"
                )));
            }
            for (j, &other) in self.offsets.iter().enumerate().skip(i + 1) {
                if other == (dx, dy) {
                    return Err(Error::config(format!("formation offsets {i} and {j} coincide")));
                }
            }
        }
        if !(self.leader_altitude > 0.0) || !(self.leader_lag >= 0.0) {
            return Err(Error::config("leader altitude must be positive and lag non-negative"));
        }
        Ok(())
    }

    pub fn offset(&self, id: DroneId) -> (f64, f64) {
        self.offsets[id]
    }
}

/// Setpoints for one drone for one tick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DroneCommand {
    pub id: DroneId,
    pub velocity_setpoint: Vec3,
    /// Desired yaw, radians.
    pub yaw_setpoint: f64,
    pub camera_mount_setpoint: CameraMount,
    pub phase_setpoint: Phase,
}

/// One command per drone, in world drone order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmCommand {
    pub commands: Vec<DroneCommand>,
}

/// Controller settings that are not potential-field gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub apf: ApfParams,
    /// Horizontal error that triggers the descent, meters.
    pub landing_threshold: f64,
    /// Horizontal speed relative to the platform below which the drone
    /// counts as settled over its target, m/s.
    pub settle_speed: f64,
    /// Contact height for touchdown, meters.
    pub touchdown_height: f64,
    /// Drone position fixes older than this are not flown on, seconds.
    pub staleness_timeout: f64,
    /// Platform estimates coasting longer than this are not flown on, seconds.
    pub platform_timeout: f64,
    /// Tracking altitude for drones that land, meters.
    pub cruise_altitude: f64,
    /// Descent goal below the deck, so the approach does not stall at contact.
    pub descent_sink: f64,
    /// Holding descents (e.g. until a trajectory finishes).
    pub landing_enabled: bool,
}

impl Default for ControlParams {
    fn default() -> Self {
        ControlParams {
            apf: ApfParams::default(),
            landing_threshold: 0.05,
            settle_speed: 0.1,
            touchdown_height: 0.02,
            staleness_timeout: 1.0,
            platform_timeout: 10.0,
            cruise_altitude: 0.5,
            descent_sink: 0.1,
            landing_enabled: true,
        }
    }
}

/// What each drone currently believes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SwarmEstimates {
    /// Latest position fix per drone, indexed like `world.drones`.
    pub drones: Vec<Option<LocalizationEstimate>>,
    /// Platform estimate each drone flies on, already predicted to `world.t`.
    pub platform: Vec<Option<PlatformEstimate>>,
}

/// Position the drone flies on: the fix advanced by the drone's own
/// inertial velocity since it was taken.
fn believed_position(world: &WorldState, idx: usize, est: &LocalizationEstimate) -> Vec3 {
    est.position + world.drones[idx].velocity * est.age(world.t)
}

/// Velocity, yaw, mount and phase setpoints for every drone.
///
/// Drones track their landing offset above the platform at cruise altitude,
/// descend once horizontally within the threshold and settled, and report Landed on
/// contact. The leader keeps station behind and above the platform and only
/// lands after every follower is down. Drones with a stale fix or no
/// platform estimate hold still.
pub fn control_tick(
    world: &WorldState,
    estimates: &SwarmEstimates,
    formation: &FormationSpec,
    params: &ControlParams,
) -> Result<SwarmCommand> {
    let n = world.drones.len();
    if estimates.drones.len() != n || estimates.platform.len() != n {
        return Err(Error::config("one estimate slot per drone required"));
    }
    if formation.offsets.len() < n {
        return Err(Error::config(format!(
            "formation has {} offsets for {n} drones",
            formation.offsets.len()
        )));
    }
    let t = world.t;
    let believed: Vec<Option<Vec3>> = (0..n)
        .map(|i| {
            estimates.drones[i]
                .filter(|e| !e.is_stale(t, params.staleness_timeout))
                .map(|e| believed_position(world, i, &e))
        })
        .collect();
    let followers_down = world
        .drones
        .iter()
        .filter(|d| matches!(d.role, Role::Follower(_)))
        .all(|d| d.phase == Phase::Landed);

    let mut commands = Vec::with_capacity(n);
    for (i, drone) in world.drones.iter().enumerate() {
        let platform = estimates.platform[i].filter(|p| t - p.last_fix <= params.platform_timeout);
        let mut cmd = DroneCommand {
            id: drone.id,
            velocity_setpoint: Vec3::ZERO,
            yaw_setpoint: drone.pose.heading(),
            camera_mount_setpoint: camera_mount_command(drone.role),
            phase_setpoint: drone.phase,
        };
        if drone.phase == Phase::Landed {
            commands.push(cmd);
            continue;
        }
        if drone.phase == Phase::Landing && drone.position().z <= params.touchdown_height {
            cmd.phase_setpoint = Phase::Landed;
            commands.push(cmd);
            continue;
        }
        let (Some(p), Some(platform), false) = (believed[i], platform, drone.role == Role::Blind) else {
            commands.push(cmd);
            continue;
        };
        if cmd.phase_setpoint == Phase::Idle {
            cmd.phase_setpoint = Phase::Tracking;
        }
        cmd.yaw_setpoint = platform.heading;

        let (dx, dy) = formation.offset(drone.id);
        let target = platform.deck_point(dx, dy);
        let leader_station = drone.role == Role::Leader && !followers_down;
        let goal = if leader_station {
            let back = Vec3::new(platform.heading.cos(), platform.heading.sin(), 0.0);
            platform.position - back * formation.leader_lag + Vec3::Z * formation.leader_altitude
        } else {
            let altitude = if drone.role == Role::Leader { formation.leader_altitude } else { params.cruise_altitude };
            if cmd.phase_setpoint == Phase::Tracking
                && params.landing_enabled
                && (p - target).horizontal_norm() < params.landing_threshold
                && (drone.velocity - platform.velocity).horizontal_norm() < params.settle_speed
            {
                cmd.phase_setpoint = Phase::Landing;
            }
            if cmd.phase_setpoint == Phase::Landing {
                target - Vec3::Z * params.descent_sink
            } else {
                target + Vec3::Z * altitude
            }
        };

        let obstacles: Vec<Obstacle> = (0..n)
            .filter(|&j| j != i)
            .filter_map(|j| believed[j].map(Obstacle::new))
            .collect();
        let feed_forward = platform.velocity;
        cmd.velocity_setpoint = match velocity_command(p, goal, &obstacles, &params.apf) {
            Ok(v) => clamp_speed(v + feed_forward, params.apf.vmax)?,
            Err(Error::Singularity) => Vec3::ZERO,
            Err(e) => return Err(e),
        };
        commands.push(cmd);
    }
    Ok(SwarmCommand { commands })
}
