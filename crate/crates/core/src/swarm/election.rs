use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::state::{CameraMount, DroneId, DroneState, Role};

/// Relative tolerance under which two summed costs count as a tie.
const TIE_TOLERANCE: f64 = 1e-9;

/// Cost of a healthy candidate guiding a blind drone: Euclidean distance.
pub fn leader_cost(candidate: Vec3, blind: Vec3) -> f64 {
    candidate.distance(blind)
}

/// Camera-healthy drone minimizing the summed cost to every blind drone.
/// Ties go to the lowest id.
pub fn select_leader(drones: &[DroneState]) -> Result<DroneId> {
    let blind: Vec<Vec3> = drones.iter().filter(|d| !d.camera_ok).map(|d| d.position()).collect();
    if blind.is_empty() {
        return Err(Error::NoBlindDrone);
    }
    let mut candidates: Vec<&DroneState> = drones.iter().filter(|d| d.camera_ok).collect();
    if candidates.is_empty() {
        return Err(Error::TotalFailure);
    }
    candidates.sort_by_key(|d| d.id);
    let mut best: Option<(DroneId, f64)> = None;
    for c in candidates {
        let cost: f64 = blind.iter().map(|&b| leader_cost(c.position(), b)).sum();
        best = match best {
            Some((_, best_cost)) if cost < best_cost - TIE_TOLERANCE * best_cost.abs().max(1.0) => Some((c.id, cost)),
            None => Some((c.id, cost)),
            keep => keep,
        };
    }
    Ok(best.expect("at least one candidate").0)
}

/// Pairs every camera-dead drone with the leader.
pub fn assign_followers(leader: DroneId, drones: &[DroneState]) -> Vec<(DroneId, DroneId)> {
    drones
        .iter()
        .filter(|d| !d.camera_ok && d.id != leader)
        .map(|d| (d.id, leader))
        .collect()
}

/// The leader looks down at the swarm; everyone else looks ahead.
pub fn camera_mount_command(role: Role) -> CameraMount {
    match role {
        Role::Leader => CameraMount::DownwardFacing,
        _ => CameraMount::ForwardFacing,
    }
}

/// Swarm-wide localization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwarmMode {
    /// Every drone localizes with its own camera.
    Homogeneous,
    /// One drone guides the others.
    LeaderFollower,
    /// No usable camera is left.
    Abort,
}

/// Outcome of one mode update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDecision {
    pub mode: SwarmMode,
    /// Role for every drone, in input order.
    pub roles: Vec<(DroneId, Role)>,
    /// Set on the tick a leader is elected.
    pub elected: Option<DroneId>,
}

/// Mode-switching state machine.
///
/// With all cameras healthy the leader flag is cleared and every drone flies
/// homogeneously. When a camera is lost, the first tick elects a leader and
/// the next one hands out Leader/Follower roles.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeManager {
    leader: Option<DroneId>,
}

impl ModeManager {
    pub fn new() -> Self {
        ModeManager::default()
    }

    pub fn leader(&self) -> Option<DroneId> {
        self.leader
    }

    pub fn leader_selected(&self) -> bool {
        self.leader.is_some()
    }

    /// Evaluates the mode for the given camera health. `health` is indexed
    /// like `drones` and overrides their `camera_ok` flags.
    pub fn update(&mut self, drones: &[DroneState], health: &[bool]) -> ModeDecision {
        assert_eq!(drones.len(), health.len(), "one health flag per drone");
        let current: Vec<DroneState> = drones
            .iter()
            .zip(health)
            .map(|(d, &ok)| DroneState { camera_ok: ok, ..d.clone() })
            .collect();

        if health.iter().all(|&ok| ok) {
            self.leader = None;
            return ModeDecision {
                mode: SwarmMode::Homogeneous,
                roles: current.iter().map(|d| (d.id, Role::Homogeneous)).collect(),
                elected: None,
            };
        }
        let abort = |this: &mut Self| {
            this.leader = None;
            ModeDecision {
                mode: SwarmMode::Abort,
                roles: current.iter().map(|d| (d.id, Role::Blind)).collect(),
                elected: None,
            }
        };
        match self.leader {
            None => match select_leader(&current) {
                Ok(id) => {
                    self.leader = Some(id);
                    ModeDecision {
                        mode: SwarmMode::Homogeneous,
                        roles: current.iter().map(|d| (d.id, d.role)).collect(),
                        elected: Some(id),
                    }
                }
                Err(_) => abort(self),
            },
            // no re-election once the leader's own camera is gone
            Some(leader) if !current.iter().any(|d| d.id == leader && d.camera_ok) => abort(self),
            Some(leader) => ModeDecision {
                mode: SwarmMode::LeaderFollower,
                roles: current
                    .iter()
                    .map(|d| (d.id, if d.id == leader { Role::Leader } else { Role::Follower(leader) }))
                    .collect(),
                elected: None,
            },
        }
    }
}
