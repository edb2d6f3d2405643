use serde::{Deserialize, Serialize};

use super::config::{FaultKind, ScenarioConfig};
use crate::geometry::Vec3;
use crate::state::{DroneId, Phase, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    AllLanded,
    Timeout,
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DroneRow {
    pub id: DroneId,
    pub position: Vec3,
    pub velocity: Vec3,
    pub yaw: f64,
    pub role: Role,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlatformRow {
    pub position: Vec3,
    pub velocity: Vec3,
    pub heading: f64,
}

/// True world state after one tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRow {
    pub t: f64,
    pub drones: Vec<DroneRow>,
    pub platform: PlatformRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventKind {
    Fault { drone: DroneId, kind: FaultKind },
    Election { leader: DroneId },
    RoleChange { drone: DroneId, from: Role, to: Role },
    PhaseChange { drone: DroneId, from: Phase, to: Phase },
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// Where and when a drone reached the deck.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Touchdown {
    pub drone: DroneId,
    pub t: f64,
    pub world: Vec3,
    /// Touchdown point in the true platform frame at that instant.
    pub platform_frame: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: ScenarioConfig,
    pub rows: Vec<TickRow>,
    pub events: Vec<Event>,
    pub touchdowns: Vec<Touchdown>,
    pub termination: Termination,
}

impl RunRecord {
    /// Empty record for `config`.
    pub fn new(config: ScenarioConfig) -> Self {
        RunRecord {
            config,
            rows: Vec::new(),
            events: Vec::new(),
            touchdowns: Vec::new(),
            termination: Termination::Timeout,
        }
    }

    pub fn elections(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::Election { .. })).count()
    }

    pub fn duration(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.t)
    }
}
