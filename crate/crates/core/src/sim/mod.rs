//! Scenario configuration, platform motion, drone dynamics and the
//! closed-loop simulation engine.

pub mod config;
pub mod dynamics;
pub mod engine;
pub mod faults;
pub mod metrics;
pub mod record;
pub mod trajectory;

pub use config::{FaultEvent, FaultKind, ScenarioConfig, TrajectoryKind};
pub use dynamics::{step_drone, step_yaw, YAW_TIME_CONSTANT};
pub use engine::{initial_drones, run_scenario, CAMERA_SWITCH_DELAY, CIRCUIT_SETTLE};
pub use faults::{apply_faults, FaultSchedule};
pub use metrics::{compute_metrics, DroneError, LandingMetrics};
pub use record::{DroneRow, Event, EventKind, PlatformRow, RunRecord, Termination, TickRow, Touchdown};
pub use trajectory::platform_pose;
