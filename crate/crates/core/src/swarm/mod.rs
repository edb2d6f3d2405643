//! Mode switching between self-localizing and leader-guided flight, leader
//! election, relayed localization and the per-tick landing controller.

mod control;
mod election;
mod localization;

pub use control::{control_tick, ControlParams, DroneCommand, FormationSpec, SwarmCommand, SwarmEstimates};
pub use election::{
    assign_followers, camera_mount_command, leader_cost, select_leader, ModeDecision, ModeManager,
    SwarmMode,
};
pub use localization::{
    fuse_platform_estimate, leader_guidance, EstimateSource, Guidance, LocalizationEstimate,
    PlatformEstimate, PlatformTracker, TrackerGains,
};
