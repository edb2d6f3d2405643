use crate::geometry::{clamp_speed, wrap_angle, Pose, Vec3};
use crate::state::DroneState;

/// Yaw response time constant, seconds.
pub const YAW_TIME_CONSTANT: f64 = 0.5;

/// First-order velocity tracking `v' = v + (dt/τ)(v_cmd − v)`, clamped to
/// `vmax`, then position integration. The ground is a floor at `z = 0`.
pub fn step_drone(state: &DroneState, command: Vec3, dt: f64, time_constant: f64, vmax: f64) -> DroneState {
    assert!(dt > 0.0 && time_constant > 0.0, "dt and time constant must be positive");
    let gain = (dt / time_constant).min(1.0);
    let v = state.velocity + (command - state.velocity) * gain;
    let mut v = clamp_speed(v, vmax).expect("vmax validated by the scenario");
    let mut position = state.position() + v * dt;
    if position.z < 0.0 {
        position.z = 0.0;
        v.z = v.z.max(0.0);
    }
    DroneState {
        pose: Pose::new(position, state.pose.orientation),
        velocity: v,
        ..state.clone()
    }
}

/// First-order yaw response toward `setpoint`.
pub fn step_yaw(state: &DroneState, setpoint: f64, dt: f64) -> DroneState {
    let yaw = state.pose.heading();
    let gain = (dt / YAW_TIME_CONSTANT).min(1.0);
    let next = wrap_angle(yaw + gain * wrap_angle(setpoint - yaw));
    DroneState {
        pose: Pose::from_yaw(state.position(), next),
        ..state.clone()
    }
}
