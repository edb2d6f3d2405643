use std::f64::consts::FRAC_PI_2;

use super::config::{ScenarioConfig, TrajectoryKind};
use crate::geometry::wrap_angle;
use crate::state::PlatformState;

/// True platform state at time `t`. The platform starts at the origin
/// heading along +x.
pub fn platform_pose(kind: TrajectoryKind, t: f64, config: &ScenarioConfig) -> PlatformState {
    let v = config.platform_speed;
    match kind {
        TrajectoryKind::Stationary => PlatformState::new(0.0, 0.0, 0.0, 0.0),
        TrajectoryKind::Line => PlatformState::new(v * t, 0.0, 0.0, v),
        TrajectoryKind::Rectangle => rectangle(t, v, config.rectangle_extents),
    }
}

/// Counterclockwise circuit: +x, +y, −x, −y. At a corner the heading
/// already points down the next leg; after one lap the platform stops.
fn rectangle(t: f64, v: f64, [w, h]: [f64; 2]) -> PlatformState {
    let perimeter = 2.0 * (w + h);
    let s = (v * t).max(0.0);
    if s >= perimeter {
        return PlatformState::new(0.0, 0.0, wrap_angle(3.0 * FRAC_PI_2), 0.0);
    }
    let legs = [w, h, w, h];
    let mut start = (0.0, 0.0);
    let mut remaining = s;
    for (i, &len) in legs.iter().enumerate() {
        let heading = i as f64 * FRAC_PI_2;
        let dir = (heading.cos().round(), heading.sin().round());
        if remaining < len {
            return PlatformState::new(
                start.0 + dir.0 * remaining,
                start.1 + dir.1 * remaining,
                wrap_angle(heading),
                v,
            );
        }
        start = (start.0 + dir.0 * len, start.1 + dir.1 * len);
        remaining -= len;
    }
    unreachable!("s < perimeter lands on some leg")
}
