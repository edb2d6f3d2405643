use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::state::{DroneId, Phase, PLATFORM_HALF_EXTENTS};

/// Horizontal touchdown error of one drone against its formation slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DroneError {
    pub drone: DroneId,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandingMetrics {
    pub errors: Vec<DroneError>,
    pub rmse: f64,
    pub mean_error: f64,
    /// Radius around the slot that contains every touchdown of the run.
    pub boundary_radius: f64,
    pub all_inside_footprint: bool,
    /// Smallest pairwise drone distance over the whole run.
    pub min_separation: f64,
    /// Smallest distance between two drones that are both still airborne
    /// and not yet descending.
    pub min_separation_pre_landing: f64,
}

/// Touchdown accuracy and separation for a finished run.
pub fn compute_metrics(record: &RunRecord) -> Result<LandingMetrics> {
    if record.touchdowns.is_empty() {
        return Err(Error::MetricsUnavailable);
    }
    let formation = &record.config.formation;
    let (hx, hy) = PLATFORM_HALF_EXTENTS;
    let mut errors = Vec::with_capacity(record.touchdowns.len());
    let mut inside = true;
    for td in &record.touchdowns {
        let [ox, oy] = formation
            .get(td.drone)
            .copied()
            .ok_or_else(|| Error::config(format!("touchdown for unknown drone {}", td.drone)))?;
        let p = td.platform_frame;
        errors.push(DroneError { drone: td.drone, error: (p.x - ox).hypot(p.y - oy) });
        inside &= p.x.abs() <= hx && p.y.abs() <= hy;
    }
    let n = errors.len() as f64;
    let rmse = (errors.iter().map(|e| e.error * e.error).sum::<f64>() / n).sqrt();
    let mean_error = errors.iter().map(|e| e.error).sum::<f64>() / n;
    let boundary_radius = errors.iter().map(|e| e.error).fold(0.0, f64::max);

    let mut min_separation = f64::INFINITY;
    let mut min_separation_pre_landing = f64::INFINITY;
    for row in &record.rows {
        for (i, a) in row.drones.iter().enumerate() {
            for b in &row.drones[i + 1..] {
                let d = distance(a.position, b.position);
                min_separation = min_separation.min(d);
                if a.phase < Phase::Landing && b.phase < Phase::Landing {
                    min_separation_pre_landing = min_separation_pre_landing.min(d);
                }
            }
        }
    }
    Ok(LandingMetrics {
        errors,
        rmse,
        mean_error,
        boundary_radius,
        all_inside_footprint: inside,
        min_separation,
        min_separation_pre_landing,
    })
}

fn distance(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::config::ScenarioConfig;
    use crate::sim::record::{DroneRow, PlatformRow, TickRow, Touchdown};
    use crate::state::Role;

    fn record(points: &[(DroneId, f64, f64)]) -> RunRecord {
        let mut r = RunRecord::new(ScenarioConfig::default());
        for &(drone, x, y) in points {
            let p = Vec3::new(x, y, 0.0);
            r.touchdowns.push(Touchdown { drone, t: 1.0, world: p, platform_frame: p });
        }
        r
    }

    fn row(positions: &[(f64, f64, f64, Phase)]) -> TickRow {
        TickRow {
            t: 0.0,
            drones: positions
                .iter()
                .enumerate()
                .map(|(id, &(x, y, z, phase))| DroneRow {
                    id,
                    position: Vec3::new(x, y, z),
                    velocity: Vec3::ZERO,
                    yaw: 0.0,
                    role: Role::Homogeneous,
                    phase,
                })
                .collect(),
            platform: PlatformRow { position: Vec3::ZERO, velocity: Vec3::ZERO, heading: 0.0 },
        }
    }

    #[test]
    fn exact_touchdowns_have_zero_error() {
        let f = ScenarioConfig::default().formation;
        let pts: Vec<_> = f.iter().enumerate().map(|(i, o)| (i, o[0], o[1])).collect();
        let m = compute_metrics(&record(&pts)).unwrap();
        assert_eq!(m.rmse, 0.0);
        assert_eq!(m.boundary_radius, 0.0);
        assert!(m.all_inside_footprint);
    }

    #[test]
    fn rmse_mean_and_boundary() {
        let f = ScenarioConfig::default().formation;
        let pts = [(0, f[0][0] + 0.03, f[0][1]), (1, f[1][0], f[1][1] - 0.04), (2, f[2][0], f[2][1])];
        let m = compute_metrics(&record(&pts)).unwrap();
        assert!((m.rmse - (0.0025f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((m.mean_error - 0.07 / 3.0).abs() < 1e-12);
        assert!((m.boundary_radius - 0.04).abs() < 1e-12);
    }

    #[test]
    fn touchdown_off_the_deck_is_flagged() {
        let m = compute_metrics(&record(&[(0, 0.3, 0.0)])).unwrap();
        assert!(!m.all_inside_footprint);
    }

    #[test]
    fn no_touchdowns_is_an_error() {
        assert!(matches!(compute_metrics(&record(&[])), Err(Error::MetricsUnavailable)));
    }

    #[test]
    fn separation_over_rows() {
        let mut r = record(&[(0, 0.0, 0.0)]);
        r.rows.push(row(&[(0.0, 0.0, 1.0, Phase::Tracking), (1.0, 0.0, 1.0, Phase::Tracking), (3.0, 0.0, 1.0, Phase::Idle)]));
        r.rows.push(row(&[(0.0, 0.0, 1.0, Phase::Landing), (0.2, 0.0, 1.0, Phase::Landing), (3.0, 0.0, 1.0, Phase::Idle)]));
        let m = compute_metrics(&r).unwrap();
        assert!((m.min_separation - 0.2).abs() < 1e-12);
        assert!((m.min_separation_pre_landing - 1.0).abs() < 1e-12);
    }
}
