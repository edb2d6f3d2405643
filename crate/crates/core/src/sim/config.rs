use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planning::ApfParams;
use crate::swarm::FormationSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    #[default]
    Stationary,
    Line,
    /// One counterclockwise circuit of a rectangle, then a stop.
    Rectangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    CameraLoss,
    CameraRecover,
}

/// Scheduled camera fault.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultEvent {
    pub t: f64,
    pub drone: usize,
    pub kind: FaultKind,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub trajectory: TrajectoryKind,
    /// m/s; ignored for a stationary platform.
    pub platform_speed: f64,
    /// Rectangle `[along x, along y]`, meters.
    pub rectangle_extents: [f64; 2],
    pub dt: f64,
    pub duration_max: f64,
    pub seed: u64,
    pub pixel_noise_sigma: f64,
    pub faults: Vec<FaultEvent>,
    /// Platform-frame landing offset per drone; also fixes the drone count.
    pub formation: Vec<[f64; 2]>,
    pub apf: ApfParams,
    pub drone_time_constant: f64,
    pub landing_threshold: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            trajectory: TrajectoryKind::Stationary,
            platform_speed: 0.5,
            rectangle_extents: [4.0, 2.0],
            dt: 1.0 / 30.0,
            duration_max: 60.0,
            seed: 0,
            pixel_noise_sigma: 0.5,
            faults: Vec::new(),
            formation: FormationSpec::default().offsets.iter().map(|&(x, y)| [x, y]).collect(),
            apf: ApfParams::default(),
            drone_time_constant: 0.3,
            landing_threshold: 0.05,
        }
    }
}

impl ScenarioConfig {
    pub fn drone_count(&self) -> usize {
        self.formation.len()
    }

    pub fn formation_spec(&self) -> FormationSpec {
        FormationSpec {
            offsets: self.formation.iter().map(|o| (o[0], o[1])).collect(),
            ..FormationSpec::default()
        }
    }

    /// Speed the platform actually moves at.
    pub fn effective_speed(&self) -> f64 {
        match self.trajectory {
            TrajectoryKind::Stationary => 0.0,
            _ => self.platform_speed,
        }
    }

    /// Time the rectangle circuit completes; `None` for open-ended motion.
    pub fn circuit_duration(&self) -> Option<f64> {
        match self.trajectory {
            TrajectoryKind::Rectangle if self.platform_speed > 0.0 => {
                let [w, h] = self.rectangle_extents;
                Some(2.0 * (w + h) / self.platform_speed)
            }
            TrajectoryKind::Rectangle => Some(0.0),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.dt, "dt"),
            (self.duration_max, "duration_max"),
            (self.drone_time_constant, "drone_time_constant"),
            (self.landing_threshold, "landing_threshold"),
        ];
        for (v, name) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.platform_speed >= 0.0 && self.platform_speed.is_finite()) {
            return Err(Error::config(format!(
                "platform_speed must be non-negative, got {}",
                self.platform_speed
            )));
        }
        if !(self.pixel_noise_sigma >= 0.0 && self.pixel_noise_sigma.is_finite()) {
            return Err(Error::config("pixel_noise_sigma must be non-negative"));
        }
        if self.rectangle_extents.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::config("rectangle_extents must be positive"));
        }
        self.apf.validate()?;
        self.formation_spec().validate()?;
        let n = self.drone_count();
        for f in &self.faults {
            if f.drone >= n {
                return Err(Error::config(format!(
                    "fault at t={} names drone {} but the formation has {n} drones",
                    f.t, f.drone
                )));
            }
            if !(0.0..=self.duration_max).contains(&f.t) {
                return Err(Error::config(format!(
                    "fault time {} outside [0, duration_max={}]",
                    f.t, self.duration_max
                )));
            }
        }
        Ok(())
    }
}
