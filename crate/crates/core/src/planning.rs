//! Artificial potential field guidance.
//!
//! `U = ξ‖p − g‖² + Σ ½η(1/ρ − 1/d0)²` with the repulsion active only within
//! `d0` of an obstacle; drones descend the gradient at a clamped speed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{clamp_speed, Vec3};

/// Potential-field gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApfParams {
    /// Attraction scaling.
    pub xi: f64,
    /// Repulsion scaling.
    pub eta: f64,
    /// Repulsion cutoff distance, meters.
    pub d0: f64,
    /// Finite-difference step for numerical gradient checks, meters.
    #[serde(skip)]
    pub step: f64,
    /// Descent gain applied to the gradient.
    pub k: f64,
    /// Speed limit, m/s.
    pub vmax: f64,
}

impl Default for ApfParams {
    fn default() -> Self {
        ApfParams {
            xi: 0.8,
            eta: 0.5,
            // below the 0.26 m spacing of the default formation targets
            d0: 0.2,
            step: 1e-5,
            k: 1.0,
            vmax: 2.5,
        }
    }
}

impl ApfParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.xi > 0.0, "xi must be positive"),
            (self.eta >= 0.0, "eta must be non-negative"),
            (self.d0 > 0.0, "d0 must be positive"),
            (self.step > 0.0, "step must be positive"),
            (self.k > 0.0, "k must be positive"),
            (self.vmax > 0.0, "vmax must be positive"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::config(format!("apf: {msg}")));
            }
        }
        let all = [self.xi, self.eta, self.d0, self.step, self.k, self.vmax];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("apf: parameters must be finite"));
        }
        Ok(())
    }
}

/// A point obstacle (another drone's center).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub position: Vec3,
}

impl Obstacle {
    pub fn new(position: Vec3) -> Self {
        Obstacle { position }
    }
}

/// `ξ‖p − goal‖²`.
pub fn attraction_potential(p: Vec3, goal: Vec3, xi: f64) -> f64 {
    xi * (p - goal).norm_squared()
}

/// `½η(1/ρ − 1/d0)²` inside the cutoff, zero outside.
pub fn repulsion_potential(p: Vec3, obs: &Obstacle, eta: f64, d0: f64) -> Result<f64> {
    let rho = p.distance(obs.position);
    if rho >= d0 {
        return Ok(0.0);
    }
    if rho == 0.0 {
        return Err(Error::Singularity);
    }
    let a = 1.0 / rho - 1.0 / d0;
    Ok(0.5 * eta * a * a)
}

pub fn total_potential(p: Vec3, goal: Vec3, obstacles: &[Obstacle], params: &ApfParams) -> Result<f64> {
    let mut u = attraction_potential(p, goal, params.xi);
    for obs in obstacles {
        u += repulsion_potential(p, obs, params.eta, params.d0)?;
    }
    Ok(u)
}

/// Analytic `∇U`.
pub fn potential_gradient(p: Vec3, goal: Vec3, obstacles: &[Obstacle], params: &ApfParams) -> Result<Vec3> {
    let mut g = 2.0 * params.xi * (p - goal);
    for obs in obstacles {
        let diff = p - obs.position;
        let rho = diff.norm();
        if rho >= params.d0 {
            continue;
        }
        if rho == 0.0 {
            return Err(Error::Singularity);
        }
        // dU/dρ = −η(1/ρ − 1/d0)/ρ², ∇ρ = diff/ρ
        let a = 1.0 / rho - 1.0 / params.d0;
        g += diff * (-params.eta * a / (rho * rho * rho));
    }
    Ok(g)
}

/// `clamp(−k∇U, vmax)`.
pub fn velocity_command(p: Vec3, goal: Vec3, obstacles: &[Obstacle], params: &ApfParams) -> Result<Vec3> {
    let g = potential_gradient(p, goal, obstacles, params)?;
    clamp_speed(-params.k * g, params.vmax)
}
