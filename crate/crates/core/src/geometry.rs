//! Vectors, rigid poses and the speed limiter shared by every module.
//!
//! World frame is z-up; the platform moves in the `z = 0` plane. Orientation
//! is stored as a unit quaternion (world-from-body) and converted to
//! yaw/pitch/roll only when serialized.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use nalgebra::{Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Length of the xy projection.
    pub fn horizontal_norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Same vector with `z` zeroed.
    pub fn horizontal(self) -> Vec3 {
        Vec3::new(self.x, self.y, 0.0)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_na(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_na(v: &Vector3<f64>) -> Self {
        Vec3::new(v.x, v.y, v.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let wrapped = (theta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if wrapped >= PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

/// Rigid transform: rotation then translation (world-from-body).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "PoseRepr", into = "PoseRepr")]
pub struct Pose {
    pub position: Vec3,
    pub orientation: UnitQuaternion<f64>,
}

impl Default for Pose {
    fn default() -> Self {
        Pose::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            position: Vec3::ZERO,
            orientation: UnitQuaternion::identity(),
        }
    }

    pub fn new(position: Vec3, orientation: UnitQuaternion<f64>) -> Self {
        Pose {
            position,
            orientation,
        }
    }

    pub fn translation(x: f64, y: f64, z: f64) -> Self {
        Pose::new(Vec3::new(x, y, z), UnitQuaternion::identity())
    }

    /// Pose from position and Z-Y-X Euler angles.
    pub fn from_ypr(position: Vec3, yaw: f64, pitch: f64, roll: f64) -> Self {
        Pose::new(
            position,
            UnitQuaternion::from_euler_angles(roll, pitch, yaw),
        )
    }

    pub fn from_yaw(position: Vec3, yaw: f64) -> Self {
        Pose::from_ypr(position, yaw, 0.0, 0.0)
    }

    pub fn from_axis_angle(position: Vec3, axis: Vec3, angle: f64) -> Self {
        let orientation = Unit::try_new(axis.to_na(), 1e-12)
            .map(|a| UnitQuaternion::from_axis_angle(&a, angle))
            .unwrap_or_else(UnitQuaternion::identity);
        Pose::new(position, orientation)
    }

    /// `(yaw, pitch, roll)` in radians.
    pub fn ypr(&self) -> (f64, f64, f64) {
        let (roll, pitch, yaw) = self.orientation.euler_angles();
        (yaw, pitch, roll)
    }

    /// Heading of the body x axis projected on the ground plane.
    pub fn heading(&self) -> f64 {
        let fwd = self.rotate(Vec3::X);
        fwd.y.atan2(fwd.x)
    }

    pub fn rotate(&self, v: Vec3) -> Vec3 {
        Vec3::from_na(&(self.orientation * v.to_na()))
    }

    /// Applies the rotation, then the translation.
    pub fn transform_point(&self, v: Vec3) -> Vec3 {
        self.rotate(v) + self.position
    }

    /// `self ∘ other`: maps `other`'s frame through `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            position: self.transform_point(other.position),
            orientation: self.orientation * other.orientation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let inv = self.orientation.inverse();
        Pose {
            position: -Vec3::from_na(&(inv * self.position.to_na())),
            orientation: inv,
        }
    }

    /// Translation distance plus rotation angle between two poses.
    pub fn difference(&self, other: &Pose) -> (f64, f64) {
        (
            self.position.distance(other.position),
            self.orientation.angle_to(&other.orientation),
        )
    }
}

/// Free-function form of [`Pose::compose`].
pub fn compose(a: &Pose, b: &Pose) -> Pose {
    a.compose(b)
}

/// Free-function form of [`Pose::transform_point`].
pub fn transform_point(p: &Pose, v: Vec3) -> Vec3 {
    p.transform_point(v)
}

#[derive(Serialize, Deserialize)]
struct PoseRepr {
    position: Vec3,
    yaw: f64,
    pitch: f64,
    roll: f64,
}

impl From<PoseRepr> for Pose {
    fn from(r: PoseRepr) -> Self {
        Pose::from_ypr(r.position, r.yaw, r.pitch, r.roll)
    }
}

impl From<Pose> for PoseRepr {
    fn from(p: Pose) -> Self {
        let (yaw, pitch, roll) = p.ypr();
        PoseRepr {
            position: p.position,
            yaw,
            pitch,
            roll,
        }
    }
}

/// Scales `v` down to magnitude `vmax` when it exceeds it.
pub fn clamp_speed(v: Vec3, vmax: f64) -> Result<Vec3> {
    if !(vmax > 0.0) {
        return Err(Error::config(format!(
            "speed limit must be positive, got {vmax}"
        )));
    }
    let speed = v.norm();
    // rescaled vectors can land one ulp above vmax; accepting them keeps
    // clamping idempotent
    if speed <= vmax * (1.0 + 1e-12) {
        Ok(v)
    } else {
        Ok(v * (vmax / speed))
    }
}
