use nalgebra::{Matrix3, Rotation3, UnitQuaternion};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::pose::estimate_tag_pose;
use super::Point2;
use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};
use crate::state::{CameraMount, DroneState};

/// Closest range at which a tag is still decoded, meters.
pub const MIN_DETECTION_RANGE: f64 = 0.30;
/// Farthest range at which a tag is decoded, meters.
pub const MAX_DETECTION_RANGE: f64 = 4.00;
/// Printed tag side length, meters.
pub const DEFAULT_TAG_SIDE: f64 = 0.166;

/// Ideal pinhole camera. Optical frame: z along the boresight, x right, y down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
    pub pixel_noise_sigma: f64,
    /// Horizontal half field of view. Informational: the image bounds are the
    /// frustum.
    pub fov_half_angle: f64,
    pub mount: CameraMount,
}

impl Default for CameraModel {
    fn default() -> Self {
        CameraModel::new(500.0, 500.0, 320.0, 240.0, 640, 480, 0.5)
            .expect("default camera is valid")
    }
}

impl CameraModel {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: u32,
        height: u32,
        pixel_noise_sigma: f64,
    ) -> Result<Self> {
        if !(fx > 0.0 && fy > 0.0) {
            return Err(Error::config("focal lengths must be positive"));
        }
        if !(cx >= 0.0 && cx < width as f64 && cy >= 0.0 && cy < height as f64) {
            return Err(Error::config("principal point outside the image"));
        }
        if !(pixel_noise_sigma >= 0.0) {
            return Err(Error::config("pixel noise sigma must be non-negative"));
        }
        Ok(CameraModel {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
            pixel_noise_sigma,
            fov_half_angle: (cx.max(width as f64 - cx) / fx).atan(),
            mount: CameraMount::ForwardFacing,
        })
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.pixel_noise_sigma = sigma.max(0.0);
        self
    }

    pub fn with_mount(mut self, mount: CameraMount) -> Self {
        self.mount = mount;
        self
    }

    /// Projects a camera-frame point; `None` when it is not in front of the
    /// camera.
    pub fn project(&self, p: Vec3) -> Option<Point2> {
        if p.z <= 0.0 {
            return None;
        }
        Some(Point2::new(
            self.cx + self.fx * p.x / p.z,
            self.cy + self.fy * p.y / p.z,
        ))
    }

    pub fn in_image(&self, p: Point2) -> bool {
        p.x >= 0.0 && p.x < self.width as f64 && p.y >= 0.0 && p.y < self.height as f64
    }

    /// Pixel to normalized image coordinates.
    pub fn normalize(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.cx) / self.fx, (p.y - self.cy) / self.fy)
    }
}

impl CameraMount {
    /// Body-from-camera rotation of the mount (camera at the body origin).
    ///
    /// Forward-facing looks along body +x with image right = body −y;
    /// downward-facing looks along body −z with image right = body +x.
    pub fn body_from_camera(self) -> Pose {
        let (cam_x, cam_y, cam_z) = match self {
            CameraMount::ForwardFacing => (-Vec3::Y, -Vec3::Z, Vec3::X),
            CameraMount::DownwardFacing => (Vec3::X, -Vec3::Y, -Vec3::Z),
        };
        let m = Matrix3::from_columns(&[cam_x.to_na(), cam_y.to_na(), cam_z.to_na()]);
        let rot = Rotation3::from_matrix_unchecked(m);
        Pose::new(Vec3::ZERO, UnitQuaternion::from_rotation_matrix(&rot))
    }
}

/// World pose of a drone's camera given its body pose and mount.
pub fn camera_pose(body: &Pose, mount: CameraMount) -> Pose {
    body.compose(&mount.body_from_camera())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagSpec {
    pub id: u32,
    pub side: f64,
}

impl TagSpec {
    pub fn new(id: u32, side: f64) -> Result<Self> {
        if !(side > 0.0) {
            return Err(Error::config(format!("tag side must be positive, got {side}")));
        }
        Ok(TagSpec { id, side })
    }

    pub fn with_id(id: u32) -> Self {
        TagSpec {
            id,
            side: DEFAULT_TAG_SIDE,
        }
    }

    /// Corners in the tag plane (`z = 0`), in detection order.
    pub fn corners(&self) -> [Vec3; 4] {
        let h = self.side / 2.0;
        [
            Vec3::new(-h, h, 0.0),
            Vec3::new(h, h, 0.0),
            Vec3::new(h, -h, 0.0),
            Vec3::new(-h, -h, 0.0),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagObservation {
    pub tag_id: u32,
    pub corners: [Point2; 4],
    /// Tag pose in the camera frame.
    pub relative_pose: Pose,
    pub range: f64,
    pub timestamp: f64,
}

/// Projects the four tag corners through the noiseless pinhole model.
///
/// Returns `None` if any corner is behind the camera or outside the image.
pub fn project_tag(
    camera_pose: &Pose,
    cam: &CameraModel,
    tag_pose: &Pose,
    tag: &TagSpec,
) -> Option<[Point2; 4]> {
    let cam_from_tag = camera_pose.inverse().compose(tag_pose);
    let mut out = [Point2::default(); 4];
    for (slot, corner) in out.iter_mut().zip(tag.corners()) {
        let p = cam.project(cam_from_tag.transform_point(corner))?;
        if !cam.in_image(p) {
            return None;
        }
        *slot = p;
    }
    Some(out)
}

/// Twice the signed polygon area; positive for the winding produced by a tag
/// that faces the camera.
pub(crate) fn signed_area2(c: &[Point2; 4]) -> f64 {
    (0..4)
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % 4]);
            a.x * b.y - b.x * a.y
        })
        .sum()
}

/// Simulated tag detector for one drone camera.
///
/// Keeps tags whose center lies in `[MIN_DETECTION_RANGE,
/// MAX_DETECTION_RANGE]`, that project fully inside the image and whose front
/// face points at the camera. Corners get independent zero-mean Gaussian
/// noise with the camera's sigma; each kept detection carries the pose
/// recovered from the noisy corners.
pub fn detect_tags<R: Rng + ?Sized>(
    t: f64,
    observer: &DroneState,
    cam: &CameraModel,
    tags: &[(TagSpec, Pose)],
    rng: &mut R,
) -> Result<Vec<TagObservation>> {
    if !observer.camera_ok {
        return Err(Error::CameraFault(observer.id));
    }
    let cam_pose = camera_pose(&observer.pose, observer.camera_mount);
    let noise = Normal::new(0.0, cam.pixel_noise_sigma)
        .map_err(|e| Error::config(format!("pixel noise: {e}")))?;

    let mut out = Vec::new();
    for (spec, tag_pose) in tags {
        let to_camera = cam_pose.position - tag_pose.position;
        let range = to_camera.norm();
        if !(MIN_DETECTION_RANGE..=MAX_DETECTION_RANGE).contains(&range) {
            continue;
        }
        if tag_pose.rotate(Vec3::Z).dot(to_camera) <= 0.0 {
            continue;
        }
        let Some(mut corners) = project_tag(&cam_pose, cam, tag_pose, spec) else {
            continue;
        };
        if cam.pixel_noise_sigma > 0.0 {
            for c in corners.iter_mut() {
                c.x += noise.sample(rng);
                c.y += noise.sample(rng);
            }
        }
        if !corners.iter().all(|c| cam.in_image(*c)) || signed_area2(&corners) <= 0.0 {
            continue;
        }
        let mut obs = TagObservation {
            tag_id: spec.id,
            corners,
            relative_pose: Pose::identity(),
            range,
            timestamp: t,
        };
        let Ok(rel) = estimate_tag_pose(&obs, cam, spec) else {
            continue;
        };
        let measured = rel.position.norm();
        if !(MIN_DETECTION_RANGE..=MAX_DETECTION_RANGE).contains(&measured) {
            continue;
        }
        obs.relative_pose = rel;
        obs.range = measured;
        out.push(obs);
    }
    Ok(out)
}
