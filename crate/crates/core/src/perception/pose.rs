//! Planar pose of a square tag from its four image corners.
//!
//! A homography between the tag plane and normalized image coordinates is
//! decomposed into rotation and translation using the known side length, then
//! refined by a few Gauss-Newton steps on the reprojection error.

use nalgebra::{Matrix3, SMatrix, SVector, UnitQuaternion, Vector3};

use super::camera::{signed_area2, CameraModel, TagObservation, TagSpec};
use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};

const REFINE_ITERATIONS: usize = 8;

/// Recovers the tag pose in the camera frame from an observation's corners.
pub fn estimate_tag_pose(obs: &TagObservation, cam: &CameraModel, tag: &TagSpec) -> Result<Pose> {
    let corners = &obs.corners;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if corners[i].distance(corners[j]) < 1e-6 {
                return Err(Error::estimation("repeated tag corners"));
            }
        }
    }
    // any three collinear corners make the homography singular
    for skip in 0..4 {
        let tri: Vec<_> = (0..4).filter(|&k| k != skip).map(|k| corners[k]).collect();
        let area = (tri[1].x - tri[0].x) * (tri[2].y - tri[0].y)
            - (tri[2].x - tri[0].x) * (tri[1].y - tri[0].y);
        if area.abs() < 1e-6 {
            return Err(Error::estimation("collinear tag corners"));
        }
    }
    if signed_area2(corners) <= 0.0 {
        return Err(Error::estimation("tag seen from behind"));
    }

    let half = tag.side / 2.0;
    let image: [(f64, f64); 4] = corners.map(|c| cam.normalize(c));
    // unit-square model coordinates keep the linear system well conditioned
    let model: [(f64, f64); 4] = tag.corners().map(|c| (c.x / half, c.y / half));

    let h_unit = homography(&model, &image)?;
    let h = h_unit * Matrix3::from_diagonal(&Vector3::new(1.0 / half, 1.0 / half, 1.0));
    let initial = decompose(&h)?;

    let points = tag.corners();
    let refined = refine(initial, &points, &image);
    let (rot, t) = match refined {
        Some(p) => p,
        None => initial,
    };
    let normal = rot * Vector3::z();
    if t.z <= 0.0 || normal.dot(&t) >= 0.0 {
        return Err(Error::estimation("no solution with the tag facing the camera"));
    }
    Ok(Pose::new(Vec3::from_na(&t), rot))
}

/// Direct linear solve for `H` (with `h33 = 1`) mapping `src` to `dst`.
fn homography(src: &[(f64, f64); 4], dst: &[(f64, f64); 4]) -> Result<Matrix3<f64>> {
    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut b = SVector::<f64, 8>::zeros();
    for (k, (&(x, y), &(u, v))) in src.iter().zip(dst).enumerate() {
        let r = 2 * k;
        a[(r, 0)] = x;
        a[(r, 1)] = y;
        a[(r, 2)] = 1.0;
        a[(r, 6)] = -u * x;
        a[(r, 7)] = -u * y;
        b[r] = u;
        a[(r + 1, 3)] = x;
        a[(r + 1, 4)] = y;
        a[(r + 1, 5)] = 1.0;
        a[(r + 1, 6)] = -v * x;
        a[(r + 1, 7)] = -v * y;
        b[r + 1] = v;
    }
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::estimation("singular homography system"))?;
    if !sol.iter().all(|v| v.is_finite()) {
        return Err(Error::estimation("non-finite homography"));
    }
    Ok(Matrix3::new(
        sol[0], sol[1], sol[2], sol[3], sol[4], sol[5], sol[6], sol[7], 1.0,
    ))
}

/// `H ~ [r1 r2 t]` in normalized coordinates; the sign is fixed so the tag
/// lies in front of the camera.
fn decompose(h: &Matrix3<f64>) -> Result<(UnitQuaternion<f64>, Vector3<f64>)> {
    let h1 = h.column(0).into_owned();
    let h2 = h.column(1).into_owned();
    let h3 = h.column(2).into_owned();
    let scale = (h1.norm() + h2.norm()) / 2.0;
    if scale < 1e-12 {
        return Err(Error::estimation("degenerate homography"));
    }
    let mut lambda = 1.0 / scale;
    if h3.z * lambda < 0.0 {
        lambda = -lambda;
    }
    let r1 = h1 * lambda;
    let r2 = h2 * lambda;
    let t = h3 * lambda;
    let r3 = r1.cross(&r2);
    let approx = Matrix3::from_columns(&[r1, r2, r3]);
    let svd = approx.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::estimation("rotation projection failed")),
    };
    let mut d = Matrix3::identity();
    if (u * vt).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let rot = nalgebra::Rotation3::from_matrix_unchecked(u * d * vt);
    Ok((UnitQuaternion::from_rotation_matrix(&rot), t))
}

fn residuals(
    rot: &UnitQuaternion<f64>,
    t: &Vector3<f64>,
    points: &[Vec3; 4],
    image: &[(f64, f64); 4],
) -> Option<SVector<f64, 8>> {
    let mut r = SVector::<f64, 8>::zeros();
    for (k, (p, &(u, v))) in points.iter().zip(image).enumerate() {
        let c = rot * p.to_na() + t;
        if c.z <= 1e-9 {
            return None;
        }
        r[2 * k] = c.x / c.z - u;
        r[2 * k + 1] = c.y / c.z - v;
    }
    Some(r)
}

fn perturb(
    rot: &UnitQuaternion<f64>,
    t: &Vector3<f64>,
    delta: &SVector<f64, 6>,
) -> (UnitQuaternion<f64>, Vector3<f64>) {
    let w = Vector3::new(delta[0], delta[1], delta[2]);
    let dt = Vector3::new(delta[3], delta[4], delta[5]);
    (UnitQuaternion::from_scaled_axis(w) * rot, t + dt)
}

/// Gauss-Newton on the normalized reprojection error with a numeric
/// Jacobian; returns `None` if no step improved the initial guess.
fn refine(
    initial: (UnitQuaternion<f64>, Vector3<f64>),
    points: &[Vec3; 4],
    image: &[(f64, f64); 4],
) -> Option<(UnitQuaternion<f64>, Vector3<f64>)> {
    let (mut rot, mut t) = initial;
    let mut r = residuals(&rot, &t, points, image)?;
    let mut cost = r.norm_squared();
    let mut improved = false;
    let mut damping = 1e-9;
    for _ in 0..REFINE_ITERATIONS {
        if cost < 1e-28 {
            break;
        }
        let mut jac = SMatrix::<f64, 8, 6>::zeros();
        for k in 0..6 {
            let eps = 1e-7 * if k < 3 { 1.0 } else { t.norm().max(1.0) };
            let mut delta = SVector::<f64, 6>::zeros();
            delta[k] = eps;
            let (rp, tp) = perturb(&rot, &t, &delta);
            delta[k] = -eps;
            let (rm, tm) = perturb(&rot, &t, &delta);
            let col = (residuals(&rp, &tp, points, image)? - residuals(&rm, &tm, points, image)?)
                / (2.0 * eps);
            jac.set_column(k, &col);
        }
        let jtj = jac.transpose() * jac;
        let jtr = jac.transpose() * r;
        let mut stepped = false;
        for _ in 0..6 {
            let lhs = jtj + SMatrix::<f64, 6, 6>::identity() * (damping * jtj.trace().max(1e-12));
            let Some(step) = lhs.cholesky().map(|c| c.solve(&(-jtr))) else {
                damping *= 10.0;
                continue;
            };
            let (rn, tn) = perturb(&rot, &t, &step);
            if let Some(rn_res) = residuals(&rn, &tn, points, image) {
                let c = rn_res.norm_squared();
                if c < cost {
                    rot = rn;
                    t = tn;
                    r = rn_res;
                    cost = c;
                    damping = (damping * 0.1).max(1e-12);
                    stepped = true;
                    improved = true;
                    break;
                }
            }
            damping *= 10.0;
        }
        if !stepped {
            break;
        }
    }
    improved.then_some((rot, t))
}
