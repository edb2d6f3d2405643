use serde::{Deserialize, Serialize};

use super::{Frame, Point2};
use crate::error::{Error, Result};

/// Half-width of the corner-score window used by [`good_features`].
const FEATURE_WINDOW: usize = 2;
/// Minimum distance between two returned features, pixels.
const NMS_RADIUS: f64 = 5.0;

/// Symmetric 2x2 matrix of windowed gradient products.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StructureTensor {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl StructureTensor {
    pub fn new(m11: f64, m12: f64, m22: f64) -> Self {
        StructureTensor { m11, m12, m22 }
    }

    pub fn identity() -> Self {
        StructureTensor::new(1.0, 0.0, 1.0)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = (self.m11 + self.m22) / 2.0;
        let diff = (self.m11 - self.m22) / 2.0;
        let r = diff.hypot(self.m12);
        (mean - r, mean + r)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().0
    }

    pub fn determinant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    /// Solves `M·[u v]ᵀ = rhs`; `None` when the matrix is singular.
    pub fn solve(&self, rhs: (f64, f64)) -> Option<(f64, f64)> {
        let det = self.determinant();
        let scale = (self.m11.abs() + self.m22.abs()).max(f64::MIN_POSITIVE);
        if det.abs() <= 1e-12 * scale * scale {
            return None;
        }
        Some((
            (self.m22 * rhs.0 - self.m12 * rhs.1) / det,
            (self.m11 * rhs.1 - self.m12 * rhs.0) / det,
        ))
    }
}

/// Window weighting `w(x, y)` for [`structure_tensor`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Weighting {
    #[default]
    Uniform,
    /// Isotropic Gaussian centered on the window.
    Gaussian { sigma: f64 },
}

impl Weighting {
    pub(crate) fn weight(&self, dx: isize, dy: isize) -> f64 {
        match *self {
            Weighting::Uniform => 1.0,
            Weighting::Gaussian { sigma } => {
                let r2 = (dx * dx + dy * dy) as f64;
                (-r2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

/// `M = Σ w(x,y)·[[Ix², IxIy], [IxIy, Iy²]]` over the `(2·half+1)²` window at
/// `center`, with central-difference derivatives.
pub fn structure_tensor(
    frame: &Frame,
    center: (usize, usize),
    half: usize,
    weights: Weighting,
) -> Result<StructureTensor> {
    let (cx, cy) = center;
    if cx < half || cy < half || cx + half >= frame.width() || cy + half >= frame.height() {
        return Err(Error::Bounds {
            x: cx,
            y: cy,
            half,
            width: frame.width(),
            height: frame.height(),
        });
    }
    let mut m = StructureTensor::default();
    for y in (cy - half)..=(cy + half) {
        for x in (cx - half)..=(cx + half) {
            let w = weights.weight(x as isize - cx as isize, y as isize - cy as isize);
            let ix = frame.dx(x, y);
            let iy = frame.dy(x, y);
            m.m11 += w * ix * ix;
            m.m12 += w * ix * iy;
            m.m22 += w * iy * iy;
        }
    }
    Ok(m)
}

/// Quadratic form `[u v]·M·[u v]ᵀ`: intensity change for a window shift.
pub fn intensity_error(m: &StructureTensor, u: f64, v: f64) -> f64 {
    let e = m.m11 * u * u + 2.0 * m.m12 * u * v + m.m22 * v * v;
    e.max(0.0)
}

/// Corner score map: minimum structure-tensor eigenvalue per pixel, `None`
/// where the window does not fit.
pub(crate) fn min_eigen_map(frame: &Frame, half: usize) -> Vec<Option<f64>> {
    let (w, h) = (frame.width(), frame.height());
    let ix: Vec<f64> = (0..w * h).map(|i| frame.dx(i % w, i / w)).collect();
    let iy: Vec<f64> = (0..w * h).map(|i| frame.dy(i % w, i / w)).collect();
    let mut out = vec![None; w * h];
    if w <= 2 * half || h <= 2 * half {
        return out;
    }
    for cy in half..h - half {
        for cx in half..w - half {
            let mut m = StructureTensor::default();
            for y in cy - half..=cy + half {
                for x in cx - half..=cx + half {
                    let (gx, gy) = (ix[y * w + x], iy[y * w + x]);
                    m.m11 += gx * gx;
                    m.m12 += gx * gy;
                    m.m22 += gy * gy;
                }
            }
            out[cy * w + cx] = Some(m.min_eigenvalue());
        }
    }
    out
}

/// Shi-Tomasi style corner selection.
///
/// Keeps pixels whose minimum eigenvalue exceeds `quality × max`, strongest
/// first, suppressing anything within a few pixels of an accepted corner.
pub fn good_features(frame: &Frame, max_count: usize, quality_threshold: f64) -> Vec<Point2> {
    let scores = min_eigen_map(frame, FEATURE_WINDOW);
    let best = scores.iter().flatten().cloned().fold(0.0_f64, f64::max);
    if best <= 1e-12 || max_count == 0 {
        return Vec::new();
    }
    let cutoff = quality_threshold.max(0.0) * best;
    let w = frame.width();
    let mut candidates: Vec<(f64, usize)> = scores
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.filter(|&v| v > cutoff && v > 1e-12).map(|v| (v, i)))
        .collect();
    // descending score, then raster order for determinism
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut picked: Vec<Point2> = Vec::new();
    for (_, i) in candidates {
        let p = Point2::new((i % w) as f64, (i / w) as f64);
        if picked.iter().all(|q| q.distance(p) >= NMS_RADIUS) {
            picked.push(p);
            if picked.len() == max_count {
                break;
            }
        }
    }
    picked
}
