use serde::{Deserialize, Serialize};

use super::{good_features, lk_flow_with, Frame, LkParams, Point2};
use crate::error::{Error, Result};
use crate::geometry::wrap_angle;

/// `p ↦ scale·R(theta)·p + (dx, dy)` in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform2D {
    pub dx: f64,
    pub dy: f64,
    pub theta: f64,
    pub scale: f64,
}

impl Default for SimilarityTransform2D {
    fn default() -> Self {
        Self::identity()
    }
}

impl SimilarityTransform2D {
    pub fn new(dx: f64, dy: f64, theta: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::estimation(format!("similarity scale must be positive, got {scale}")));
        }
        Ok(SimilarityTransform2D { dx, dy, theta: wrap_angle(theta), scale })
    }

    pub const fn identity() -> Self {
        SimilarityTransform2D { dx: 0.0, dy: 0.0, theta: 0.0, scale: 1.0 }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        SimilarityTransform2D { dx, dy, ..Self::identity() }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let (s, c) = self.theta.sin_cos();
        Point2::new(
            self.scale * (c * p.x - s * p.y) + self.dx,
            self.scale * (s * p.x + c * p.y) + self.dy,
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SimilarityTransform2D) -> SimilarityTransform2D {
        let t = self.apply(Point2::new(other.dx, other.dy));
        SimilarityTransform2D {
            dx: t.x,
            dy: t.y,
            theta: wrap_angle(self.theta + other.theta),
            scale: self.scale * other.scale,
        }
    }

    pub fn inverse(&self) -> SimilarityTransform2D {
        let rot = SimilarityTransform2D {
            dx: 0.0,
            dy: 0.0,
            theta: wrap_angle(-self.theta),
            scale: 1.0 / self.scale,
        };
        let t = rot.apply(Point2::new(self.dx, self.dy));
        SimilarityTransform2D { dx: -t.x, dy: -t.y, ..rot }
    }
}

/// Least-squares similarity mapping `src[i]` onto `dst[i]`.
pub fn fit_similarity(src: &[Point2], dst: &[Point2]) -> Result<SimilarityTransform2D> {
    if src.len() != dst.len() {
        return Err(Error::estimation(format!(
            "point count mismatch: {} source, {} destination",
            src.len(),
            dst.len()
        )));
    }
    if src.len() < 2 {
        return Err(Error::estimation("similarity fit needs at least two point pairs"));
    }
    let n = src.len() as f64;
    let mean = |pts: &[Point2]| {
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.x, a.1 + p.y));
        Point2::new(sx / n, sy / n)
    };
    let (ms, md) = (mean(src), mean(dst));
    // complex form: d = a·s + t with a = scale·e^{iθ}
    let (mut re, mut im, mut norm) = (0.0, 0.0, 0.0);
    let mut spread = 0.0_f64;
    for (s, d) in src.iter().zip(dst) {
        let (sx, sy) = (s.x - ms.x, s.y - ms.y);
        let (dx, dy) = (d.x - md.x, d.y - md.y);
        re += sx * dx + sy * dy;
        im += sx * dy - sy * dx;
        norm += sx * sx + sy * sy;
        spread = spread.max(s.x.abs()).max(s.y.abs());
    }
    if norm <= 1e-18 * (1.0 + spread * spread) * n {
        return Err(Error::estimation("source points are coincident"));
    }
    let (ar, ai) = (re / norm, im / norm);
    let scale = ar.hypot(ai);
    if scale <= 0.0 {
        return Err(Error::estimation("destination points are coincident"));
    }
    let theta = ai.atan2(ar);
    let dx = md.x - (ar * ms.x - ai * ms.y);
    let dy = md.y - (ai * ms.x + ar * ms.y);
    SimilarityTransform2D::new(dx, dy, theta, scale)
}

/// Centered moving average of each transform component.
///
/// Windows are truncated at the sequence ends; an even `window` behaves like
/// the next odd size down and `0` is treated as `1`.
pub fn smooth_transforms(sequence: &[SimilarityTransform2D], window: usize) -> Vec<SimilarityTransform2D> {
    let half = window.saturating_sub(1) / 2;
    if half == 0 {
        return sequence.to_vec();
    }
    let n = sequence.len();
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(n - 1);
            let span = &sequence[lo..=hi];
            let m = span.len() as f64;
            let avg = |f: fn(&SimilarityTransform2D) -> f64| span.iter().map(f).sum::<f64>() / m;
            let (sin, cos) = span
                .iter()
                .fold((0.0, 0.0), |a, t| (a.0 + t.theta.sin(), a.1 + t.theta.cos()));
            // constant runs pass through untouched
            let theta = if span.iter().all(|t| t.theta == span[0].theta) {
                span[0].theta
            } else {
                sin.atan2(cos)
            };
            SimilarityTransform2D {
                dx: avg(|t| t.dx),
                dy: avg(|t| t.dy),
                theta: wrap_angle(theta),
                scale: avg(|t| t.scale),
            }
        })
        .collect()
}

/// Tuning for [`stabilize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilizerParams {
    pub max_features: usize,
    pub quality_threshold: f64,
    pub half_window: usize,
    /// Moving-average length in frames.
    pub smoothing_window: usize,
    /// Tracks farther than this many median residuals from the first fit are
    /// dropped before refitting; `f64::INFINITY` keeps every track.
    pub outlier_factor: f64,
    pub lk: LkParams,
}

impl Default for StabilizerParams {
    fn default() -> Self {
        StabilizerParams {
            max_features: 200,
            quality_threshold: 0.01,
            half_window: 7,
            smoothing_window: 11,
            outlier_factor: 3.0,
            lk: LkParams::default(),
        }
    }
}

/// Output of the stabilization pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilization {
    /// Estimated frame-to-frame motion, one per consecutive pair.
    pub motion: Vec<SimilarityTransform2D>,
    /// Smoothed motion that the stabilized video keeps.
    pub smoothed: Vec<SimilarityTransform2D>,
    /// Warp applied to each frame; the first is the identity.
    pub compensation: Vec<SimilarityTransform2D>,
    /// RMS displacement of tracked features after compensation, pixels.
    pub residual_jitter: f64,
}

/// Stabilization with default [`StabilizerParams`].
pub fn stabilize(frames: &[Frame]) -> Result<Stabilization> {
    stabilize_with(frames, &StabilizerParams::default())
}

/// Fits, drops tracks whose fit residual exceeds `factor` times the median
/// residual (with a 0.1 px floor) and refits on the rest.
fn fit_inliers(
    src: Vec<Point2>,
    dst: Vec<Point2>,
    factor: f64,
) -> Result<(SimilarityTransform2D, Vec<Point2>, Vec<Point2>)> {
    let fit = fit_similarity(&src, &dst)?;
    if !factor.is_finite() {
        return Ok((fit, src, dst));
    }
    let residuals: Vec<f64> = src.iter().zip(&dst).map(|(p, q)| fit.apply(*p).distance(*q)).collect();
    let mut sorted = residuals.clone();
    sorted.sort_by(f64::total_cmp);
    let cutoff = factor * sorted[sorted.len() / 2].max(0.1);
    let (src, dst): (Vec<Point2>, Vec<Point2>) = src
        .into_iter()
        .zip(dst)
        .zip(&residuals)
        .filter(|(_, r)| **r <= cutoff)
        .map(|(pq, _)| pq)
        .unzip();
    Ok((fit_similarity(&src, &dst)?, src, dst))
}

/// Features, flow, per-pair similarity fit, smoothing and compensation.
pub fn stabilize_with(frames: &[Frame], params: &StabilizerParams) -> Result<Stabilization> {
    if frames.len() < 2 {
        return Err(Error::estimation("stabilization needs at least two frames"));
    }
    let mut motion = Vec::with_capacity(frames.len() - 1);
    let mut tracks = Vec::with_capacity(frames.len() - 1);
    for (k, pair) in frames.windows(2).enumerate() {
        let feats = good_features(&pair[0], params.max_features, params.quality_threshold);
        let flows = lk_flow_with(&pair[0], &pair[1], &feats, params.half_window, &params.lk);
        let (src, dst): (Vec<Point2>, Vec<Point2>) = feats
            .iter()
            .zip(&flows)
            .filter_map(|(p, f)| f.displacement().map(|(u, v)| (*p, Point2::new(p.x + u, p.y + v))))
            .unzip();
        if src.len() < 2 {
            return Err(Error::estimation(format!(
                "frames {k}->{} are untrackable ({} tracked features)",
                k + 1,
                src.len()
            )));
        }
        let (fit, src, dst) = fit_inliers(src, dst, params.outlier_factor)?;
        motion.push(fit);
        tracks.push((src, dst));
    }
    let smoothed = smooth_transforms(&motion, params.smoothing_window);

    let mut compensation = vec![SimilarityTransform2D::identity()];
    for (t, s) in motion.iter().zip(&smoothed) {
        let a = compensation.last().unwrap();
        compensation.push(s.compose(a).compose(&t.inverse()));
    }

    let (mut sq, mut count) = (0.0, 0usize);
    for (k, (src, dst)) in tracks.iter().enumerate() {
        let (a, b) = (&compensation[k], &compensation[k + 1]);
        for (p, q) in src.iter().zip(dst) {
            let d = b.apply(*q).distance(a.apply(*p));
            sq += d * d;
            count += 1;
        }
    }
    Ok(Stabilization {
        motion,
        smoothed,
        compensation,
        residual_jitter: (sq / count as f64).sqrt(),
    })
}
