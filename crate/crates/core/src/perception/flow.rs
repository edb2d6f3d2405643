use serde::{Deserialize, Serialize};

use super::features::StructureTensor;
use super::{Frame, Point2};

/// Per-feature optical-flow result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Flow {
    Tracked { u: f64, v: f64 },
    /// Flat neighbourhood (singular structure tensor) or the point left the frame.
    Untrackable,
}

impl Flow {
    pub fn displacement(&self) -> Option<(f64, f64)> {
        match *self {
            Flow::Tracked { u, v } => Some((u, v)),
            Flow::Untrackable => None,
        }
    }

    pub fn is_tracked(&self) -> bool {
        matches!(self, Flow::Tracked { .. })
    }
}

/// Iteration controls for pyramidal Lucas-Kanade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LkParams {
    /// Pyramid levels including full resolution.
    pub levels: usize,
    pub max_iterations: usize,
    /// Stop once the update step is shorter than this, pixels.
    pub epsilon: f64,
    /// Below this minimum eigenvalue the window is treated as flat.
    pub min_eigenvalue: f64,
}

impl Default for LkParams {
    fn default() -> Self {
        LkParams {
            levels: 3,
            max_iterations: 20,
            epsilon: 0.01,
            min_eigenvalue: 1e-4,
        }
    }
}

/// Lucas-Kanade flow with default [`LkParams`].
pub fn lk_flow(prev: &Frame, next: &Frame, features: &[Point2], half_window: usize) -> Vec<Flow> {
    lk_flow_with(prev, next, features, half_window, &LkParams::default())
}

/// Pyramidal iterative Lucas-Kanade.
///
/// Each feature's displacement solves `M·[u v]ᵀ = −b` over a
/// `(2·half_window+1)²` window, refined coarse to fine.
pub fn lk_flow_with(
    prev: &Frame,
    next: &Frame,
    features: &[Point2],
    half_window: usize,
    params: &LkParams,
) -> Vec<Flow> {
    assert_eq!(
        (prev.width(), prev.height()),
        (next.width(), next.height()),
        "flow frames must have the same size"
    );
    let levels = params.levels.max(1);
    let mut prev_pyr = vec![prev.clone()];
    let mut next_pyr = vec![next.clone()];
    for _ in 1..levels {
        let (p, n) = (prev_pyr.last().unwrap(), next_pyr.last().unwrap());
        if p.width() < 2 * half_window + 2 || p.height() < 2 * half_window + 2 {
            break;
        }
        let (pd, nd) = (p.downsample(), n.downsample());
        prev_pyr.push(pd);
        next_pyr.push(nd);
    }
    features
        .iter()
        .map(|&pt| track(&prev_pyr, &next_pyr, pt, half_window as isize, params))
        .collect()
}

fn track(prev: &[Frame], next: &[Frame], pt: Point2, half: isize, params: &LkParams) -> Flow {
    let (w, h) = (prev[0].width() as f64, prev[0].height() as f64);
    if !(0.0..w).contains(&pt.x) || !(0.0..h).contains(&pt.y) {
        return Flow::Untrackable;
    }
    let mut guess = (0.0, 0.0);
    for level in (0..prev.len()).rev() {
        let scale = (1u32 << level) as f64;
        let p = Point2::new(pt.x / scale, pt.y / scale);
        let Some(d) = refine(&prev[level], &next[level], p, guess, half, params, level == 0) else {
            return Flow::Untrackable;
        };
        guess = if level > 0 { (2.0 * d.0, 2.0 * d.1) } else { d };
    }
    let (u, v) = guess;
    let (qx, qy) = (pt.x + u, pt.y + v);
    if !u.is_finite() || !v.is_finite() || !(0.0..w).contains(&qx) || !(0.0..h).contains(&qy) {
        return Flow::Untrackable;
    }
    Flow::Tracked { u, v }
}

fn refine(
    prev: &Frame,
    next: &Frame,
    p: Point2,
    mut d: (f64, f64),
    half: isize,
    params: &LkParams,
    finest: bool,
) -> Option<(f64, f64)> {
    let n = ((2 * half + 1) * (2 * half + 1)) as usize;
    let mut template = Vec::with_capacity(n);
    let mut m = StructureTensor::default();
    for j in -half..=half {
        for i in -half..=half {
            let (x, y) = (p.x + i as f64, p.y + j as f64);
            let ix = (prev.sample(x + 1.0, y) - prev.sample(x - 1.0, y)) / 2.0;
            let iy = (prev.sample(x, y + 1.0) - prev.sample(x, y - 1.0)) / 2.0;
            m.m11 += ix * ix;
            m.m12 += ix * iy;
            m.m22 += iy * iy;
            template.push((x, y, prev.sample(x, y), ix, iy));
        }
    }
    if m.min_eigenvalue() < params.min_eigenvalue {
        // coarse levels may blur texture away; defer judgement to full resolution
        return if finest { None } else { Some(d) };
    }
    for _ in 0..params.max_iterations {
        let mut b = (0.0, 0.0);
        for &(x, y, i0, ix, iy) in &template {
            let it = next.sample(x + d.0, y + d.1) - i0;
            b.0 += it * ix;
            b.1 += it * iy;
        }
        let (du, dv) = m.solve((-b.0, -b.1))?;
        d = (d.0 + du, d.1 + dv);
        if du.hypot(dv) < params.epsilon {
            break;
        }
    }
    Some(d)
}
