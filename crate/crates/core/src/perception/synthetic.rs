//! Synthetic textured frames for exercising feature tracking and stabilization.
//!
//! The texture is an analytic field, so any translated or rotated view can be
//! rendered exactly without border artifacts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Frame, Point2, SimilarityTransform2D};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Blob {
    x: f64,
    y: f64,
    sigma: f64,
    amplitude: f64,
}

/// Random field of Gaussian blobs squashed into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Texture {
    blobs: Vec<Blob>,
}

impl Texture {
    /// Texture covering a `width × height` view plus a margin for camera motion.
    pub fn random(seed: u64, width: usize, height: usize) -> Texture {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let margin = 24.0;
        let (w, h) = (width as f64 + 2.0 * margin, height as f64 + 2.0 * margin);
        let count = ((w * h) / 40.0).ceil() as usize;
        let blobs = (0..count)
            .map(|_| Blob {
                x: rng.random_range(-margin..width as f64 + margin),
                y: rng.random_range(-margin..height as f64 + margin),
                sigma: rng.random_range(1.5..4.0),
                amplitude: rng.random_range(-1.5..1.5),
            })
            .collect();
        Texture { blobs }
    }

    /// Field value at texture coordinates `(x, y)`.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let s: f64 = self
            .blobs
            .iter()
            .filter(|b| (b.x - x).abs() < 4.0 * b.sigma && (b.y - y).abs() < 4.0 * b.sigma)
            .map(|b| {
                let r2 = (b.x - x).powi(2) + (b.y - y).powi(2);
                b.amplitude * (-r2 / (2.0 * b.sigma * b.sigma)).exp()
            })
            .sum();
        0.5 + 0.5 * s.tanh()
    }

    /// View with the content translated by `offset` pixels.
    pub fn render(&self, width: usize, height: usize, offset: (f64, f64)) -> Frame {
        Frame::from_fn(width, height, |x, y| self.value(x as f64 - offset.0, y as f64 - offset.1))
    }

    /// View with the content moved by `motion`: texture point `p` lands on pixel `motion(p)`.
    pub fn render_transformed(&self, width: usize, height: usize, motion: &SimilarityTransform2D) -> Frame {
        let inv = motion.inverse();
        Frame::from_fn(width, height, |x, y| {
            let p = inv.apply(Point2::new(x as f64, y as f64));
            self.value(p.x, p.y)
        })
    }
}

/// Renders one frame per content offset.
pub fn shifted_sequence(texture: &Texture, width: usize, height: usize, offsets: &[(f64, f64)]) -> Vec<Frame> {
    offsets.iter().map(|&o| texture.render(width, height, o)).collect()
}

/// Offsets alternating between `+amplitude` and `−amplitude` in x.
pub fn alternating_jitter(frames: usize, amplitude: f64) -> Vec<(f64, f64)> {
    (0..frames)
        .map(|k| (if k % 2 == 0 { amplitude } else { -amplitude }, 0.0))
        .collect()
}
