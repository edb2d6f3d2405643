use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Grayscale intensity image, row-major, values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::config("frame dimensions must be positive"));
        }
        if data.len() != width * height {
            return Err(Error::config(format!(
                "frame data has {} values, expected {}",
                data.len(),
                width * height
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::config(format!("intensity {bad} outside [0, 1]")));
        }
        Ok(Frame {
            width,
            height,
            data,
        })
    }

    /// Builds a frame from `f(x, y)`, clamping values into `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "frame dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = f(x, y);
                data.push(if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) });
            }
        }
        Frame {
            width,
            height,
            data,
        }
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Frame::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Pixel read with replicate padding outside the frame.
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xc, yc)
    }

    /// Bilinear sample with replicate padding.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let ax = x - x0;
        let ay = y - y0;
        let (xi, yi) = (x0 as isize, y0 as isize);
        let top = self.get_clamped(xi, yi) * (1.0 - ax) + self.get_clamped(xi + 1, yi) * ax;
        let bottom =
            self.get_clamped(xi, yi + 1) * (1.0 - ax) + self.get_clamped(xi + 1, yi + 1) * ax;
        top * (1.0 - ay) + bottom * ay
    }

    /// Central-difference x derivative with replicate padding.
    pub fn dx(&self, x: usize, y: usize) -> f64 {
        let (x, y) = (x as isize, y as isize);
        (self.get_clamped(x + 1, y) - self.get_clamped(x - 1, y)) / 2.0
    }

    /// Central-difference y derivative with replicate padding.
    pub fn dy(&self, x: usize, y: usize) -> f64 {
        let (x, y) = (x as isize, y as isize);
        (self.get_clamped(x, y + 1) - self.get_clamped(x, y - 1)) / 2.0
    }

    /// 2x2 box-filtered half-resolution copy.
    pub fn downsample(&self) -> Frame {
        let w = (self.width / 2).max(1);
        let h = (self.height / 2).max(1);
        Frame::from_fn(w, h, |x, y| {
            let (sx, sy) = (2 * x as isize, 2 * y as isize);
            (self.get_clamped(sx, sy)
                + self.get_clamped(sx + 1, sy)
                + self.get_clamped(sx, sy + 1)
                + self.get_clamped(sx + 1, sy + 1))
                / 4.0
        })
    }

    /// Plain (ASCII) PGM encoding with 8-bit levels.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.data.chunks(self.width) {
            let line: Vec<String> = row
                .iter()
                .map(|v| ((v * 255.0).round() as u8).to_string())
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_pgm()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_intensity() {
        assert!(Frame::new(2, 1, vec![0.5, 1.5]).is_err());
        assert!(Frame::new(2, 1, vec![0.5]).is_err());
        assert!(Frame::new(2, 1, vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn bilinear_sampling_interpolates() {
        let f = Frame::new(2, 2, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!((f.sample(0.5, 0.5) - 0.5).abs() < 1e-12);
        assert_eq!(f.sample(1.0, 0.0), 1.0);
        assert_eq!(f.sample(5.0, 0.0), 1.0);
    }

    #[test]
    fn derivatives_replicate_at_border() {
        let f = Frame::from_fn(4, 1, |x, _| x as f64 / 4.0);
        assert!((f.dx(0, 0) - 0.125).abs() < 1e-12);
        assert!((f.dx(1, 0) - 0.25).abs() < 1e-12);
        assert_eq!(f.dy(1, 0), 0.0);
    }

    #[test]
    fn pgm_header_and_levels() {
        let f = Frame::new(2, 1, vec![0.0, 1.0]).unwrap();
        assert_eq!(f.to_pgm(), "P2\n2 1\n255\n0 255\n");
    }
}
