//! Synthetic segmentation scenes: noisy background, filled ellipses and thin
//! strokes of the same brightness range, so the two foreground classes
//! differ by shape rather than by intensity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::tensor::Tensor;

pub const NUM_CLASSES: usize = 3;
pub const CLASS_NAMES: [&str; NUM_CLASSES] = ["background", "blob", "thin_line"];
pub const BACKGROUND: u8 = 0;
pub const BLOB: u8 = 1;
pub const THIN_LINE: u8 = 2;

const NOISE_SIGMA: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct SegSample {
    /// `[1, H, W]` grayscale in roughly `[0, 1]`.
    pub image: Tensor,
    /// Row-major `H×W` class labels.
    pub mask: Vec<u8>,
}

impl SegSample {
    pub fn height(&self) -> usize {
        self.image.shape()[1]
    }

    pub fn width(&self) -> usize {
        self.image.shape()[2]
    }

    pub fn class_histogram(&self) -> [usize; NUM_CLASSES] {
        let mut h = [0; NUM_CLASSES];
        for &m in &self.mask {
            h[m as usize] += 1;
        }
        h
    }
}

/// `n` scenes of size `h×w`. Sample `i` depends only on `(seed, i)`.
/// Both sides must be multiples of `multiple` (the network's total
/// down-sampling factor) and at least 8.
pub fn gen_dataset_aligned(n: usize, h: usize, w: usize, seed: u64, multiple: usize) -> Result<Vec<SegSample>> {
    if multiple == 0 || !h.is_multiple_of(multiple) || !w.is_multiple_of(multiple) {
        return Err(Error::arg(format!(
            "image size {h}x{w} must be divisible by {multiple}"
        )));
    }
    if h < 8 || w < 8 {
        return Err(Error::arg(format!("image size {h}x{w} is below 8x8")));
    }
    Ok((0..n).map(|i| gen_sample(h, w, seed, i as u64)).collect())
}

/// [`gen_dataset_aligned`] for the default two-stage network.
pub fn gen_dataset(n: usize, h: usize, w: usize, seed: u64) -> Result<Vec<SegSample>> {
    gen_dataset_aligned(n, h, w, seed, 1 << super::DEFAULT_DEPTH)
}

fn gen_sample(h: usize, w: usize, seed: u64, index: u64) -> SegSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let s = draw_scene(h, w, &mut rng);
        if s.class_histogram().iter().all(|&c| c > 0) {
            return s;
        }
    }
}

fn draw_scene(h: usize, w: usize, rng: &mut ChaCha8Rng) -> SegSample {
    let (hf, wf) = (h as f64, w as f64);
    let scale = hf.min(wf) / 32.0;
    let bg = rng.gen_range(0.1..0.3);
    let mut values = vec![bg; h * w];
    let mut mask = vec![BACKGROUND; h * w];

    for _ in 0..rng.gen_range(1..=2) {
        let cx = rng.gen_range(0.2..0.8) * wf;
        let cy = rng.gen_range(0.2..0.8) * hf;
        let a = rng.gen_range(3.0..6.5) * scale;
        let b = rng.gen_range(3.0..6.5) * scale;
        let (sin, cos) = rng.gen_range(0.0..std::f64::consts::PI).sin_cos();
        let v = rng.gen_range(0.55..0.9);
        paint(&mut values, &mut mask, w, BLOB, v, |x, y| {
            let (dx, dy) = (x - cx, y - cy);
            let u = (dx * cos + dy * sin) / a;
            let t = (-dx * sin + dy * cos) / b;
            u * u + t * t <= 1.0
        });
    }

    for _ in 0..rng.gen_range(1..=2) {
        let x0 = rng.gen_range(0.0..wf);
        let y0 = rng.gen_range(0.0..hf);
        let (sin, cos) = rng.gen_range(0.0..std::f64::consts::TAU).sin_cos();
        let len = rng.gen_range(0.5..0.9) * hf.min(wf);
        let (x1, y1) = (x0 + len * cos, y0 + len * sin);
        let half_width = if rng.gen_bool(0.5) { 0.5 } else { 1.0 };
        let v = rng.gen_range(0.55..0.9);
        paint(&mut values, &mut mask, w, THIN_LINE, v, |x, y| {
            segment_distance(x, y, x0, y0, x1, y1) <= half_width
        });
    }

    let noise = Normal::new(0.0, NOISE_SIGMA).expect("valid sigma");
    for v in &mut values {
        *v += noise.sample(rng);
    }
    SegSample {
        image: Tensor::from_parts(vec![1, h, w], values),
        mask,
    }
}

/// Pixel centres sit at integer coordinates.
fn paint(
    values: &mut [f64],
    mask: &mut [u8],
    w: usize,
    label: u8,
    v: f64,
    inside: impl Fn(f64, f64) -> bool,
) {
    for (i, (val, m)) in values.iter_mut().zip(mask.iter_mut()).enumerate() {
        if inside((i % w) as f64, (i / w) as f64) {
            *val = v;
            *m = label;
        }
    }
}

fn segment_distance(px: f64, py: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((px - x0) * dx + (py - y0) * dy) / len_sq).clamp(0.0, 1.0)
    };
    let (cx, cy) = (x0 + t * dx, y0 + t * dy);
    ((px - cx).powi(2) + (py - cy).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_sample_has_all_classes() {
        for s in gen_dataset(50, 32, 32, 3).unwrap() {
            assert!(s.class_histogram().iter().all(|&c| c > 0));
            assert_eq!(s.image.shape(), &[1, 32, 32]);
        }
    }

    #[test]
    fn seeded() {
        assert_eq!(gen_dataset(5, 16, 24, 9).unwrap(), gen_dataset(5, 16, 24, 9).unwrap());
        assert_ne!(gen_dataset(5, 16, 24, 9).unwrap(), gen_dataset(5, 16, 24, 10).unwrap());
        let long = gen_dataset(6, 16, 24, 9).unwrap();
        assert_eq!(long[..5], gen_dataset(5, 16, 24, 9).unwrap()[..]);
    }

    #[test]
    fn size_must_divide() {
        assert!(matches!(gen_dataset(1, 30, 32, 0), Err(Error::Argument(_))));
        assert!(matches!(gen_dataset(1, 4, 4, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn segment_distance_cases() {
        assert_eq!(segment_distance(0.0, 1.0, -1.0, 0.0, 1.0, 0.0), 1.0);
        assert_eq!(segment_distance(3.0, 0.0, -1.0, 0.0, 1.0, 0.0), 2.0);
        assert_eq!(segment_distance(0.0, 2.0, 0.0, 0.0, 0.0, 0.0), 2.0);
    }
}
