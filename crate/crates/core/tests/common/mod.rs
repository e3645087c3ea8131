#![allow(dead_code)]

use rand::Rng;
use wavinpaint::{Mask, Raster};

pub const STRIPE_LOW: f64 = 40.0;
pub const STRIPE_HIGH: f64 = 210.0;

/// Vertical stripes: `period / 2` columns low, then `period / 2` high.
pub fn stripes(w: usize, h: usize, period: usize) -> Raster<f64> {
    Raster::from_fn(w, h, 1, |x, _, _| {
        if x % period < period / 2 {
            STRIPE_LOW
        } else {
            STRIPE_HIGH
        }
    })
    .unwrap()
}

/// Centered square mask of side `side`.
pub fn centered(w: usize, h: usize, side: usize) -> Mask {
    Mask::rect(w, h, (w - side) / 2, (h - side) / 2, side, side)
}

/// Overwrites target pixels with a marker value so nothing leaks from them.
pub fn damage(img: &Raster<f64>, mask: &Mask, value: f64) -> Raster<f64> {
    let mut out = img.clone();
    for p in mask.iter_targets() {
        for c in 0..img.channels() {
            out.set(p.x, p.y, c, value);
        }
    }
    out
}

/// Smooth random texture: sum of a few random sinusoids plus noise, in [0, 255].
pub fn texture<R: Rng>(rng: &mut R, w: usize, h: usize, channels: usize) -> Raster<f64> {
    let waves: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(0.05..0.6),
                rng.gen_range(0.05..0.6),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(10.0..40.0),
            )
        })
        .collect();
    let noise: Vec<f64> = (0..w * h * channels).map(|_| rng.gen_range(-8.0..8.0)).collect();
    Raster::from_fn(w, h, channels, |x, y, c| {
        let v: f64 = waves
            .iter()
            .map(|&(fx, fy, ph, a)| a * (fx * x as f64 + fy * y as f64 + ph + c as f64).sin())
            .sum();
        (128.0 + v + noise[(y * w + x) * channels + c]).clamp(0.0, 255.0)
    })
    .unwrap()
}

/// A few random rectangles covering at most `max_fraction` of the image.
pub fn random_rect_mask<R: Rng>(rng: &mut R, w: usize, h: usize, max_fraction: f64) -> Mask {
    let budget = (max_fraction * (w * h) as f64) as usize;
    let mut mask = Mask::new(w, h);
    for _ in 0..rng.gen_range(1..=3) {
        let rw = rng.gen_range(2..=w / 4);
        let rh = rng.gen_range(2..=h / 4);
        let x0 = rng.gen_range(1..w - rw - 1);
        let y0 = rng.gen_range(1..h - rh - 1);
        let mut next = mask.clone();
        for y in y0..y0 + rh {
            for x in x0..x0 + rw {
                next.set(x, y, true);
            }
        }
        if next.count() <= budget {
            mask = next;
        }
    }
    if mask.is_empty() {
        mask.set(w / 2, h / 2, true);
    }
    mask
}
