#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use wavinpaint::pnm::{save_mask, save_raster};
use wavinpaint::{Mask, Raster};

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wavinpaint"));
    cmd.env("RUST_LOG", "warn");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn wavinpaint")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Vertical stripes, `period / 2` columns at 40 then `period / 2` at 210.
pub fn stripes(w: usize, h: usize, period: usize) -> Raster<f64> {
    Raster::from_fn(w, h, 1, |x, _, _| if x % period < period / 2 { 40.0 } else { 210.0 }).unwrap()
}

pub fn centered(w: usize, h: usize, side: usize) -> Mask {
    Mask::rect(w, h, (w - side) / 2, (h - side) / 2, side, side)
}

pub fn damage(img: &Raster<f64>, mask: &Mask, value: f64) -> Raster<f64> {
    let mut out = img.clone();
    for p in mask.iter_targets() {
        for c in 0..img.channels() {
            out.set(p.x, p.y, c, value);
        }
    }
    out
}

/// Integer-valued random texture in [0, 255].
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
        (128.0 + v + noise[(y * w + x) * channels + c]).clamp(0.0, 255.0).round()
    })
    .unwrap()
}

/// Up to three random rectangles covering at most `max_fraction` of the image.
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

/// Input, mask and truth files for one benchmark case.
pub struct Case {
    pub input: PathBuf,
    pub mask: PathBuf,
    pub truth: PathBuf,
}

pub fn write_case(dir: &Path, name: &str, truth: &Raster<f64>, mask: &Mask) -> Case {
    let ext = if truth.channels() == 3 { "ppm" } else { "pgm" };
    let case = Case {
        input: dir.join(format!("{name}_input.{ext}")),
        mask: dir.join(format!("{name}_mask.pgm")),
        truth: dir.join(format!("{name}_truth.{ext}")),
    };
    save_raster(&damage(truth, mask, 0.0), &case.input).unwrap();
    save_mask(mask, &case.mask).unwrap();
    save_raster(truth, &case.truth).unwrap();
    case
}

/// The stripe benchmark: 64x64, period 8, centered 16x16 hole.
pub fn stripe_case(dir: &Path) -> Case {
    write_case(dir, "stripes", &stripes(64, 64, 8), &centered(64, 64, 16))
}

/// CSV text with the wall_seconds column removed.
pub fn without_timing(csv: &str) -> String {
    let header: Vec<&str> = csv.lines().next().unwrap_or("").split(',').collect();
    let col = header.iter().position(|h| *h == "wall_seconds").expect("no wall_seconds column");
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(col);
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
