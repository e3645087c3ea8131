//! Comparison methods: onion-peel neighbor averaging, heat diffusion and
//! exemplar filling directly on the image.

use crate::error::{BandKind, InpaintError, Result};
use crate::exemplar::{run_fill, FillOptions, FillState, FillStats, StructureProvider};
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;

/// Largest per-iteration change at which diffusion is considered converged.
pub const DIFFUSION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffusionMode {
    #[default]
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub iterations: usize,
    pub dt: f64,
    pub mode: DiffusionMode,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self {
            iterations: 2000,
            dt: 0.2,
            mode: DiffusionMode::Isotropic,
        }
    }
}

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 0.25) {
            return Err(InpaintError::InvalidParameter(format!(
                "diffusion step {} outside (0, 0.25]",
                self.dt
            )));
        }
        Ok(())
    }
}

fn check_inputs<T: Scalar>(img: &Raster<T>, mask: &Mask) -> Result<()> {
    if img.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: img.dims(),
            found: mask.dims(),
        });
    }
    if mask.is_full() {
        return Err(InpaintError::FullMask);
    }
    Ok(())
}

/// Onion-peel fill: each pass assigns every target pixel that has a known
/// 8-neighbor the mean of those neighbors, all pixels of a pass updated
/// simultaneously, until nothing is left.
pub fn inpaint_interp<T: Scalar>(img: &Raster<T>, mask: &Mask) -> Result<Raster<T>> {
    check_inputs(img, mask)?;
    let (w, h) = img.dims();
    let ch = img.channels();
    let mut out = img.clone();
    let mut unknown = mask.clone();
    let mut targets: Vec<usize> = (0..w * h).filter(|&i| mask.bit(i)).collect();
    while !targets.is_empty() {
        let mut updates: Vec<(usize, Vec<T>)> = Vec::new();
        for &i in &targets {
            let (x, y) = (i % w, i / w);
            let mut sum = vec![T::zero(); ch];
            let mut n = 0usize;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if j == i || unknown.bit(j) {
                        continue;
                    }
                    for (s, &v) in sum.iter_mut().zip(out.pixel(j)) {
                        *s += v;
                    }
                    n += 1;
                }
            }
            if n > 0 {
                let n = T::lit(n as f64);
                updates.push((i, sum.into_iter().map(|s| s / n).collect()));
            }
        }
        assert!(!updates.is_empty(), "onion peel stalled on a non-full mask");
        for (i, values) in &updates {
            out.pixel_mut(*i).copy_from_slice(values);
            unknown.set_bit(*i, false);
        }
        targets.retain(|&i| unknown.bit(i));
    }
    Ok(out)
}

/// Explicit heat flow on the target region with source pixels held fixed,
/// started from [`inpaint_interp`]. Returns the image and the number of
/// iterations performed.
pub fn diffuse<T: Scalar>(img: &Raster<T>, mask: &Mask, params: &DiffusionParams) -> Result<(Raster<T>, usize)> {
    params.validate()?;
    let mut u = inpaint_interp(img, mask)?;
    let (w, h) = img.dims();
    let ch = img.channels();
    let dt = T::lit(params.dt);
    let four = T::lit(4.0);
    let targets: Vec<usize> = (0..w * h).filter(|&i| mask.bit(i)).collect();
    let mut next = vec![T::zero(); targets.len() * ch];
    let mut iterations = 0;
    while iterations < params.iterations {
        iterations += 1;
        let mut max_update = 0.0f64;
        for (k, &i) in targets.iter().enumerate() {
            let (x, y) = (i % w, i / w);
            // border neighbors replicate the pixel itself (zero flux)
            let l = if x > 0 { i - 1 } else { i };
            let r = if x + 1 < w { i + 1 } else { i };
            let t = if y > 0 { i - w } else { i };
            let b = if y + 1 < h { i + w } else { i };
            for c in 0..ch {
                let d = u.data();
                let center = d[i * ch + c];
                let lap = d[l * ch + c] + d[r * ch + c] + d[t * ch + c] + d[b * ch + c] - four * center;
                let step = dt * lap;
                max_update = max_update.max(step.abs().as_f64());
                next[k * ch + c] = center + step;
            }
        }
        for (k, &i) in targets.iter().enumerate() {
            u.pixel_mut(i).copy_from_slice(&next[k * ch..(k + 1) * ch]);
        }
        if max_update < DIFFUSION_TOLERANCE {
            break;
        }
    }
    Ok((u, iterations))
}

pub fn inpaint_diffusion<T: Scalar>(img: &Raster<T>, mask: &Mask, params: &DiffusionParams) -> Result<Raster<T>> {
    diffuse(img, mask, params).map(|(u, _)| u)
}

/// Exemplar fill of the image itself with a gradient-magnitude structure term.
pub fn inpaint_exemplar_flat<T: Scalar>(img: &Raster<T>, mask: &Mask, patch_half: usize) -> Result<Raster<T>> {
    exemplar_flat_with(img, mask, patch_half, FillOptions::default(), None).map(|(r, _, _)| r)
}

/// Flat exemplar fill with explicit options and an optional seeded confidence map.
pub(crate) fn exemplar_flat_with<T: Scalar>(
    img: &Raster<T>,
    mask: &Mask,
    patch_half: usize,
    options: FillOptions,
    confidence: Option<Vec<T>>,
) -> Result<(Raster<T>, Vec<T>, FillStats)> {
    if img.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: img.dims(),
            found: mask.dims(),
        });
    }
    if mask.is_empty() {
        let conf = vec![T::one(); img.len_pixels()];
        return Ok((img.clone(), conf, FillStats::default()));
    }
    let st = match confidence {
        Some(c) => FillState::with_confidence(img.clone(), mask.clone(), c, patch_half)?,
        None => FillState::new(img.clone(), mask.clone(), patch_half)?,
    };
    let mut st = st.with_options(options).with_context(0, BandKind::Image);
    run_fill(&mut st, &StructureProvider::GradientProxy)?;
    let (mut out, conf, stats) = st.into_parts();
    out.restore_outside(img, mask);
    Ok((out, conf, stats))
}
