//! Orthonormal 2-D Haar analysis and synthesis, the multi-level pyramid and
//! mask propagation between levels.
//!
//! Each 2x2 block `[[a, b], [c, d]]` maps to
//!
//! ```text
//! ll = ( a + b + c + d) / 2
//! hl = (-a + b - c + d) / 2   column difference
//! lh = (-a - b + c + d) / 2   row difference
//! hh = ( a - b - c + d) / 2
//! ```
//!
//! Odd dimensions are padded by edge replication before blocking and the
//! synthesis output is cropped back to the recorded original size.
//! Multi-channel rasters are transformed channel by channel.

use std::fs;
use std::path::Path;

use crate::error::{BandKind, InpaintError, Result};
use crate::pnm;
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;

/// The four subbands produced by one analysis step.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet<T> {
    pub ll: Raster<T>,
    pub hl: Raster<T>,
    pub lh: Raster<T>,
    pub hh: Raster<T>,
    pub orig_width: usize,
    pub orig_height: usize,
}

impl<T: Scalar> SubbandSet<T> {
    pub fn band(&self, kind: BandKind) -> &Raster<T> {
        match kind {
            BandKind::Ll | BandKind::Image => &self.ll,
            BandKind::Hl => &self.hl,
            BandKind::Lh => &self.lh,
            BandKind::Hh => &self.hh,
        }
    }

    pub fn band_mut(&mut self, kind: BandKind) -> &mut Raster<T> {
        match kind {
            BandKind::Ll | BandKind::Image => &mut self.ll,
            BandKind::Hl => &mut self.hl,
            BandKind::Lh => &mut self.lh,
            BandKind::Hh => &mut self.hh,
        }
    }

    pub fn band_dims(&self) -> (usize, usize) {
        self.ll.dims()
    }
}

/// Dimensions of the bands produced from an input of `dims`.
pub fn half_dims((w, h): (usize, usize)) -> (usize, usize) {
    (w.div_ceil(2), h.div_ceil(2))
}

/// One level of the 2-D Haar analysis.
pub fn dwt2<T: Scalar>(band: &Raster<T>) -> SubbandSet<T> {
    let (w, h) = band.dims();
    let ch = band.channels();
    let (bw, bh) = half_dims((w, h));
    let half = T::lit(0.5);
    let mut ll = Vec::with_capacity(bw * bh * ch);
    let mut hl = Vec::with_capacity(bw * bh * ch);
    let mut lh = Vec::with_capacity(bw * bh * ch);
    let mut hh = Vec::with_capacity(bw * bh * ch);
    for by in 0..bh {
        let y0 = 2 * by;
        let y1 = (y0 + 1).min(h - 1);
        for bx in 0..bw {
            let x0 = 2 * bx;
            let x1 = (x0 + 1).min(w - 1);
            for c in 0..ch {
                let a = band.get(x0, y0, c);
                let b = band.get(x1, y0, c);
                let cc = band.get(x0, y1, c);
                let d = band.get(x1, y1, c);
                ll.push((a + b + cc + d) * half);
                hl.push((-a + b - cc + d) * half);
                lh.push((-a - b + cc + d) * half);
                hh.push((a - b - cc + d) * half);
            }
        }
    }
    let mk = |data| Raster::from_vec(bw, bh, ch, data).expect("band shape");
    SubbandSet {
        ll: mk(ll),
        hl: mk(hl),
        lh: mk(lh),
        hh: mk(hh),
        orig_width: w,
        orig_height: h,
    }
}

/// Inverse of [`dwt2`], cropped to the recorded original dimensions.
pub fn idwt2<T: Scalar>(s: &SubbandSet<T>) -> Result<Raster<T>> {
    let dims = s.ll.dims();
    let ch = s.ll.channels();
    for band in [&s.hl, &s.lh, &s.hh] {
        if band.dims() != dims {
            return Err(InpaintError::DimensionMismatch {
                expected: dims,
                found: band.dims(),
            });
        }
        if band.channels() != ch {
            return Err(InpaintError::ChannelMismatch {
                expected: ch,
                found: band.channels(),
            });
        }
    }
    let (w, h) = (s.orig_width, s.orig_height);
    if w == 0 || h == 0 || half_dims((w, h)) != dims {
        return Err(InpaintError::DimensionMismatch {
            expected: half_dims((w, h)),
            found: dims,
        });
    }
    let half = T::lit(0.5);
    let mut out = Raster::new(w, h, ch)?;
    for by in 0..dims.1 {
        for bx in 0..dims.0 {
            for c in 0..ch {
                let ll = s.ll.get(bx, by, c);
                let hl = s.hl.get(bx, by, c);
                let lh = s.lh.get(bx, by, c);
                let hh = s.hh.get(bx, by, c);
                let block = [
                    (0, 0, (ll - hl - lh + hh) * half),
                    (1, 0, (ll + hl - lh - hh) * half),
                    (0, 1, (ll - hl + lh - hh) * half),
                    (1, 1, (ll + hl + lh + hh) * half),
                ];
                for (dx, dy, v) in block {
                    let (x, y) = (2 * bx + dx, 2 * by + dy);
                    if x < w && y < h {
                        out.set(x, y, c, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// How a 2x2 block of fine mask bits collapses to one coarse bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskRule {
    /// Coarse pixel is a target if any child is.
    #[default]
    Any,
    /// Coarse pixel is a target only if every child is.
    All,
}

impl MaskRule {
    pub fn name(self) -> &'static str {
        match self {
            MaskRule::Any => "any",
            MaskRule::All => "all",
        }
    }
}

impl std::str::FromStr for MaskRule {
    type Err = InpaintError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(MaskRule::Any),
            "all" => Ok(MaskRule::All),
            other => Err(InpaintError::InvalidParameter(format!(
                "mask rule must be `any` or `all`, got `{other}`"
            ))),
        }
    }
}

pub fn downsample_mask(m: &Mask, rule: MaskRule) -> Mask {
    let (w, h) = m.dims();
    let (bw, bh) = half_dims((w, h));
    Mask::from_fn(bw, bh, |bx, by| {
        let (x0, y0) = (2 * bx, 2 * by);
        let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
        let bits = [m.get(x0, y0), m.get(x1, y0), m.get(x0, y1), m.get(x1, y1)];
        match rule {
            MaskRule::Any => bits.iter().any(|&b| b),
            MaskRule::All => bits.iter().all(|&b| b),
        }
    })
}

/// Deepest decomposition whose analysis input is at least 2 pixels on each side.
pub fn max_levels(dims: (usize, usize)) -> usize {
    let mut d = dims;
    let mut levels = 0;
    while d.0 >= 2 && d.1 >= 2 {
        d = half_dims(d);
        levels += 1;
    }
    levels
}

/// Multi-level Haar decomposition together with per-level masks.
///
/// `levels[0]` is the finest level (analysis of the source image) and
/// `masks[j]` is aligned with the bands of `levels[j]`.
#[derive(Debug, Clone)]
pub struct Pyramid<T> {
    pub levels: Vec<SubbandSet<T>>,
    pub masks: Vec<Mask>,
    pub source: Raster<T>,
    pub source_mask: Mask,
    pub rule: MaskRule,
}

impl<T: Scalar> Pyramid<T> {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// LL band entering analysis at `level` (level 0 is the source image).
    pub fn ll_input(&self, level: usize) -> &Raster<T> {
        if level == 0 {
            &self.source
        } else {
            &self.levels[level - 1].ll
        }
    }

    /// Mask aligned with [`Pyramid::ll_input`] at `level`.
    pub fn mask_at(&self, level: usize) -> &Mask {
        if level == 0 {
            &self.source_mask
        } else {
            &self.masks[level - 1]
        }
    }
}

pub fn build_pyramid<T: Scalar>(
    img: &Raster<T>,
    mask: &Mask,
    levels: usize,
    rule: MaskRule,
) -> Result<Pyramid<T>> {
    if img.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: img.dims(),
            found: mask.dims(),
        });
    }
    let max = max_levels(img.dims());
    if levels == 0 || levels > max {
        return Err(InpaintError::LevelsTooDeep {
            requested: levels,
            max,
        });
    }
    let mut sets: Vec<SubbandSet<T>> = Vec::with_capacity(levels);
    let mut masks: Vec<Mask> = Vec::with_capacity(levels);
    for j in 0..levels {
        let (input, input_mask) = match j {
            0 => (img, mask),
            _ => (&sets[j - 1].ll, &masks[j - 1]),
        };
        let set = dwt2(input);
        let m = downsample_mask(input_mask, rule);
        sets.push(set);
        masks.push(m);
    }
    Ok(Pyramid {
        levels: sets,
        masks,
        source: img.clone(),
        source_mask: mask.clone(),
        rule,
    })
}

/// Default decomposition threshold: 1.5 x patch area.
pub fn default_threshold(patch_size: usize) -> f64 {
    1.5 * (patch_size * patch_size) as f64
}

/// Chooses the decomposition depth.
///
/// Without an override, decomposition continues while the mask at the
/// current level still has more than `threshold` target pixels and the next
/// level's bands stay at least `4 * patch_size` pixels on their short side.
/// An override is clamped to that same size limit. Zero means the image is
/// filled directly without decomposition.
pub fn select_levels(
    mask: &Mask,
    patch_size: usize,
    override_levels: Option<usize>,
    rule: MaskRule,
    threshold: f64,
) -> usize {
    let min_side = 4 * patch_size;
    let feasible = |level: usize| {
        let mut d = mask.dims();
        for _ in 0..level {
            d = half_dims(d);
        }
        d.0.min(d.1) >= min_side
    };
    if let Some(requested) = override_levels {
        let mut level = 0;
        while level < requested && feasible(level + 1) {
            level += 1;
        }
        return level;
    }
    let mut level = 0;
    let mut current = mask.clone();
    while (current.count() as f64) > threshold && feasible(level + 1) {
        current = downsample_mask(&current, rule);
        level += 1;
    }
    level
}

/// Affine map taking a band to [0, 255]: `display = (value - min) * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub min: f64,
    pub max: f64,
    pub scale: f64,
}

pub fn normalize_band<T: Scalar>(band: &Raster<T>) -> (Raster<T>, Normalization) {
    let (lo, hi) = band.min_max();
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let out = band.map(|v| T::lit((v.as_f64() - lo) * scale));
    (
        out,
        Normalization {
            min: lo,
            max: hi,
            scale,
        },
    )
}

/// Writes every band of `levels` analysis steps of `img` as normalized
/// rasters (`ll<L>`, and `hl<j>`, `lh<j>`, `hh<j>` for each level) with a
/// `.txt` sidecar per band holding the normalization parameters.
///
/// Returns the written raster paths in coarse-to-fine order.
pub fn write_band_dump<T: Scalar>(
    img: &Raster<T>,
    levels: usize,
    dir: &Path,
) -> Result<Vec<std::path::PathBuf>> {
    let mask = Mask::new(img.width(), img.height());
    let pyr = build_pyramid(img, &mask, levels, MaskRule::Any)?;
    fs::create_dir_all(dir).map_err(|source| InpaintError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let ext = if img.channels() == 3 { "ppm" } else { "pgm" };
    let mut bands: Vec<(String, &Raster<T>)> = vec![(format!("ll{levels}"), &pyr.levels[levels - 1].ll)];
    for j in (1..=levels).rev() {
        let set = &pyr.levels[j - 1];
        for kind in BandKind::DETAILS {
            bands.push((format!("{}{}", kind.name(), j), set.band(kind)));
        }
    }
    let mut written = Vec::with_capacity(bands.len());
    for (name, band) in bands {
        let (display, norm) = normalize_band(band);
        let path = dir.join(format!("{name}.{ext}"));
        pnm::save_raster(&display, &path)?;
        let sidecar = dir.join(format!("{name}.txt"));
        let text = format!(
            "band={}\nwidth={}\nheight={}\nmin={}\nmax={}\nscale={}\noffset={}\n",
            name,
            band.width(),
            band.height(),
            norm.min,
            norm.max,
            norm.scale,
            -norm.min * norm.scale
        );
        fs::write(&sidecar, text).map_err(|source| InpaintError::Io {
            path: sidecar.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
