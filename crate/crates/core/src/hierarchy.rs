//! Coarse-to-fine orchestration of the wavelet-domain fill.
//!
//! The coarsest level has all four subbands filled (details first, then LL
//! with a structure term averaged from the filled details). Each inverse
//! transform then yields the next finer LL, whose target pixels are covered
//! by the coarse fill; that level's detail bands are filled and the process
//! repeats until the original resolution is reached.

use std::time::Instant;

use log::warn;
use rayon::prelude::*;

use crate::baselines::exemplar_flat_with;
use crate::error::{BandKind, InpaintError, Result};
use crate::exemplar::{run_fill, FillOptions, FillState, StructureProvider};
use crate::metrics::brightness_drift;
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;
use crate::wavelet::{build_pyramid, default_threshold, idwt2, select_levels, MaskRule, SubbandSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelSpec {
    #[default]
    Auto,
    Fixed(usize),
}

impl LevelSpec {
    fn as_override(self) -> Option<usize> {
        match self {
            LevelSpec::Auto => None,
            LevelSpec::Fixed(n) => Some(n),
        }
    }
}

/// How multi-channel images are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorPolicy {
    /// Channels keep separate coefficients but share one fill order derived
    /// from luma, with SSD summed over channels and exemplars copied jointly.
    #[default]
    LumaJoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierParams {
    pub patch_half: usize,
    pub levels: LevelSpec,
    pub mask_rule: MaskRule,
    pub color_policy: ColorPolicy,
    /// Decomposition threshold in target pixels; `None` means 1.5 x patch area.
    pub threshold: Option<f64>,
    /// Seed reconstructed fine pixels with their coarse parent's confidence
    /// (otherwise they count as fully trusted).
    pub inherit_confidence: bool,
    pub fill: FillOptions,
}

impl Default for HierParams {
    fn default() -> Self {
        Self {
            patch_half: 4,
            levels: LevelSpec::Auto,
            mask_rule: MaskRule::Any,
            color_policy: ColorPolicy::LumaJoint,
            threshold: None,
            inherit_confidence: true,
            fill: FillOptions::default(),
        }
    }
}

impl HierParams {
    pub fn patch_size(&self) -> usize {
        2 * self.patch_half + 1
    }

    pub fn threshold_value(&self) -> f64 {
        self.threshold.unwrap_or_else(|| default_threshold(self.patch_size()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.patch_half == 0 {
            return Err(InpaintError::InvalidParameter("patch size must be at least 3".into()));
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0) {
                return Err(InpaintError::InvalidParameter(format!("threshold {t} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Depth that [`inpaint_hierarchical`] will use for this mask.
    pub fn resolve_levels(&self, mask: &Mask) -> usize {
        select_levels(
            mask,
            self.patch_size(),
            self.levels.as_override(),
            self.mask_rule,
            self.threshold_value(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandReport {
    pub band: BandKind,
    pub filled_pixels: usize,
    pub fill_steps: usize,
    pub match_evaluations: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub level: usize,
    pub bands: Vec<BandReport>,
    /// Brightness drift of the LL reconstructed from this level, measured
    /// over the next finer mask.
    pub ll_drift: f64,
}

#[derive(Debug, Clone)]
pub struct HierOutcome<T> {
    pub image: Raster<T>,
    pub levels: usize,
    pub analyses: usize,
    pub syntheses: usize,
    pub reports: Vec<LevelReport>,
}

/// Fine-level fill seeds derived from a filled coarse level.
#[derive(Debug, Clone, PartialEq)]
pub struct Seeds<T> {
    /// Fine targets not covered by the coarse footprint.
    pub residual: Mask,
    pub confidence: Vec<T>,
}

/// Maps a filled coarse level onto the next finer LL: fine targets whose
/// coarse parent was a target are now known and inherit the parent's
/// confidence; the rest stay targets with confidence 0.
pub fn map_mask_up<T: Scalar>(coarse_mask: &Mask, coarse_confidence: &[T], fine_mask: &Mask, inherit: bool) -> Seeds<T> {
    let (w, h) = fine_mask.dims();
    let cw = coarse_mask.width();
    let mut residual = Mask::new(w, h);
    let mut confidence = vec![T::one(); w * h];
    for y in 0..h {
        for x in 0..w {
            if !fine_mask.get(x, y) {
                continue;
            }
            let (px, py) = (x / 2, y / 2);
            if coarse_mask.get(px, py) {
                if inherit {
                    confidence[y * w + x] = coarse_confidence[py * cw + px];
                }
            } else {
                residual.set(x, y, true);
                confidence[y * w + x] = T::zero();
            }
        }
    }
    Seeds { residual, confidence }
}

/// Runs `pipeline` on images with a supported channel count.
pub fn color_adapter<T, F>(img: &Raster<T>, pipeline: F) -> Result<Raster<T>>
where
    T: Scalar,
    F: FnOnce(&Raster<T>) -> Result<Raster<T>>,
{
    match img.channels() {
        1 | 3 => pipeline(img),
        c => Err(InpaintError::UnsupportedChannels(c)),
    }
}

struct BandFill<T> {
    band: Raster<T>,
    confidence: Vec<T>,
    report: BandReport,
}

fn fill_band<T: Scalar>(
    band: Raster<T>,
    mask: &Mask,
    confidence: Option<Vec<T>>,
    sp: &StructureProvider<'_, T>,
    params: &HierParams,
    level: usize,
    kind: BandKind,
) -> Result<BandFill<T>> {
    let start = Instant::now();
    if mask.is_empty() {
        let confidence = confidence.unwrap_or_else(|| vec![T::one(); band.len_pixels()]);
        return Ok(BandFill {
            band,
            confidence,
            report: BandReport {
                band: kind,
                filled_pixels: 0,
                fill_steps: 0,
                match_evaluations: 0,
                wall_seconds: start.elapsed().as_secs_f64(),
            },
        });
    }
    let st = match confidence {
        Some(c) => FillState::with_confidence(band, mask.clone(), c, params.patch_half),
        None => FillState::new(band, mask.clone(), params.patch_half),
    }
    .map_err(|e| match e {
        InpaintError::FullMask => InpaintError::NoCandidate { level, band: kind },
        other => other,
    })?;
    let mut st = st.with_options(params.fill).with_context(level, kind);
    run_fill(&mut st, sp)?;
    let (band, confidence, stats) = st.into_parts();
    Ok(BandFill {
        band,
        confidence,
        report: BandReport {
            band: kind,
            filled_pixels: stats.filled,
            fill_steps: stats.steps,
            match_evaluations: stats.evaluations,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Fills HL, LH and HH of `set` concurrently; reports come back in that order.
fn fill_details<T: Scalar>(
    set: &mut SubbandSet<T>,
    mask: &Mask,
    params: &HierParams,
    level: usize,
) -> Result<Vec<BandReport>> {
    let results: Vec<Result<BandFill<T>>> = BandKind::DETAILS
        .par_iter()
        .map(|&kind| {
            fill_band(
                set.band(kind).clone(),
                mask,
                None,
                &StructureProvider::DetailBand,
                params,
                level,
                kind,
            )
        })
        .collect();
    let mut reports = Vec::with_capacity(3);
    for (kind, result) in BandKind::DETAILS.into_iter().zip(results) {
        let filled = result?;
        *set.band_mut(kind) = filled.band;
        reports.push(filled.report);
    }
    Ok(reports)
}

fn fill_ll<T: Scalar>(
    set: &mut SubbandSet<T>,
    mask: &Mask,
    confidence: Option<Vec<T>>,
    params: &HierParams,
    level: usize,
) -> Result<(Vec<T>, BandReport)> {
    let details = [&set.hl, &set.lh, &set.hh];
    let filled = fill_band(
        set.ll.clone(),
        mask,
        confidence,
        &StructureProvider::LlAverage(details),
        params,
        level,
        BandKind::Ll,
    )?;
    set.ll = filled.band;
    Ok((filled.confidence, filled.report))
}

/// Full coarse-to-fine inpainting of `img` over `mask`.
pub fn inpaint_hierarchical<T: Scalar>(img: &Raster<T>, mask: &Mask, params: &HierParams) -> Result<HierOutcome<T>> {
    params.validate()?;
    if img.channels() != 1 && img.channels() != 3 {
        return Err(InpaintError::UnsupportedChannels(img.channels()));
    }
    if img.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: img.dims(),
            found: mask.dims(),
        });
    }
    if mask.is_empty() {
        warn!("empty mask: returning the input unchanged");
        return Ok(HierOutcome {
            image: img.clone(),
            levels: 0,
            analyses: 0,
            syntheses: 0,
            reports: Vec::new(),
        });
    }
    if mask.is_full() {
        return Err(InpaintError::FullMask);
    }

    let levels = params.resolve_levels(mask);
    if levels == 0 {
        let start = Instant::now();
        let (image, _, stats) = exemplar_flat_with(img, mask, params.patch_half, params.fill, None)?;
        let report = LevelReport {
            level: 0,
            bands: vec![BandReport {
                band: BandKind::Image,
                filled_pixels: stats.filled,
                fill_steps: stats.steps,
                match_evaluations: stats.evaluations,
                wall_seconds: start.elapsed().as_secs_f64(),
            }],
            ll_drift: 0.0,
        };
        return Ok(HierOutcome {
            image,
            levels: 0,
            analyses: 0,
            syntheses: 0,
            reports: vec![report],
        });
    }

    let pyramid = build_pyramid(img, mask, levels, params.mask_rule)?;
    let mut sets = pyramid.levels.clone();
    let mut reports = Vec::with_capacity(levels + 1);

    let coarse_mask = pyramid.mask_at(levels).clone();
    let mut bands = fill_details(&mut sets[levels - 1], &coarse_mask, params, levels)?;
    let (mut ll_confidence, ll_report) = fill_ll(&mut sets[levels - 1], &coarse_mask, None, params, levels)?;
    bands.push(ll_report);
    let mut current = LevelReport {
        level: levels,
        bands,
        ll_drift: 0.0,
    };
    let mut upper_mask = coarse_mask;
    let mut syntheses = 0;

    for level in (1..=levels).rev() {
        let mut ll = idwt2(&sets[level - 1])?;
        syntheses += 1;
        let fine = level - 1;
        let fine_mask = pyramid.mask_at(fine);
        ll.restore_outside(pyramid.ll_input(fine), fine_mask);
        current.ll_drift = brightness_drift(&ll, fine_mask).unwrap_or(0.0);
        reports.push(current);

        let seeds = map_mask_up(&upper_mask, &ll_confidence, fine_mask, params.inherit_confidence);
        if fine == 0 {
            let mut image = ll;
            if !seeds.residual.is_empty() {
                let start = Instant::now();
                let (filled, _, stats) =
                    exemplar_flat_with(&image, &seeds.residual, params.patch_half, params.fill, Some(seeds.confidence))?;
                image = filled;
                reports.push(LevelReport {
                    level: 0,
                    bands: vec![BandReport {
                        band: BandKind::Image,
                        filled_pixels: stats.filled,
                        fill_steps: stats.steps,
                        match_evaluations: stats.evaluations,
                        wall_seconds: start.elapsed().as_secs_f64(),
                    }],
                    ll_drift: 0.0,
                });
            }
            image.restore_outside(img, mask);
            return Ok(HierOutcome {
                image,
                levels,
                analyses: pyramid.depth(),
                syntheses,
                reports,
            });
        }

        let set = &mut sets[fine - 1];
        set.ll = ll;
        let mut bands = fill_details(set, fine_mask, params, fine)?;
        ll_confidence = if seeds.residual.is_empty() {
            seeds.confidence
        } else {
            let (conf, report) = fill_ll(set, &seeds.residual, Some(seeds.confidence), params, fine)?;
            bands.push(report);
            conf
        };
        current = LevelReport {
            level: fine,
            bands,
            ll_drift: 0.0,
        };
        upper_mask = fine_mask.clone();
    }
    unreachable!("the level loop returns at level 0")
}
