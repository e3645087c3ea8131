//! Greedy exemplar fill of a single band.
//!
//! Each step picks the front pixel of highest `confidence * structure`
//! priority, finds the fully known window whose pixels best match the known
//! part of that pixel's patch (sum of squared differences), and copies the
//! exemplar into the patch's unknown pixels. Multi-channel bands share one
//! fill order computed on a luma guide; the SSD sums all channels.

mod patch;
mod search;
mod terms;

use std::collections::BTreeSet;

pub use patch::{compute_front, Patch};
pub use search::{best_match, SearchMode};
pub use terms::{confidence_term, ll_average, priority, select_target, structure_term, StructureProvider};

use crate::error::{BandKind, InpaintError, Result};
use crate::raster::{guide_weights, Mask, Pixel, Raster};
use crate::scalar::Scalar;
use search::TargetTable;

/// Knobs that change speed but never the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillOptions {
    pub search: SearchMode,
    /// Evaluate candidate rows on the rayon pool.
    pub parallel: bool,
}

impl Default for FillOptions {
    fn default() -> Self {
        Self {
            search: SearchMode::EarlyExit,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FillStats {
    pub steps: usize,
    pub filled: usize,
    /// Candidate windows whose SSD was (at least partially) evaluated.
    pub evaluations: u64,
}

/// Mutable state of one band's fill loop.
#[derive(Debug, Clone)]
pub struct FillState<T> {
    band: Raster<T>,
    mask: Mask,
    confidence: Vec<T>,
    front: BTreeSet<usize>,
    half: usize,
    weights: Vec<T>,
    options: FillOptions,
    context: (usize, BandKind),
    table: TargetTable,
    priorities: Vec<Option<T>>,
    stats: FillStats,
}

impl<T: Scalar> FillState<T> {
    /// Confidence starts at 1 on source pixels and 0 on targets.
    pub fn new(band: Raster<T>, mask: Mask, half: usize) -> Result<Self> {
        let confidence = mask
            .bits()
            .iter()
            .map(|&t| if t { T::zero() } else { T::one() })
            .collect();
        Self::with_confidence(band, mask, confidence, half)
    }

    pub fn with_confidence(band: Raster<T>, mask: Mask, confidence: Vec<T>, half: usize) -> Result<Self> {
        if band.dims() != mask.dims() {
            return Err(InpaintError::DimensionMismatch {
                expected: band.dims(),
                found: mask.dims(),
            });
        }
        if half == 0 {
            return Err(InpaintError::InvalidParameter("patch half-size must be at least 1".into()));
        }
        if confidence.len() != band.len_pixels()
            || confidence.iter().any(|&c| !(c >= T::zero() && c <= T::one()))
        {
            return Err(InpaintError::InvalidParameter(
                "confidence map must match the band and lie in [0, 1]".into(),
            ));
        }
        if mask.is_full() {
            return Err(InpaintError::FullMask);
        }
        let w = band.width();
        let front = compute_front(&mask).into_iter().map(|p| p.index(w)).collect();
        let weights = guide_weights(band.channels());
        let table = TargetTable::new(&mask);
        let priorities = vec![None; band.len_pixels()];
        Ok(Self {
            band,
            mask,
            confidence,
            front,
            half,
            weights,
            options: FillOptions::default(),
            context: (0, BandKind::Image),
            table,
            priorities,
            stats: FillStats::default(),
        })
    }

    pub fn with_options(mut self, options: FillOptions) -> Self {
        self.options = options;
        self
    }

    /// Level and band named in errors raised while filling.
    pub fn with_context(mut self, level: usize, band: BandKind) -> Self {
        self.context = (level, band);
        self
    }

    pub fn band(&self) -> &Raster<T> {
        &self.band
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn confidence(&self) -> &[T] {
        &self.confidence
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn options(&self) -> FillOptions {
        self.options
    }

    pub fn context(&self) -> (usize, BandKind) {
        self.context
    }

    pub fn stats(&self) -> FillStats {
        self.stats
    }

    /// Current fill front in row-major order.
    pub fn front(&self) -> Vec<Pixel> {
        let w = self.band.width();
        self.front.iter().map(|&i| Pixel::from_index(i, w)).collect()
    }

    pub fn remaining(&self) -> usize {
        self.mask.count()
    }

    pub fn is_done(&self) -> bool {
        self.front.is_empty()
    }

    pub fn into_band(self) -> Raster<T> {
        self.band
    }

    pub fn into_parts(self) -> (Raster<T>, Vec<T>, FillStats) {
        (self.band, self.confidence, self.stats)
    }

    pub(crate) fn target_table(&self) -> &TargetTable {
        &self.table
    }

    /// Guide value of pixel `index` in `band` (luma for RGB).
    #[inline]
    pub(crate) fn guide_of(&self, band: &Raster<T>, index: usize) -> T {
        band.pixel(index)
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&v, &w)| acc + v * w)
    }

    fn check_provider(&self, sp: &StructureProvider<'_, T>) -> Result<()> {
        if let StructureProvider::LlAverage(details) = sp {
            for d in details {
                if d.dims() != self.band.dims() || d.channels() != self.band.channels() {
                    return Err(InpaintError::DimensionMismatch {
                        expected: self.band.dims(),
                        found: d.dims(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Highest-priority front pixel, refreshing stale cached priorities.
    fn select(&mut self, sp: &StructureProvider<'_, T>) -> Option<Pixel> {
        let w = self.band.width();
        let stale: Vec<usize> = self
            .front
            .iter()
            .copied()
            .filter(|&i| self.priorities[i].is_none())
            .collect();
        for i in stale {
            let value = priority(Pixel::from_index(i, w), sp, self);
            self.priorities[i] = Some(value);
        }
        let mut best: Option<(usize, T)> = None;
        for &i in &self.front {
            let p = self.priorities[i].expect("priority refreshed");
            match best {
                Some((_, b)) if !(p > b) => {}
                _ => best = Some((i, p)),
            }
        }
        best.map(|(i, _)| Pixel::from_index(i, w))
    }

    fn refresh_after_fill(&mut self, patch: &Patch, reach: usize) {
        let (w, h) = self.band.dims();
        self.table = TargetTable::new(&self.mask);
        // front membership can only change next to modified pixels
        let (x0, x1) = (patch.x0.saturating_sub(1), (patch.x1 + 1).min(w));
        let (y0, y1) = (patch.y0.saturating_sub(1), (patch.y1 + 1).min(h));
        for y in y0..y1 {
            for x in x0..x1 {
                let i = y * w + x;
                if self.mask.bit(i) && self.mask.has_source_neighbor4(x, y) {
                    self.front.insert(i);
                } else {
                    self.front.remove(&i);
                }
            }
        }
        // any window overlapping the patch (plus the provider's reach) is stale
        let r = self.half + reach;
        let (x0, x1) = (patch.x0.saturating_sub(r), (patch.x1 + r).min(w));
        let (y0, y1) = (patch.y0.saturating_sub(r), (patch.y1 + r).min(h));
        for y in y0..y1 {
            for x in x0..x1 {
                self.priorities[y * w + x] = None;
            }
        }
    }
}

/// One greedy fill step: select, match, copy, update.
pub fn fill_step<T: Scalar>(st: &mut FillState<T>, sp: &StructureProvider<'_, T>) -> Result<()> {
    st.check_provider(sp)?;
    let target = st
        .select(sp)
        .ok_or_else(|| InpaintError::InvalidParameter("fill step on an empty front".into()))?;
    let patch = Patch::new(target, st.half, st.band.dims());
    let patch_confidence = confidence_term(target, st);
    let (source, evaluated) = search::search(&patch, st)?;
    st.stats.evaluations += evaluated;

    let w = st.band.width();
    let mut filled = 0;
    for p in patch.pixels() {
        let i = p.index(w);
        if !st.mask.bit(i) {
            continue;
        }
        let (dx, dy) = patch.offset(p);
        let q = Pixel::new(
            (source.x as isize + dx) as usize,
            (source.y as isize + dy) as usize,
        );
        let values = st.band.pixel(q.index(w)).to_vec();
        st.band.pixel_mut(i).copy_from_slice(&values);
        st.mask.set_bit(i, false);
        st.confidence[i] = patch_confidence;
        filled += 1;
    }
    st.stats.filled += filled;
    st.stats.steps += 1;
    st.refresh_after_fill(&patch, sp.reach());
    Ok(())
}

/// Runs fill steps until no target pixel remains.
pub fn run_fill<T: Scalar>(st: &mut FillState<T>, sp: &StructureProvider<'_, T>) -> Result<()> {
    let budget = st.remaining();
    while !st.is_done() {
        debug_assert!(st.stats.steps < budget, "fill loop exceeded its step budget");
        fill_step(st, sp)?;
    }
    Ok(())
}

/// Fills every target pixel of `band`; source pixels are returned untouched.
pub fn inpaint_band<T: Scalar>(
    band: &Raster<T>,
    mask: &Mask,
    sp: &StructureProvider<'_, T>,
    half: usize,
) -> Result<Raster<T>> {
    if mask.is_empty() {
        return Ok(band.clone());
    }
    let mut st = FillState::new(band.clone(), mask.clone(), half)?;
    run_fill(&mut st, sp)?;
    Ok(st.into_band())
}
