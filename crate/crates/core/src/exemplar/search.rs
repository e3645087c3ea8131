//! Exhaustive SSD exemplar search over fully known windows.

use rayon::prelude::*;

use super::patch::Patch;
use super::FillState;
use crate::error::{InpaintError, Result};
use crate::raster::{Mask, Pixel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Every candidate's SSD is summed to completion.
    Exhaustive,
    /// A candidate is abandoned once a partial row sum exceeds the best so far.
    #[default]
    EarlyExit,
}

/// Summed-area table of target pixels, used to reject candidate windows
/// that overlap the current target region in constant time.
#[derive(Debug, Clone)]
pub(crate) struct TargetTable {
    stride: usize,
    sums: Vec<u32>,
}

impl TargetTable {
    pub(crate) fn new(mask: &Mask) -> Self {
        let (w, h) = mask.dims();
        let stride = w + 1;
        let mut sums = vec![0u32; stride * (h + 1)];
        for y in 0..h {
            let mut row = 0u32;
            for x in 0..w {
                row += mask.get(x, y) as u32;
                sums[(y + 1) * stride + x + 1] = sums[y * stride + x + 1] + row;
            }
        }
        Self { stride, sums }
    }

    /// Target count in `[x0, x1) x [y0, y1)`.
    #[inline]
    pub(crate) fn count(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
        let s = self.stride;
        self.sums[y1 * s + x1] + self.sums[y0 * s + x0] - self.sums[y0 * s + x1] - self.sums[y1 * s + x0]
    }
}

/// Known pixels of the target patch, grouped by patch row.
struct Template<T> {
    offsets: Vec<isize>,
    values: Vec<T>,
    row_ends: Vec<usize>,
}

impl<T: Scalar> Template<T> {
    fn new(target: &Patch, st: &FillState<T>) -> Self {
        let band = st.band();
        let w = band.width();
        let mut offsets = Vec::new();
        let mut values = Vec::new();
        let mut row_ends = Vec::new();
        for y in target.y0..target.y1 {
            for x in target.x0..target.x1 {
                let p = Pixel::new(x, y);
                let i = p.index(w);
                if st.mask().bit(i) {
                    continue;
                }
                let (dx, dy) = target.offset(p);
                offsets.push(dy * w as isize + dx);
                values.extend_from_slice(band.pixel(i));
            }
            if row_ends.last() != Some(&offsets.len()) {
                row_ends.push(offsets.len());
            }
        }
        Self {
            offsets,
            values,
            row_ends,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate<T> {
    ssd: T,
    index: usize,
}

/// Lower SSD wins, equal SSD goes to the smaller row-major index.
fn better<T: Scalar>(a: Option<Candidate<T>>, b: Option<Candidate<T>>) -> Option<Candidate<T>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if a.ssd < b.ssd || (a.ssd == b.ssd && a.index < b.index) {
                Some(a)
            } else {
                Some(b)
            }
        }
    }
}

/// Scans one row of candidate centers.
fn scan_row<T: Scalar>(
    st: &FillState<T>,
    tpl: &Template<T>,
    table: &TargetTable,
    cy: usize,
    mut best: Option<Candidate<T>>,
) -> (Option<Candidate<T>>, u64) {
    let band = st.band();
    let (w, _) = band.dims();
    let ch = band.channels();
    let half = st.half();
    let size = 2 * half + 1;
    let data = band.data();
    let early = st.options().search == SearchMode::EarlyExit;
    let mut evaluated = 0u64;
    'cand: for cx in half..w - half {
        if table.count(cx - half, cy - half, cx - half + size, cy - half + size) != 0 {
            continue;
        }
        evaluated += 1;
        let center = (cy * w + cx) as isize;
        let mut ssd = T::zero();
        let mut k = 0;
        for &end in &tpl.row_ends {
            while k < end {
                let base = (center + tpl.offsets[k]) as usize * ch;
                for c in 0..ch {
                    let d = tpl.values[k * ch + c] - data[base + c];
                    ssd += d * d;
                }
                k += 1;
            }
            if early {
                if let Some(b) = best {
                    if ssd > b.ssd {
                        continue 'cand;
                    }
                }
            }
        }
        best = better(
            best,
            Some(Candidate {
                ssd,
                index: cy * w + cx,
            }),
        );
    }
    (best, evaluated)
}

/// Center of the fully known, full-size window minimizing the SSD over the
/// known pixels of `target`, plus the number of candidates examined.
pub(crate) fn search<T: Scalar>(target: &Patch, st: &FillState<T>) -> Result<(Pixel, u64)> {
    let (w, h) = st.band().dims();
    let half = st.half();
    let size = 2 * half + 1;
    let no_candidate = || {
        let (level, band) = st.context();
        InpaintError::NoCandidate { level, band }
    };
    if w < size || h < size {
        return Err(no_candidate());
    }
    let tpl = Template::new(target, st);
    let table = st.target_table();
    let rows = half..h - half;
    let (best, evaluated) = if st.options().parallel {
        rows.into_par_iter()
            .map(|cy| scan_row(st, &tpl, table, cy, None))
            .reduce(|| (None, 0), |a, b| (better(a.0, b.0), a.1 + b.1))
    } else {
        rows.fold((None, 0), |(best, n), cy| {
            let (b, e) = scan_row(st, &tpl, table, cy, best);
            (b, n + e)
        })
    };
    best.map(|c| (Pixel::from_index(c.index, w), evaluated))
        .ok_or_else(no_candidate)
}

/// Best exemplar center for `target` in the band held by `st`.
pub fn best_match<T: Scalar>(target: &Patch, st: &FillState<T>) -> Result<Pixel> {
    search(target, st).map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Raster;

    #[test]
    fn table_counts_rectangles() {
        let m = Mask::rect(6, 5, 1, 1, 2, 3);
        let t = TargetTable::new(&m);
        assert_eq!(t.count(0, 0, 6, 5), 6);
        assert_eq!(t.count(0, 0, 2, 2), 1);
        assert_eq!(t.count(3, 0, 6, 5), 0);
    }

    #[test]
    fn finds_exact_duplicate() {
        // distinct values everywhere, then plant a copy of the target's surroundings
        let mut band = Raster::<f64>::from_fn(12, 12, 1, |x, y, _| (x * 31 + y * 17 % 13) as f64).unwrap();
        for dy in 0..3 {
            for dx in 0..3 {
                let v = band.get(1 + dx, 1 + dy, 0);
                band.set(7 + dx, 7 + dy, 0, v);
            }
        }
        let mask = Mask::rect(12, 12, 2, 2, 1, 1);
        let st = FillState::new(band, mask, 1).unwrap();
        let target = Patch::new(Pixel::new(2, 2), 1, (12, 12));
        assert_eq!(best_match(&target, &st).unwrap(), Pixel::new(8, 8));
    }

    #[test]
    fn constant_band_picks_first_candidate() {
        let band = Raster::<f64>::filled(10, 10, 1, 5.0).unwrap();
        let mask = Mask::rect(10, 10, 5, 5, 2, 2);
        let st = FillState::new(band, mask, 1).unwrap();
        let target = Patch::new(Pixel::new(5, 5), 1, (10, 10));
        assert_eq!(best_match(&target, &st).unwrap(), Pixel::new(1, 1));
    }

    #[test]
    fn reports_missing_candidates() {
        let band = Raster::<f64>::filled(5, 5, 1, 5.0).unwrap();
        let mask = Mask::rect(5, 5, 2, 0, 1, 5);
        let st = FillState::new(band, mask, 1).unwrap();
        let target = Patch::new(Pixel::new(2, 2), 1, (5, 5));
        assert!(matches!(
            best_match(&target, &st),
            Err(InpaintError::NoCandidate { .. })
        ));
    }
}
