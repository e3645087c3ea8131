//! Confidence, structure and priority terms evaluated on front pixels.

use super::patch::Patch;
use super::FillState;
use crate::raster::{Pixel, Raster};
use crate::scalar::Scalar;

/// Source of the per-pixel salience `e(q)` summed by the structure term.
#[derive(Debug, Clone, Copy)]
pub enum StructureProvider<'a, T> {
    /// `e(q)` is the absolute (guide) coefficient of the band being filled.
    DetailBand,
    /// Mean of the detail-band structure terms of the three co-located
    /// high-pass bands, used for LL.
    LlAverage([&'a Raster<T>; 3]),
    /// `e(q)` is the central-difference gradient magnitude of the current
    /// band, used when filling an untransformed image.
    GradientProxy,
}

impl<T> StructureProvider<'_, T> {
    /// Chebyshev radius around a changed pixel within which the term can change.
    pub(crate) fn reach(&self) -> usize {
        match self {
            StructureProvider::GradientProxy => 1,
            _ => 0,
        }
    }
}

/// `C(p)`: summed confidence of known pixels in the clipped window over its cardinality.
pub fn confidence_term<T: Scalar>(p: Pixel, st: &FillState<T>) -> T {
    let patch = Patch::new(p, st.half(), st.band().dims());
    let w = st.band().width();
    let sum: T = patch
        .pixels()
        .map(|q| q.index(w))
        .filter(|&i| !st.mask().bit(i))
        .map(|i| st.confidence()[i])
        .sum();
    sum / T::lit(patch.cardinality() as f64)
}

/// `S(p)` under the given provider.
pub fn structure_term<T: Scalar>(p: Pixel, sp: &StructureProvider<'_, T>, st: &FillState<T>) -> T {
    let patch = Patch::new(p, st.half(), st.band().dims());
    let w = st.band().width();
    let card = T::lit(patch.cardinality() as f64);
    let known = || patch.pixels().filter(|q| !st.mask().bit(q.index(w)));
    match sp {
        StructureProvider::DetailBand => {
            let sum: T = known().map(|q| st.guide_of(st.band(), q.index(w)).abs()).sum();
            sum / card
        }
        StructureProvider::LlAverage(details) => {
            let terms = details.map(|band| {
                let sum: T = known().map(|q| st.guide_of(band, q.index(w)).abs()).sum();
                sum / card
            });
            ll_average(terms)
        }
        StructureProvider::GradientProxy => {
            let sum: T = known().map(|q| gradient_magnitude(q, st)).sum();
            sum / card
        }
    }
}

pub fn ll_average<T: Scalar>(terms: [T; 3]) -> T {
    (terms[0] + terms[1] + terms[2]) / T::lit(3.0)
}

/// `P(p) = C(p) * S(p)`.
pub fn priority<T: Scalar>(p: Pixel, sp: &StructureProvider<'_, T>, st: &FillState<T>) -> T {
    confidence_term(p, st) * structure_term(p, sp, st)
}

/// Index of the highest priority; ties go to the earliest entry, so a
/// row-major `front` yields the smallest row-major pixel.
pub fn select_target<T: Scalar>(front: &[Pixel], priorities: &[T]) -> Option<usize> {
    debug_assert_eq!(front.len(), priorities.len());
    let mut best: Option<(usize, T)> = None;
    for (i, &p) in priorities.iter().enumerate() {
        match best {
            Some((_, b)) if !(p > b) => {}
            _ => best = Some((i, p)),
        }
    }
    best.map(|(i, _)| i)
}

/// Gradient magnitude of the guide plane at a known pixel, using only known
/// neighbors: central difference when both sides are known, one-sided when
/// one is, zero otherwise.
fn gradient_magnitude<T: Scalar>(q: Pixel, st: &FillState<T>) -> T {
    let band = st.band();
    let (w, h) = band.dims();
    let known = |x: usize, y: usize| !st.mask().get(x, y);
    let g = |x: usize, y: usize| st.guide_of(band, y * w + x);
    let center = g(q.x, q.y);
    let axis = |prev: Option<(usize, usize)>, next: Option<(usize, usize)>| {
        let prev = prev.filter(|&(x, y)| known(x, y));
        let next = next.filter(|&(x, y)| known(x, y));
        match (prev, next) {
            (Some(a), Some(b)) => (g(b.0, b.1) - g(a.0, a.1)) * T::lit(0.5),
            (None, Some(b)) => g(b.0, b.1) - center,
            (Some(a), None) => center - g(a.0, a.1),
            (None, None) => T::zero(),
        }
    };
    let gx = axis(
        q.x.checked_sub(1).map(|x| (x, q.y)),
        (q.x + 1 < w).then_some((q.x + 1, q.y)),
    );
    let gy = axis(
        q.y.checked_sub(1).map(|y| (q.x, y)),
        (q.y + 1 < h).then_some((q.x, q.y + 1)),
    );
    (gx * gx + gy * gy).sqrt()
}
