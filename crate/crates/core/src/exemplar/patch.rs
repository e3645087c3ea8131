use crate::raster::{Mask, Pixel};

/// Square window of side `2 * half + 1` centered on a pixel, clipped to the
/// band. Bounds are half-open: `x0..x1`, `y0..y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Patch {
    pub center: Pixel,
    pub half: usize,
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl Patch {
    pub fn new(center: Pixel, half: usize, (width, height): (usize, usize)) -> Self {
        assert!(center.x < width && center.y < height, "patch center outside band");
        Self {
            center,
            half,
            x0: center.x.saturating_sub(half),
            x1: (center.x + half + 1).min(width),
            y0: center.y.saturating_sub(half),
            y1: (center.y + half + 1).min(height),
        }
    }

    pub fn size(&self) -> usize {
        2 * self.half + 1
    }

    /// Number of in-band pixels, `|Ψp|` after clipping.
    pub fn cardinality(&self) -> usize {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn is_interior(&self) -> bool {
        self.cardinality() == self.size() * self.size()
    }

    /// In-band pixels in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        (self.y0..self.y1).flat_map(move |y| (self.x0..self.x1).map(move |x| Pixel::new(x, y)))
    }

    /// Offset of `p` from the patch center.
    pub fn offset(&self, p: Pixel) -> (isize, isize) {
        (
            p.x as isize - self.center.x as isize,
            p.y as isize - self.center.y as isize,
        )
    }
}

/// Target pixels with at least one source 4-neighbor, row-major.
pub fn compute_front(mask: &Mask) -> Vec<Pixel> {
    mask.iter_targets()
        .filter(|p| mask.has_source_neighbor4(p.x, p.y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_at_corner() {
        let p = Patch::new(Pixel::new(0, 0), 1, (10, 10));
        assert_eq!(p.cardinality(), 4);
        assert!(!p.is_interior());
        let q = Patch::new(Pixel::new(5, 5), 1, (10, 10));
        assert_eq!(q.cardinality(), 9);
        assert!(q.is_interior());
        assert_eq!(q.pixels().count(), 9);
        assert_eq!(q.pixels().next(), Some(Pixel::new(4, 4)));
    }

    #[test]
    fn front_of_degenerate_masks() {
        assert!(compute_front(&Mask::new(5, 5)).is_empty());
        let full = Mask::from_fn(5, 5, |_, _| true);
        assert!(compute_front(&full).is_empty());
    }

    #[test]
    fn front_of_block_matches_brute_force() {
        let m = Mask::rect(7, 7, 2, 2, 3, 3);
        let front = compute_front(&m);
        // oracle: every masked pixel probed against each of its 4 neighbors
        let mut expected = Vec::new();
        for y in 0..7i32 {
            for x in 0..7i32 {
                if !m.get(x as usize, y as usize) {
                    continue;
                }
                let touches = [(-1, 0), (1, 0), (0, -1), (0, 1)].iter().any(|(dx, dy)| {
                    let (nx, ny) = (x + dx, y + dy);
                    (0..7).contains(&nx) && (0..7).contains(&ny) && !m.get(nx as usize, ny as usize)
                });
                if touches {
                    expected.push(Pixel::new(x as usize, y as usize));
                }
            }
        }
        assert_eq!(front.len(), 8);
        assert_eq!(front, expected);
        assert!(!front.contains(&Pixel::new(3, 3)));
    }
}
