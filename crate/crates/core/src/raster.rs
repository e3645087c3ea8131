//! Raster and mask value types.
//!
//! Samples are stored as floating values in row-major, channel-interleaved
//! order. Quantization to 8 bits happens only when a raster is written out
//! (see [`crate::pnm`]).

use crate::error::{InpaintError, Result};
use crate::scalar::Scalar;

/// Luma weights applied to RGB samples when a single guide plane is needed.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Pixel coordinate, `x` is the column and `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: usize,
    pub y: usize,
}

impl Pixel {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    /// Row-major index in a grid of the given width.
    pub const fn index(self, width: usize) -> usize {
        self.y * width + self.x
    }

    pub const fn from_index(index: usize, width: usize) -> Self {
        Self {
            x: index % width,
            y: index / width,
        }
    }
}

/// 2-D grid of floating samples with 1 or 3 interleaved channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Scalar> Raster<T> {
    /// Zero-filled raster.
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        Self::filled(width, height, channels, T::zero())
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: T) -> Result<Self> {
        check_shape(width, height, channels)?;
        Ok(Self {
            width,
            height,
            channels,
            data: vec![value; width * height * channels],
        })
    }

    pub fn from_vec(width: usize, height: usize, channels: usize, data: Vec<T>) -> Result<Self> {
        check_shape(width, height, channels)?;
        if data.len() != width * height * channels {
            return Err(InpaintError::InvalidParameter(format!(
                "raster data has {} samples, expected {}x{}x{}",
                data.len(),
                width,
                height,
                channels
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Builds a raster by evaluating `f(x, y, channel)` at every sample.
    pub fn from_fn<F>(width: usize, height: usize, channels: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> T,
    {
        check_shape(width, height, channels)?;
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len_pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> T {
        self.data[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: T) {
        self.data[(y * self.width + x) * self.channels + c] = value;
    }

    /// All channel samples of the pixel at row-major index `index`.
    #[inline]
    pub fn pixel(&self, index: usize) -> &[T] {
        let base = index * self.channels;
        &self.data[base..base + self.channels]
    }

    #[inline]
    pub fn pixel_mut(&mut self, index: usize) -> &mut [T] {
        let base = index * self.channels;
        &mut self.data[base..base + self.channels]
    }

    /// Extracts one channel as a 1-channel raster.
    pub fn channel(&self, c: usize) -> Raster<T> {
        assert!(c < self.channels, "channel {c} out of range");
        let data = self
            .data
            .chunks_exact(self.channels)
            .map(|px| px[c])
            .collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Interleaves 1-channel planes into one raster.
    pub fn from_planes(planes: &[Raster<T>]) -> Result<Raster<T>> {
        let first = planes
            .first()
            .ok_or_else(|| InpaintError::InvalidParameter("no planes given".into()))?;
        let (w, h) = first.dims();
        for p in planes {
            if p.dims() != (w, h) {
                return Err(InpaintError::DimensionMismatch {
                    expected: (w, h),
                    found: p.dims(),
                });
            }
            if p.channels != 1 {
                return Err(InpaintError::ChannelMismatch {
                    expected: 1,
                    found: p.channels,
                });
            }
        }
        let n = planes.len();
        let mut data = Vec::with_capacity(w * h * n);
        for i in 0..w * h {
            data.extend(planes.iter().map(|p| p.data[i]));
        }
        Raster::from_vec(w, h, n, data)
    }

    /// Weighted sum of channels: the luma plane for RGB, identity for gray.
    pub fn luma(&self) -> Raster<T> {
        let weights = guide_weights::<T>(self.channels);
        let data = self
            .data
            .chunks_exact(self.channels)
            .map(|px| px.iter().zip(&weights).map(|(&v, &w)| v * w).sum())
            .collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    pub fn map<F: FnMut(T) -> T>(&self, f: F) -> Raster<T> {
        Raster {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    /// Replaces every pixel outside `mask` with the corresponding pixel of `source`.
    pub fn restore_outside(&mut self, source: &Raster<T>, mask: &Mask) {
        debug_assert_eq!(self.dims(), source.dims());
        debug_assert_eq!(self.dims(), mask.dims());
        for i in 0..self.len_pixels() {
            if !mask.bit(i) {
                let px = source.pixel(i).to_vec();
                self.pixel_mut(i).copy_from_slice(&px);
            }
        }
    }

    pub fn min_max(&self) -> (T, T) {
        self.data.iter().fold(
            (T::infinity(), T::neg_infinity()),
            |(lo, hi), &v| (lo.min(v), hi.max(v)),
        )
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Raster<U> {
        Raster {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|v| U::lit(v.as_f64())).collect(),
        }
    }
}

/// Per-channel weights collapsing a pixel to one guide value.
pub fn guide_weights<T: Scalar>(channels: usize) -> Vec<T> {
    if channels == 3 {
        LUMA_WEIGHTS.iter().map(|&w| T::lit(w)).collect()
    } else {
        let w = T::one() / T::lit(channels as f64);
        vec![w; channels]
    }
}

fn check_shape(width: usize, height: usize, channels: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(InpaintError::InvalidParameter(format!(
            "raster dimensions must be positive, got {width}x{height}"
        )));
    }
    if channels == 0 {
        return Err(InpaintError::UnsupportedChannels(channels));
    }
    Ok(())
}

/// Binary target-region mask; `true` marks a pixel to be filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    /// All-false mask (nothing to fill).
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(InpaintError::InvalidParameter(format!(
                "mask of {}x{} needs {} bits, got {}",
                width,
                height,
                width * height,
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> bool>(width: usize, height: usize, mut f: F) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                m.bits[y * width + x] = f(x, y);
            }
        }
        m
    }

    /// Axis-aligned rectangle `[x0, x0+w) x [y0, y0+h)`, clipped to the grid.
    pub fn rect(width: usize, height: usize, x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self::from_fn(width, height, |x, y| {
            x >= x0 && x < x0 + w && y >= y0 && y < y0 + h
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    #[inline]
    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    #[inline]
    pub fn set_bit(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    /// True when some 4-neighbor of `(x, y)` is a source pixel.
    pub fn has_source_neighbor4(&self, x: usize, y: usize) -> bool {
        (x > 0 && !self.get(x - 1, y))
            || (x + 1 < self.width && !self.get(x + 1, y))
            || (y > 0 && !self.get(x, y - 1))
            || (y + 1 < self.height && !self.get(x, y + 1))
    }

    /// Source pixels within one pixel (8-neighborhood) of the target region.
    pub fn ring(&self) -> Mask {
        Mask::from_fn(self.width, self.height, |x, y| {
            if self.get(x, y) {
                return false;
            }
            let (x0, x1) = (x.saturating_sub(1), (x + 1).min(self.width - 1));
            let (y0, y1) = (y.saturating_sub(1), (y + 1).min(self.height - 1));
            (y0..=y1).any(|yy| (x0..=x1).any(|xx| self.get(xx, yy)))
        })
    }

    pub fn iter_targets(&self) -> impl Iterator<Item = Pixel> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Pixel::from_index(i, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inconsistent_data_length() {
        assert!(Raster::<f64>::from_vec(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(Raster::<f64>::from_vec(0, 2, 1, vec![]).is_err());
    }

    #[test]
    fn planes_roundtrip() {
        let r = Raster::<f64>::from_fn(3, 2, 3, |x, y, c| (x + 10 * y + 100 * c) as f64).unwrap();
        let planes: Vec<_> = (0..3).map(|c| r.channel(c)).collect();
        assert_eq!(Raster::from_planes(&planes).unwrap(), r);
    }

    #[test]
    fn luma_of_gray_rgb_is_gray() {
        let r = Raster::<f64>::filled(2, 2, 3, 80.0).unwrap();
        for v in r.luma().data() {
            assert!((v - 80.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_surrounds_target() {
        let m = Mask::rect(5, 5, 2, 2, 1, 1);
        let ring = m.ring();
        assert_eq!(ring.count(), 8);
        assert!(!ring.get(2, 2));
        assert!(ring.get(1, 1) && ring.get(3, 3));
    }
}
