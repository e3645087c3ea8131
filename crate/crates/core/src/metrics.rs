//! Quality metrics restricted to the target region, and the comparison CSV row.

use crate::error::{InpaintError, Result};
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;

/// Squared peak value of 8-bit samples.
pub const PEAK_SQUARED: f64 = 255.0 * 255.0;

pub const CSV_HEADER: &str =
    "method,levels,patch_size,mse,psnr_db,filled_pixels,wall_seconds,brightness_drift";

fn check_pair<T: Scalar>(a: &Raster<T>, b: &Raster<T>, mask: &Mask) -> Result<()> {
    if a.dims() != b.dims() || a.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: a.dims(),
            found: if a.dims() != b.dims() { b.dims() } else { mask.dims() },
        });
    }
    if a.channels() != b.channels() {
        return Err(InpaintError::ChannelMismatch {
            expected: a.channels(),
            found: b.channels(),
        });
    }
    Ok(())
}

/// Mean squared difference over target pixels and all channels.
pub fn mask_mse<T: Scalar>(truth: &Raster<T>, result: &Raster<T>, mask: &Mask) -> Result<f64> {
    check_pair(truth, result, mask)?;
    let n = mask.count();
    if n == 0 {
        return Err(InpaintError::EmptyMask);
    }
    let sum: f64 = mask
        .iter_targets()
        .map(|p| {
            let i = p.index(mask.width());
            truth
                .pixel(i)
                .iter()
                .zip(result.pixel(i))
                .map(|(&a, &b)| {
                    let d = a.as_f64() - b.as_f64();
                    d * d
                })
                .sum::<f64>()
        })
        .sum();
    Ok(sum / (n * truth.channels()) as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` when `mse == 0`.
pub fn psnr(mse: f64) -> Result<f64> {
    if mse < 0.0 || mse.is_nan() {
        return Err(InpaintError::NegativeMse(mse));
    }
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK_SQUARED / mse).log10())
}

/// `|mean over the target region - mean over its one-pixel source ring|`.
pub fn brightness_drift<T: Scalar>(result: &Raster<T>, mask: &Mask) -> Result<f64> {
    if result.dims() != mask.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: result.dims(),
            found: mask.dims(),
        });
    }
    if mask.is_empty() {
        return Err(InpaintError::EmptyMask);
    }
    let ring = mask.ring();
    if ring.is_empty() {
        return Err(InpaintError::EmptyRing);
    }
    let mean = |m: &Mask| {
        let n = m.count() * result.channels();
        let s: f64 = m
            .iter_targets()
            .flat_map(|p| result.pixel(p.index(m.width())).iter().map(|v| v.as_f64()))
            .sum();
        s / n as f64
    };
    Ok((mean(mask) - mean(&ring)).abs())
}

/// One row of the comparison CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub method: String,
    pub levels: usize,
    pub patch_size: usize,
    pub mse: f64,
    pub psnr: f64,
    pub filled_pixels: usize,
    pub wall_seconds: f64,
    pub brightness_drift: f64,
}

impl QualityReport {
    /// Scores `result` against `truth` over `mask`.
    pub fn measure<T: Scalar>(
        method: &str,
        levels: usize,
        patch_size: usize,
        truth: &Raster<T>,
        result: &Raster<T>,
        mask: &Mask,
        wall_seconds: f64,
    ) -> Result<Self> {
        let mse = mask_mse(truth, result, mask)?;
        Ok(Self {
            method: method.to_string(),
            levels,
            patch_size,
            mse,
            psnr: psnr(mse)?,
            filled_pixels: mask.count(),
            wall_seconds,
            brightness_drift: brightness_drift(result, mask)?,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.method,
            self.levels,
            self.patch_size,
            format_float(self.mse),
            format_float(self.psnr),
            self.filled_pixels,
            format_float(self.wall_seconds),
            format_float(self.brightness_drift)
        )
    }
}

/// Row recorded when a method fails; metric columns hold `error`.
pub fn failure_row(method: &str, levels: usize, patch_size: usize, wall_seconds: f64) -> String {
    format!(
        "{},{},{},error,error,0,{},error",
        method,
        levels,
        patch_size,
        format_float(wall_seconds)
    )
}

/// Shortest round-trip decimal with a dot separator; infinity is `inf`.
pub fn format_float(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        let truth = Raster::<f64>::from_fn(4, 4, 1, |x, y, _| (x * y) as f64).unwrap();
        let mask = Mask::rect(4, 4, 1, 1, 2, 2);
        assert_eq!(mask_mse(&truth, &truth, &mask).unwrap(), 0.0);

        let t = Raster::<f64>::filled(3, 3, 1, 100.0).unwrap();
        let mut r = t.clone();
        r.set(1, 1, 0, 90.0);
        assert_eq!(mask_mse(&t, &r, &Mask::rect(3, 3, 1, 1, 1, 1)).unwrap(), 100.0);
    }

    #[test]
    fn mse_errors() {
        let a = Raster::<f64>::new(3, 3, 1).unwrap();
        let b = Raster::<f64>::new(3, 2, 1).unwrap();
        assert!(matches!(
            mask_mse(&a, &b, &Mask::new(3, 3)),
            Err(InpaintError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            mask_mse(&a, &a, &Mask::new(3, 3)),
            Err(InpaintError::EmptyMask)
        ));
    }

    #[test]
    fn psnr_examples() {
        assert!((psnr(65025.0).unwrap() - 0.0).abs() < 1e-12);
        assert!((psnr(650.25).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(psnr(0.0).unwrap(), f64::INFINITY);
        assert!(matches!(psnr(-1.0), Err(InpaintError::NegativeMse(_))));
    }

    #[test]
    fn drift_examples() {
        let c = Raster::<f64>::filled(6, 6, 1, 40.0).unwrap();
        let mask = Mask::rect(6, 6, 2, 2, 2, 2);
        assert_eq!(brightness_drift(&c, &mask).unwrap(), 0.0);
        let mut lifted = c.clone();
        for p in mask.iter_targets() {
            lifted.set(p.x, p.y, 0, 50.0);
        }
        assert_eq!(brightness_drift(&lifted, &mask).unwrap(), 10.0);
        let full = Mask::from_fn(6, 6, |_, _| true);
        assert!(matches!(brightness_drift(&c, &full), Err(InpaintError::EmptyRing)));
    }

    #[test]
    fn csv_formatting() {
        let r = QualityReport {
            method: "hier-dwt".into(),
            levels: 2,
            patch_size: 9,
            mse: 0.0,
            psnr: f64::INFINITY,
            filled_pixels: 256,
            wall_seconds: 0.5,
            brightness_drift: 1.25,
        };
        assert_eq!(r.csv_row(), "hier-dwt,2,9,0,inf,256,0.5,1.25");
        assert_eq!(failure_row("exemplar", 0, 9, 0.25), "exemplar,0,9,error,error,0,0.25,error");
    }
}
