//! Hierarchical exemplar inpainting in the Haar wavelet domain.
//!
//! A damaged region is filled coarse to fine: the image is decomposed into
//! Haar subbands, the coarsest subbands are filled greedily with best
//! matching patches ranked by confidence and structure, and the result is
//! reconstructed level by level while the detail bands of each finer level
//! are filled in turn. Interpolation, diffusion and flat exemplar baselines
//! and mask-restricted quality metrics are included for comparison.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` choice.

pub mod baselines;
pub mod error;
pub mod exemplar;
pub mod hierarchy;
pub mod methods;
pub mod metrics;
pub mod pnm;
pub mod raster;
pub mod scalar;
pub mod wavelet;

pub use error::{BandKind, InpaintError, Result};
pub use raster::{Mask, Pixel, Raster};
pub use scalar::Scalar;
pub use wavelet::MaskRule;

pub type Raster64 = Raster<f64>;
pub type Raster32 = Raster<f32>;
pub type SubbandSet64 = wavelet::SubbandSet<f64>;
pub type Pyramid64 = wavelet::Pyramid<f64>;
pub type FillState64 = exemplar::FillState<f64>;
