use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Which subband (or the untransformed image) an operation was working on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandKind {
    Ll,
    Hl,
    Lh,
    Hh,
    /// Level-0 image plane, used by the flat exemplar path.
    Image,
}

impl BandKind {
    pub const DETAILS: [BandKind; 3] = [BandKind::Hl, BandKind::Lh, BandKind::Hh];

    pub fn name(self) -> &'static str {
        match self {
            BandKind::Ll => "ll",
            BandKind::Hl => "hl",
            BandKind::Lh => "lh",
            BandKind::Hh => "hh",
            BandKind::Image => "image",
        }
    }
}

impl fmt::Display for BandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum InpaintError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed raster file: {0}")]
    Malformed(String),
    #[error("unsupported maxval {0} (only 255 is accepted)")]
    UnsupportedMaxval(u32),
    #[error("unsupported channel count {0}")]
    UnsupportedChannels(usize),
    #[error("mask must be a single-channel raster, found {0} channels")]
    MaskNotSingleChannel(usize),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("channel mismatch: expected {expected}, found {found}")]
    ChannelMismatch { expected: usize, found: usize },
    #[error("mask is empty: nothing to inpaint")]
    EmptyMask,
    #[error("mask covers the whole image: no source pixels")]
    FullMask,
    #[error("no fully known exemplar window at level {level}, band {band}: mask too large for the patch size")]
    NoCandidate { level: usize, band: BandKind },
    #[error("{requested} decomposition levels requested but at most {max} fit the image")]
    LevelsTooDeep { requested: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mask has no surrounding ring of source pixels")]
    EmptyRing,
    #[error("mean squared error must be non-negative, got {0}")]
    NegativeMse(f64),
}

pub type Result<T, E = InpaintError> = std::result::Result<T, E>;
