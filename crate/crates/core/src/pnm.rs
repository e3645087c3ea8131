//! PGM (P2/P5) and PPM (P3/P6) reading and writing, maxval 255 only.

use std::fs;
use std::path::Path;

use crate::error::{InpaintError, Result};
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;

/// Samples strictly above this value are mask targets.
pub const MASK_THRESHOLD: u8 = 127;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    Binary,
}

/// Decoded 8-bit image: width, height, channels and interleaved samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netpbm {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub samples: Vec<u8>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(InpaintError::Malformed(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| InpaintError::Malformed(format!("{what} out of range")))
    }
}

/// Parses a P2/P3/P5/P6 byte stream.
pub fn decode(bytes: &[u8]) -> Result<Netpbm> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(InpaintError::Malformed("missing P magic number".into()));
    }
    let (channels, encoding) = match bytes[1] {
        b'2' => (1, Encoding::Ascii),
        b'3' => (3, Encoding::Ascii),
        b'5' => (1, Encoding::Binary),
        b'6' => (3, Encoding::Binary),
        other => {
            return Err(InpaintError::Malformed(format!(
                "unsupported magic P{}",
                other as char
            )))
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(InpaintError::Malformed("zero image dimension".into()));
    }
    if maxval != 255 {
        return Err(InpaintError::UnsupportedMaxval(maxval));
    }
    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| InpaintError::Malformed("image dimensions overflow".into()))?;

    let samples = match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates the header from the raster
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(InpaintError::Malformed("missing header terminator".into())),
            }
            let data = &bytes[cur.pos..];
            if data.len() < count {
                return Err(InpaintError::Malformed(format!(
                    "truncated pixel stream: {} of {} samples",
                    data.len(),
                    count
                )));
            }
            data[..count].to_vec()
        }
        Encoding::Ascii => {
            let mut samples = Vec::with_capacity(count);
            for k in 0..count {
                let v = cur.number("sample").map_err(|_| {
                    InpaintError::Malformed(format!(
                        "truncated pixel stream: {k} of {count} samples"
                    ))
                })?;
                if v > maxval {
                    return Err(InpaintError::Malformed(format!(
                        "sample {v} exceeds maxval {maxval}"
                    )));
                }
                samples.push(v as u8);
            }
            samples
        }
    };
    Ok(Netpbm {
        width,
        height,
        channels,
        samples,
    })
}

/// Binary P5/P6 encoding.
pub fn encode(img: &Netpbm) -> Vec<u8> {
    let magic = if img.channels == 3 { "P6" } else { "P5" };
    let mut out = format!("{}\n{} {}\n255\n", magic, img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}

/// Clamps to [0, 255] and rounds half away from zero.
pub fn quantize<T: Scalar>(v: T) -> u8 {
    let v = v.as_f64();
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, 255.0).round() as u8
}

pub fn raster_to_netpbm<T: Scalar>(r: &Raster<T>) -> Result<Netpbm> {
    if r.channels() != 1 && r.channels() != 3 {
        return Err(InpaintError::UnsupportedChannels(r.channels()));
    }
    Ok(Netpbm {
        width: r.width(),
        height: r.height(),
        channels: r.channels(),
        samples: r.data().iter().map(|&v| quantize(v)).collect(),
    })
}

pub fn netpbm_to_raster<T: Scalar>(img: &Netpbm) -> Result<Raster<T>> {
    Raster::from_vec(
        img.width,
        img.height,
        img.channels,
        img.samples.iter().map(|&s| T::lit(s as f64)).collect(),
    )
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| InpaintError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| InpaintError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_raster<T: Scalar>(path: impl AsRef<Path>) -> Result<Raster<T>> {
    let bytes = read_file(path.as_ref())?;
    netpbm_to_raster(&decode(&bytes)?)
}

/// Writes P5 for 1-channel rasters and P6 for 3-channel rasters.
pub fn save_raster<T: Scalar>(r: &Raster<T>, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &encode(&raster_to_netpbm(r)?))
}

pub fn mask_from_netpbm(img: &Netpbm, expected: (usize, usize)) -> Result<Mask> {
    if img.channels != 1 {
        return Err(InpaintError::MaskNotSingleChannel(img.channels));
    }
    if (img.width, img.height) != expected {
        return Err(InpaintError::DimensionMismatch {
            expected,
            found: (img.width, img.height),
        });
    }
    Mask::from_bits(
        img.width,
        img.height,
        img.samples.iter().map(|&s| s > MASK_THRESHOLD).collect(),
    )
}

pub fn load_mask(path: impl AsRef<Path>, expected: (usize, usize)) -> Result<Mask> {
    let bytes = read_file(path.as_ref())?;
    mask_from_netpbm(&decode(&bytes)?, expected)
}

/// Writes a mask as a P5 file with targets at 255 and sources at 0.
pub fn save_mask(mask: &Mask, path: impl AsRef<Path>) -> Result<()> {
    let img = Netpbm {
        width: mask.width(),
        height: mask.height(),
        channels: 1,
        samples: mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect(),
    };
    write_file(path.as_ref(), &encode(&img))
}
