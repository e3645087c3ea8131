//! Uniform entry point for the four inpainting methods.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{exemplar_flat_with, inpaint_diffusion, inpaint_interp, DiffusionParams};
use crate::error::{InpaintError, Result};
use crate::exemplar::FillOptions;
use crate::hierarchy::{inpaint_hierarchical, ColorPolicy, HierParams, LevelSpec};
use crate::raster::{Mask, Raster};
use crate::scalar::Scalar;
use crate::wavelet::MaskRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Interp,
    Diffusion,
    Exemplar,
    HierDwt,
}

impl Method {
    /// Comparison order.
    pub const ALL: [Method; 4] = [Method::Interp, Method::Diffusion, Method::Exemplar, Method::HierDwt];

    pub fn name(self) -> &'static str {
        match self {
            Method::Interp => "interp",
            Method::Diffusion => "diffusion",
            Method::Exemplar => "exemplar",
            Method::HierDwt => "hier-dwt",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = InpaintError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                InpaintError::InvalidParameter(format!(
                    "unknown method `{s}` (expected interp, diffusion, exemplar or hier-dwt)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodParams {
    pub patch_half: usize,
    pub levels: LevelSpec,
    pub mask_rule: MaskRule,
    pub inherit_confidence: bool,
    pub diffusion: DiffusionParams,
    pub fill: FillOptions,
}

impl Default for MethodParams {
    fn default() -> Self {
        let h = HierParams::default();
        Self {
            patch_half: h.patch_half,
            levels: h.levels,
            mask_rule: h.mask_rule,
            inherit_confidence: h.inherit_confidence,
            diffusion: DiffusionParams::default(),
            fill: h.fill,
        }
    }
}

impl MethodParams {
    pub fn patch_size(&self) -> usize {
        2 * self.patch_half + 1
    }

    pub fn hier(&self) -> HierParams {
        HierParams {
            patch_half: self.patch_half,
            levels: self.levels,
            mask_rule: self.mask_rule,
            color_policy: ColorPolicy::LumaJoint,
            threshold: None,
            inherit_confidence: self.inherit_confidence,
            fill: self.fill,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MethodOutput<T> {
    pub image: Raster<T>,
    /// Decomposition depth used (0 for the non-wavelet methods).
    pub levels: usize,
}

pub fn run_method<T: Scalar>(method: Method, img: &Raster<T>, mask: &Mask, params: &MethodParams) -> Result<MethodOutput<T>> {
    if img.channels() != 1 && img.channels() != 3 {
        return Err(InpaintError::UnsupportedChannels(img.channels()));
    }
    let image = match method {
        Method::Interp => inpaint_interp(img, mask)?,
        Method::Diffusion => inpaint_diffusion(img, mask, &params.diffusion)?,
        Method::Exemplar => {
            if mask.is_full() {
                return Err(InpaintError::FullMask);
            }
            exemplar_flat_with(img, mask, params.patch_half, params.fill, None)?.0
        }
        Method::HierDwt => {
            let out = inpaint_hierarchical(img, mask, &params.hier())?;
            return Ok(MethodOutput {
                image: out.image,
                levels: out.levels,
            });
        }
    };
    Ok(MethodOutput { image, levels: 0 })
}
