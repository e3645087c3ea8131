//! Run configuration: command-line flags layered over an optional TOML file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use wavinpaint::hierarchy::LevelSpec;
use wavinpaint::methods::{Method, MethodParams};
use wavinpaint::MaskRule;

use crate::error::{CliError, CliResult};

pub const DEFAULT_PATCH_SIZE: usize = 9;

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Input image (PGM or PPM, maxval 255)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Mask image; pixels above 127 are filled
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Output image (inpaint) or output directory (compare, decompose)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// hier-dwt, exemplar, diffusion or interp
    #[arg(long)]
    pub method: Option<String>,
    /// Odd patch side, at least 3 [default: 9]
    #[arg(long)]
    pub patch_size: Option<usize>,
    /// Decomposition depth: `auto` or a count
    #[arg(long)]
    pub levels: Option<String>,
    /// Mask downsampling rule: any or all
    #[arg(long)]
    pub mask_rule: Option<String>,
    /// Ground truth image for quality metrics
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// CSV report path, `-` for stdout
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads, 0 picks automatically
    #[arg(long)]
    pub threads: Option<usize>,
    /// TOML file with defaults for any of the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    mask: Option<PathBuf>,
    output: Option<PathBuf>,
    method: Option<String>,
    patch_size: Option<usize>,
    levels: Option<LevelsValue>,
    mask_rule: Option<String>,
    truth: Option<PathBuf>,
    report: Option<PathBuf>,
    threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LevelsValue {
    Count(usize),
    Word(String),
}

impl LevelsValue {
    fn into_string(self) -> String {
        match self {
            LevelsValue::Count(n) => n.to_string(),
            LevelsValue::Word(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub method: Method,
    pub patch_size: usize,
    pub levels: LevelSpec,
    pub mask_rule: MaskRule,
    pub truth: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub threads: usize,
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::invalid(format!("bad config {}: {e}", path.display())))
}

pub fn parse_levels(s: &str) -> CliResult<LevelSpec> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(LevelSpec::Auto);
    }
    s.parse::<usize>()
        .map(LevelSpec::Fixed)
        .map_err(|_| CliError::invalid(format!("--levels must be `auto` or a non-negative integer, got `{s}`")))
}

impl RunConfig {
    /// Merges flags over the config file (if any) and validates the result.
    pub fn resolve(args: &RunArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let method = match args.method.clone().or(file.method) {
            Some(m) => m.parse::<Method>().map_err(|e| CliError::invalid(format!("--method: {e}")))?,
            None => Method::HierDwt,
        };
        let patch_size = args.patch_size.or(file.patch_size).unwrap_or(DEFAULT_PATCH_SIZE);
        if patch_size < 3 || patch_size % 2 == 0 {
            return Err(CliError::invalid(format!(
                "--patch-size must be odd and at least 3, got {patch_size}"
            )));
        }
        let levels = match args.levels.clone().or(file.levels.map(LevelsValue::into_string)) {
            Some(s) => parse_levels(&s)?,
            None => LevelSpec::Auto,
        };
        let mask_rule = match args.mask_rule.clone().or(file.mask_rule) {
            Some(r) => r.parse::<MaskRule>().map_err(|e| CliError::invalid(format!("--mask-rule: {e}")))?,
            None => MaskRule::Any,
        };
        Ok(Self {
            input: args.input.clone().or(file.input),
            mask: args.mask.clone().or(file.mask),
            output: args.output.clone().or(file.output),
            method,
            patch_size,
            levels,
            mask_rule,
            truth: args.truth.clone().or(file.truth),
            report: args.report.clone().or(file.report),
            threads: args.threads.or(file.threads).unwrap_or(0),
        })
    }

    pub fn method_params(&self) -> MethodParams {
        MethodParams {
            patch_half: self.patch_size / 2,
            levels: self.levels,
            mask_rule: self.mask_rule,
            ..MethodParams::default()
        }
    }
}

/// Returns the path or an exit-2 error naming the missing flag.
pub fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| CliError::invalid(format!("{flag} is required")))
}
