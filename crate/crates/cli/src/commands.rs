use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{error, info, warn};
use wavinpaint::hierarchy::LevelSpec;
use wavinpaint::methods::{run_method, Method};
use wavinpaint::metrics::{failure_row, QualityReport, CSV_HEADER};
use wavinpaint::pnm::{load_mask, load_raster, netpbm_to_raster, raster_to_netpbm, save_raster};
use wavinpaint::wavelet::write_band_dump;
use wavinpaint::{InpaintError, Mask, Raster64};

use crate::config::{require, RunConfig};
use crate::error::{exit_code, CliError, CliResult, EXIT_OK};

/// Runs `f` on a dedicated pool of `threads` workers, or the global pool for 0.
fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::invalid(format!("--threads: {e}")))?;
    Ok(pool.install(f))
}

fn load_inputs(cfg: &RunConfig) -> CliResult<(Raster64, Mask)> {
    let img: Raster64 = load_raster(require(&cfg.input, "--input")?)?;
    let mask = load_mask(require(&cfg.mask, "--mask")?, img.dims())?;
    if mask.is_empty() {
        return Err(InpaintError::EmptyMask.into());
    }
    if mask.is_full() {
        return Err(InpaintError::FullMask.into());
    }
    Ok((img, mask))
}

fn load_truth(path: &Path, img: &Raster64) -> CliResult<Raster64> {
    let truth: Raster64 = load_raster(path)?;
    if truth.dims() != img.dims() {
        return Err(InpaintError::DimensionMismatch {
            expected: img.dims(),
            found: truth.dims(),
        }
        .into());
    }
    if truth.channels() != img.channels() {
        return Err(InpaintError::ChannelMismatch {
            expected: img.channels(),
            found: truth.channels(),
        }
        .into());
    }
    Ok(truth)
}

/// The image as it will read back from disk.
fn as_written(img: &Raster64) -> CliResult<Raster64> {
    Ok(netpbm_to_raster(&raster_to_netpbm(img)?)?)
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::from(InpaintError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn append_row(path: &Path, row: &str) -> CliResult<()> {
    if is_stdout(path) {
        println!("{CSV_HEADER}\n{row}");
        return Ok(());
    }
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_error(path, e))?;
    let fresh = f.metadata().map_err(|e| io_error(path, e))?.len() == 0;
    let text = if fresh {
        format!("{CSV_HEADER}\n{row}\n")
    } else {
        format!("{row}\n")
    };
    f.write_all(text.as_bytes()).map_err(|e| io_error(path, e))
}

fn write_table(path: &Path, rows: &[String]) -> CliResult<()> {
    let mut text = format!("{CSV_HEADER}\n");
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    if is_stdout(path) {
        print!("{text}");
        return io::stdout().flush().map_err(|e| io_error(path, e));
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn extension(img: &Raster64) -> &'static str {
    if img.channels() == 3 {
        "ppm"
    } else {
        "pgm"
    }
}

pub fn inpaint(cfg: &RunConfig) -> CliResult<u8> {
    let output = require(&cfg.output, "--output")?;
    let (img, mask) = load_inputs(cfg)?;
    let truth = cfg.truth.as_deref().map(|p| load_truth(p, &img)).transpose()?;
    if truth.is_none() && cfg.report.is_some() {
        warn!("--report given without --truth; no row written");
    }
    let params = cfg.method_params();
    let start = Instant::now();
    let out = with_threads(cfg.threads, || run_method(cfg.method, &img, &mask, &params))??;
    let wall = start.elapsed().as_secs_f64();
    save_raster(&out.image, output)?;
    info!(
        "{}: filled {} pixels in {:.3}s, wrote {}",
        cfg.method,
        mask.count(),
        wall,
        output.display()
    );
    if let Some(truth) = truth {
        let written = as_written(&out.image)?;
        let report = QualityReport::measure(
            cfg.method.name(),
            out.levels,
            cfg.patch_size,
            &truth,
            &written,
            &mask,
            wall,
        )?;
        info!("psnr {} dB", wavinpaint::metrics::format_float(report.psnr));
        if let Some(path) = &cfg.report {
            append_row(path, &report.csv_row())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn compare(cfg: &RunConfig) -> CliResult<u8> {
    let dir = require(&cfg.output, "--output")?;
    let truth_path = require(&cfg.truth, "--truth")?;
    let (img, mask) = load_inputs(cfg)?;
    let truth = load_truth(truth_path, &img)?;
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let params = cfg.method_params();
    let mut rows = Vec::with_capacity(Method::ALL.len());
    let mut status = EXIT_OK;
    for method in Method::ALL {
        let start = Instant::now();
        let result = with_threads(cfg.threads, || run_method(method, &img, &mask, &params))?;
        let wall = start.elapsed().as_secs_f64();
        match result {
            Ok(out) => {
                let path = dir.join(format!("{}.{}", method.name(), extension(&img)));
                save_raster(&out.image, &path)?;
                let written = as_written(&out.image)?;
                let report =
                    QualityReport::measure(method.name(), out.levels, cfg.patch_size, &truth, &written, &mask, wall)?;
                info!("{method}: psnr {} dB in {wall:.3}s", wavinpaint::metrics::format_float(report.psnr));
                rows.push(report.csv_row());
            }
            Err(e) => {
                error!("{method} failed: {e}");
                if status == EXIT_OK {
                    status = exit_code(&e);
                }
                let levels = match method {
                    Method::HierDwt => params.hier().resolve_levels(&mask),
                    _ => 0,
                };
                rows.push(failure_row(method.name(), levels, cfg.patch_size, wall));
            }
        }
    }
    let report = cfg.report.clone().unwrap_or_else(|| dir.join("compare.csv"));
    write_table(&report, &rows)?;
    Ok(status)
}

pub fn decompose(cfg: &RunConfig) -> CliResult<u8> {
    let dir = require(&cfg.output, "--output")?;
    let levels = match cfg.levels {
        LevelSpec::Fixed(n) => n,
        LevelSpec::Auto => return Err(CliError::invalid("decompose needs an explicit --levels count")),
    };
    let img: Raster64 = load_raster(require(&cfg.input, "--input")?)?;
    let written: Vec<PathBuf> = with_threads(cfg.threads, || write_band_dump(&img, levels, dir))??;
    info!("wrote {} bands to {}", written.len(), dir.display());
    Ok(EXIT_OK)
}
