mod support;

use std::fs;

use support::{code, path_str, run, stripe_case, write_case};
use wavinpaint::pnm::{load_raster, save_mask, save_raster};
use wavinpaint::{Mask, Raster};

#[test]
fn inpaint_stripe_benchmark_appends_rows() {
    let dir = tempfile::tempdir().unwrap();
    let case = stripe_case(dir.path());
    let out = dir.path().join("out.pgm");
    let report = dir.path().join("report.csv");
    for _ in 0..2 {
        let res = run(&[
            "inpaint",
            "--input", path_str(&case.input),
            "--mask", path_str(&case.mask),
            "--truth", path_str(&case.truth),
            "--output", path_str(&out),
            "--report", path_str(&report),
        ]);
        assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
        assert!(res.stdout.is_empty());
    }
    let restored: Raster<f64> = load_raster(&out).unwrap();
    assert_eq!(restored, load_raster::<f64>(&case.truth).unwrap());
    let csv = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], wavinpaint::metrics::CSV_HEADER);
    assert!(lines[1].starts_with("hier-dwt,0,9,0,inf,256,"), "{}", lines[1]);
}

#[test]
fn report_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let case = stripe_case(dir.path());
    let res = run(&[
        "inpaint",
        "--input", path_str(&case.input),
        "--mask", path_str(&case.mask),
        "--truth", path_str(&case.truth),
        "--output", path_str(&dir.path().join("o.pgm")),
        "--method", "interp",
        "--report", "-",
    ]);
    assert_eq!(code(&res), 0);
    let text = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("interp,0,9,"));
}

#[test]
fn compare_writes_four_outputs_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let case = stripe_case(dir.path());
    let outdir = dir.path().join("cmp");
    let res = run(&[
        "compare",
        "--input", path_str(&case.input),
        "--mask", path_str(&case.mask),
        "--truth", path_str(&case.truth),
        "--output", path_str(&outdir),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    for m in ["interp", "diffusion", "exemplar", "hier-dwt"] {
        assert!(outdir.join(format!("{m}.pgm")).exists());
    }
    let csv = fs::read_to_string(outdir.join("compare.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let methods: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(methods, ["interp", "diffusion", "exemplar", "hier-dwt"]);
    let psnr: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(psnr[3] >= psnr[2] && psnr[2] > psnr[1]);
}

#[test]
fn compare_constant_image_all_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let img = Raster::<f64>::filled(40, 40, 3, 117.0).unwrap();
    let case = write_case(dir.path(), "flat", &img, &Mask::rect(40, 40, 14, 12, 9, 10));
    let outdir = dir.path().join("cmp");
    let res = run(&[
        "compare",
        "--input", path_str(&case.input),
        "--mask", path_str(&case.mask),
        "--truth", path_str(&case.truth),
        "--output", path_str(&outdir),
        "--patch-size", "5",
    ]);
    assert_eq!(code(&res), 0);
    let csv = fs::read_to_string(outdir.join("compare.csv")).unwrap();
    for row in csv.lines().skip(1) {
        assert_eq!(row.split(',').nth(4), Some("inf"), "{row}");
    }
    assert!(outdir.join("hier-dwt.ppm").exists());
}

#[test]
fn compare_records_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let img = Raster::<f64>::filled(24, 24, 1, 90.0).unwrap();
    let mask = Mask::from_fn(24, 24, |x, _| x == 8 || x == 16);
    let case = write_case(dir.path(), "cols", &img, &mask);
    let outdir = dir.path().join("cmp");
    let res = run(&[
        "compare",
        "--input", path_str(&case.input),
        "--mask", path_str(&case.mask),
        "--truth", path_str(&case.truth),
        "--output", path_str(&outdir),
    ]);
    assert_eq!(code(&res), 4);
    let csv = fs::read_to_string(outdir.join("compare.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("interp,0,9,0,inf,"));
    assert!(rows[2].starts_with("exemplar,0,9,error,error,0,"));
    assert!(rows[2].ends_with(",error"));
    assert!(rows[3].starts_with("hier-dwt,0,9,error,error,0,"));
    assert!(!outdir.join("exemplar.pgm").exists());
    assert!(outdir.join("diffusion.pgm").exists());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let case = stripe_case(dir.path());
    let out = dir.path().join("o.pgm");
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        format!(
            "input = \"{}\"\nmask = \"{}\"\noutput = \"{}\"\nmethod = \"exemplar\"\npatch_size = 8\n",
            path_str(&case.input),
            path_str(&case.mask),
            path_str(&out)
        ),
    )
    .unwrap();
    let res = run(&["inpaint", "--config", path_str(&cfg)]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("--patch-size"));
    let res = run(&["inpaint", "--config", path_str(&cfg), "--patch-size", "7"]);
    assert_eq!(code(&res), 0);
    assert!(out.exists());
}

#[test]
fn degenerate_masks_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let img = Raster::<f64>::filled(16, 16, 1, 10.0).unwrap();
    let input = dir.path().join("in.pgm");
    save_raster(&img, &input).unwrap();
    for (name, mask) in [
        ("empty", Mask::new(16, 16)),
        ("full", Mask::from_fn(16, 16, |_, _| true)),
    ] {
        let mpath = dir.path().join(format!("{name}.pgm"));
        save_mask(&mask, &mpath).unwrap();
        let out = dir.path().join(format!("{name}_out.pgm"));
        let res = run(&[
            "inpaint",
            "--input", path_str(&input),
            "--mask", path_str(&mpath),
            "--output", path_str(&out),
        ]);
        assert_eq!(code(&res), 3, "{name}");
        assert!(!out.exists());
    }
}

#[test]
fn no_candidate_message_names_level_and_band() {
    let dir = tempfile::tempdir().unwrap();
    let img = Raster::<f64>::filled(24, 24, 1, 90.0).unwrap();
    let mask = Mask::from_fn(24, 24, |x, _| x == 8 || x == 16);
    let case = write_case(dir.path(), "cols", &img, &mask);
    let res = run(&[
        "inpaint",
        "--input", path_str(&case.input),
        "--mask", path_str(&case.mask),
        "--output", path_str(&dir.path().join("o.pgm")),
    ]);
    assert_eq!(code(&res), 4);
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("level 0") && err.contains("band image"), "{err}");
}

#[test]
fn decompose_band_counts() {
    let dir = tempfile::tempdir().unwrap();
    let img = Raster::<f64>::from_fn(8, 8, 1, |x, y, _| (x * 30 + y) as f64).unwrap();
    let input = dir.path().join("in.pgm");
    save_raster(&img, &input).unwrap();
    let out = dir.path().join("bands");
    let res = run(&["decompose", "--input", path_str(&input), "--levels", "1", "--output", path_str(&out)]);
    assert_eq!(code(&res), 0);
    let mut rasters: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".pgm"))
        .collect();
    rasters.sort();
    assert_eq!(rasters, ["hh1.pgm", "hl1.pgm", "lh1.pgm", "ll1.pgm"]);
    let ll: Raster<f64> = load_raster(out.join("ll1.pgm")).unwrap();
    assert_eq!(ll.dims(), (4, 4));
    let res = run(&["decompose", "--input", path_str(&input), "--levels", "auto", "--output", path_str(&out)]);
    assert_eq!(code(&res), 2);
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let case = stripe_case(dir.path());
    let o = dir.path().join("o.pgm");
    let cases: Vec<Vec<&str>> = vec![
        vec!["inpaint", "--input", "/nonexistent.pgm", "--mask", path_str(&case.mask), "--output", path_str(&o)],
        vec!["inpaint", "--input", path_str(&case.input), "--output", path_str(&o)],
        vec!["inpaint", "--input", path_str(&case.input), "--mask", path_str(&case.mask), "--output", path_str(&o), "--method", "nearest"],
        vec!["inpaint", "--input", path_str(&case.input), "--mask", path_str(&case.mask), "--output", path_str(&o), "--levels", "many"],
        vec!["inpaint", "--input", path_str(&case.input), "--mask", path_str(&case.mask), "--output", path_str(&o), "--threads", "x"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
    assert!(!o.exists());
}
