use std::path::Path;
use std::process::{Command, Output};

fn graphdim(args: &[&str]) -> Output {
    graphdim_with_threads(args, None)
}

fn graphdim_with_threads(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graphdim"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const ZERO_FAMILY: &str = r#"{"functions": [{"coeffs": ["0"]}]}"#;
const MIXED_FAMILY: &str = r#"{"functions": [{"coeffs": ["0", "1"]}, {"coeffs": ["0", "-1/2"]}, {"coeffs": ["1/3", "0", "2"]}]}"#;

#[test]
fn eval_prints_value_decimal_and_digits() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", ZERO_FAMILY);
    let out = graphdim(&["eval", "--x", "1/2", "--bits", "10", "--family", &zero]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "129/2^8 | 0.503906250000 | 1000000100\n");

    let out = graphdim(&["eval", "--x", "0", "--bits", "16", "--family", &zero]);
    assert_eq!(stdout(&out), "0/2^0 | 0.000000000000 | 0000000000000000\n");
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", r#"{"functions": [{"coeffs": ["1/0"]}]}"#);
    for args in [
        vec!["eval", "--x", "3/2", "--bits", "4"],
        vec!["eval", "--x", "1/2"],
        vec!["eval", "--x", "1/2", "--bits", "ten"],
        vec!["eval", "--x", "1/2", "--bits", "4", "--family", &broken],
        vec!["eval", "--x", "1/2", "--bits", "4", "--family", "/nonexistent/f.json"],
        vec!["partition"],
        vec!["boxcount", "--levels", "9..3"],
        vec!["projection", "--N", "3", "--col", "8", "--row", "0"],
        vec!["export", "--points", "0"],
        vec!["export", "--points", "3", "--out", "/nonexistent/dir/out.csv"],
        vec!["frobnicate"],
    ] {
        let out = graphdim(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn digits_and_partition() {
    let out = graphdim(&["digits", "--x", "1/2", "--from", "7", "--to", "10"]);
    assert_eq!(stdout(&out), "0100\n");

    let out = graphdim(&["partition", "--classify", "8", "--classify", "5", "--count-T", "10"]);
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["class"], "triple");
    assert_eq!((lines[0]["i"].as_u64(), lines[0]["j"].as_u64(), lines[0]["position"].as_u64()), (Some(1), Some(1), Some(0)));
    assert_eq!(lines[1]["class"], "copy");
    assert_eq!(lines[2]["count_T"], 7);
}

#[test]
fn check_reports_and_exit_codes() {
    let out = graphdim(&["check", "reading", "--trials", "500", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["cases"], 500);
    assert_eq!(report["failures"], 0);
    assert!(report.get("first_failure").is_none());

    let dir = tempfile::tempdir().unwrap();
    let mixed = write(dir.path(), "mixed.json", MIXED_FAMILY);
    let out = graphdim(&["check", "injective", "--trials", "300", "--seed", "9", "--family", &mixed, "--bits", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((report["cases"].as_u64(), report["passes"].as_u64()), (Some(300), Some(300)));
}

#[test]
fn boxcount_csv_and_note() {
    let out = graphdim(&["boxcount", "--levels", "6..9", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "N,mode,samples,cells,log2cells_over_N\n\
         6,exhaustive,1024,1024,1.666667\n\
         7,exhaustive,4096,4096,1.714286\n\
         8,exhaustive,8192,8192,1.625000\n\
         9,exhaustive,8192,8192,1.444444\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("Hausdorff"));

    // nonconstant families have no exhaustive mode
    let dir = tempfile::tempdir().unwrap();
    let mixed = write(dir.path(), "mixed.json", MIXED_FAMILY);
    let out = graphdim(&["boxcount", "--levels", "4..5", "--family", &mixed]);
    assert_eq!(out.status.code(), Some(2));
    let out = graphdim(&["boxcount", "--levels", "4..5", "--mode", "random", "--samples", "2e3", "--family", &mixed]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn projection_verdict() {
    let out = graphdim(&["projection", "--N", "9", "--col", "256", "--row", "258"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["samples"].as_u64(), v["hits"].as_u64()), (Some(16), Some(1)));
    assert_eq!(v["pass"], true);

    let out = graphdim(&["projection", "--N", "9", "--col", "256", "--row", "258", "--mode", "random", "--samples", "1e3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mode"], "random");
    assert_eq!(v["digits_agree"], true);
}

#[test]
fn export_rows_sorted_and_dyadic() {
    let out = graphdim(&["export", "--points", "3", "--seed", "1"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x_num,x_den,y_mantissa,y_scale,x_decimal,y_decimal");
    assert_eq!(lines.len(), 4);

    let out = graphdim(&["export", "--points", "200", "--seed", "5"]);
    let mut last = -1.0;
    for line in stdout(&out).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let den: u64 = f[1].parse().unwrap();
        assert!(den.is_power_of_two() && den <= 1 << 30, "{line}");
        let x = f[0].parse::<f64>().unwrap() / den as f64;
        assert!(x >= last, "rows not sorted at {line}");
        last = x;
    }
}

#[test]
fn outputs_are_deterministic_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = write(dir.path(), "mixed.json", MIXED_FAMILY);
    let runs: Vec<Vec<&str>> = vec![
        vec!["export", "--points", "100", "--seed", "11", "--family", &mixed],
        vec!["check", "injective", "--trials", "200", "--seed", "11", "--family", &mixed],
        vec!["check", "reading", "--trials", "200", "--seed", "11"],
        vec!["boxcount", "--levels", "3..6", "--mode", "random", "--samples", "3000", "--family", &mixed],
        vec!["projection", "--N", "6", "--col", "5", "--row", "7", "--mode", "random", "--samples", "2000", "--family", &mixed],
    ];
    for args in runs {
        let a = graphdim_with_threads(&args, Some(1));
        let b = graphdim_with_threads(&args, Some(4));
        let c = graphdim_with_threads(&args, Some(4));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(b.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn export_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let svg = dir.path().join("g.svg");
    let out = graphdim(&["export", "--points", "1e4", "--bits", "24", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = graphdim(&["plot", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<circle").count(), 10_000);
}

#[test]
fn plot_of_empty_data_has_axes_only() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "empty.csv", "x_num,x_den,y_mantissa,y_scale,x_decimal,y_decimal\n");
    let out = graphdim(&["plot", &csv]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(r#"class="axes""#));
    assert_eq!(text.matches("<circle").count(), 0);
}

#[test]
fn plot_places_origin_and_names_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        dir.path(),
        "origin.csv",
        "x_num,x_den,y_mantissa,y_scale,x_decimal,y_decimal\n0,1,0,0,0.000000000000,0.000000000000\n",
    );
    let text = stdout(&graphdim(&["plot", &csv]));
    assert!(text.contains(r#"<circle cx="60.000" cy="500.000""#));

    let csv = write(
        dir.path(),
        "bad.csv",
        "x_num,x_den,y_mantissa,y_scale,x_decimal,y_decimal\n1,2,1,1,0.5,0.5\n1,2,1,-4,0.5,0.5\n",
    );
    let out = graphdim(&["plot", &csv]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
}
