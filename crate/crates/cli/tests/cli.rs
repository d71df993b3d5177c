use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zx_cli::figure::parse_csv;
use zx_core::asymptotics::Regime;
use zx_core::zeros::{count_zeros, read_cache};

fn zx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zx"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZX_PRECISION")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn zeros_count_and_find() {
    let dir = tempfile::tempdir().unwrap();
    let o = zx(dir.path(), &["zeros", "count", "--T", "100"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "29");
    let o = zx(dir.path(), &["zeros", "find", "--tmax", "15", "--export", "z.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = read_cache(&dir.path().join("zeros.ztbl")).unwrap();
    assert_eq!(table.len(), 1);
    assert!((table.ordinates()[0].to_f64() - 14.134725141734693).abs() < 1e-9);
    assert!(fs::read_to_string(dir.path().join("z.txt")).unwrap().starts_with("14.1347251417"));
}

#[test]
fn bad_zero_file_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "14.134725142\n21.022039639\n21.000000000\n").unwrap();
    let o = zx(dir.path(), &["zeros", "import", "--file", "bad.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn unknown_claim_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = zx(dir.path(), &["compare", "--claim", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown claim"));
    let o = zx(dir.path(), &["predict", "--claim", "bogus", "--T", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_grid_writes_calibration_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = zx(dir.path(), &["compare", "--claim", "cor2.2", "--grid", "T=200:1400:400", "--out", "c.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert!(v["fit"]["trend_slope"].is_f64());
    assert_eq!(v["fit"]["grid"].as_array().unwrap().len(), 4);
    assert_eq!(v["reports"][0]["claim_id"], "cor2.2");
    assert_eq!(v["reports"][0]["calibration"]["C"], v["fit"]["C"]);

    let o = zx(dir.path(), &["compare", "--claim", "thm2.1/below-band", "--X", "10", "--grid", "T=500:2000:500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("compare_thm2_1_below_band.json").is_file());

    // a cap below every ratio fails the trend criterion
    let o = zx(dir.path(), &["compare", "--claim", "cor2.2", "--grid", "T=200:1400:400", "--cap", "1e-9"]);
    assert_eq!(o.status.code(), Some(zx_cli::EXIT_CLAIM_FAILED as i32));
}

#[test]
fn single_comparison_and_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let o = zx(dir.path(), &["compare", "--claim", "lemma4.1", "--sigma", "1.2", "--r", "47.746", "--T", "200"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("compare_lemma4_1.json")).unwrap()).unwrap();
    assert!(v["ratio"].as_f64().unwrap() < 100.0);
    fs::write(dir.path().join("few.txt"), "14.134725142\n21.022039639\n").unwrap();
    let o = zx(dir.path(), &["--zeros", "import:few.txt", "compare", "--claim", "cor2.2", "--T", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("coverage"));
}

#[test]
fn figure_outputs_are_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = zx(
            dir.path(),
            &["--out-dir", out.to_str().unwrap(), "figure1", "--X", "200", "--tmax", "2000"],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        (
            fs::read_to_string(out.join("figure1.csv")).unwrap(),
            fs::read_to_string(out.join("figure1.svg")).unwrap(),
        )
    };
    let (csv_a, svg_a) = run("a");
    let (csv_b, svg_b) = run("b");
    assert_eq!(csv_a, csv_b);
    assert_eq!(svg_a, svg_b);
    let rows = parse_csv(&csv_a).unwrap();
    assert_eq!(rows.len(), count_zeros(2000.0).unwrap());
    for (t, _, _, class) in &rows {
        let expect = if *t < std::f64::consts::PI * 200.0 {
            Regime::AboveBand
        } else if *t < 2.0 * std::f64::consts::PI * 200.0 {
            Regime::InBand
        } else {
            Regime::BelowBand
        };
        assert_eq!(*class, expect, "T = {t}");
    }
    let doc = roxmltree::Document::parse(&svg_a).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, rows.len() + 3);

    let o = zx(dir.path(), &["figure1", "--X", "200", "--tmax", "500"]);
    assert!(o.status.success());
    let rows = parse_csv(&fs::read_to_string(dir.path().join("figure1.csv")).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.3 == Regime::AboveBand));
}

#[test]
fn sum_predict_and_afe_print_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = zx(dir.path(), &["sum", "--kind", "chi-x-rho", "--X", "1", "--lo", "0", "--hi", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 649);
    assert!((v["value"]["re"].as_f64().unwrap() + 156.95).abs() < 0.01);

    let o = zx(dir.path(), &["predict", "--claim", "shanks", "--T", "10000"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["claim_id"], "thm1.5");
    assert!((v["prediction"]["main"]["re"].as_f64().unwrap() - 38782.4).abs() < 0.1);

    let o = zx(dir.path(), &["predict", "--claim", "s", "--X", "2000", "--T", "10000"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["regime"], "in-band");

    let o = zx(dir.path(), &["afe", "--t", "1000", "--alpha", "0.5", "--nu", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["residual_abs"].as_f64().unwrap() < v["budget"].as_f64().unwrap());
}

#[test]
fn precision_comes_from_env_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_zx"));
        c.args(args).current_dir(dir.path()).env_remove("ZX_PRECISION");
        if let Some(v) = env {
            c.env("ZX_PRECISION", v);
        }
        c.output().unwrap()
    };
    let afe = ["afe", "--t", "300"];
    assert_eq!(run(Some("12"), &afe).status.code(), Some(1));
    assert!(run(Some("20"), &afe).status.success());
    let mut with_flag = vec!["--precision", "16"];
    with_flag.extend(afe);
    assert!(run(Some("12"), &with_flag).status.success());
    fs::write(dir.path().join("run.cfg"), "precision_digits = 40\n").unwrap();
    let mut with_cfg = vec!["--config", "run.cfg"];
    with_cfg.extend(afe);
    assert_eq!(run(None, &with_cfg).status.code(), Some(1));
    assert!(run(Some("20"), &with_cfg).status.success());
}
