use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use transship::discrete::{exhaustive_optimum, GridInstance};
use transship::Metric;

fn transship(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transship"))
        .args(args)
        .env_remove("TRANSSHIP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = transship(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn p(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

/// `d̄/√A` for the regular hexagon by quadrature over one of its twelve
/// right triangles (apothem 1, polar angle in [0, π/6]).
fn hexagon_mean_distance_ratio() -> f64 {
    let n = 20_000;
    let h = (PI / 6.0) / n as f64;
    let integral: f64 = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            // ∫₀^{sec t} ρ² dρ
            1.0 / (3.0 * t.cos().powi(3))
        })
        .sum::<f64>()
        * h;
    let area = 0.5 * (PI / 6.0).tan();
    (integral / area) / (12.0 * area).sqrt()
}

#[test]
fn bounds_regular_hexagon_at_zero_inbound() {
    let out = ok(&[
        "bounds", "--f", "1", "--c", "1", "--lambda", "1", "--C", "0", "--metric", "euclid", "--json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let ub = &v["designs"][0];
    assert_eq!(ub["design"], "hex-ub");
    assert!((ub["alpha_deg"].as_f64().unwrap() - 30.0).abs() < 1e-9);
    assert!((ub["alpha_bar_deg"].as_f64().unwrap() - 30.0).abs() < 1e-9);
    // Shape coefficient g = 1/(d̄/√A); circle g = 3√π/2.
    let expected_gap = (1.5 * PI.sqrt() * hexagon_mean_distance_ratio()).powf(2.0 / 3.0) - 1.0;
    let gap = v["gap"].as_f64().unwrap();
    assert!((gap - expected_gap).abs() < 1e-6, "{gap} vs {expected_gap}");
    assert!((0.0015..0.002).contains(&gap));
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config"]["f"], 1.0);
}

#[test]
fn bounds_l1_square_cost() {
    let out = ok(&["bounds", "--f", "2", "--metric", "l1", "--C", "0", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let (kappa, f) = (0.5f64, 2.0f64);
    let target = 3.0 * (kappa * kappa * f.powi(3) / 18.0).cbrt();
    let cost = v["designs"][0]["cost"]["total"].as_f64().unwrap();
    assert!((cost / target - 1.0).abs() < 1e-12);
    assert!(v["designs"][0]["alpha_deg"].as_f64().unwrap().abs() < 1e-9);
    let text = ok(&["bounds", "--f", "2", "--metric", "l1"]);
    assert!(text.contains("l1-opt"));
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let o = transship(&["bounds", "--c", "1", "--lambda", "1", "--C", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--f"));
    let o = transship(&["bounds", "--f", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("facility cost"));
    assert_eq!(
        transship(&["bounds", "--f", "1", "--metric", "l3"]).status.code(),
        Some(2)
    );
    assert_eq!(transship(&["sweep", "--steps", "1"]).status.code(), Some(2));
    let o = transship(&["solve-grid", "--m", "4", "--f", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--C"));
}

#[test]
fn io_errors_exit_4() {
    let o = transship(&[
        "export-mip",
        "--m",
        "2",
        "--f",
        "1",
        "--C",
        "1",
        "--out",
        "/nonexistent/dir/m.lp",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = transship(&["measure-angles", "--solution", "/nonexistent/s.json"]);
    assert_eq!(o.status.code(), Some(4));
    let o = transship(&["--config", "/nonexistent/c.json", "bounds", "--f", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_files_are_complete_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (p(&dir, "s.csv"), p(&dir, "s.svg"));
    ok(&["sweep", "--out", &csv, "--plot", &svg]);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# transship "));
    assert!(text.contains("\"steps\":201"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "label,r,alpha_deg,alpha_bar_deg,g,cost,area_per_facility");
    assert_eq!(data.len() - 1, 201 * 3);
    let plot = fs::read_to_string(&svg).unwrap();
    assert_eq!(plot.matches("<polyline").count(), 3);
    assert!(plot.contains("transship"));

    let (csv2, svg2) = (p(&dir, "t.csv"), p(&dir, "t.svg"));
    ok(&["sweep", "--out", &csv2, "--plot", &svg2]);
    // The resolved config records the output paths, which differ.
    let strip = |s: String| s.replace("t.csv", "s.csv").replace("t.svg", "s.svg");
    assert_eq!(strip(fs::read_to_string(&csv2).unwrap()), text);
    assert_eq!(strip(fs::read_to_string(&svg2).unwrap()), plot);
}

#[test]
fn tessellate_verifies_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, json) = (p(&dir, "h.svg"), p(&dir, "h.json"));
    let out = ok(&[
        "tessellate",
        "--metric",
        "euclid",
        "--r",
        "0",
        "--out-svg",
        &svg,
        "--out-json",
        &json,
        "--verify-samples",
        "1000000",
    ]);
    assert!(
        out.contains("0 uncovered, 0 overlapping, 0 not nearest, 0 structural"),
        "{out}"
    );
    let svg_text = fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<polygon").count(), 36);
    assert!(svg_text.contains("tessellate"));
    let v = json_file(Path::new(&json));
    assert_eq!(v["meta"]["config"]["verify-samples"], 1_000_000);
    // Honeycomb: every region is a regular hexagon of equal area.
    for region in v["regions"].as_array().unwrap() {
        assert_eq!(region.as_array().unwrap().len(), 6);
    }

    let single = p(&dir, "one.json");
    ok(&["tessellate", "--rows", "1", "--cols", "1", "--out-json", &single]);
    let v = json_file(Path::new(&single));
    assert_eq!(v["regions"].as_array().unwrap().len(), 1);
    assert_eq!(v["tour"], serde_json::json!([0]));
}

#[test]
fn failed_verification_exits_3() {
    let o = transship(&["tessellate", "--verify-samples", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stderr(&o).contains("verification failed"));
}

#[test]
fn solve_grid_matches_exhaustive_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(&dir, "s.json");
    ok(&[
        "solve-grid",
        "--m",
        "4",
        "--f",
        "3",
        "--C",
        "0.8",
        "--metric",
        "l1",
        "--depot",
        "5",
        "--seed",
        "11",
        "--out",
        &out,
    ]);
    let v = json_file(Path::new(&out));
    let inst = GridInstance::new(4, 3.0, 1.0, 0.8, Metric::L1, 5).unwrap();
    let exact = exhaustive_optimum(&inst).unwrap().objective.total;
    let got = v["solution"]["objective"]["total"].as_f64().unwrap();
    assert!((got - exact).abs() < 1e-9, "{got} vs {exact}");
    assert_eq!(v["search"]["best_seed"], 11);
    assert_eq!(v["meta"]["config"]["seed"], 11);

    let exhaustive = ok(&[
        "solve-grid",
        "--m",
        "4",
        "--f",
        "3",
        "--C",
        "0.8",
        "--metric",
        "l1",
        "--depot",
        "5",
        "--exhaustive",
    ]);
    assert!(exhaustive.contains(&format!("objective {exact:.6}")));
}

#[test]
fn config_file_env_seed_and_flags_resolve_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(&dir, "c.json");
    fs::write(&cfg, r#"{"m": 5, "f": 3, "C": 0.8, "iterations": 20, "seed": 1}"#).unwrap();
    let run = |extra: &[&str], env: Option<&str>| -> Value {
        let out = p(&dir, "s.json");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_transship"));
        cmd.args(["--config", &cfg, "solve-grid", "--out", &out])
            .args(extra)
            .env_remove("TRANSSHIP_SEED");
        if let Some(s) = env {
            cmd.env("TRANSSHIP_SEED", s);
        }
        let o = cmd.output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        json_file(Path::new(&out))["meta"]["config"].clone()
    };
    let c = run(&[], None);
    assert_eq!(
        (c["m"].as_u64(), c["iterations"].as_u64(), c["seed"].as_u64()),
        (Some(5), Some(20), Some(1))
    );
    assert_eq!(run(&[], Some("7"))["seed"], 7);
    let c = run(&["--seed", "9", "--f", "4"], Some("7"));
    assert_eq!((c["seed"].as_u64(), c["f"].as_f64()), (Some(9), Some(4.0)));

    fs::write(&cfg, r#"{"m": 5, "typo": 1}"#).unwrap();
    let o = transship(&["--config", &cfg, "solve-grid", "--f", "1", "--C", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("typo"));
}

#[test]
fn solve_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(&dir, "a.json"), p(&dir, "b.json"));
    for out in [&a, &b] {
        ok(&[
            "solve-grid",
            "--m",
            "6",
            "--f",
            "4",
            "--C",
            "1",
            "--seed",
            "3",
            "--restarts",
            "2",
            "--iterations",
            "60",
            "--out",
            out,
        ]);
    }
    let (mut va, vb) = (json_file(Path::new(&a)), json_file(Path::new(&b)));
    va["meta"]["config"]["out"] = vb["meta"]["config"]["out"].clone();
    assert_eq!(va, vb);
}

#[test]
fn measure_angles_reads_solve_grid_output() {
    let dir = tempfile::tempdir().unwrap();
    let (sol, csv) = (p(&dir, "s.json"), p(&dir, "a.csv"));
    ok(&[
        "solve-grid",
        "--m",
        "20",
        "--f",
        "6",
        "--C",
        "1.5",
        "--iterations",
        "100",
        "--out",
        &sol,
    ]);
    let out = ok(&["measure-angles", "--solution", &sol, "--out", &csv]);
    assert!(out.contains("interior facilities"));
    assert!(out.contains("comparison only"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# transship "));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "facility_index,alpha_deg,alpha_bar_deg,n_edges");
    assert!(data.len() > 4);
    for line in &data[1..] {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((0.0..=90.0).contains(&f[1]) && (0.0..=90.0).contains(&f[2]));
    }
}

#[test]
fn export_mip_counts_on_2x2() {
    let dir = tempfile::tempdir().unwrap();
    let lp = p(&dir, "m.lp");
    let out = ok(&["export-mip", "--m", "2", "--f", "3", "--C", "2", "--out", &lp]);
    assert!(out.contains("4 X, 16 Y, 16 Z, 4 u"), "{out}");
    assert!(out.contains("(41 total)"));
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("\\ transship "));
    let rows = text
        .split("Subject To\n")
        .nth(1)
        .unwrap()
        .split("Bounds\n")
        .next()
        .unwrap();
    assert_eq!(
        rows.lines().filter(|l| l.starts_with(' ') && l.contains(':')).count(),
        41
    );
    let binaries = text.split("Binaries\n").nth(1).unwrap().split("End").next().unwrap();
    assert_eq!(binaries.split_whitespace().count(), 36);
}

#[test]
fn inventory_without_costs_changes_nothing() {
    let out = ok(&["inventory", "--b", "0", "--h", "0"]);
    let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 10 * 2);
    for line in data {
        assert_eq!(line.rsplit(',').next().unwrap(), "0.000000", "{line}");
    }
    let dir = tempfile::tempdir().unwrap();
    let csv = p(&dir, "i.csv");
    let summary = ok(&["inventory", "--out", &csv]);
    assert!(summary.contains("200 rows"));
}
