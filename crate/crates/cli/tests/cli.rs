use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const CIRC: &str = "\
geometry = circ
substrate.eps_r = 2.32
substrate.h_mm = 0.8
f_design_ghz = 39
";

const RECT: &str = "\
geometry = rect
substrate.eps_r = 4.7
substrate.h_mm = 0.8
f_design_ghz = 39
rect.L_mm = 1.06
rect.W_mm = 0.98
rect.feed_offset_mm = 0.05
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmpatch"))
        .args(args)
        .output()
        .unwrap()
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn circ_design_reports_radius_and_feed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "c.cfg", CIRC);
    let v = json_of(&run(&["design", "--config", &cfg]));
    let a = v["design"]["a"].as_f64().unwrap();
    assert!((a / 1.21e-3 - 1.0).abs() < 0.05);
    assert!(v["design"]["rho0"].as_f64().unwrap() > 0.0);
    assert_eq!(
        v["job"]["model_variant"],
        "fringing,t1-printed,feed-radiation"
    );
    assert_eq!(v["job"]["defaults"]["sigma"], 5.8e7);
    assert_eq!(v["regime"]["regime"], "thick");
}

#[test]
fn rect_design_from_flags_only() {
    let v = json_of(&run(&[
        "design",
        "--geometry",
        "rect",
        "--eps-r",
        "4.7",
        "--h-mm",
        "0.8",
        "--f-ghz",
        "39",
    ]));
    let l = v["design"]["L"].as_f64().unwrap();
    let w = v["design"]["W"].as_f64().unwrap();
    assert!((l / 1.06e-3 - 1.0).abs() < 0.15);
    assert!((w / 0.98e-3 - 1.0).abs() < 0.15);
    assert!(v["design"]["feed_offset_a"].as_f64().unwrap() > 0.0);
    assert_eq!(v["job"]["model_variant"], "calibrated");
}

#[test]
fn analyze_reports_sum_check_and_gain() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "c.cfg", CIRC);
    let v = json_of(&run(&["analyze", "--config", &cfg]));
    assert_eq!(v["sum_check"]["R_total"], v["sum_check"]["sum_of_parts"]);
    assert!(v["G_dB"].as_f64().unwrap().is_finite());
    assert_eq!(
        v["losses"]["breakdown"]["R_total"],
        v["sum_check"]["R_total"]
    );

    let cfg = write_cfg(dir.path(), "r.cfg", RECT);
    let v = json_of(&run(&[
        "analyze",
        "--config",
        &cfg,
        "--variant",
        "eq8-literal",
    ]));
    assert_eq!(v["analysis"]["model_variant"], "eq8-literal");
    assert_eq!(v["job"]["model_variant"], "eq8-literal");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "c.cfg", CIRC);
    let v = json_of(&run(&[
        "analyze", "--config", &cfg, "--eps-r", "4.7", "--zref", "75",
    ]));
    assert_eq!(v["job"]["substrate"]["eps_r"], 4.7);
    assert_eq!(v["job"]["reference_impedance"], 75.0);
}

#[test]
fn sweep_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "r.cfg",
        &format!(
            "{}sweep.f_start_ghz = 37\nsweep.f_stop_ghz = 41\nsweep.points = 5\n",
            RECT
        ),
    );
    let out = run(&["sweep", "--config", &cfg, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "f_hz,r_in_ohm,x_in_ohm,gamma_mag,rl_db,vswr");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("37000000000,"));
    assert!(lines[5].starts_with("41000000000,"));
}

#[test]
fn sweep_json_carries_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "r.cfg", RECT);
    let v = json_of(&run(&["sweep", "--config", &cfg]));
    let f_res = v["resonance"]["f_res"].as_f64().unwrap();
    assert!((f_res - 39e9).abs() < 0.1e9);
    assert_eq!(v["response"]["samples"].as_array().unwrap().len(), 401);
}

#[test]
fn pattern_csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "c.cfg",
        &format!("{}pattern.step_deg = 5\n", CIRC),
    );
    let out_path = dir.path().join("pattern.csv");
    let out = run(&[
        "pattern",
        "--config",
        &cfg,
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(out_path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "theta_deg,e_plane_db,h_plane_db");
    assert_eq!(lines.len(), 1 + 37);
    assert_eq!(lines[19], "0,0,0");
    assert!(lines[37].ends_with(",-100"));
}

#[test]
fn exit_codes() {
    let bad_eps = run(&[
        "design",
        "--geometry",
        "rect",
        "--eps-r",
        "0.5",
        "--h-mm",
        "0.8",
        "--f-ghz",
        "39",
    ]);
    assert_eq!(bad_eps.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_eps.stderr).contains("eps_r >= 1"));

    let missing = run(&["design", "--config", "/nonexistent/job.cfg"]);
    assert_eq!(missing.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", "geometry = circ\nbogus.key = 1\n");
    assert_eq!(run(&["design", "--config", &cfg]).status.code(), Some(1));

    let cfg = write_cfg(dir.path(), "c.cfg", CIRC);
    assert_eq!(
        run(&["design", "--config", &cfg, "--variant", "nope"])
            .status
            .code(),
        Some(1)
    );

    let cfg = write_cfg(dir.path(), "r.cfg", RECT);
    assert_eq!(run(&["pattern", "--config", &cfg]).status.code(), Some(2));

    let thick = write_cfg(
        dir.path(),
        "t.cfg",
        "geometry = rect\nsubstrate.eps_r = 4.7\nsubstrate.h_mm = 10000\nf_design_ghz = 39\n",
    );
    assert_eq!(run(&["design", "--config", &thick]).status.code(), Some(2));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn csv_report_flattens_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "c.cfg", CIRC);
    let out = run(&["analyze", "--config", &cfg, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("\njob.model_variant,\"fringing,t1-printed,feed-radiation\"\n"));
    assert!(text.contains("\nlosses.breakdown.R_r,"));
}
