use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_holonomy-lab");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    // the binary may exit before reading stdin; a broken pipe is fine
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_tmp(name: &str, text: &str) -> String {
    let p = tmp(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn octant() -> String {
    format!(
        r#"[{{"dim":2,"amplitudes":[[1,0],[0,0]]}},
            {{"dim":2,"amplitudes":[[{H},0],[{H},0]]}},
            {{"dim":2,"amplitudes":[[{H},0],[0,{H}]]}}]"#
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not json ({e}): {s}"))
}

#[test]
fn bi_on_octant() {
    let r = run(&["bi"], &octant());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["bargmann"][0].as_f64(), Some(0.25));
    assert_eq!(v["bargmann"][1].as_f64(), Some(0.25));
    assert!(r.stdout.contains("-0.785398163397448"));
}

#[test]
fn majorana_stars_of_e2() {
    let r = run(&["majorana", "stars"], r#"{"dim":3,"amplitudes":[[0,0],[1,0],[0,0]]}"#);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "0.0,0.0,1.0\n0.0,0.0,-1.0\n");
}

#[test]
fn majorana_roots_then_rebuild() {
    let input = r#"{"dim":4,"amplitudes":[[0.3,0.1],[-0.5,0.2],[0.1,-0.6],[0.4,0.25]]}"#;
    let roots = run(&["majorana", "roots"], input);
    assert_eq!(roots.code, 0, "{}", roots.stderr);
    assert_eq!(json(&roots.stdout)["spinors"].as_array().unwrap().len(), 3);
    let back = run(&["majorana", "rebuild"], &roots.stdout);
    assert_eq!(back.code, 0, "{}", back.stderr);
    let amps = |v: &Value| -> Vec<(f64, f64)> {
        v["amplitudes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
            .collect()
    };
    let a = amps(&json(input));
    let b = amps(&json(&back.stdout));
    // b is normalized and may carry a global phase: compare |⟨a,b⟩| with |a|
    let (mut re, mut im, mut na) = (0.0, 0.0, 0.0);
    for ((ar, ai), (br, bi)) in a.iter().zip(&b) {
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
        na += ar * ar + ai * ai;
    }
    assert!(((re * re + im * im).sqrt() - na.sqrt()).abs() < 1e-13);
}

#[test]
fn angles_of_reconstructed_triad() {
    let params = r#"{"theta12":1.0,"theta31":2.0,"phi12":0.3,"phi31":-0.4,"phi":0.9}"#;
    let triad = run(&["reconstruct", "--space", "n2"], params);
    assert_eq!(triad.code, 0, "{}", triad.stderr);
    let a = run(&["angles"], &triad.stdout);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let v = json(&a.stdout);
    assert!((v["theta12"].as_f64().unwrap() - 1.0).abs() < 1e-13);
    assert!((v["theta31"].as_f64().unwrap() - 2.0).abs() < 1e-13);
    assert!((v["phi12"].as_f64().unwrap() - 0.3).abs() < 1e-13);
}

#[test]
fn reconstruct_n3_warns_on_boundary() {
    let params = r#"{"theta12":1.0,"theta31":2.0,"phi12":0.0,"phi31":0.0,"phi":0.5,"xi":0.0}"#;
    let r = run(&["reconstruct", "--space", "n3"], params);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("warning"));
    assert_eq!(json(&r.stdout).as_array().unwrap().len(), 3);
}

#[test]
fn reconstruct_coherent() {
    let r = run(
        &["reconstruct", "--space", "coherent"],
        r#"{"theta12":1.0,"theta31":1.2,"phi12":0.0,"phi31":0.0,"phi_prime":0.7}"#,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    assert!(v["theta23"].as_f64().unwrap() > 0.0);
}

#[test]
fn phase_formulas() {
    let r = run(&["phase", "--formula", "n2"], r#"{"theta12":1.5707963267948966,"theta31":1.5707963267948966,"phi":1.5707963267948966}"#);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((json(&r.stdout)["phase"].as_f64().unwrap() + std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    let missing = run(&["phase", "--formula", "n3"], r#"{"theta12":1.0,"theta31":1.0,"phi":1.0}"#);
    assert_eq!(missing.code, 1);
}

#[test]
fn npc_verify_accepts_geodesic() {
    let curve = run(&["npc", "generate", "--theta0", "2.0", "--grid", "65"], "");
    assert_eq!(curve.code, 0, "{}", curve.stderr);
    assert_eq!(curve.stdout.lines().count(), 66);
    let r = run(&["npc", "verify"], &curve.stdout);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn npc_verify_rejects_latitude_circle() {
    // relative phase winding between the components: not a null phase curve
    let mut csv = String::from("s,re_0,im_0,re_1,im_1\n");
    for i in 0..33 {
        let s = i as f64 / 32.0;
        let (a, chi) = (0.6 * s, 2.5 * s);
        csv.push_str(&format!("{s},{},0,{},{}\n", a.cos(), a.sin() * chi.cos(), a.sin() * chi.sin()));
    }
    let r = run(&["npc", "verify"], &csv);
    assert_eq!(r.code, 2);
    let v = json(&r.stdout);
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn loop_phase_from_generated_segments() {
    let v = [
        r#"{"dim":3,"amplitudes":[[1,0],[0,0],[0,0]]}"#,
        r#"{"dim":3,"amplitudes":[[0.6,0],[0.8,0],[0,0]]}"#,
        r#"{"dim":3,"amplitudes":[[0.5,0.1],[0.3,-0.5],[0.2,0.6]]}"#,
    ];
    let mut files = Vec::new();
    for k in 0..3 {
        let pair = write_tmp(&format!("pair{k}.json"), &format!("[{},{}]", v[k], v[(k + 1) % 3]));
        let eps = if k == 1 { "0.5" } else { "0" };
        let seg = run(&["npc", "generate", "--pair", &pair, "--epsilon", eps, "--grid", "129"], "");
        assert_eq!(seg.code, 0, "{}", seg.stderr);
        files.push(write_tmp(&format!("seg{k}.csv"), &seg.stdout));
    }
    let mut args = vec!["npc", "phase"];
    args.extend(files.iter().map(String::as_str));
    let lp = run(&args, "");
    assert_eq!(lp.code, 0, "{}", lp.stderr);
    let bi = run(&["bi"], &format!("[{},{},{}]", v[0], v[1], v[2]));
    let a = json(&lp.stdout)["phase"].as_f64().unwrap();
    let b = json(&bi.stdout)["phase"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn stars_along_generated_curve() {
    let curve = run(&["npc", "generate", "--theta0", "1.0", "--epsilon", "0.3", "--grid", "17"], "");
    let r = run(&["stars"], &curve.stdout);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "s,n1x,n1y,n1z,n2x,n2y,n2z");
    assert_eq!(lines.len(), 18);
    for row in &lines[1..] {
        let x: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(x.len(), 7);
        for star in [&x[1..4], &x[4..7]] {
            let n: f64 = star.iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn decompose_reports_consistent_phases() {
    let triad = r#"[{"dim":3,"amplitudes":[[0.2,0.3],[0.5,-0.1],[0.4,0.6]]},
                    {"dim":3,"amplitudes":[[-0.7,0.1],[0.2,0.2],[0.1,0.5]]},
                    {"dim":3,"amplitudes":[[0.3,-0.3],[0.6,0.4],[-0.2,0.1]]}]"#;
    let r = run(&["decompose"], triad);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    let bi = json(&run(&["bi"], triad).stdout);
    let p = bi["phase"].as_f64().unwrap();
    for key in ["total_phase", "solid_angle_phase"] {
        let d = (v[key].as_f64().unwrap() - p).rem_euclid(std::f64::consts::TAU);
        assert!(d.min(std::f64::consts::TAU - d) < 1e-12, "{key}");
    }
    assert_eq!(v["solid_angles"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bi"], "not json").code, 1);
    assert_eq!(run(&["frobnicate"], "").code, 1);
    assert_eq!(run(&["--help"], "").code, 0);
    // orthogonal neighbours: Bargmann invariant degenerate
    let r = run(
        &["bi"],
        r#"[{"dim":2,"amplitudes":[[1,0],[0,0]]},{"dim":2,"amplitudes":[[0,0],[1,0]]},{"dim":2,"amplitudes":[[1,0],[1,0]]}]"#,
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error"));
    assert_eq!(run(&["npc", "generate", "--theta0", "1.0", "--grid", "2"], "").code, 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = write_tmp("run.json", r#"{"samples": 17, "tolerances": {"npc": 1e-9}}"#);
    let from_file = run(&["--config", &cfg, "npc", "generate", "--theta0", "1.0"], "");
    assert_eq!(from_file.stdout.lines().count(), 18);
    let flag = run(&["npc", "generate", "--theta0", "1.0", "--config", &cfg, "--grid", "9"], "");
    assert_eq!(flag.stdout.lines().count(), 10);
    let bad = write_tmp("bad.json", r#"{"samples": 1}"#);
    assert_eq!(run(&["--config", &bad, "bi"], &octant()).code, 1);
}

#[test]
fn output_flag_writes_file() {
    let path = tmp("octant-out.json");
    let _ = std::fs::remove_file(&path);
    let r = run(&["bi", "--output", path.to_str().unwrap()], &octant());
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("-0.785398163397448"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["npc", "generate", "--theta0", "2.5", "--epsilon", "0.7", "--dim", "4", "--grid", "33"];
    assert_eq!(run(&args, "").stdout, run(&args, "").stdout);
    let st = ["selftest", "--criteria", "1,12", "--seed", "99"];
    let (a, b) = (run(&st, ""), run(&st, ""));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.code, 0, "{}", a.stdout);
}

#[test]
fn selftest_subset_reports_each_check() {
    let r = run(&["selftest", "--criteria", "3,7"], "");
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("PASS  criterion  3"));
    assert!(r.stdout.contains("PASS  criterion  7"));
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("PASS  golden")).count(), 7);
    assert_eq!(run(&["selftest", "--criteria", "13"], "").code, 1);
}
