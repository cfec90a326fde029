use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn normball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normball"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn project_region_iii_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.txt", "4\n1\n");
    let groups = write(dir.path(), "g.txt", "2\n");
    let out = normball(&[
        "project", "--q", "2", "--tau1", "2", "--tau2", "2.2", "--input", &input, "--groups",
        &groups,
    ]);
    let v = json(&out);
    assert_eq!(v["region"], "REGION_III");
    let disc = (8.0 - 2.2f64 * 2.2).sqrt();
    let x0 = v["x"][0].as_f64().unwrap();
    assert!((x0 - (2.2 + disc) / 2.0).abs() < 1e-9);
    // lambda1 = ||c - lambda2 - x||_2 on the single active group
    let l2 = v["lambda2"].as_f64().unwrap();
    let l1 = v["lambda1"].as_f64().unwrap();
    let x1 = v["x"][1].as_f64().unwrap();
    assert!((l1 - ((4.0 - l2 - x0).powi(2) + (1.0 - l2 - x1).powi(2)).sqrt()).abs() < 1e-8);
    assert!(v["iterations"].as_u64().unwrap() > 0);
    assert!(v.get("d").is_none());
}

#[test]
fn project_inside_echoes_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.txt", "0.5\n-0.25\n0.125\n");
    let groups = write(dir.path(), "g.txt", "1\n2\n");
    let out = normball(&[
        "project", "--q", "inf", "--tau1", "10", "--tau2", "10", "--input", &input, "--groups",
        &groups,
    ]);
    let v = json(&out);
    assert_eq!(v["region"], "INSIDE");
    let x: Vec<f64> = v["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_f64().unwrap())
        .collect();
    assert_eq!(x, vec![0.5, -0.25, 0.125]);
    assert_eq!(v["d"].as_array().unwrap().len(), 2);
}

#[test]
fn project_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.txt", "4\n1\n");
    let out = normball(&[
        "project", "--q", "2", "--tau1", "2", "--tau2", "2.2", "--input", &input, "--out", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("index,group,x"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.txt", "4\n1\n3\n");
    let groups = write(dir.path(), "g.txt", "2\n2\n");
    let bad = write(dir.path(), "bad.txt", "4\nx\n");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "project", "--q", "2", "--tau1", "1", "--tau2", "1", "--input", &input, "--groups",
            &groups,
        ],
        vec![
            "project", "--q", "2", "--tau1", "1", "--tau2", "1", "--input", &bad,
        ],
        vec![
            "project", "--q", "2", "--tau1", "0", "--tau2", "1", "--input", &input,
        ],
        vec![
            "project", "--q", "2", "--tau1", "-1", "--tau2", "1", "--input", &input,
        ],
        vec![
            "project", "--q", "3", "--tau1", "1", "--tau2", "1", "--input", &input,
        ],
        vec![
            "project",
            "--q",
            "2",
            "--tau1",
            "1",
            "--tau2",
            "1",
            "--input",
            "/nonexistent/c.txt",
        ],
        vec![
            "bench",
            "--methods",
            "ip",
            "--g",
            "2",
            "--n",
            "4",
            "--q",
            "2",
        ],
    ];
    for args in cases {
        let out = normball(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn nonconvergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.txt", "4\n1\n");
    let base = [
        "project", "--q", "2", "--tau1", "2", "--tau2", "2.2", "--input", &input,
    ];
    let capped = [
        &base[..],
        &["--eps-interval", "1e-12", "--max-bisection-iters", "3"],
    ]
    .concat();
    let out = normball(&capped);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    // a vanishing tolerance still ends at floating-point resolution
    let tiny = [
        &base[..],
        &["--eps-interval", "1e-300", "--eps-residual", "1e-300"],
    ]
    .concat();
    let v = json(&normball(&tiny));
    assert!(v["iterations"].as_u64().unwrap() < 200);
}

#[test]
fn regions_are_deterministic_and_huge_radii_are_inside() {
    let args = [
        "regions",
        "--g",
        "10",
        "--n",
        "100",
        "--q",
        "2",
        "--tau1",
        "5",
        "--tau2",
        "6",
        "--samples",
        "500",
        "--seed",
        "3",
    ];
    let a = normball(&args);
    let b = normball(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&normball(&[
        "regions",
        "--g",
        "2",
        "--n",
        "10",
        "--q",
        "inf",
        "--tau1",
        "1e12",
        "--tau2",
        "1e12",
        "--samples",
        "50",
    ]));
    assert_eq!(v["counts"]["INSIDE"], 50);
    let csv = normball(&[
        "regions",
        "--g",
        "2",
        "--n",
        "10",
        "--q",
        "2",
        "--tau1",
        "5",
        "--tau2",
        "6",
        "--samples",
        "50",
        "--out",
        "csv",
    ]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 2);
}

#[test]
fn bench_single_trial() {
    let out = normball(&[
        "bench",
        "--methods",
        "bisect,dykstra",
        "--g",
        "10",
        "--n",
        "100",
        "--q",
        "2",
        "--trials",
        "1",
        "--seed",
        "4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let sd = header.iter().position(|h| *h == "sd_ms").unwrap();
    let iters = header.iter().position(|h| *h == "iterations_mean").unwrap();
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row[sd].parse::<f64>().unwrap(), 0.0);
    }
    let bisect: f64 = rows[0][iters].parse().unwrap();
    let dykstra: f64 = rows[1][iters].parse().unwrap();
    assert!(bisect <= 40.0);
    println!("bisect {bisect} iterations, dykstra {dykstra} iterations");
}

#[test]
fn regress_small_and_zero_tolerance() {
    let v = json(&normball(&[
        "regress",
        "--size",
        "small",
        "--solver",
        "pg",
        "--q",
        "2",
        "--seed",
        "1",
        "--compare",
    ]));
    assert_eq!(v["converged"], true);
    assert!(v["relative_gap"].as_f64().unwrap() <= 1e-6);
    assert!(v["max_violation"].as_f64().unwrap() <= 1e-6);
    let v = json(&normball(&[
        "regress",
        "--solver",
        "pg",
        "--tol",
        "0",
        "--max-iters",
        "30",
    ]));
    assert_eq!(v["converged"], false);
    assert_eq!(v["iterations"], 30);
}
