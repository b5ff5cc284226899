use std::fs;
use std::process::{Command, Output};

use tempfile::tempdir;

fn cdw_ring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdw-ring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn steady_reports_the_closed_form_current() {
    let out = cdw_ring(&["steady", "--flux", "0.3", "--epsilon", "0.2"]);
    assert!(out.status.success());
    let current = column(&stdout(&out), "current")[0];
    assert!((current - (-0.3 * (1.0_f64 - 0.04).sqrt())).abs() < 1e-11);
}

#[test]
fn flux_sweep_picks_the_nearest_winding() {
    let out = cdw_ring(&["flux-sweep", "--grid", "0:2:9", "--winding", "auto"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let windings = column(&body, "winding");
    assert_eq!(windings, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0]);
}

#[test]
fn omega_sweep_writes_body_and_summary() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("omega.csv");
    let out = cdw_ring(&["omega-sweep", "--epsilon", "0.1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let energies = column(&fs::read_to_string(&path).unwrap(), "energy");
    assert_eq!(energies.len(), 41);
    for i in 0..20 {
        assert!((energies[i] - energies[40 - i]).abs() < 1e-12);
    }
    let summary = fs::read_to_string(dir.path().join("omega.summary.csv")).unwrap();
    assert!(summary.starts_with("key,value\n"));
    assert!(summary.contains("stiffness_exact,"));
}

#[test]
fn config_file_with_profile_table() {
    let dir = tempdir().unwrap();
    let table = dir.path().join("n1.txt");
    let samples: String = (0..64)
        .map(|i| format!("{}\n", 0.2 * (std::f64::consts::TAU * i as f64 / 64.0).cos()))
        .collect();
    fs::write(&table, format!("# n1 profile N=64\n{samples}")).unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!(
            "kind = steady\n\n[base]\nflux = 0.3\nprofile_file = \"{}\"\n\n[output]\nformat = json\n",
            table.display()
        ),
    )
    .unwrap();
    let out = cdw_ring(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = json.to_string();
    assert!(text.contains("current"));
}

#[test]
fn exit_codes() {
    let bad_amplitude = cdw_ring(&["steady", "--epsilon", "1.2"]);
    assert_eq!(bad_amplitude.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_amplitude.stderr).contains("|ε| < 1"));

    let missing = cdw_ring(&["steady", "--profile-file", "/nonexistent/n1.txt"]);
    assert_eq!(missing.status.code(), Some(3));

    let dir = tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "kind = steady\n[base]\nfluxx = 0.1\n").unwrap();
    let unknown = cdw_ring(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(unknown.status.code(), Some(2));

    let no_config = cdw_ring(&["run"]);
    assert_eq!(no_config.status.code(), Some(2));
}

#[test]
fn certify_json_reports_pass() {
    let out = cdw_ring(&["certify", "--seed", "7", "--cases", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"passed\": true"), "{text}");
}
