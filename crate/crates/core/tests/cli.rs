//! Exit-code contract of the binary.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hybrid-contact"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&o.stdout).to_string() + &String::from_utf8_lossy(&o.stderr);
    (o.status.code().unwrap(), text)
}

#[test]
fn certify_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["certify", "s54_bt171"], dir.path()).0, 0);
    assert_eq!(run(&["certify", "s4_bf5"], dir.path()).0, 2);
    assert!(dir.path().join("s4_bf5.certificate.toml").exists());
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"bad\"\n[plant]\nmass = -1.0\nfriction = 0.0\n").unwrap();
    assert_eq!(run(&["certify", bad.to_str().unwrap()], dir.path()).0, 1);
    assert_eq!(run(&["certify", "/no/such/file.toml"], dir.path()).0, 1);
}

#[test]
fn simulate_writes_series_and_events() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["simulate", "s4_bf9000"], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("s4_bf9000.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,x,x_d,v,v_d,f_e,f_d,f_c,mode");
    assert_eq!(csv.lines().count(), 40_002);
    let events = std::fs::read_to_string(dir.path().join("s4_bf9000.events")).unwrap();
    let lines: Vec<&str> = events.lines().collect();
    assert_eq!(lines[0], "time,direction,state");
    assert!(lines[1].starts_with("0.152043"), "{}", lines[1]);
}

#[test]
fn chattering_run_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let text = hybrid_contact::cli::scenarios::builtin("s4_bf5").unwrap();
    // a separation guard wider than the bounce interval trips on the second switch
    let text = text.replace("min_event_sep = 1.0e-9", "min_event_sep = 0.01");
    assert!(text.contains("min_event_sep = 0.01"));
    let path = dir.path().join("chatter.toml");
    std::fs::write(&path, text).unwrap();
    let (code, out) = run(&["simulate", path.to_str().unwrap()], dir.path());
    assert_eq!(code, 3, "{out}");
    let csv = std::fs::read_to_string(dir.path().join("s4_bf5.csv")).unwrap();
    assert!(csv.lines().count() > 1000);
}

#[test]
fn design_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["design", "s54_bt_search"], dir.path());
    assert_eq!(code, 0, "{out}");
    let text = hybrid_contact::cli::scenarios::builtin("s54_bt_search").unwrap();
    let text = text.replace("lo = 50.0", "lo = 300.0");
    assert!(text.contains("lo = 300.0"));
    let path = dir.path().join("nobracket.toml");
    std::fs::write(&path, text).unwrap();
    let (code, out) = run(&["design", path.to_str().unwrap()], dir.path());
    assert_eq!(code, 2, "{out}");
    assert_eq!(out.matches("verdict = ").count(), 2, "{out}");
}

#[test]
fn traj_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["traj", "s4_bf5"], dir.path()).0, 0);
    let csv = std::fs::read_to_string(dir.path().join("s4_bf5.traj.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,x_d,v_d,a_d,f_d");
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_hybrid-contact"))
        .args(["certify", "s54_bt171"])
        .env("HYBRID_CONTACT_OUT", dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(dir.path().join("s54_bt171.certificate.toml").exists());
}
