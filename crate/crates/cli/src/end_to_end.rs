//! Whole-command runs through [`run`], checking exit codes and artifacts.

use std::fs;
use std::path::Path;
use std::sync::Mutex;

use super::{run, CONFIG_ENV};

// every run reads the environment, so runs that touch it must not overlap
static ENV: Mutex<()> = Mutex::new(());

fn nb(out: &Path, args: &[&str]) -> i32 {
    let mut v = vec!["nanobound".to_string(), "--out".into(), out.display().to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(v)
}

fn body(csv: &str) -> String {
    csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    assert_eq!(nb(d.path(), &["frobnicate"]), 2);
    assert_eq!(nb(d.path(), &["reproduce", "fig9"]), 2);
    assert_eq!(run(["nanobound", "--help"]), 0);
}

#[test]
fn bad_configuration_exits_2() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.conf");
    fs::write(&cfg, "fiber.radius_nm = -3\n").unwrap();
    let c = cfg.display().to_string();
    assert_eq!(nb(&d.path().join("o"), &["--config", &c, "modes", "phonon"]), 2);
    fs::write(&cfg, "no.such.key = 1\n").unwrap();
    assert_eq!(nb(&d.path().join("o"), &["--config", &c, "modes", "phonon"]), 2);
    let missing = d.path().join("missing.conf").display().to_string();
    assert_eq!(nb(&d.path().join("o"), &["--config", &missing, "modes", "phonon"]), 2);
    assert_eq!(nb(&d.path().join("o"), &["--threads", "0", "modes", "phonon"]), 2);
    assert_eq!(nb(&d.path().join("o"), &["states", "--window-mhz", "-5,3"]), 2);
}

#[test]
fn numerical_failure_exits_3() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    // far below the single-mode cutoff the fiber guides several modes
    assert_eq!(nb(d.path(), &["modes", "photon", "--wavelength-nm", "400"]), 3);
}

#[test]
fn unwritable_output_exits_4() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    let file = d.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    assert_eq!(nb(&file, &["modes", "phonon"]), 4);
}

#[test]
fn outputs_carry_the_manifest_hash_and_are_deterministic() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    for o in [&a, &b] {
        assert_eq!(nb(o, &["--json", "potential", "--kind", "hybrid", "--points", "300"]), 0);
    }
    let ca = fs::read_to_string(a.join("potential.csv")).unwrap();
    let cb = fs::read_to_string(b.join("potential.csv")).unwrap();
    assert_eq!(body(&ca), body(&cb));
    assert_eq!(body(&ca).lines().count(), 301);
    let m = manifest(&a);
    let hash = m["input_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(ca.lines().next().unwrap(), format!("# manifest_hash: {hash}"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("potential.json")).unwrap()).unwrap();
    assert_eq!(json["manifest_hash"], hash);
    assert_eq!(json["rows"].as_array().unwrap().len(), 300);
    assert_eq!(m["config"]["fiber.radius_nm"], "305");
    assert!(m["outputs"].as_array().unwrap().len() == 2);
}

#[test]
fn environment_supplies_the_configuration() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("env.conf");
    fs::write(&cfg, "# longer cavity\nfiber.length_um = 10\n").unwrap();
    std::env::set_var(CONFIG_ENV, &cfg);
    let code = nb(&d.path().join("env"), &["modes", "phonon", "--max-m", "3"]);
    std::env::remove_var(CONFIG_ENV);
    assert_eq!(code, 0);
    assert_eq!(manifest(&d.path().join("env"))["config"]["fiber.length_um"], "10");
    // an explicit --config wins over the environment
    let other = d.path().join("flag.conf");
    fs::write(&other, "fiber.length_um = 7\n").unwrap();
    std::env::set_var(CONFIG_ENV, &cfg);
    let o = other.display().to_string();
    let code = nb(&d.path().join("flag"), &["--config", &o, "modes", "phonon", "--max-m", "3"]);
    std::env::remove_var(CONFIG_ENV);
    assert_eq!(code, 0);
    assert_eq!(manifest(&d.path().join("flag"))["config"]["fiber.length_um"], "7");
}

#[test]
fn phonon_table_follows_the_dispersion() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    assert_eq!(nb(d.path(), &["modes", "phonon", "--max-m", "4"]), 0);
    let csv = fs::read_to_string(d.path().join("phonon_modes.csv")).unwrap();
    let f: Vec<f64> = body(&csv).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(f.len(), 4);
    for (m, v) in f.iter().enumerate() {
        let k = (m + 1) as f64;
        assert!((v / (f[0] * k * k) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn trap_states_and_rates_are_written() {
    let _g = ENV.lock().unwrap();
    let d = tempfile::tempdir().unwrap();
    assert_eq!(nb(d.path(), &["reproduce", "figS2"]), 0);
    let csv = fs::read_to_string(d.path().join("figS2_states.csv")).unwrap();
    assert!(csv.contains("# temperature_K: 600"));
    let first = body(&csv).lines().nth(1).unwrap().to_string();
    let cols: Vec<f64> = first.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols[0], 0.0);
    assert!((cols[2] / cols[3] - 1.0).abs() < 0.02);
    assert!(d.path().join("figS2_potential.csv").exists());
}
