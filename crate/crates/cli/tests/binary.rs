use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn swe_fronts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swe-fronts")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const SLOSH: &str = r#"
kind = "slosh"
[initial]
gamma0 = -7.0
mu0 = 1.0
beta0 = -1.0
[numerics]
points = 101
"#;

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "tsv" || e == "svg"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn run_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "slosh.toml", SLOSH);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let out = swe_fronts(&["run", &cfg, "--out", d.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (fa, fb) = (data_files(&a), data_files(&b));
    assert_eq!(fa.len(), 9);
    assert_eq!(fa, fb);

    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["kind"], "slosh");
    assert_eq!(manifest["config"]["initial"]["gamma0"], -7.0);
    assert!(manifest["derived"]["period"].as_f64().unwrap() > 0.0);
    assert!(manifest["derived"]["h_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn tsv_values_round_trip() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "slosh.toml", SLOSH);
    let out = tmp.path().join("o");
    assert!(swe_fronts(&["run", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(out.join("trajectory.tsv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t\talpha\tgamma\tmu\tbeta\tdelta\tH");
    let first: Vec<f64> = lines.next().unwrap().split('\t').map(|c| c.parse().unwrap()).collect();
    assert_eq!(&first[..6], &[0.0, 0.0, -7.0, 1.0, -1.0, 0.0]);
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn export_figures_writes_svg() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "c.toml", "kind = \"pw-parabola-parabolic\"\n[initial]\nx0 = 0.5\nzeta1_0 = -0.1\n");
    let out = tmp.path().join("o");
    let o = swe_fronts(&["export-figures", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(out.join("fronts.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert!((m["derived"]["x_sh"].as_f64().unwrap() - 0.98286).abs() < 1e-5);
}

#[test]
fn invalid_config_exits_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "bad.toml", "kind = \"slosh\"\n[initial]\ngamma0 = 0.0\nmu0 = 1.0\n");
    let o = swe_fronts(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("curvature must be nonzero"));
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn divergence_reported_and_missing_file_exits_two() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "c.toml",
        "kind = \"vacuum-hierarchy\"\n[bottom]\nvariant = \"flat\"\ncoefficients = [1.0]\n[initial]\nx0 = 0.0\norder = 1\nu = [0.0, -2.0]\neta = [0.0, -1.0]\n[numerics]\nt_end = 5.0\n",
    );
    let o = swe_fronts(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("o/manifest.json")).unwrap()).unwrap();
    assert!(m["derived"]["t_bu"].as_f64().unwrap() < 5.0);

    let o = swe_fronts(&["run", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_merges_in_grid_order() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "slosh.toml", SLOSH);
    let out = tmp.path().join("s");
    let o = swe_fronts(&["sweep", &cfg, "--param", "initial.gamma0", "--grid", "-0.9:-0.1:5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("sweep.tsv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split('\t').collect();
    assert_eq!(header[0], "initial.gamma0");
    let col = header.iter().position(|h| *h == "period").unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split('\t').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for (r, g) in rows.iter().zip([-0.9, -0.7, -0.5, -0.3, -0.1]) {
        assert!((r[0] - g).abs() < 1e-15);
        let expect = swe_fronts::selfsim::classify(r[0], 0.0).unwrap();
        let swe_fronts::selfsim::Regime::Sloshing { period, .. } = expect else { panic!() };
        assert_eq!(r[col], period);
    }
    let o = swe_fronts(&["sweep", &cfg, "--param", "initial.gamma0", "--grid", "1:2"]);
    assert_eq!(o.status.code(), Some(1));
}
