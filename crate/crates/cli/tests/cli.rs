use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use braidflow::ScenarioConfig;
use braidflow_cli::{from_json, parse_config, to_json, to_toml, ReportDocument};

const REGENERATE: &str = "BRAIDFLOW_REGENERATE_GOLDENS";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_braidflow"));
    c.env_remove(braidflow_cli::OUT_DIR_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn json_report(args: &[&str]) -> ReportDocument {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("valid report")
}

fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os(REGENERATE).is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "golden {} differs; rerun with {REGENERATE}=1 to update", path.display());
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn shipped_configs_match_builtin_scenarios() {
    for name in ScenarioConfig::NAMES {
        let config = ScenarioConfig::named(name).unwrap();
        let path = manifest(&format!("configs/{name}.toml"));
        check_golden(&path, &to_toml(&config));
        let parsed = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed, config);
    }
}

#[test]
fn config_file_and_builtin_give_identical_reports() {
    let path = manifest("configs/paper-disk.toml");
    let a = run(&["winding", "--format", "json"]);
    let b = run(&["winding", "--format", "json", "--config", path.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn obstruct_paper_disk_finds_verified_four_strand_certificate() {
    let doc = json_report(&["obstruct", "--format", "json"]);
    let o = doc.obstruction.expect("obstruction section");
    let cert = o.certificate.expect("certificate");
    assert!(o.verified);
    assert_eq!(cert.subset, ["s", "p1", "p2", "m"]);
    let w = doc.winding.unwrap();
    let expected = [[0, 2, 1, 1], [2, 0, 1, 1], [1, 1, 0, 3], [1, 1, 3, 0]];
    for (i, row) in expected.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                assert_eq!(w.w(i, j), *v, "w[{i}][{j}]");
            }
        }
    }
}

#[test]
fn identity_winding_matrix_is_zero_without_certificate() {
    let doc = json_report(&["obstruct", "--scenario", "identity", "--format", "json"]);
    let w = doc.winding.unwrap();
    for i in 0..w.size() {
        for j in 0..w.size() {
            if i != j {
                assert_eq!(w.w(i, j), 0);
            }
        }
    }
    assert!(doc.obstruction.unwrap().certificate.is_none());
}

#[test]
fn perturb_small_amplitudes_matches_golden() {
    let out = run(&["perturb", "--deltas", "0,1e-4,1e-3", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    check_golden(&manifest("tests/golden/paper-disk-perturb.json"), &text);
    let doc = from_json(&text).unwrap();
    let p = doc.persistence.unwrap();
    assert_eq!(p.rows.len(), 3);
    assert!(p.breaking_amplitude.is_none());
}

#[test]
fn json_reports_round_trip_byte_for_byte() {
    for args in [
        vec!["simulate", "--format", "json"],
        vec!["simulate", "--scenario", "paper-torus", "--format", "json"],
        vec!["baseline", "--count", "3", "--format", "json"],
    ] {
        let out = run(&args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(to_json(&from_json(&text).unwrap()), text, "{args:?}");
    }
}

#[test]
fn text_report_lists_sections() {
    let out = run(&["simulate"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for section in ["winding matrix", "obstruction", "fixed sets and actions", "admissibility", "ε = "] {
        assert!(text.contains(section), "missing {section:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["perturb", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["winding", "--no-such-flag"])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["winding", "--scenario", "no-such-scenario"])), 1);
    assert_eq!(code(&run(&["perturb", "--deltas", "abc"])), 1);
    assert_eq!(code(&run(&[])), 1);
}

fn with_config(dir: &Path, edit: impl Fn(&mut ScenarioConfig)) -> PathBuf {
    let mut c = ScenarioConfig::paper_disk(Default::default());
    edit(&mut c);
    let path = dir.join(format!("{}.toml", std::process::id()));
    std::fs::write(&path, to_toml(&c)).unwrap();
    path
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = with_config(dir.path(), |c| c.profiles.alpha.center_turns = 0.5);
    let out = run(&["winding", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha-center-above-2"));

    let typo = dir.path().join("typo.toml");
    std::fs::write(&typo, "nmae = \"x\"\n").unwrap();
    assert_eq!(code(&run(&["winding", "--config", typo.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["winding", "--config", dir.path().join("absent.toml").to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["perturb", "--deltas", "0.1,0.01"])), 2);
    assert_eq!(code(&run(&["baseline", "--count", "0"])), 2);
    assert_eq!(code(&run(&["baseline", "--svg", "trajectories"])), 2);
}

#[test]
fn numerical_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = with_config(dir.path(), |c| c.tolerances.resolution = 1e-300);
    let out = run(&["winding", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("winding stage failed"));
}

#[test]
fn out_dir_from_environment_receives_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["winding"]).env(braidflow_cli::OUT_DIR_ENV, dir.path()).output().unwrap();
    assert!(out.status.success());
    let json = std::fs::read_to_string(dir.path().join("paper-disk-winding.json")).unwrap();
    let txt = std::fs::read_to_string(dir.path().join("paper-disk-winding.txt")).unwrap();
    assert_eq!(txt.as_bytes(), out.stdout.as_slice());
    assert!(from_json(&json).unwrap().winding.is_some());
}

fn svg(scenario: &str, kind: &str, dir: &Path) -> String {
    let out = run(&["simulate", "--scenario", scenario, "--svg", kind, "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(dir.join(format!("{scenario}-{kind}.svg"))).unwrap()
}

#[test]
fn trajectory_svgs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = svg("paper-disk", "trajectories", a.path());
    assert_eq!(first, svg("paper-disk", "trajectories", b.path()));
    assert_eq!(first.matches(r#"class="strand""#).count(), 3);
    assert_eq!(first.matches(r#"class="equilibrium""#).count(), 1);

    let identity = svg("identity", "trajectories", a.path());
    assert_eq!(identity.matches(r#"class="strand""#).count(), 0);
    assert_eq!(identity.matches(r#"class="equilibrium""#).count(), 4);

    let braid = svg("paper-disk", "braid-diagram", a.path());
    assert_eq!(braid, svg("paper-disk", "braid-diagram", b.path()));
    assert_eq!(braid.matches(r#"class="strand""#).count(), 4);
    assert!(braid.contains(r#"class="crossing""#));
}
