use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tdirac_core::cohomology::CohomologyReport;
use tdirac_core::spectrum::SpectrumReport;
use tdirac_workbench::config::RunConfig;
use tdirac_workbench::run::{
    run, CliffordReport, ConformalShiftReport, EulerReport, HarmonicDimsReport, HodgeStarReport, MeanCurvatureReport,
    SuspensionReport,
};

fn tdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdirac")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run_json(json: &str) -> String {
    run(&RunConfig::from_json(json).unwrap()).unwrap()
}

#[test]
fn circle_dirac_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"command": "circle-dirac", "M": 5}"#);
    let out = tdirac(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let s = SpectrumReport::from_csv("circle_dirac", 5, &text).unwrap();
    assert_eq!(s.eigenvalues, (-5..=5).map(|k| k as f64).collect::<Vec<_>>());
    assert!(s.multiplicities.iter().all(|&m| m == 1));
}

#[test]
fn carriere_twisted_betti() {
    let text = run_json(r#"{"command": "carriere", "lambda": 2.618, "N": 32, "twisted": true}"#);
    let r: CohomologyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.betti, vec![0, 0, 0]);
}

#[test]
fn z4_strata_euler() {
    let text = run_json(r#"{"command": "strata-euler", "dataset": "z4_torus.json", "rho": "rho1"}"#);
    let r: EulerReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.chi, -1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unknown_key = write_config(dir.path(), "a.json", r#"{"command": "circle-dirac", "M": 5, "bogus": 1}"#);
    let bad_tol = write_config(dir.path(), "b.json", r#"{"command": "circle-dirac", "M": 5, "tolerances": {"merge": 0}}"#);
    let non_integer = write_config(
        dir.path(),
        "c.json",
        r#"{"command": "character-average", "group": {"cyclic": 2}, "lefschetz": [1, 0], "rho": "rho0"}"#,
    );
    let bad_complex = write_config(dir.path(), "d.json", r#"{"command": "carriere", "lambda": 0.5, "N": 32}"#);
    let unknown_cmd = write_config(dir.path(), "e.json", r#"{"command": "teleport"}"#);
    for (cfg, code) in [(&unknown_key, 2), (&bad_tol, 2), (&non_integer, 3), (&bad_complex, 2), (&unknown_cmd, 2)] {
        let out = tdirac(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(code), "{}", cfg.display());
        assert!(!out.stderr.is_empty());
    }
    let circle = write_config(dir.path(), "f.json", r#"{"command": "circle-dirac", "M": 2}"#);
    assert_eq!(tdirac(&["--config", circle.to_str().unwrap(), "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(tdirac(&["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(tdirac(&[]).status.code(), Some(2));
    let gb = write_config(dir.path(), "g.json", r#"{"command": "gauss-bonnet", "dataset": "carriere.json"}"#);
    assert_eq!(tdirac(&["--config", gb.to_str().unwrap(), "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn contract_violation_names_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"command": "character-average", "group": {"cyclic": 4}, "lefschetz": [1, 0, 0, 0], "rho": "rho1"}"#,
    );
    let out = tdirac(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rho1") && err.contains("integer"), "{err}");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "w.json",
        r#"{"command": "warped-dl", "N": 64, "x_modes": 2, "g": {"cos": [0.0], "sin": [0.0, 1.0]}, "format": "json"}"#,
    );
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("out{threads}.json"));
        let status = tdirac(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads]);
        assert_eq!(status.status.code(), Some(0));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn every_json_report_round_trips() {
    type Reparse = fn(&str) -> String;
    let cases: Vec<(&str, Reparse)> = vec![
        (r#"{"command": "t2-dirac", "M": 2, "format": "json"}"#, |t| reparse::<SpectrumReport>(t)),
        (r#"{"command": "harmonic-dims", "n": 3, "M": 1}"#, |t| reparse::<HarmonicDimsReport>(t)),
        (r#"{"command": "clifford", "n": 4}"#, |t| reparse::<CliffordReport>(t)),
        (
            r#"{"command": "hodge-star", "metric": [[2, 0], [0, 3]], "form": {"n": 2, "grade": 1, "coefficients": {"0": [1, 0.5]}}}"#,
            |t| reparse::<HodgeStarReport>(t),
        ),
        (r#"{"command": "mean-curvature", "frame": "heisenberg"}"#, |t| reparse::<MeanCurvatureReport>(t)),
        (r#"{"command": "carriere", "lambda": 2.618, "N": 8, "twisted": false}"#, |t| reparse::<CohomologyReport>(t)),
        (
            r#"{"command": "conformal-shift", "lambda": 2.618, "N": 8, "h": {"cos": [], "sin": [0.0, 0.3]}}"#,
            |t| reparse::<ConformalShiftReport>(t),
        ),
        (r#"{"command": "taut-suspension"}"#, |t| reparse::<SuspensionReport>(t)),
        (r#"{"command": "lefschetz-euler", "action": "z4_rotation", "rho": "rho2"}"#, |t| reparse::<EulerReport>(t)),
        (r#"{"command": "gauss-bonnet", "dataset": "klein_suspension.json"}"#, |t| reparse::<EulerReport>(t)),
    ];
    for (json, check) in cases {
        let text = run_json(json);
        assert_eq!(check(&text), text, "{json}");
    }
}

fn reparse<T: serde::de::DeserializeOwned + serde::Serialize>(text: &str) -> String {
    let value: T = serde_json::from_str(text).unwrap();
    tdirac_workbench::output::to_canonical_json(&value).unwrap()
}

#[test]
fn json_keys_are_sorted_and_floats_fixed() {
    let text = run_json(r#"{"command": "slope", "r": 1.4142135623730951, "M": 1, "format": "json"}"#);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.contains("e0,") || text.contains("e0]"));
    assert!(!text.contains("-0.0000000000000000e0"));
}

#[test]
fn spectra_commands() {
    let dl = run_json(r#"{"command": "warped-dl", "N": 64, "g": {"cos": [], "sin": [0.0, 1.0]}}"#);
    let s = SpectrumReport::from_csv("warped_dl", 64, &dl).unwrap();
    assert_eq!(s.eigenvalues.len(), 33);
    let dq = run_json(r#"{"command": "warped-dq", "N": 64, "x_mode": 2, "g": {"cos": [], "sin": [0.0, 1.0]}}"#);
    let s = SpectrumReport::from_csv("warped_dq", 64, &dq).unwrap();
    assert!(s.eigenvalues.iter().all(|&v| v < 0.0 && v.abs() <= 2.0 * 1f64.exp() + 1e-9));
    let coarse = run_json(r#"{"command": "slope", "r": 1.0, "M": 2, "tolerances": {"merge": 1e-6}}"#);
    let s = SpectrumReport::from_csv("slope", 2, &coarse).unwrap();
    // rational slope: a + b = 0 along the antidiagonal gives a 5-fold kernel
    assert_eq!(s.multiplicity_of(0.0, 1e-9), 5);
}

#[test]
fn custom_torus_action() {
    let text = run_json(
        r#"{"command": "lefschetz-euler", "group": {"cyclic": 2}, "generators": [[[0, 1], [1, 0]]], "rho": "rho1"}"#,
    );
    let r: EulerReport = serde_json::from_str(&text).unwrap();
    // swap of coordinates: L = (0, 0)
    assert_eq!(r.lefschetz_numbers, Some(vec![0, 0]));
    assert_eq!(r.chi, 0);
}
