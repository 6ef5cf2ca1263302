use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use discord_core::measurements::{random_povm, trine, Measurement, Povm};
use discord_core::random::rng;
use serde_json::Value;

fn discord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discord"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn quantity(report: &Value, name: &str) -> f64 {
    report["quantities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|q| q["name"] == name)
        .unwrap_or_else(|| panic!("no quantity {name}"))["value"]
        .as_f64()
        .unwrap()
}

fn write_diagonal_state(path: &Path, diag: [f64; 4]) {
    let rows: Vec<String> = (0..4)
        .map(|i| {
            let cells: Vec<String> = (0..4)
                .map(|j| format!("[{}, 0]", if i == j { diag[i] } else { 0.0 }))
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    fs::write(path, format!("{{\"dims\": [2, 2], \"matrix\": [{}]}}", rows.join(", "))).unwrap();
}

fn write_povm(path: &Path, p: &Povm) {
    let effects: Vec<Value> = p
        .effects()
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    let v = serde_json::json!({ "dim": p.dim(), "effects": effects });
    fs::write(path, v.to_string()).unwrap();
}

#[test]
fn bell_state_has_unit_discord() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let h = 0.5;
    let m = format!(
        "[[[{h},0],[0,0],[0,0],[{h},0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[{h},0],[0,0],[0,0],[{h},0]]]"
    );
    fs::write(&path, format!("{{\"dims\":[2,2],\"matrix\":{m}}}")).unwrap();
    let r = report(&discord(&["discord", path.to_str().unwrap(), "--starts", "8"]));
    assert!((quantity(&r, "discord_projective") - 1.0).abs() <= 1e-5);
    assert!((quantity(&r, "discord_povm") - 1.0).abs() <= 1e-5);
    assert_eq!(r["config"]["starts"], 8);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(r["details"]["projective"]["parameters"].is_array());
}

#[test]
fn product_state_has_no_correlations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product.json");
    // diag(0.7, 0.3) ⊗ diag(0.6, 0.4)
    write_diagonal_state(&path, [0.42, 0.28, 0.18, 0.12]);
    let r = report(&discord(&["discord", path.to_str().unwrap(), "--starts", "8"]));
    for name in [
        "mutual_information",
        "classical_correlations_projective",
        "classical_correlations_povm",
        "discord_projective",
        "discord_povm",
    ] {
        assert!(quantity(&r, name).abs() <= 1e-8, "{name} = {}", quantity(&r, name));
    }
}

#[test]
fn classical_classical_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cc.json");
    write_diagonal_state(&path, [0.5, 0.0, 0.0, 0.5]);
    let r = report(&discord(&["discord", path.to_str().unwrap(), "--starts", "8"]));
    assert!((quantity(&r, "mutual_information") - 1.0).abs() <= 1e-10);
    assert!((quantity(&r, "classical_correlations_projective") - 1.0).abs() <= 1e-5);
    assert!(quantity(&r, "discord_projective") <= 1e-5);
    assert!(quantity(&r, "discord_povm") <= 1e-5);
}

#[test]
fn csv_reports_have_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cc.json");
    write_diagonal_state(&path, [0.5, 0.0, 0.0, 0.5]);
    let out = discord(&["discord", path.to_str().unwrap(), "--starts", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,instance,seed,outcome,name,value\n"));
    assert!(text.contains(",discord_projective,"));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"dims":[2,2],"matrix":[[[1,0]]]}"#).unwrap();
    assert_eq!(discord(&["discord", bad.to_str().unwrap()]).status.code(), Some(2));

    let negative = dir.path().join("negative.json");
    write_diagonal_state(&negative, [1.2, -0.2, 0.0, 0.0]);
    let out = discord(&["discord", negative.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative eigenvalue"));

    let missing = dir.path().join("missing.json");
    assert_eq!(discord(&["discord", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(discord(&["verify", "thm2", "--family", "violating"]).status.code(), Some(2));
    assert_eq!(discord(&["verify", "thm1", "--starts", "0"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        vec![
            "gen".to_string(),
            "--family".into(),
            "random_density".into(),
            "--dims".into(),
            "2,2".into(),
            "--rank".into(),
            "4".into(),
            "--seed".into(),
            "5".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    let run = |p: &Path| {
        let owned = args(p);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        assert!(discord(&refs).status.success());
    };
    run(&a);
    run(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!dir.path().join("a.json.partial").exists());
    // The written file is accepted back as a state.
    report(&discord(&["discord", a.to_str().unwrap(), "--starts", "4"]));
}

#[test]
fn gen_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"family":"condition_pure_family","dims":[4,2],"block_dims":[2,2],"weights":[0.3,0.7],"seed":9}"#,
    )
    .unwrap();
    let out = discord(&["gen", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dims"], serde_json::json!([4, 2]));

    fs::write(&spec, r#"{"family":"condition_pure_family","dims":[4,1],"block_dims":[3,3],"seed":9}"#).unwrap();
    assert_eq!(discord(&["gen", "--spec", spec.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn violating_family_has_positive_minima() {
    let r = report(&discord(&["verify", "thm1", "--family", "violating", "--instances", "4"]));
    for v in r["verdicts"].as_array().unwrap() {
        assert_eq!(v["outcome"], "passed");
        let min = v["quantities"]
            .as_array()
            .unwrap()
            .iter()
            .find(|q| q["name"] == "min_conditional_entropy")
            .unwrap()["value"]
            .as_f64()
            .unwrap();
        assert!(min >= 1e-6, "{min}");
    }
}

#[test]
fn tripartite_suite_passes() {
    let r = report(&discord(&["verify", "tripartite", "--instances", "5"]));
    assert_eq!(quantity(&r, "passed"), 5.0);
    assert_eq!(r["config"]["instances"], 5);
}

#[test]
fn short_full_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = discord(&["verify", "all", "--seed", "7", "--instances", "1", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(quantity(&r, "instances"), 5.0);
    assert_eq!(quantity(&r, "failed"), 0.0);
    assert!(r["wall_time_seconds"].as_f64().unwrap() > 0.0);
}

#[test]
fn neumark_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = rng(3);
    let projective = Povm::new(vec![
        discord_core::measurements::basis_projector(2, 0),
        discord_core::measurements::basis_projector(2, 1),
    ])
    .unwrap();
    let cases = [
        ("trine", trine(), 1e-9),
        ("projective", projective, 1e-12),
        ("random", random_povm(&mut g, 2, 4).unwrap(), 1e-9),
    ];
    for (name, p, tol) in cases {
        let path = dir.path().join(format!("{name}.json"));
        write_povm(&path, &p);
        let dilation = dir.path().join(format!("{name}.dilation.json"));
        let r = report(&discord(&["neumark", path.to_str().unwrap(), "--dilation", dilation.to_str().unwrap()]));
        for q in ["kraus_action_residual", "effect_residual", "probability_residual"] {
            assert!(quantity(&r, q) <= tol, "{name}: {q} = {}", quantity(&r, q));
        }
        let d: Value = serde_json::from_str(&fs::read_to_string(&dilation).unwrap()).unwrap();
        let n = d["ancilla_dim"].as_u64().unwrap() as usize;
        assert_eq!(d["unitary"].as_array().unwrap().len(), 2 * n);
        assert_eq!(d["ancilla_projectors"].as_array().unwrap().len(), n);
    }

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"dim":2,"effects":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]}"#).unwrap();
    assert_eq!(discord(&["neumark", bad.to_str().unwrap()]).status.code(), Some(2));
}
