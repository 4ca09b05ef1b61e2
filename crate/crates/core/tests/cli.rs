//! Command-line behavior: golden outputs, exit codes, file formats.

use std::path::{Path, PathBuf};
use std::process::Command;

use genpfaff::cli::{parse_matrix, run_from_args, write_matrix, MatrixDocument, SourceFormat};
use genpfaff::mgen::random_ginibre;
use proptest::prelude::*;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run_binary(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_genpfaff")).args(args).env_remove("PFAFF_SEED").output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn check_golden(input: &str, expected: &str, exit: i32) {
    let path = golden(input);
    let (stdout, code) = run_binary(&["pf", path.to_str().unwrap()]);
    let want = std::fs::read_to_string(golden(expected)).unwrap();
    assert_eq!(stdout, want, "{input}");
    assert_eq!(code, exit, "{input}");
}

#[test]
fn golden_pf_unit_skew() {
    check_golden("skew.mtx", "pf_skew.out", 0);
    let text = std::fs::read_to_string(golden("pf_skew.out")).unwrap();
    assert!(text.starts_with(r#"{"pfaffian":[1,0],"#) && text.contains(r#""singular":false"#));
}

#[test]
fn golden_pf_hermitian_offdiagonal() {
    check_golden("offdiag.json", "pf_offdiag.out", 0);
    let text = std::fs::read_to_string(golden("pf_offdiag.out")).unwrap();
    assert!(text.starts_with(r#"{"pfaffian":[0,1.4142135623730951],"#));
}

#[test]
fn golden_pf_positive_real_eigenvalue() {
    check_golden("diag.json", "pf_diag.out", 4);
    let text = std::fs::read_to_string(golden("pf_diag.out")).unwrap();
    assert!(text.starts_with(r#"{"error":{"code":"pf_undefined","#));
}

#[test]
fn golden_gen_is_seed_deterministic() {
    let spec = golden("spec_negative.json");
    let (stdout, code) = run_binary(&["gen", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(stdout, std::fs::read_to_string(golden("gen_negative.out")).unwrap());

    let from_env = Command::new(env!("CARGO_BIN_EXE_genpfaff"))
        .args(["gen", spec.to_str().unwrap()])
        .env("PFAFF_SEED", "8")
        .output()
        .unwrap()
        .stdout;
    let from_env = String::from_utf8(from_env).unwrap();
    let (from_flag, _) = run_binary(&["gen", spec.to_str().unwrap(), "--seed", "8"]);
    assert_ne!(from_env, stdout);
    assert_eq!(from_env, from_flag);
}

#[test]
fn multiple_inputs_keep_order_and_first_failure_code() {
    let paths = ["skew.mtx", "diag.json", "offdiag.json"].map(|p| golden(p).to_str().unwrap().to_string());
    let (stdout, code) = run_binary(&["pf", &paths[0], &paths[1], &paths[2]]);
    let want: String = ["pf_skew.out", "pf_diag.out", "pf_offdiag.out"]
        .iter()
        .map(|f| std::fs::read_to_string(golden(f)).unwrap())
        .collect();
    assert_eq!(stdout, want);
    assert_eq!(code, 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let truncated = write("t.mtx", "%%MatrixMarket matrix array complex general\n2 2\n0 0\n-1 0\n1 0\n");
    let (out, code) = run_binary(&["pf", &truncated]);
    assert_eq!(code, 2);
    assert!(out.contains("parse_error") && out.contains("expected 8 values, found 6"), "{out}");

    let jordan = write("j.json", r#"{"rows":2,"cols":2,"entries":[[1,0],[1,0],[0,0],[1,0]]}"#);
    let (out, code) = run_binary(&["pf", &jordan]);
    assert_eq!(code, 3);
    assert!(out.contains("not_conjugate_normal"));
    let (out, code) = run_binary(&["check", &jordan]);
    assert_eq!(code, 0);
    assert!(out.starts_with(r#"{"conjugate_normal":false,"#));

    let (_, code) = run_binary(&["pf", &jordan, "--tol-eig", "-1"]);
    assert_eq!(code, 2);

    let big = {
        let spec = genpfaff::mgen::random_pfaffian_spectrum(7, 1, 3);
        let a = genpfaff::mgen::random_conjugate_normal(&spec).unwrap();
        write("big.json", &write_matrix(&MatrixDocument::new(SourceFormat::Json, a), SourceFormat::Json))
    };
    let (out, code) = run_binary(&["pf", &big, "--method", "polynomial"]);
    assert_eq!(code, 2, "{out}");
    let (out, code) = run_binary(&["pf", &big, "--method", "relation"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(r#""method":"relation""#));
}

#[test]
fn apf_odd_dimension_warns() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("odd.json");
    std::fs::write(&p, r#"{"rows":3,"cols":3,"entries":[[0,0],[1,0],[2,0],[-1,0],[0,0],[3,0],[-2,0],[-3,0],[0,0]]}"#).unwrap();
    let (out, code) = run_binary(&["apf", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with(r#"{"pfaffian":[0,0],"#) && out.contains(r#""warning":"#), "{out}");
}

#[test]
fn wnf_and_identities_commands() {
    let input = golden("offdiag.json");
    let out = run_from_args(["genpfaff", "wnf", input.to_str().unwrap()]).unwrap();
    assert_eq!(out.exit_code, 0);
    assert_eq!(
        out.text,
        "{\"det_U\":[1,0],\"blocks\":[{\"type\":\"offdiag\",\"value\":[1,1],\"multiplicity\":1}],\
         \"reconstruction_residual\":0,\"unitarity_residual\":0}\n"
    );
    let out = run_from_args(["genpfaff", "identities", input.to_str().unwrap(), "--tensor-dim", "3"]).unwrap();
    assert_eq!(out.exit_code, 0, "{}", out.text);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["all_passed"], serde_json::Value::Bool(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 11);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("m.mtx");
    let spec = golden("spec_negative.json");
    let out = run_from_args([
        "genpfaff",
        "gen",
        spec.to_str().unwrap(),
        "--format",
        "mm",
        "--output",
        target.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(out, genpfaff::cli::Outcome { text: String::new(), exit_code: 0 });
    let (stdout, code) = run_binary(&["pf", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let p = &v["pfaffian"];
    let modulus = p[0].as_f64().unwrap().hypot(p[1].as_f64().unwrap());
    assert!((modulus - 2.0).abs() < 1e-12);
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_genpfaff"))
        .args(["pf", "-", "--format", "json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"rows":2,"cols":2,"entries":[[0,0],[1,1],[1,-1],[0,0]]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(golden("pf_offdiag.out")).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip_bit_exactly(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>(), exp in -300i32..300) {
        let g = random_ginibre(rows.max(cols), seed);
        let scale = 10f64.powi(exp);
        let m = genpfaff::ComplexMatrix::from_fn(rows, cols, |i, j| g[(i, j)] * scale);
        let doc = MatrixDocument::new(SourceFormat::Json, m);
        for fmt in [SourceFormat::Json, SourceFormat::MatrixMarket] {
            let back = parse_matrix(&write_matrix(&doc, fmt), fmt).unwrap();
            for (x, y) in back.matrix.as_slice().iter().zip(doc.matrix.as_slice()) {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}
