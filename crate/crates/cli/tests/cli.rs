use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gammahom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammahom")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn betti(json: &str) -> Vec<u64> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let map = v.as_object().unwrap();
    (0..map.len()).map(|d| map[&d.to_string()]["betti"].as_u64().unwrap()).collect()
}

fn homology_json(extra: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let mut args = vec!["homology", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = gammahom(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn lie_koszul_complex_of_sl2() {
    let json = homology_json(&["--operad", "Lie", "--algebra", "sl2", "--coeffs", "trivial", "--ring", "Q", "--complex", "koszul", "--dmax", "2"]);
    assert_eq!(betti(&json), vec![0, 0, 1]);
}

#[test]
fn lie_koszul_complex_of_abelian() {
    let json = homology_json(&["--operad", "Lie", "--algebra", "abelian_lie(2)", "--ring", "Q", "--complex", "koszul", "--dmax", "2"]);
    assert_eq!(betti(&json), vec![2, 1, 0]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.toml");
    std::fs::write(&cfg, "operad = \"Lie\"\nalgebra = \"sl2\"\nring = \"Q\"\nd_max = 2\ncomplex = \"koszul\"\n").unwrap();
    let json = homology_json(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(betti(&json), vec![0, 0, 1]);
    let json = homology_json(&["--config", cfg.to_str().unwrap(), "--algebra", "abelian_lie(2)"]);
    assert_eq!(betti(&json), vec![2, 1, 0]);
}

#[test]
fn gamma_and_koszul_agree_through_the_cli() {
    let base = ["--operad", "Lie", "--algebra", "sl2", "--ring", "Q", "--dmax", "2"];
    let gamma = homology_json(&[&base[..], &["--complex", "gamma"]].concat());
    let koszul = homology_json(&[&base[..], &["--complex", "koszul"]].concat());
    assert_eq!(gamma, koszul);
}

#[test]
fn output_is_deterministic() {
    let args = ["--operad", "Com", "--algebra", "nilpotent_truncated_polynomial(2)", "--coeffs", "adjoint", "--ring", "Z", "--dmax", "2"];
    let dir = tempfile::tempdir().unwrap();
    let mut dumps = Vec::new();
    for k in 0..2 {
        let (out, csv, dump) = (dir.path().join(format!("{k}.json")), dir.path().join(format!("{k}.csv")), dir.path().join(format!("{k}.txt")));
        let o = gammahom(
            &[&["homology"][..], &args, &["--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--dump", dump.to_str().unwrap()]].concat(),
        );
        assert!(o.status.success());
        dumps.push((o.stdout, std::fs::read(out).unwrap(), std::fs::read(csv).unwrap(), std::fs::read(dump).unwrap()));
    }
    assert_eq!(dumps[0], dumps[1]);
    let csv = String::from_utf8(dumps[0].2.clone()).unwrap();
    assert!(csv.starts_with("degree,betti,torsion\n"));
}

#[test]
fn cochains_over_a_field_match_chains() {
    let base = ["--operad", "Com", "--algebra", "trivial_square_zero(2)", "--ring", "F3", "--dmax", "1"];
    let chains = homology_json(&base);
    let cochains = homology_json(&[&base[..], &["--complex", "cochain"]].concat());
    assert_eq!(betti(&chains), betti(&cochains));
}

#[test]
fn verify_flag_accepts_builtins() {
    let json = homology_json(&["--operad", "Lie", "--algebra", "sl2", "--coeffs", "adjoint", "--ring", "Z", "--dmax", "1", "--verify"]);
    assert_eq!(betti(&json).len(), 2);
}

#[test]
fn invalid_config_exits_2() {
    assert_eq!(gammahom(&["homology", "--ring", "F4"]).status.code(), Some(2));
    assert_eq!(gammahom(&["homology", "--dmax", "9"]).status.code(), Some(2));
    assert_eq!(gammahom(&["homology", "--operad", "Pre-Lie"]).status.code(), Some(2));
    assert_eq!(gammahom(&["homology", "--ring", "Z", "--complex", "koszul"]).status.code(), Some(2));
}

#[test]
fn non_koszul_operad_exits_4() {
    let p = fixture("antiassociative.toml");
    let o = gammahom(&["koszul-info", "--operad", p.to_str().unwrap(), "--rmax", "5"]);
    assert_eq!(o.status.code(), Some(4));
    let o = gammahom(&[
        "homology", "--operad", p.to_str().unwrap(), "--algebra", "trivial_square_zero(1)", "--ring", "Q", "--dmax", "3",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn koszul_info_reports_dimensions() {
    let o = gammahom(&["koszul-info", "--operad", "Lie", "--rmax", "5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let dims: Vec<&str> = text.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(dims, vec!["1"; 5]);
}

#[test]
fn verify_suites_pass() {
    for suite in ["perm", "bar", "koszul", "compare"] {
        let o = gammahom(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
    }
}

#[test]
fn broken_algebra_fails_closure_with_exit_3() {
    let a = fixture("not_associative.toml");
    let args = ["homology", "--operad", "Com", "--algebra", a.to_str().unwrap(), "--ring", "Q", "--dmax", "1"];
    let o = gammahom(&args);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = gammahom(&[&args[..], &["--verify"]].concat());
    assert_eq!(o.status.code(), Some(2));
}
