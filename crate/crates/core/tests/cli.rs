use std::path::PathBuf;
use std::process::Command;

use toric_qh::batyrev::Presentation;
use toric_qh::corpus_io::cli::run_cli;

fn toric_qh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-qh")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("toric-qh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const U8: &str = "# U_8\n4 10\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n-1 0 0 1\n0 -1 0 1\n0 1 0 -1\n0 -1 0 0\n0 0 0 -1\n0 0 -1 -1\n";

#[test]
fn u8_is_a_field_summand() {
    let (code, out, _) = toric_qh(&["solve", "u8"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: field_summand"));
    let line = out.lines().find(|l| l.starts_with("(-1, -1, -1, 1)")).unwrap();
    assert!(line.contains("rank 3") && line.contains("degenerate"));
}

#[test]
fn u8_json_report() {
    let (code, out, _) = toric_qh(&["solve", "u8", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["expected"], 24);
    assert_eq!(v["verdict"], "field_summand");
    let points = v["points"].as_array().unwrap();
    assert_eq!(v["found"].as_u64().unwrap() as usize, points.len());
    assert!(points.iter().any(|p| p["nondeg"] == true));
    assert_eq!(v["critical_values"].as_array().unwrap().len(), points.len());
}

#[test]
fn perturbed_u8_is_semisimple() {
    let (code, out, _) = toric_qh(&["solve", "u8", "--perturb", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: semisimple"), "{out}");
}

#[test]
fn cp2_is_semisimple() {
    let (code, out, _) = toric_qh(&["solve", "cp2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("expected 3  found 3  deficit 0"));
    assert!(out.contains("verdict: semisimple"));
}

#[test]
fn spectrum_of_the_line() {
    let (code, out, _) = toric_qh(&["spectrum", "cp1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "-2.00000000+0.00000000i\n2.00000000+0.00000000i\n");
}

#[test]
fn u8_spectrum_flags_the_degenerate_value() {
    let (_, out, _) = toric_qh(&["spectrum", "u8"]);
    assert!(out.lines().any(|l| l.starts_with("-6.00000000+0.00000000i  degenerate")));
}

#[test]
fn valuations_report() {
    let (code, out, _) = toric_qh(&["valuations", "--alpha", "2", "--beta", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("valuation 2/3 (3 roots)"));
    assert!(out.contains("valuation 1 (1 root)"));
    assert!(out.ends_with("two distinct Calabi quasimorphisms (α/β = 2 < 3)\n"));
    let (_, out, _) = toric_qh(&["valuations", "--alpha", "7", "--beta", "2"]);
    assert!(out.contains("criterion inconclusive, single valuation (α/β = 7/2 > 3)"));
    let (_, out, _) = toric_qh(&["valuations", "--alpha", "1", "--beta", "0.4"]);
    assert!(out.contains("two distinct"));
}

#[test]
fn check_reads_polytope_files() {
    let path = temp_file("u8.txt", U8);
    let (code, out, _) = toric_qh(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("dual polytope (N): 10 vertices, 24 facets, 11 lattice points, reflexive: yes"));
    assert!(out.contains("moment polytope (M): 24 vertices, 10 facets, 59 lattice points, reflexive: yes, Delzant: yes"));
    assert!(out.contains("fan: 10 rays, 24 maximal cones, smooth: yes, complete: yes"));
}

#[test]
fn primal_files_give_the_normal_fan() {
    let path = temp_file("cp2_moment.txt", "2 3\n-1 -1\n2 -1\n-1 2\n");
    let (code, out, _) = toric_qh(&["fan", path.to_str().unwrap(), "--primal"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("cones by dimension: 1 3 3"));
    let (_, out, _) = toric_qh(&["solve", path.to_str().unwrap(), "--primal"]);
    assert!(out.contains("verdict: semisimple"));
}

#[test]
fn presentations() {
    let (code, out, _) = toric_qh(&["presentation", "cp2"]);
    assert_eq!(code, 0);
    assert!(out.contains("z1 - z3 = 0"));
    let (code, out, _) = toric_qh(&["presentation", "bl1_cp2", "--support", "0,0,-1,-2", "--json"]);
    assert_eq!(code, 0);
    let p = Presentation::from_json(&out).unwrap();
    assert_eq!(p.quantum.len(), 2);
    assert_eq!(p.to_json() + "\n", out);
}

#[test]
fn potentials() {
    let (_, out, _) = toric_qh(&["potential", "cp2"]);
    assert_eq!(out, "W = x1 + x2 + x1^{-1} x2^{-1}\n");
    let (_, out, _) = toric_qh(&["potential", "bl1_cp2", "--support", "0,0,-1,-2", "--symbolic"]);
    assert!(out.contains("s^{-2} x1^{-1} x2^{-1}"), "{out}");
}

#[test]
fn catalog_lists_every_entry() {
    let (code, out, _) = toric_qh(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 14);
    assert!(out.lines().any(|l| l.starts_with("u8") && l.contains("cones  24")));
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.txt", "2 2\n1 0\n0 x\n");
    let (code, _, err) = toric_qh(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3, column 3"));

    let short = temp_file("short.txt", "2 3\n1 0\n0 1\n");
    assert_eq!(toric_qh(&["check", short.to_str().unwrap()]).0, 2);

    // Not reflexive: the origin is a vertex.
    let flat = temp_file("flat.txt", "2 3\n0 0\n1 0\n0 1\n");
    assert_eq!(toric_qh(&["check", flat.to_str().unwrap()]).0, 1);

    assert_eq!(toric_qh(&["solve", "no_such_thing"]).0, 1);
    assert_eq!(toric_qh(&["presentation", "bl1_cp2", "--support", "0,0,0,0"]).0, 1);
    assert_eq!(toric_qh(&["presentation", "bl1_cp2", "--support", "0,zero,0,0"]).0, 2);
    assert_eq!(toric_qh(&["valuations", "--alpha", "1", "--beta", "2"]).0, 1);
    assert_eq!(toric_qh(&["valuations", "--alpha", "two", "--beta", "1"]).0, 2);
    assert_eq!(toric_qh(&["frobnicate"]).0, 2);
    assert_eq!(toric_qh(&["solve", "cp2", "--coeffs", "1,1"]).0, 1);
    assert_eq!(toric_qh(&["solve", "cp2", "--coeffs", "1,-1,1"]).0, 1);
    assert_eq!(toric_qh(&["--help"]).0, 0);
}

#[test]
fn in_process_runner_matches_the_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(&["toric-qh", "fan", "cp1xcp1"], &mut out, &mut err);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text, toric_qh(&["fan", "cp1xcp1"]).1);
    assert!(text.contains("{z1, z2}") && text.contains("{z3, z4}"));
}
