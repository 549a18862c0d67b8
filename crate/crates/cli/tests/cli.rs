use std::path::PathBuf;
use std::process::{Command, Output};

use polystoch::{latin, LatinHypercube, Tensor};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polystoch"));
    c.env_remove("POLYSTOCH_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir: PathBuf = std::env::temp_dir().join(format!("polystoch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn cyclic_transversal_counts() {
    for (n, expected) in [(3, "3"), (4, "0"), (5, "15")] {
        let square = stdout(&run(&["construct", "cyclic", "2", &n.to_string()]));
        let file = scratch(&format!("cyclic{n}.txt"), &square);
        let o = run(&["transversals", &file]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), expected);
    }
}

#[test]
fn a6_certificate_verifies_and_tampering_is_caught() {
    let cert = stdout(&run(&["construct", "a6", "--certificate"]));
    let good = scratch("a6-cert.json", &cert);
    let o = run(&["verify", "certificate", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass"));
    assert_eq!(run(&["verify-certificate", &good]).status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&cert).unwrap();
    v["target"]["entries"][0] = "1".into();
    let o = run(&["verify", "certificate", &scratch("bad-cert.json", &v.to_string())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn a6_permanent_is_exact_rational() {
    let file = scratch("a6.json", &stdout(&run(&["construct", "a6"])));
    let o = run(&["--json", "permanent", &file]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a = Tensor::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let expected = polystoch::permanent::permanent1(&a).unwrap().value;
    assert_eq!(v["value"], expected.to_string());
}

#[test]
fn repro_named_claim_passes() {
    let o = run(&["repro", "zer34-twelve-lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS zer34-twelve-lines"));
}

#[test]
fn repro_lists_every_claim() {
    let o = run(&["repro", "list"]);
    assert_eq!(stdout(&o).lines().count(), polystoch::repro::CLAIMS.len());
    assert_eq!(run(&["repro", "no-such-claim"]).status.code(), Some(2));
}

#[test]
fn mixed_transversal_absent_for_neighbouring_zero_squares() {
    let c = latin::cyclic(2, 4).unwrap();
    let d = latin::interchange_hyperplanes(&c, 0, 0, 1).unwrap();
    let a = scratch("mixed-c.txt", &c.to_text());
    let b = scratch("mixed-d.json", &d.to_json());
    let o = run(&["mixed", &a, &b]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "none");
}

#[test]
fn mols_search_fallback_gives_orthogonal_pair() {
    let o = run(&["--json", "construct", "mols", "10"]);
    assert!(o.status.success());
    let pair: Vec<LatinHypercube> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(pair[0].order(), 10);
    assert!(latin::are_orthogonal(&pair[0], &pair[1]));
    assert_eq!(run(&["construct", "mols", "6"]).status.code(), Some(2));
}

#[test]
fn output_is_independent_of_thread_count() {
    let h = latin::cyclic(3, 5).unwrap();
    let u = Tensor::uniform(4, 5).unwrap();
    let a = u.lerp(&latin::p_of_h(&h), &polystoch::rational::ratio(1, 3)).unwrap();
    let file = scratch("threads.json", &a.to_json());
    let one = run(&["--threads", "1", "--json", "permanent", &file]);
    let four = run(&["--threads", "4", "--json", "permanent", &file]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn malformed_input_exits_with_two() {
    let file = scratch("broken.txt", "012\n12\n");
    let o = run(&["permanent", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn uniform_is_not_a_vertex_but_permutation_matrices_are() {
    let u = scratch("uniform.json", &Tensor::uniform(3, 3).unwrap().to_json());
    assert_eq!(run(&["verify", "vertex", &u]).status.code(), Some(1));
    assert_eq!(run(&["verify", "polystochastic", &u]).status.code(), Some(0));
    assert_eq!(run(&["verify", "permutation", &u]).status.code(), Some(1));
    let p = scratch("cyclic3.txt", &latin::cyclic(2, 3).unwrap().to_text());
    assert_eq!(run(&["verify", "vertex", &p]).status.code(), Some(0));
}

#[test]
fn species_equivalence_of_a_transpose() {
    let h = latin::linear_hypercube(2, 5, 0, &[1, 2]).unwrap();
    let t = latin::apply_group(&h, &[1, 0, 2], &[(0..5).collect(), (0..5).collect(), (0..5).collect()]).unwrap();
    let a = scratch("sp-a.txt", &h.to_text());
    let b = scratch("sp-b.txt", &t.to_text());
    assert_eq!(run(&["species", "equiv", &a, &b]).status.code(), Some(0));
    let c = scratch("sp-c.txt", &latin::cyclic(2, 5).unwrap().to_text());
    let lab = scratch("sp-d.txt", &polystoch::constructions::lab(6, 1, 1).unwrap().to_text());
    assert_eq!(run(&["species", "equiv", &c, &lab]).status.code(), Some(2));
    let (klein, _) = polystoch::constructions::mols_pair(4).unwrap();
    let k = scratch("sp-k.txt", &klein.to_text());
    let c4 = scratch("sp-c4.txt", &latin::cyclic(2, 4).unwrap().to_text());
    assert_eq!(run(&["species", "equiv", &c4, &k]).status.code(), Some(1));
}

#[test]
fn cap_from_environment_reports_undecided() {
    let o = bin().args(["species", "count", "6", "3"]).env("POLYSTOCH_CAP", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn scan_reports_values_below_the_uniform_permanent() {
    let v = scratch("scan-v.txt", &latin::cyclic(2, 4).unwrap().to_text());
    let o = run(&["--json", "scan", "--eps", "1/100,1/10", &v]);
    assert!(o.status.success());
    let out: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["baseline"], "9/4");
    assert!(out["values"].as_array().unwrap().iter().all(|r| r["vs_baseline"] == "<"));
}
