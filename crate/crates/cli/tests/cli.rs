use std::fs;
use std::path::PathBuf;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qlw(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qlw"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qlw-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn reproduce_b30_prints_the_chain() {
    let r = qlw(&["reproduce", "B30-OAL"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("PASS 2 B30-OAL"));
    assert!(r.stdout.contains("chain: e, i, l', 0, b"));
}

#[test]
fn reproduce_accepts_numbers() {
    let r = qlw(&["reproduce", "1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("PASS 1 G12-PASTE"));
}

#[test]
fn validate_g12() {
    let r = qlw(&["validate", "catalog:G12"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("class: orthomodular-lattice"));
}

#[test]
fn validate_with_class_requirement() {
    assert_eq!(qlw(&["validate", "catalog:O6", "--class", "ortholattice"]).code, 0);
    let r = qlw(&["validate", "catalog:O6", "--class", "orthomodular-lattice"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("violates: orthomodularity"));
}

#[test]
fn missing_files_are_errors() {
    let r = qlw(&["proof", "check", "missing.drv"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing.drv"));
    assert_eq!(qlw(&["validate", "no-such-file"]).code, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(qlw(&["no-such-verb"]).code, 2);
    assert_eq!(qlw(&["reproduce", "NO-SUCH"]).code, 2);
    assert_eq!(qlw(&["eval", "catalog:MO2", "p &", "--assign", "p=a"]).code, 2);
    assert_eq!(qlw(&["translate", "p"]).code, 2);
}

#[test]
fn catalog_show_round_trips_through_validate() {
    let r = qlw(&["catalog", "show", "G12-DIAGRAM"]);
    assert_eq!(r.code, 0);
    let path = scratch("g12.structure", &r.stdout);
    let v = qlw(&["validate", path.to_str().unwrap()]);
    assert!(v.stdout.contains("orthomodular-lattice"));
    assert!(qlw(&["catalog", "list"]).stdout.contains("M4: qmv-table"));
}

#[test]
fn evaluation_in_k5() {
    let r = qlw(&["eval", "catalog:K5", "p | ~p", "--dialect", "BZL", "--assign", "p=1/4"]);
    assert_eq!(r.stdout, "value: 1/4\n");
    let r = qlw(&["eval", "catalog:K5", "p | -p", "--dialect", "BZL", "--assign", "p=1/4"]);
    assert_eq!(r.stdout, "value: 3/4\n");
}

#[test]
fn distributivity_fails_in_mo2() {
    let r = qlw(&["conseq", "(p & q) | (p & r)", "--premise", "p & (q | r)", "--dialect", "OQL"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("structure: MO2"));
    let r = qlw(&["conseq", "(p & q) | (p & r)", "--premise", "p & (q | r)", "--weak", "--structures", "class:ortholattice"]);
    assert_eq!(r.code, 0);
}

#[test]
fn validity_and_countermodels() {
    assert_eq!(qlw(&["valid", "p ->1 p", "--dialect", "OQL"]).code, 0);
    let r = qlw(&["valid", "(p ->1 q) ->1 (-q ->1 -p)", "--dialect", "OQL"]);
    assert_eq!(r.code, 1);
    let r = qlw(&["countermodel", "--premise", "p & -p"]);
    assert_eq!(r.code, 1);
    let r = qlw(&["countermodel", "--premise", "-(p ->1 (q ->1 p))", "--structures", "catalog:MO2", "--model", "full"]);
    assert_eq!(r.code, 1);
    let r = qlw(&["countermodel", "--premise", "-(p ->1 (q ->1 p))", "--structures", "catalog:MO2"]);
    assert_eq!(r.code, 0);
}

#[test]
fn machine_format() {
    let r = qlw(&["--format", "machine", "validate", "catalog:MO2"]);
    assert_eq!(r.stdout, "elements=6\nclass=orthomodular-lattice\nstatus=holds\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["conseq", "(p & q) | (p & r)", "--premise", "p & (q | r)", "--structures", "class:bz-lattice"];
    assert_eq!(qlw(&args).stdout, qlw(&args).stdout);
    let args = ["kripke", "canonical", "catalog:G12", "--assign", "p=a"];
    assert_eq!(qlw(&args).stdout, qlw(&args).stdout);
}

#[test]
fn canonical_frames_round_trip() {
    let r = qlw(&["kripke", "canonical", "catalog:MO2", "--assign", "p=a"]);
    assert_eq!(r.code, 0);
    let path = scratch("mo2.frame", &r.stdout);
    let p = path.to_str().unwrap();
    let c = qlw(&["kripke", "check", p]);
    assert!(c.stdout.contains("orthomodular: true"));
    assert!(c.stdout.contains("algebraically-adequate: true"));
    let e = qlw(&["kripke", "eval", p, "p | -p"]);
    assert!(e.stdout.contains("true: true"));
    let e = qlw(&["kripke", "eval", p, "[]<>p", "--dialect", "modal-B"]);
    assert!(e.stdout.contains("worlds: {a}"), "{}", e.stdout);
}

#[test]
fn modal_translation() {
    let r = qlw(&["translate", "--modal", "-(p & q)"]);
    assert_eq!(r.stdout, "modal: []!([]<>p ^ []<>q)\n");
}

#[test]
fn completion_fills_p9() {
    let r = qlw(&["complete", "catalog:P9"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("embed: E = E"));
    assert!(r.stdout.contains("{G,M}"));
}

#[test]
fn qmv_verbs() {
    assert_eq!(qlw(&["qmv", "validate", "catalog:M4"]).code, 0);
    let r = qlw(&["qmv", "search-conditional", "catalog:M3"]);
    assert!(r.stdout.contains("conditional: a* + b"));
    let ea = qlw(&["qmv", "transform", "catalog:M3"]);
    let path = scratch("m3.psum", &ea.stdout);
    let back = qlw(&["qmv", "transform", path.to_str().unwrap()]);
    assert!(back.stdout.contains("oplus:"));
    assert_eq!(qlw(&["qmv", "validate", path.to_str().unwrap()]).code, 0);
}

#[test]
fn paql_verbs() {
    let r = qlw(&["paql", "validate", "catalog:K5-PSUM"]);
    assert!(r.stdout.contains("class: effect-algebra"));
    assert_eq!(qlw(&["paql", "conseq", "--premise", "--p", "p"]).code, 0);
}

#[test]
fn bz3_verbs() {
    let path = scratch("line.frame", "flavor: ortho\nworlds: i j k\nacc: i j\nacc: j k\nrho: p = i\n");
    let p = path.to_str().unwrap();
    let r = qlw(&["bz3", "eval", p, "~p", "--assign", "p=i/k"]);
    assert_eq!(r.stdout, "value: <{k},{i}>\n");
    let r = qlw(&["bz3", "check-pair-laws", p]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("pair-laws: hold"));
}

#[test]
fn proof_verbs() {
    let r = qlw(&["proof", "check", "sample:oql-orthomodularity"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("accepted: true"));
    let r = qlw(&["proof", "check", "sample:oql-orthomodularity", "--calculus", "OL"]);
    assert_eq!(r.code, 0, "the file names its calculus");
    let bad = scratch("bad.drv", "calculus: OL\n1: [a] |- a & a BY OL1\n");
    let r = qlw(&["proof", "check", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("rejection: step 1"));
    let r = qlw(&["proof", "search", "[a & b] |- b & a", "--calculus", "OL"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("BY OL5(prem="));
    let r = qlw(&["proof", "harness", "sample:bzl-bz2"]);
    assert_eq!(r.code, 0);
    let r = qlw(&["proof", "expand", "sample:bzl3-dr1"]);
    assert_eq!(r.code, 0);
    assert!(!r.stdout.contains("DR1"));
}
