use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn bicat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicat")).args(args).env_remove("BICAT_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn conjugation_fixture_verifies() {
    let o = bicat(&["verify", &fixture("s3-conjugation.struct")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(viii)  pass"), "{text}");
    assert!(text.contains("verdict: pass"));
}

#[test]
fn broken_idempotents_name_condition_iii() {
    let o = bicat(&["verify", &fixture("s3-broken-idempotents.struct"), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let iii = v["conditions"].as_array().unwrap().iter().find(|c| c["condition"] == "(iii)").unwrap();
    assert_eq!(iii["passed"], false);
    assert!(iii["witness"].is_string());
    assert_eq!(v["passed"], false);
}

#[test]
fn malformed_group_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.group");
    std::fs::write(&g, "group Z2 2\n0 1\n1 7\n").unwrap();
    let o = bicat(&["enumerate", "--x", g.to_str().unwrap(), "--b", "catalog:Z2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.group:3:3"), "{err}");
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(bicat(&["verify", "/nonexistent/x.struct"]).status.code(), Some(2));
    assert_eq!(bicat(&["path", "demo", "--grid", "odd"]).status.code(), Some(2));
    assert_eq!(bicat(&["path", "demo", "--grid", "7"]).status.code(), Some(2));
    assert_eq!(bicat(&[]).status.code(), Some(2));
}

#[test]
fn path_demo_example() {
    let o = bicat(&["path", "demo", "--dim", "1", "--grid", "64", "--paths", "1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max |tensor - concat|"));
}

#[test]
fn path_demo_dump_has_one_vector_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("paths.txt");
    let o = bicat(&["path", "demo", "--dim", "3", "--grid", "8", "--paths", "2", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dump).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2 * 9);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 3));
    assert_eq!(rows[0], "0e0 0e0 0e0");
}

#[test]
fn text_and_machine_reports_carry_the_same_facts() {
    let f = fixture("s3-trivial.triple");
    let text = stdout(&bicat(&["maltsev", "p1", &f]));
    let v = json(&bicat(&["maltsev", "p1", &f, "--format", "machine"]));
    assert_eq!(v["p1"], false);
    assert_eq!(v["p1_prime"], false);
    assert!(text.contains(&format!("R(s,t) order {}", v["relation_order"])));
    let w = v["p1_prime_witness"].as_array().unwrap();
    assert!(text.contains(&format!("(P1') FAIL  [{}, {}]", w[0], w[1])));

    let args = ["path", "demo", "--paths", "3", "--grid", "16"];
    let text = stdout(&bicat(&args));
    let mut machine = args.to_vec();
    machine.extend(["--format", "machine"]);
    let v = json(&bicat(&machine));
    for key in ["tensor_concat", "rho_additivity", "lambda_additivity", "boundary", "d0_d1"] {
        let x = v[key].as_f64().unwrap();
        assert!(text.contains(&format!("{x:e}")), "{key} {x}");
    }
}

#[test]
fn reports_are_deterministic_across_runs_and_workers() {
    let args = ["enumerate", "--x", "catalog:V4", "--b", "catalog:Z4", "--format", "machine"];
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_bicat")).args(args).env("BICAT_WORKERS", workers).output().unwrap().stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("4"));
    let v: serde_json::Value = serde_json::from_slice(&one).unwrap();
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn enumeration_dump_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dump");
    let o = bicat(&["enumerate", "--x", &fixture("v4.group"), "--b", "catalog:Z2", "--dump", out.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["count"], 191);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 191);
    for f in files.iter().step_by(37) {
        assert_eq!(bicat(&["verify", f.to_str().unwrap()]).status.code(), Some(0), "{}", f.display());
    }
}

#[test]
fn crossed_module_count() {
    let o = bicat(&["enumerate", "--x", "catalog:Z2", "--b", "catalog:Z2", "--crossed-modules", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["count"], 2);
}

#[test]
fn realize_checks_axioms_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("cells.txt");
    for file in ["v4-z2-unitors.struct", "v4-z2-unitors.ext"] {
        let o = bicat(&["realize", &fixture(file), "--check-axioms", "--dump", dump.to_str().unwrap(), "--format", "machine"]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        let v = json(&o);
        assert_eq!(v["objects"], 2);
        assert!(v["axioms"].as_array().unwrap().iter().all(|a| a["passed"] == true));
        assert!(std::fs::read_to_string(&dump).unwrap().starts_with("objects 2\n"));
    }
}

#[test]
fn realize_refuses_invalid_structures() {
    let o = bicat(&["realize", &fixture("s3-broken-idempotents.struct")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn maltsev_checks() {
    assert_eq!(bicat(&["maltsev", "p1", &fixture("s3-identity.triple")]).status.code(), Some(0));
    assert_eq!(bicat(&["maltsev", "p1", &fixture("s3-trivial.triple")]).status.code(), Some(1));
    let o = bicat(&["maltsev", "equiv", &fixture("s3-conjugation-groupoid.triple"), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["objects"], 6);
    assert_eq!(v["triple_round_trip"], true);
    assert_eq!(v["associativity"]["holds"], true);
    assert_eq!(bicat(&["maltsev", "equiv", &fixture("s3-trivial.triple")]).status.code(), Some(1));
}
