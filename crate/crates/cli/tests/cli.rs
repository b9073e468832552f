use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

struct Run {
    code: i32,
    cert: Value,
    bytes: Vec<u8>,
}

fn galdesc(args: &[&str], input: Option<&Path>) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_galdesc"));
    cmd.args(args).arg("--out").arg(&out);
    if let Some(p) = input {
        cmd.arg("--in").arg(p);
    }
    let status = cmd.output().unwrap().status;
    let bytes = fs::read(&out).unwrap_or_default();
    let cert = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    Run {
        code: status.code().unwrap(),
        cert,
        bytes,
    }
}

fn run_fixture(name: &str) -> Run {
    let command = name.split("__").next().unwrap();
    galdesc(&[command], Some(&fixtures().join(format!("{name}.json"))))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

fn expected_exit(name: &str) -> i32 {
    match name {
        "check-gstructure__broken_cocycle"
        | "check-gstructure__chain_not_morphism"
        | "check-gstructure__homotopy_only" => 1,
        _ => 0,
    }
}

#[test]
fn gaussian_twist_descends_to_the_line_through_one_plus_i() {
    let r = run_fixture("descend-vect__qi_twist");
    assert_eq!(r.code, 0);
    assert_eq!(r.cert["status"], "pass");
    assert_eq!(r.cert["witnesses"]["kbasis"]["data"], json!([["1+1*i"]]));
    assert_eq!(r.cert["provenance"]["operation"], "descend-vect");
}

#[test]
fn broken_cocycle_fails_at_sigma_sigma() {
    let r = run_fixture("check-gstructure__broken_cocycle");
    assert_eq!(r.code, 1);
    assert_eq!(r.cert["status"], "fail");
    let failure = &r.cert["witnesses"]["failure"];
    assert_eq!(failure["kind"], "NotCocycle");
    assert_eq!(failure["pair"], json!(["-1*i", "-1*i"]));
    assert_eq!(r.cert["witnesses"]["lhs"]["data"], json!([["1"]]));
    assert_eq!(r.cert["witnesses"]["rhs"]["data"], json!([["4"]]));
}

#[test]
fn homotopy_only_structure_is_not_strict() {
    let r = run_fixture("check-gstructure__homotopy_only");
    assert_eq!(r.code, 1);
    assert_eq!(r.cert["witnesses"]["failure"]["kind"], "NotStrict");
    assert_eq!(r.cert["witnesses"]["failure"]["element"], "-1*i");
}

#[test]
fn non_morphism_structure_names_the_cover() {
    let r = run_fixture("check-gstructure__chain_not_morphism");
    assert_eq!(r.code, 1);
    assert_eq!(r.cert["witnesses"]["failure"]["kind"], "NotSheafMorphism");
    assert_eq!(r.cert["witnesses"]["failure"]["cover"], json!([0, 1]));
}

#[test]
fn malformed_json_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{\"schema_version\": 1,").unwrap();
    let r = galdesc(&["descend-vect"], Some(&p));
    assert_eq!(r.code, 2);
    assert_eq!(r.cert["status"], "error");
    assert!(r.cert["error"]["message"].as_str().unwrap().contains("malformed JSON"));
}

#[test]
fn schema_errors_carry_json_pointers() {
    let dir = tempfile::tempdir().unwrap();
    let base: Value =
        serde_json::from_slice(&fs::read(fixtures().join("descend-vect__qi_twist.json")).unwrap()).unwrap();

    let mut v = base.clone();
    v["schema_version"] = json!(7);
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "a.json", &v)));
    assert_eq!(
        (r.code, r.cert["error"]["pointer"].clone()),
        (2, json!("/schema_version"))
    );

    let mut v = base.clone();
    v["structure"]["-1*i"]["data"] = json!([["1*i", "0"]]);
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "b.json", &v)));
    assert_eq!(
        (r.code, r.cert["error"]["pointer"].clone()),
        (2, json!("/structure/-1*i/data/0"))
    );

    let mut v = base.clone();
    v["structure"]["-1*i"]["data"] = json!([["1*j"]]);
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "c.json", &v)));
    assert_eq!(
        (r.code, r.cert["error"]["pointer"].clone()),
        (2, json!("/structure/-1*i/data/0/0"))
    );

    let mut v = base.clone();
    v["kind"] = json!("sheaf");
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "d.json", &v)));
    assert_eq!((r.code, r.cert["error"]["pointer"].clone()), (2, json!("/kind")));

    let mut v = base;
    v["field"]["extensions"][0]["modulus"] = json!(["-1", "0", "1"]);
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "e.json", &v)));
    assert_eq!(
        (r.code, r.cert["error"]["pointer"].clone()),
        (2, json!("/field/extensions/0"))
    );
}

#[test]
fn missing_input_is_a_usage_error() {
    let r = galdesc(&["descend-sheaf"], None);
    assert_eq!(r.code, 2);
    assert_eq!(r.cert["status"], "error");
}

#[test]
fn every_fixture_has_its_expected_exit_code_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for name in fixture_names() {
        let r = run_fixture(&name);
        assert_eq!(r.code, expected_exit(&name), "{name}: {}", r.cert["summary"]);
        let cert = dir.path().join(format!("{name}.cert.json"));
        fs::write(&cert, &r.bytes).unwrap();
        let v = galdesc(&["verify"], Some(&cert));
        assert_eq!(v.code, 0, "{name}: {}", v.cert["witnesses"]);
        assert!(!v.cert["witnesses"]["checks"].as_array().unwrap().is_empty(), "{name}");
    }
}

#[test]
fn fixtures_are_in_canonical_form() {
    for name in fixture_names() {
        let text = fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
        let r = run_fixture(&name);
        let mut echoed = serde_json::to_string_pretty(&r.cert["input"]).unwrap();
        echoed.push('\n');
        assert_eq!(echoed, text, "{name}");
    }
}

#[test]
fn loose_input_is_canonicalized() {
    let dir = tempfile::tempdir().unwrap();
    let loose = json!({
        "kind": "vector",
        "dim": 1,
        "schema_version": 1,
        "field": {"extensions": [{"generator": "w", "modulus": ["1", "1", "1"]}], "base": {"prime": 2}},
        "structure": {"w^2": {"rows": 1, "cols": 1, "data": [["w"]]}, "w": {"rows": 1, "cols": 1, "data": [["1"]]}}
    });
    let r = galdesc(&["descend-vect"], Some(&write_json(dir.path(), "loose.json", &loose)));
    assert_eq!(r.code, 0);
    let canonical: Value =
        serde_json::from_slice(&fs::read(fixtures().join("descend-vect__f4_twist.json")).unwrap()).unwrap();
    assert_eq!(r.cert["input"], canonical);
}

#[test]
fn certificates_are_byte_identical_across_runs() {
    for name in [
        "descend-sheaf__twisted_chain",
        "descend-gluing__twisted_line",
        "check-compat__hom",
    ] {
        assert_eq!(run_fixture(name).bytes, run_fixture(name).bytes, "{name}");
    }
}

#[test]
fn tampered_witnesses_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cert = run_fixture("descend-vect__qi_twist").cert;
    cert["witnesses"]["kbasis"]["data"] = json!([["1+2*i"]]);
    let r = galdesc(&["verify"], Some(&write_json(dir.path(), "t1.json", &cert)));
    assert_eq!(r.code, 1);

    let mut cert = run_fixture("descend-sheaf__twisted_chain").cert;
    cert["witnesses"]["descended"]["restrictions"][0]["matrix"]["data"] = json!([["2"]]);
    let r = galdesc(&["verify"], Some(&write_json(dir.path(), "t2.json", &cert)));
    assert_eq!(r.code, 1);

    let mut cert = run_fixture("check-gstructure__broken_cocycle").cert;
    cert["input"]["structure"]["-1*i"]["data"] = json!([["1*i"]]);
    let r = galdesc(&["verify"], Some(&write_json(dir.path(), "t3.json", &cert)));
    assert_eq!(r.code, 1);

    let mut cert = run_fixture("selftest__small").cert;
    cert["witnesses"]["suites"][0]["input_hash"] = json!("00");
    let r = galdesc(&["verify"], Some(&write_json(dir.path(), "t4.json", &cert)));
    assert_eq!(r.code, 1);
}

#[test]
fn extend_then_descend_recovers_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_fixture("extend__chain");
    assert_eq!(r.code, 0);
    let obj = write_json(dir.path(), "ext.json", &r.cert["witnesses"]["object"]);
    let d = galdesc(&["descend-sheaf"], Some(&obj));
    assert_eq!(d.code, 0);
    let input = &r.cert["input"];
    let descended = &d.cert["witnesses"]["descended"];
    for key in ["poset", "stalks", "restrictions"] {
        assert_eq!(descended[key], input[key], "{key}");
    }
}

#[test]
fn selftest_is_deterministic_and_seed_dependent() {
    let small = fixtures().join("selftest__small.json");
    let a = galdesc(&["selftest"], Some(&small));
    let b = galdesc(&["selftest"], Some(&small));
    assert_eq!(a.code, 0);
    assert_eq!(a.bytes, b.bytes);
    let c = galdesc(&["selftest", "--seed", "4"], Some(&small));
    assert_eq!(c.code, 0);
    let hashes = |r: &Run| -> Vec<Value> {
        r.cert["witnesses"]["suites"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["input_hash"].clone())
            .collect()
    };
    assert!(hashes(&a).iter().zip(hashes(&c)).all(|(x, y)| *x != y));
}

#[test]
fn number_field_moduli_may_need_an_assertion() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema_version": 1,
        "kind": "vector",
        "dim": 1,
        "field": {"base": "Q", "extensions": [{
            "generator": "a",
            "modulus": ["1", "0", "0", "0", "1"],
            "automorphisms": ["1*a^3", "-1*a"]
        }]}
    });
    let p = write_json(dir.path(), "q8.json", &doc);
    let r = galdesc(&["extend"], Some(&p));
    assert_eq!(r.code, 2);
    assert_eq!(r.cert["error"]["pointer"], "/field/extensions/0");
    let r = galdesc(&["extend", "--assert-irreducible"], Some(&p));
    assert_eq!(r.code, 0, "{}", r.cert["summary"]);
    assert_eq!(r.cert["witnesses"]["object"]["structure"].as_object().unwrap().len(), 4);
}

#[test]
fn certificate_goes_to_stdout_without_out() {
    let out = Command::new(env!("CARGO_BIN_EXE_galdesc"))
        .args(["descend-vect", "--in"])
        .arg(fixtures().join("descend-vect__qi_twist.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["status"], "pass");
}
