use std::path::Path;
use std::process::{Command, Output};

fn qtree(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtree"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn gen_forward_sfunc_fit_recovers_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = qtree(&["gen", "snowflake", "3", "3,3,4", "--out", "t.json", "--dot", "t.dot"], d);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(d.join("t.dot")).unwrap().starts_with("digraph"));
    let o = qtree(&["forward", "--tree", "t.json", "--l", "1/2", "--out", "j.json"], d);
    assert!(o.status.success());
    let o = qtree(
        &["sfunc", "--jost", "j.json", "--grid", "0.01:50:2000", "--noise", "1e-6", "--seed", "3", "--out", "s.csv"],
        d,
    );
    assert!(o.status.success());
    let rep = json(&qtree(&["fit", "--samples", "s.csv"], d));
    assert!((rep["l_hat"].as_f64().unwrap() - 0.5).abs() < 5e-5);
    assert_eq!(rep["fraction"]["den"]["coeffs"], serde_json::json!(["6", "0", "-17", "0", "12"]));
    assert_eq!(rep["shapes"].as_array().unwrap().len(), 1);
    assert_eq!(rep["shapes"][0]["p"], 11);
}

#[test]
fn forward_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let o = qtree(&["gen", "path", "2", "--out", "e.json"], dir.path());
    assert!(o.status.success());
    let j = json(&qtree(&["forward", "--tree", "e.json", "--l", "1"], dir.path()));
    assert_eq!(j["psi"]["coeffs"], serde_json::json!(["-1", "0", "1"]));
    assert_eq!(j["l"], "1");
}

#[test]
fn seeded_random_trees_and_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = qtree(&["gen", "random", "--p", "8", "--seed", "7"], dir.path());
    let b = qtree(&["gen", "random", "--p", "8", "--seed", "7"], dir.path());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(json(&a)["p"], 8);
    std::fs::write(dir.path().join("t.json"), stdout(&a)).unwrap();
    let z1 = qtree(&["zeros", "--tree", "t.json", "--l", "1", "--jobs", "1"], dir.path());
    let z2 = qtree(&["zeros", "--tree", "t.json", "--l", "1", "--jobs", "3"], dir.path());
    assert!(z1.status.success());
    assert_eq!(stdout(&z1), stdout(&z2));
}

#[test]
fn invert_example_fraction() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("f.json"),
        r#"{"num":{"coeffs":[0,-26,0,62,0,-36]},"den":{"coeffs":[6,0,-17,0,12]}}"#,
    )
    .unwrap();
    let r = json(&qtree(&["invert", "--fraction", "f.json", "--dot", "m.dot"], dir.path()));
    assert_eq!(r["matches"].as_array().unwrap().len(), 1);
    assert_eq!(r["status"], "ok");
    assert!(dir.path().join("m.dot").exists());
}

#[test]
fn exit_codes_per_stage() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("z.json"), r#"{"num":{"coeffs":[0,1]},"den":{"coeffs":[1]}}"#).unwrap();
    assert_eq!(qtree(&["invert", "--fraction", "z.json"], d).status.code(), Some(4));
    // the 6-vertex star's fraction is out of reach with p_max = 4
    std::fs::write(d.join("s.json"), r#"{"num":{"coeffs":[0,5,0,-5]},"den":{"coeffs":[0,0,1]}}"#).unwrap();
    assert_eq!(qtree(&["invert", "--fraction", "s.json", "--p-max", "4"], d).status.code(), Some(5));
    assert_eq!(qtree(&["invert", "--fraction", "missing.json"], d).status.code(), Some(3));
    assert_eq!(qtree(&["gen", "bogus"], d).status.code(), Some(2));
    assert_eq!(qtree(&["forward", "--tree", "z.json", "--l", "0"], d).status.code(), Some(3));
    let rows: String = (1..100).map(|i| format!("{},1,0\n", i as f64 * 0.1)).collect();
    std::fs::write(d.join("flat.csv"), format!("sqrt_lambda,re_S,im_S\n{rows}")).unwrap();
    assert_eq!(qtree(&["fit", "--samples", "flat.csv"], d).status.code(), Some(6));
}

#[test]
fn roundtrip_and_enumerate() {
    let dir = tempfile::tempdir().unwrap();
    let s = json(&qtree(&["roundtrip", "--p-max", "7"], dir.path()));
    assert_eq!(s["all_pass"], true);
    assert_eq!(s["trees"], 1 + 2 + 4 + 9 + 20 + 48);
    let e = json(&qtree(&["enumerate", "--p", "5"], dir.path()));
    assert_eq!(e.as_array().unwrap().len(), 9);
}
