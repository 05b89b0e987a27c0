use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verlinde-lab"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("verlinde-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn module_file_round_trip() {
    let a2 = scratch("a2.json");
    let aa = scratch("aa.json");
    assert_eq!(run(&["make", "a", "--m", "2", "--lam", "alpha", "--field", "2,2", "--out", a2.to_str().unwrap()]).0, 0);
    let a = a2.to_str().unwrap();
    assert_eq!(run(&["combine", "tensor", a, a, "--out", aa.to_str().unwrap()]).0, 0);
    let d = json(&["decompose", aa.to_str().unwrap()]);
    assert_eq!(d["labels"], serde_json::json!({"A(2,alpha)": 2, "Proj": 2}));
    assert_eq!(d["dim"], 16);

    let z = scratch("zero.json");
    run(&["make", "zero", "--out", z.to_str().unwrap()]);
    assert_eq!(json(&["classify", z.to_str().unwrap()]), serde_json::json!({}));

    let a1 = scratch("a1.json");
    run(&["make", "a", "--m", "1", "--lam", "alpha", "--out", a1.to_str().unwrap()]);
    let t = json(&["theta", a1.to_str().unwrap(), "--lam", "alpha", "--level", "1"]);
    assert_eq!(t, serde_json::json!({"V": 1}));
    let (_, tsv) = run(&["classify", aa.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(tsv, "A(2,alpha)\t2\nProj\t2\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "fusrules", "--field", "2,4", "--seed", "7"]).0, 0);
    assert_eq!(run(&["verify", "nosuch"]).0, 2);
    assert_eq!(run(&["classify", "/nonexistent/m.json"]).0, 2);
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"p\": 2}").unwrap();
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).0, 2);
    // a field without alpha
    assert_eq!(run(&["verify", "fusrules", "--field", "2,3"]).0, 2);
    assert_eq!(run(&["--bogus"]).0, 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "conjecture", "--p", "2", "--n", "3", "--samples", "100", "--seed", "3"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let r: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["failed"], 0);
    assert_eq!(r["data"]["scans"][0]["passed"], 100);
}

#[test]
fn calcver4_report_names_the_alpha_lines() {
    let r = json(&["verify", "calcver4", "--field", "2,6", "--seed", "1"]);
    let want = serde_json::json!({"A(1,alpha)": 1, "A(1,alpha+1)": 1});
    let mods = r["data"]["modules"].as_array().unwrap();
    assert!(mods.len() >= 2);
    assert!(mods.iter().all(|m| m["klein"] == want));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["anchor"].as_str().unwrap().starts_with("hom-power/")));
}

#[test]
fn phi_on_group_generators() {
    // the regular representation of C2 over GF(4)
    let f = scratch("c2.json");
    assert_eq!(run(&["make", "regular", "--n", "1", "--field", "2,2", "--out", f.to_str().unwrap()]).0, 0);
    let (code, out) = run(&["phi", "rep", f.to_str().unwrap(), "--lam", "alpha", "--level", "1", "--field", "2,2"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], true);
}
