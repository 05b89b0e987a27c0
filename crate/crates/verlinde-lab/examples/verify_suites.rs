// Running verification suites in-process and through the command-line entry point.

use verlinde_lab::cli::{main_with_args, run_suite, RunConfig, EXIT_PASS};

pub fn run_example() {
    let r = run_suite("fusrules", &RunConfig::seeded(7)).unwrap();
    println!("fusrules: {} passed, {} failed", r.passed, r.failed);
    print!("{}", r.tsv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    assert!(r.ok());

    let out = std::env::temp_dir().join("verlinde-lab-calcver4.json");
    let args = ["verlinde-lab", "verify", "calcver4", "--field", "2,6", "--seed", "1", "--out", out.to_str().unwrap()];
    assert_eq!(main_with_args(args), EXIT_PASS);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    println!("calcver4 modules: {}", report["data"]["modules"]);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
