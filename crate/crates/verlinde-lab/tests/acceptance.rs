//! One line per acceptance criterion. Every criterion is an exact check; the only
//! tolerance is the wall-clock budget next to each suite.

use std::time::{Duration, Instant};
use verlinde_lab::cli::{init_threads, run_suite, Report, RunConfig};

const SEED: u64 = 0;

struct Criterion {
    id: usize,
    name: &'static str,
    suite: &'static str,
    budget: Duration,
    extra: fn(&Report) -> Result<(), String>,
}

fn none(_: &Report) -> Result<(), String> {
    Ok(())
}

fn min_cases(r: &Report, anchor: &str, k: usize) -> Result<(), String> {
    let n = r.checks.iter().filter(|c| c.anchor == anchor).count();
    if n >= k {
        Ok(())
    } else {
        Err(format!("only {n} cases for {anchor}, need {k}"))
    }
}

fn fusion_coverage(r: &Report) -> Result<(), String> {
    // 20 labels A_m(lam), m <= 4, five points: 210 unordered pairs
    min_cases(r, "fusion-rules", 210)
}

fn ver4_coverage(r: &Report) -> Result<(), String> {
    min_cases(r, "hom-power/Ver4", 2)?;
    min_cases(r, "hom-power/coverage", 1)
}

fn ver8_coverage(r: &Report) -> Result<(), String> {
    // 6 points, levels 1..3, Ver and Ver+
    min_cases(r, "phi-exact/Ver8", 36)?;
    min_cases(r, "phi-exact/Ver4", 18)
}

fn monoidal_coverage(r: &Report) -> Result<(), String> {
    min_cases(r, "theta1/monoidal", 200)
}

fn scan_coverage(r: &Report) -> Result<(), String> {
    let scans = r.data["scans"].as_array().ok_or("no scan data")?;
    for (p, n, need, gate) in [(2, 2, 500, true), (2, 3, 200, false), (3, 2, 200, false)] {
        let s = scans
            .iter()
            .find(|s| s["p"] == p && s["n"] == n)
            .ok_or(format!("missing scan ({p},{n})"))?;
        if s["samples"].as_u64().unwrap_or(0) < need || s["gate"] != gate {
            return Err(format!("scan ({p},{n}) has the wrong shape"));
        }
        let failed = s["failed"].as_u64().unwrap_or(0);
        if failed > 0 {
            eprintln!("  scan ({p},{n}): {failed} failures archived with certificates");
        }
    }
    Ok(())
}

fn rank_nullity_coverage(r: &Report) -> Result<(), String> {
    let c = r.checks.iter().find(|c| c.anchor == "linear-algebra/rank-nullity").ok_or("no rank-nullity check")?;
    if c.case.starts_with("500 ") {
        Ok(())
    } else {
        Err(format!("rank-nullity ran on {}", c.case))
    }
}

const MIN: u64 = 60;

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "fusion rules over GF(16)", suite: "fusrules", budget: Duration::from_secs(2 * MIN), extra: fusion_coverage },
        Criterion { id: 2, name: "costandard hom dimensions and sharpness", suite: "lemnabla", budget: Duration::from_secs(2 * MIN), extra: none },
        Criterion { id: 3, name: "tilting hom dimensions", suite: "propt", budget: Duration::from_secs(10 * MIN), extra: none },
        Criterion { id: 4, name: "Steinberg free, quotient homs, distinct restrictions", suite: "firstresult", budget: Duration::from_secs(10 * MIN), extra: none },
        Criterion { id: 5, name: "Hom(P(1), V^4) in Ver(2,2)", suite: "calcver4", budget: Duration::from_secs(5 * MIN), extra: ver4_coverage },
        Criterion { id: 6, name: "exactness boundary for Ver(2,2) and Ver(2,3)", suite: "propci", budget: Duration::from_secs(30 * MIN), extra: ver8_coverage },
        Criterion { id: 7, name: "permutation summands in Ver(2,3)", suite: "corver2n", budget: Duration::from_secs(30 * MIN), extra: none },
        Criterion { id: 8, name: "theta values", suite: "thmclass", budget: Duration::from_secs(2 * MIN), extra: none },
        Criterion { id: 9, name: "theta1 monoidal on 200 pairs", suite: "monoidal", budget: Duration::from_secs(10 * MIN), extra: monoidal_coverage },
        Criterion { id: 10, name: "conjecture scan", suite: "conjecture", budget: Duration::from_secs(60 * MIN), extra: scan_coverage },
        Criterion { id: 11, name: "property suites", suite: "properties", budget: Duration::from_secs(10 * MIN), extra: rank_nullity_coverage },
    ]
}

fn main() {
    init_threads();
    let cfg = RunConfig::seeded(SEED);
    let mut red = 0;
    for c in criteria() {
        let t0 = Instant::now();
        let outcome = run_suite(c.suite, &cfg).map_err(|e| format!("tool error: {e}")).and_then(|r| {
            if let Some(f) = r.failures().next() {
                return Err(format!("{} of {} failed, first {} {}", r.failed, r.checks.len(), f.anchor, f.case));
            }
            (c.extra)(&r)?;
            Ok(r.passed)
        });
        let dt = t0.elapsed();
        let outcome = outcome.and_then(|n| {
            if dt > c.budget {
                Err(format!("took {:.1}s, budget {}s", dt.as_secs_f64(), c.budget.as_secs()))
            } else {
                Ok(n)
            }
        });
        match outcome {
            Ok(n) => println!("PASS {:>2} {:<52} {:>4} checks {:>7.2}s", c.id, c.name, n, dt.as_secs_f64()),
            Err(e) => {
                red += 1;
                println!("FAIL {:>2} {:<52} {}", c.id, c.name, e);
            }
        }
    }
    if red > 0 {
        println!("{red} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria pass");
}
