//! Command surface: module-file tools, Θ/Φ evaluation, and the `verify` suites.
//!
//! Exit codes: 0 when every assertion holds, 1 when an assertion fails, 2 when the tool
//! itself fails (bad input, I/O).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactla::{LaError, Mat};
use crate::ffield::{gf, make_field, FieldError, FqField, PP1Point};
use crate::klein::{classify, fuse_oracle, induced_trivial, subgroups, KleinError, KleinLabel};
use crate::krull::{decompose, iso_test, OperatorModule};
use crate::ofunc::{
    conjecture_scan, hom_power_direct, hom_power_ver, square_split, vertex_of, CategorySpec, OfuncError,
    PhiHarness, PhiOptions,
};
use crate::repe::{
    dsum, dual, hom_space, k_ideal, make_A, make_V, omega, random_module, regular, strip_projective, tensor, trivial,
    zero_module, ERep, LambdaVec, ModuleFile, RepError,
};
use crate::sl2tilt::{
    basis_lv, hom_u_invariants, prime_catalog, restrict, sample_lvs, steinberg, weyl_module, TiltError,
};
use crate::theta::{theta0, theta_object, ver4_fuse, Level, Theta1, ThetaError, ThetaValue};
use crate::verlinde::{basic_algebra, quot_hom, VerError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_TOOL: i32 = 2;

pub const SUITES: [&str; 11] = [
    "fusrules",
    "lemnabla",
    "propt",
    "firstresult",
    "calcver4",
    "propci",
    "corver2n",
    "thmclass",
    "monoidal",
    "conjecture",
    "properties",
];

const CASES: [(u32, u32); 3] = [(2, 2), (2, 3), (3, 2)];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed module file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Klein(#[from] KleinError),
    #[error(transparent)]
    Tilt(#[from] TiltError),
    #[error(transparent)]
    Ver(#[from] VerError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Ofunc(#[from] OfuncError),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

// ---------------------------------------------------------------- configuration

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// Everything a command needs besides its positional inputs. Unset options fall back to
/// per-suite defaults; the seed defaults to 0.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lv: Option<Vec<String>>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn seeded(seed: u64) -> RunConfig {
        RunConfig { seed, ..Default::default() }
    }

    fn field_or(&self, p: u32, k: u32) -> Result<FqField, CliError> {
        let (p, k) = self.field.unwrap_or((p, k));
        Ok(make_field(p, k)?)
    }

    /// The `--lv` entries in `field`, if given.
    fn lv_in(&self, field: &FqField) -> Result<Option<LambdaVec>, CliError> {
        let Some(entries) = &self.lv else { return Ok(None) };
        let codes = entries
            .iter()
            .map(|s| parse_element(field, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(LambdaVec::from_codes(field, &codes)?))
    }
}

pub fn parse_field(s: &str) -> Result<(u32, u32), String> {
    let (p, k) = s.split_once(',').ok_or_else(|| format!("expected p,k, got {s}"))?;
    let p = p.trim().parse().map_err(|_| format!("bad characteristic {p}"))?;
    let k = k.trim().parse().map_err(|_| format!("bad degree {k}"))?;
    Ok((p, k))
}

/// `alpha`, `alpha+1`, `gen` or an integer code.
pub fn parse_element(field: &FqField, s: &str) -> Result<u32, CliError> {
    let code = match s.trim() {
        "alpha" | "a" => field.alpha()?,
        "alpha+1" | "a+1" => field.add(field.alpha()?, 1),
        "gen" | "g" => field.gen(),
        t => t.parse::<u32>().map_err(|_| usage(format!("cannot read field element {t}")))?,
    };
    if code >= field.order() {
        return Err(usage(format!("{code} is not an element of GF({})", field.order())));
    }
    Ok(code)
}

/// A field element as above, or `inf`.
pub fn parse_lambda(field: &FqField, s: &str) -> Result<PP1Point, CliError> {
    match s.trim() {
        "inf" | "infinity" => Ok(PP1Point::Infinity),
        t => Ok(PP1Point::finite(field, parse_element(field, t)?)),
    }
}

// ---------------------------------------------------------------- reports

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub anchor: String,
    pub case: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    fn new(suite: &str, cfg: &RunConfig) -> Report {
        Report {
            suite: suite.into(),
            config: serde_json::to_value(cfg).unwrap(),
            passed: 0,
            failed: 0,
            checks: Vec::new(),
            data: Value::Null,
        }
    }

    fn check(&mut self, anchor: &str, case: impl Into<String>, pass: bool, detail: impl FnOnce() -> String) {
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(Check {
            anchor: anchor.into(),
            case: case.into(),
            pass,
            detail: (!pass).then(detail),
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, anchor: &str, case: impl Into<String>, got: T, want: T) {
        let pass = got == want;
        self.check(anchor, case, pass, || format!("got {got:?}, expected {want:?}"));
    }

    fn data_entry(&mut self, key: &str, v: Value) {
        if self.data.is_null() {
            self.data = json!({});
        }
        self.data[key] = v;
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn tsv(&self) -> String {
        let mut s = String::from("suite\tanchor\tcase\tpass\tdetail\n");
        for c in &self.checks {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                self.suite,
                c.anchor,
                c.case,
                if c.pass { "pass" } else { "FAIL" },
                c.detail.as_deref().unwrap_or("")
            ));
        }
        s
    }
}

// ---------------------------------------------------------------- suites

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    match name {
        "fusrules" => suite_fusrules(cfg),
        "lemnabla" => suite_lemnabla(cfg),
        "propt" => suite_propt(cfg),
        "firstresult" => suite_firstresult(cfg),
        "calcver4" => suite_calcver4(cfg),
        "propci" => suite_propci(cfg),
        "corver2n" => suite_corver2n(cfg),
        "thmclass" => suite_thmclass(cfg),
        "monoidal" => suite_monoidal(cfg),
        "conjecture" => suite_conjecture(cfg),
        "properties" => suite_properties(cfg),
        "all" => {
            let mut all = Report::new("all", cfg);
            for s in SUITES {
                let r = run_suite(s, cfg)?;
                all.passed += r.passed;
                all.failed += r.failed;
                all.checks.extend(r.checks.into_iter().map(|mut c| {
                    c.anchor = format!("{s}/{}", c.anchor);
                    c
                }));
            }
            Ok(all)
        }
        other => Err(CliError::UnknownSuite(other.into())),
    }
}

fn klein_points(f: &FqField) -> Result<Vec<PP1Point>, CliError> {
    let al = f.alpha()?;
    Ok(vec![
        PP1Point::finite(f, 0),
        PP1Point::finite(f, 1),
        PP1Point::Infinity,
        PP1Point::finite(f, al),
        PP1Point::finite(f, f.add(al, 1)),
    ])
}

fn lvs_for(cfg: &RunConfig, p: u32, n: u32, count: usize) -> Result<Vec<LambdaVec>, CliError> {
    if cfg.p == Some(p) && cfg.n == Some(n) {
        if let Some(lv) = cfg.lv_in(basis_lv(p, n).field())? {
            return Ok(vec![lv]);
        }
    }
    Ok(sample_lvs(p, n, count, cfg.seed))
}

fn cases(cfg: &RunConfig) -> Vec<(u32, u32)> {
    match (cfg.p, cfg.n) {
        (Some(p), Some(n)) => vec![(p, n)],
        _ => CASES.to_vec(),
    }
}

fn lv_name(lv: &LambdaVec) -> String {
    let f = lv.field();
    let e: Vec<String> = lv.codes().iter().map(|&c| f.fmt_code(c)).collect();
    format!("GF({})[{}]", f.order(), e.join(","))
}

fn suite_fusrules(cfg: &RunConfig) -> Result<Report, CliError> {
    let f = cfg.field_or(2, 4)?;
    let mmax = cfg.budget.unwrap_or(4);
    let mut labels = Vec::new();
    for m in 1..=mmax {
        for l in klein_points(&f)? {
            labels.push(KleinLabel::a(m, l));
        }
    }
    labels.extend([KleinLabel::Omega(1), KleinLabel::Omega(-2), KleinLabel::Proj]);
    let pairs: Vec<(usize, usize)> =
        (0..labels.len()).flat_map(|i| (i..labels.len()).map(move |j| (i, j))).collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&labels[i], &labels[j]);
            let got = classify(&tensor(&a.construct(&f), &b.construct(&f)), cfg.seed)?;
            let (stable, proj) = fuse_oracle(a, b);
            let pass = got.stable().same_labels(&stable) && got.get(&KleinLabel::Proj) == proj;
            Ok((format!("{a} x {b}"), pass, format!("got {got}, expected {stable} + Proj^{proj}")))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut r = Report::new("fusrules", cfg);
    for (case, pass, detail) in results {
        r.check("fusion-rules", case, pass, || detail);
    }
    Ok(r)
}

fn suite_lemnabla(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("lemnabla", cfg);
    for (p, n) in cases(cfg) {
        let q = p.pow(n) as usize;
        for lv in lvs_for(cfg, p, n, 3)? {
            let one = trivial(lv.field(), n as usize);
            let v = make_V(&lv);
            for i in 1..q {
                let w = weyl_module(i, &gf(p, 1));
                let case = format!("p={p} n={n} lv={} i={i}", lv_name(&lv));
                r.eq("costandard/hom(1,nabla)", case.clone(), hom_u_invariants(&w, &lv, &one)?, 1);
                r.eq("costandard/hom(V,nabla)", case, hom_u_invariants(&w, &lv, &v)?, 2);
            }
        }
        let lv = basis_lv(p, n);
        let w = weyl_module(q, &gf(p, 1));
        let a = hom_u_invariants(&w, &lv, &trivial(lv.field(), n as usize))?;
        let b = hom_u_invariants(&w, &lv, &make_V(&lv))?;
        r.check("costandard/sharpness", format!("p={p} n={n} i={q}"), a != 1 || b != 2, || {
            format!("hom(1,nabla)={a}, hom(V,nabla)={b}")
        });
    }
    Ok(r)
}

fn suite_propt(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("propt", cfg);
    for (p, n) in cases(cfg) {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q)?;
        for lv in lvs_for(cfg, p, n, 3)? {
            let one = trivial(lv.field(), n as usize);
            let v = make_V(&lv);
            for t in &cat[..q] {
                let case = format!("p={p} n={n} lv={} i={}", lv_name(&lv), t.i);
                r.eq("tilting/hom(1,R(T))", case.clone(), hom_u_invariants(&t.hyper, &lv, &one)?, t.nabla_length);
                r.eq(
                    "tilting/hom(V,R(T))",
                    case,
                    hom_u_invariants(&t.hyper, &lv, &v)?,
                    2 * t.nabla_length - t.sl2_inv_dim,
                );
            }
        }
    }
    Ok(r)
}

fn suite_firstresult(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("firstresult", cfg);
    for (p, n) in cases(cfg) {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q - 1)?;
        let lvs = lvs_for(cfg, p, n, 3)?;
        for lv in &lvs {
            let st = strip_projective(&restrict(&steinberg(p, n, &gf(p, 1)), lv)?);
            r.eq(
                "steinberg-is-free",
                format!("p={p} n={n} lv={}", lv_name(lv)),
                (st.free_rank, st.core.dim),
                (1, 0),
            );
            let one = trivial(lv.field(), n as usize);
            for t in &cat[..q - 1] {
                let qh = quot_hom(&one, &restrict(&t.hyper, lv)?, lv);
                r.eq(
                    "quotient-hom-from-unit",
                    format!("p={p} n={n} lv={} i={}", lv_name(lv), t.i),
                    qh.full.dim() - qh.ideal_dim(),
                    t.sl2_inv_dim,
                );
            }
        }
        let lv = &lvs[lvs.len() - 1];
        let cores = cat[..q - 1]
            .iter()
            .map(|t| Ok(OperatorModule::from_erep(&strip_projective(&restrict(&t.hyper, lv)?).core)))
            .collect::<Result<Vec<_>, CliError>>()?;
        for (i, c) in cores.iter().enumerate() {
            let case = format!("p={p} n={n} i={i}");
            r.check("restriction-non-projective", case.clone(), c.dim > 0, || "projective".into());
            let k = decompose(c, cfg.seed.wrapping_add(i as u64)).num_summands();
            r.eq("restriction-indecomposable", case, k, 1);
            for (j, d) in cores.iter().enumerate().skip(i + 1) {
                r.check("restrictions-distinct", format!("p={p} n={n} i={i} j={j}"), iso_test(c, d, cfg.seed).is_none(), || {
                    "isomorphic".into()
                });
            }
        }
    }
    Ok(r)
}

fn alpha_pair_multiset(f: &FqField) -> Result<BTreeMap<String, usize>, CliError> {
    let al = f.alpha()?;
    Ok(BTreeMap::from([
        (KleinLabel::a(1, PP1Point::finite(f, al)).to_string(), 1),
        (KleinLabel::a(1, PP1Point::finite(f, f.add(al, 1))).to_string(), 1),
    ]))
}

fn klein_map(m: &crate::klein::KleinMultiset) -> BTreeMap<String, usize> {
    m.entries.iter().map(|(l, k)| (l.to_string(), *k)).collect()
}

fn suite_calcver4(cfg: &RunConfig) -> Result<Report, CliError> {
    let f = cfg.field_or(2, 6)?;
    let lvs = match cfg.lv_in(&f)? {
        Some(lv) => vec![lv],
        None => {
            let mut v = sample_lvs(2, 2, 3, cfg.seed);
            v.push(LambdaVec::from_codes(&f, &[1, f.alpha()?])?);
            v
        }
    };
    let mut r = Report::new("calcver4", cfg);
    let mut data = Vec::new();
    for lv in &lvs {
        let alg = basic_algebra(2, 2, lv, cfg.seed)?;
        let (p1, v) = (vertex_of(&alg, 2).unwrap(), vertex_of(&alg, 1).unwrap());
        let sq = square_split(&alg, v)?;
        let h = hom_power_ver(&alg, p1, v, &sq)?;
        let got = klein_map(&classify(&h.module, cfg.seed)?);
        let want = alpha_pair_multiset(&alg.field)?;
        let case = format!("lv={}", lv_name(lv));
        r.eq("hom-power/Ver4", case.clone(), &got, &want);
        let d = hom_power_direct(&alg, p1, v, cfg.budget.unwrap_or(1 << 12))?;
        r.eq("hom-power/Ver4-direct-route", case, klein_map(&classify(&d.module, cfg.seed)?), want);
        data.push(json!({ "lv": lv_name(lv), "klein": got }));
    }
    if cfg.lv.is_none() {
        let fields: std::collections::BTreeSet<u32> = lvs.iter().map(|l| l.field().order()).collect();
        r.check("hom-power/coverage", format!("{} fields, {} lv", fields.len(), lvs.len()), fields.len() >= 2 && lvs.len() >= 2, || {
            "needs at least two fields and two lv".into()
        });
    }
    r.data_entry("modules", Value::Array(data));
    Ok(r)
}

fn suite_propci(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("propci", cfg);
    let opts = PhiOptions { budget: cfg.budget.unwrap_or(PhiOptions::default().budget), ..Default::default() };
    let f16 = gf(2, 4);
    let mut lams4 = klein_points(&f16)?;
    lams4.push(PP1Point::finite(&f16, 2));
    let ver4_lvs = match cfg.lv_in(basis_lv(2, 2).field())? {
        Some(lv) => vec![lv],
        None => vec![basis_lv(2, 2), sample_lvs(2, 2, 2, cfg.seed)[1].clone()],
    };
    for lv in &ver4_lvs {
        let h = PhiHarness::new(&CategorySpec::Ver { p: 2, n: 2 }, Some(lv), &opts, cfg.seed)?;
        for lam in &lams4 {
            for m in 1..=3 {
                let v = h.verdict(lam, m, cfg.seed)?;
                let want = m == 1 && !lam.is_prime_rational() && f16.degree_of(fin_code(lam)) == 2;
                let case = format!("Ver(2,2) lv={} lam={} m={m}", lv_name(lv), v.lam);
                r.eq("phi-exact/Ver4", case.clone(), v.exact, want);
                r.eq("phi-exact/witness", case, v.witness.is_some(), v.exact);
            }
        }
    }
    let f64 = gf(2, 6);
    let al = f64.alpha()?;
    let lams8 = [
        PP1Point::finite(&f64, 0),
        PP1Point::finite(&f64, 1),
        PP1Point::Infinity,
        PP1Point::finite(&f64, al),
        PP1Point::finite(&f64, f64.add(al, 1)),
        PP1Point::finite(&f64, f64.gen()),
    ];
    for spec in [CategorySpec::Ver { p: 2, n: 3 }, CategorySpec::VerPlus { p: 2, n: 3 }] {
        let h = PhiHarness::new(&spec, None, &opts, cfg.seed)?;
        for lam in &lams8 {
            for m in 1..=3 {
                let v = h.verdict(lam, m, cfg.seed)?;
                r.eq("phi-exact/Ver8", format!("{} lam={} m={m}", spec.tag(), v.lam), v.exact, false);
            }
        }
    }
    Ok(r)
}

fn fin_code(lam: &PP1Point) -> u32 {
    match lam {
        PP1Point::Finite(e) => e.code,
        PP1Point::Infinity => 0,
    }
}

fn suite_corver2n(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("corver2n", cfg);
    let lvs = match cfg.lv_in(basis_lv(2, 3).field())? {
        Some(lv) => vec![lv],
        None => vec![basis_lv(2, 3), sample_lvs(2, 3, 2, cfg.seed)[1].clone()],
    };
    for lv in &lvs {
        let alg = basic_algebra(2, 3, lv, cfg.seed)?;
        for base in 0..alg.num_vertices() {
            let sq = square_split(&alg, base)?;
            for i in [3, 4] {
                let src = vertex_of(&alg, i).unwrap();
                let c = classify(&hom_power_ver(&alg, src, base, &sq)?.module, cfg.seed)?;
                let bad: Vec<String> = c
                    .entries
                    .iter()
                    .filter(|(l, _)| match l {
                        KleinLabel::Proj => false,
                        KleinLabel::A { m, lam } => !(*m == 1 && lam.is_prime_rational()),
                        KleinLabel::Omega(_) => true,
                    })
                    .map(|(l, _)| l.to_string())
                    .collect();
                let case = format!("lv={} Q=T{i} P={}", lv_name(lv), alg.vertex_label(base));
                r.check("hom-power/Ver2n-permutation", case, bad.is_empty(), || format!("summands {c}"));
            }
        }
    }
    Ok(r)
}

fn suite_thmclass(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("thmclass", cfg);
    let f = cfg.field_or(2, 4)?;
    let pts = klein_points(&f)?;
    let mut lams: Vec<PP1Point> = pts[3..].to_vec();
    if f.order() > 4 {
        lams.push(PP1Point::finite(&f, (2..f.order()).find(|&c| f.degree_of(c) > 2).unwrap()));
    }
    let others: Vec<PP1Point> = pts.iter().chain(&lams).cloned().collect();
    for lam in &lams {
        let t = Theta1::new(lam, &f, cfg.seed)?;
        let ln = crate::klein::render_lambda(lam);
        r.eq("theta1/A1", format!("lam={ln}"), t.value(&make_A(1, lam, &f))?, ThetaValue::ver4(&[("V", 1)]));
        r.eq("theta1/A2", format!("lam={ln}"), t.value(&make_A(2, lam, &f))?, ThetaValue::ver4(&[("P(1)", 1)]));
        r.eq("theta1/A3", format!("lam={ln}"), t.value(&make_A(3, lam, &f))?, ThetaValue::ver4(&[("1", 2)]));
        r.eq("theta1/projective", format!("lam={ln}"), t.value(&regular(&f, 2))?.is_zero(), true);
        for mu in others.iter().filter(|mu| *mu != lam) {
            for j in 1..=3 {
                let case = format!("lam={ln} A({j},{})", crate::klein::render_lambda(mu));
                r.eq("theta1/other-lines", case, t.value(&make_A(j, mu, &f))?.is_zero(), true);
            }
        }
        for (name, words) in subgroups() {
            if name == "E" {
                continue;
            }
            let m = induced_trivial(&f, &words);
            r.eq("theta1/induced", format!("lam={ln} from {name}"), t.value(&m)?.is_zero(), true);
        }
    }
    let f4 = gf(2, 2);
    let p1: Vec<PP1Point> = klein_points(&f4)?[..3].to_vec();
    for lam in &p1 {
        let ln = crate::klein::render_lambda(lam);
        r.eq("theta0/A1", format!("lam={ln}"), theta0(&make_A(1, lam, &f4), lam)?, ThetaValue::C2Obj { trivial: 0, free: 1 });
        for mu in p1.iter().filter(|mu| *mu != lam) {
            let case = format!("lam={ln} A(1,{})", crate::klein::render_lambda(mu));
            r.eq("theta0/other-lines", case, theta0(&make_A(1, mu, &f4), lam)?.is_zero(), true);
        }
    }
    let al = PP1Point::finite(&f4, f4.alpha()?);
    let om = omega(&trivial(&f4, 2), 1);
    r.eq(
        "theta-graded/omega1",
        "Omega(1)",
        theta_object(&om, &al, Level::Graded, cfg.seed)?,
        ThetaValue::GradedDims(BTreeMap::from([(1, 1)])),
    );
    Ok(r)
}

fn suite_monoidal(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("monoidal", cfg);
    let f = cfg.field_or(2, 2)?;
    let al = PP1Point::finite(&f, f.alpha()?);
    let t = Theta1::new(&al, &f, cfg.seed)?;
    let samples = cfg.samples.unwrap_or(200) as u64;
    let base = cfg.seed.wrapping_mul(2 * samples.max(1));
    let results = (0..samples)
        .into_par_iter()
        .map(|s| {
            let m = random_module(&f, 2, 1 + (s % 5) as usize, base + 2 * s);
            let n = random_module(&f, 2, 1 + (s % 3) as usize, base + 2 * s + 1);
            let lhs = t.value(&tensor(&m, &n))?;
            let rhs = ver4_fuse(&t.value(&m)?, &t.value(&n)?);
            Ok((s, lhs, rhs))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    for (s, lhs, rhs) in results {
        r.eq("theta1/monoidal", format!("pair {s}"), Some(lhs), rhs);
    }
    Ok(r)
}

fn suite_conjecture(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("conjecture", cfg);
    let budget = cfg.budget.unwrap_or(10);
    // (p, n, samples, gate): a gated run fails on any sample outside the catalog; an
    // evidence run only requires a certificate for every failure.
    let runs: Vec<(u32, u32, usize, bool)> = match (cfg.p, cfg.n) {
        (Some(p), Some(n)) => vec![(p, n, cfg.samples.unwrap_or(200), true)],
        (None, None) => vec![
            (2, 2, cfg.samples.unwrap_or(500), true),
            (2, 3, cfg.samples.unwrap_or(200), false),
            (3, 2, cfg.samples.unwrap_or(200), false),
        ],
        _ => return Err(usage("--p and --n go together")),
    };
    let mut data = Vec::new();
    for (p, n, samples, gate) in runs {
        let f = basis_lv(p, n).field().clone();
        let lv = cfg.lv_in(&f)?.unwrap_or_else(|| basis_lv(p, n));
        let rep = conjecture_scan(p, n, &lv, samples, budget, cfg.seed)?;
        let failed: Vec<usize> = rep.results.iter().filter(|s| !s.pass).map(|s| s.index).collect();
        let case = format!("p={p} n={n} samples={samples}");
        if gate {
            r.check("conjecture-scan/all-pass", case, failed.is_empty(), || format!("failing samples {failed:?}"));
        } else {
            let certified = rep.results.iter().all(|s| s.pass == s.certificate.is_none());
            r.check("conjecture-scan/evidence", case, certified, || "failure without certificate".into());
        }
        data.push(json!({
            "p": p,
            "n": n,
            "lv": rep.lv,
            "gate": gate,
            "catalog_imax": rep.catalog_imax,
            "catalog": rep.catalog,
            "samples": rep.samples,
            "passed": rep.passed,
            "failed": rep.failed,
            "failures": rep.results.iter().filter(|s| !s.pass).collect::<Vec<_>>(),
        }));
    }
    r.data_entry("scans", Value::Array(data));
    Ok(r)
}

/// Sorted `(dim, mult)` of the parts; each part of `a` must be isomorphic to a part of `b`
/// with the same multiplicity.
fn same_decomposition(m: &OperatorModule, s1: u64, s2: u64) -> bool {
    let (a, b) = (decompose(m, s1), decompose(m, s2));
    let shape = |d: &crate::krull::Decomposition| {
        let mut v: Vec<(usize, usize)> = d.parts.iter().map(|p| (p.dim(), p.mult)).collect();
        v.sort();
        v
    };
    shape(&a) == shape(&b)
        && a.parts.iter().all(|pa| {
            b.parts
                .iter()
                .any(|pb| pb.mult == pa.mult && pb.dim() == pa.dim() && iso_test(&pa.module, &pb.module, s1).is_some())
        })
}

fn random_map(h: &crate::repe::HomSpace, rng: &mut ChaCha8Rng) -> Mat {
    let c: Vec<u32> = (0..h.dim()).map(|_| h.target.field.random(rng)).collect();
    h.combine(&c)
}

fn suite_properties(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new("properties", cfg);
    let s0 = cfg.seed.wrapping_mul(1000);
    let samples = cfg.samples.unwrap_or(500);

    let ks: Vec<(String, bool)> = (0..24u64)
        .into_par_iter()
        .map(|i| {
            let (f, n) = if i % 3 == 2 { (gf(3, 1), 2) } else if i % 3 == 1 { (gf(2, 1), 3) } else { (gf(2, 2), 2) };
            let m = random_module(&f, n, 4 + (i % 6) as usize, s0 + i);
            let om = OperatorModule::from_erep(&m);
            let ok = (1..4).all(|t| same_decomposition(&om, s0 + i, s0 + i + 17 * t));
            (format!("module {i} over GF({}) rank {n} dim {}", f.order(), m.dim), ok)
        })
        .collect();
    for (case, ok) in ks {
        r.check("krull-schmidt/seed-independence", case, ok, || "decompositions differ".into());
    }

    let f4 = gf(2, 2);
    let lv = LambdaVec::from_codes(&f4, &[1, 2])?;
    for i in 0..16u64 {
        let s = s0 + 10 * i;
        let x = random_module(&f4, 2, 5, s);
        let y = random_module(&f4, 2, 5, s + 1);
        let x2 = random_module(&f4, 2, 4, s + 2);
        let y2 = random_module(&f4, 2, 4, s + 3);
        let z = random_module(&f4, 2, 3, s + 4);
        let k = k_ideal(&x, &y, &lv);
        let kmaps = k.maps();
        if kmaps.is_empty() {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut kk = Mat::zeros(&f4, y.dim, x.dim);
        for m in &kmaps {
            kk.add_scaled(f4.random(&mut rng), m);
        }
        let a = random_map(&hom_space(&x2, &x), &mut rng);
        let b = random_map(&hom_space(&y, &y2), &mut rng);
        let outer = k_ideal(&x2, &y2, &lv);
        let comp = outer.hom.coords(&b.mul(&kk).mul(&a)).map(|c| outer.sub.contains(&c));
        r.eq("k-ideal/composition", format!("sample {i}"), comp, Some(true));
        let kz = k_ideal(&tensor(&x, &z), &tensor(&y, &z), &lv);
        let t = kz.hom.coords(&kk.kron(&Mat::identity(&f4, z.dim))).map(|c| kz.sub.contains(&c));
        r.eq("k-ideal/tensor", format!("sample {i}"), t, Some(true));
    }

    for i in 0..40u64 {
        let (f, n) = if i % 2 == 0 { (gf(2, 2), 2) } else { (gf(3, 1), 2) };
        let a = random_module(&f, n, 7, s0 + 2 * i);
        let b = random_module(&f, n, 7, s0 + 2 * i + 1);
        r.eq(
            "duality/hom-dims",
            format!("pair {i} over GF({})", f.order()),
            hom_space(&a, &b).dim(),
            hom_space(&dual(&b), &dual(&a)).dim(),
        );
    }

    let f16 = gf(2, 4);
    let mut labels: Vec<KleinLabel> = (-4..=4).map(KleinLabel::Omega).collect();
    labels.push(KleinLabel::Proj);
    for m in 1..=6 {
        for l in klein_points(&f16)? {
            labels.push(KleinLabel::a(m, l));
        }
    }
    for l in labels {
        let c = classify(&l.construct(&f16), cfg.seed)?;
        r.eq("classifier/round-trip", l.to_string(), c.entries, vec![(l.clone(), 1)]);
    }

    let fields = [gf(2, 1), gf(3, 1), gf(2, 4), gf(5, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(s0);
    let mut bad = Vec::new();
    for i in 0..samples {
        let f = &fields[i % fields.len()];
        let (rows, cols) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
        let mut m = Mat::random(f, rows, cols, &mut rng);
        if i % 4 == 3 && rows > 1 {
            // force a dependent row
            let r0 = m.row(0).to_vec();
            m.row_mut(rows - 1).copy_from_slice(&r0);
        }
        let k = m.kernel();
        let ok = m.rank() + k.cols == cols && m.mul(&k).is_zero() && k.rank() == k.cols;
        if !ok {
            bad.push(i);
        }
    }
    r.check("linear-algebra/rank-nullity", format!("{samples} random matrices"), bad.is_empty(), || {
        format!("failing matrices {bad:?}")
    });
    Ok(r)
}

// ---------------------------------------------------------------- module-file commands

pub fn read_module(path: &Path) -> Result<ERep, CliError> {
    Ok(ERep::from_file(&read_module_file(path)?)?)
}

fn read_module_file(path: &Path) -> Result<ModuleFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MakeKind {
    Trivial,
    Zero,
    Regular,
    A,
    V,
    Omega,
    Tilting,
}

#[derive(Clone, Debug, Default)]
pub struct MakeArgs {
    pub m: Option<usize>,
    pub lam: Option<String>,
    pub i: Option<i64>,
}

pub fn cmd_make(kind: MakeKind, args: &MakeArgs, cfg: &RunConfig) -> Result<ERep, CliError> {
    let f = cfg.field_or(2, 2)?;
    let n = cfg.n.unwrap_or(2) as usize;
    Ok(match kind {
        MakeKind::Trivial => trivial(&f, n),
        MakeKind::Zero => zero_module(&f, n),
        MakeKind::Regular => regular(&f, n),
        MakeKind::A => {
            let m = args.m.ok_or_else(|| usage("A needs --m"))?;
            let lam = parse_lambda(&f, args.lam.as_deref().ok_or_else(|| usage("A needs --lam"))?)?;
            make_A(m, &lam, &f)
        }
        MakeKind::V => make_V(&cfg.lv_in(&f)?.ok_or_else(|| usage("V needs --lv"))?),
        MakeKind::Omega => omega(&trivial(&f, n), args.i.unwrap_or(1)),
        MakeKind::Tilting => {
            let lv = cfg.lv_in(&f)?.ok_or_else(|| usage("tilting needs --lv"))?;
            let i = args.i.filter(|&i| i >= 0).ok_or_else(|| usage("tilting needs --i >= 0"))? as usize;
            let cat = prime_catalog(f.p(), i)?;
            restrict(&cat[i].hyper, &lv)?
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CombineOp {
    Tensor,
    Dsum,
    Dual,
}

pub fn cmd_combine(op: CombineOp, mods: &[ERep]) -> Result<ERep, CliError> {
    let first = mods.first().ok_or_else(|| usage("no input modules"))?;
    if mods.iter().any(|m| !m.same_group(first)) {
        return Err(usage("modules live over different groups or fields"));
    }
    Ok(match op {
        CombineOp::Dual if mods.len() == 1 => dual(first),
        CombineOp::Dual => return Err(usage("dual takes one module")),
        CombineOp::Tensor => mods[1..].iter().fold(first.clone(), |a, b| tensor(&a, b)),
        CombineOp::Dsum => mods[1..].iter().fold(first.clone(), |a, b| dsum(&a, b)),
    })
}

/// Summands with dimension and multiplicity, and Klein labels for modules over `C_2^2`.
pub fn cmd_decompose(m: &ERep, cfg: &RunConfig) -> Result<Value, CliError> {
    let dec = decompose(&OperatorModule::from_erep(m), cfg.seed);
    let klein = m.p == 2 && m.n == 2;
    let mut rows = Vec::new();
    for part in &dec.parts {
        let label = match (klein, part.module.erep()) {
            (true, Some(rep)) => {
                let c = classify(rep, cfg.seed)?;
                Some(c.entries.first().map(|(l, _)| l.to_string()).unwrap_or_default())
            }
            _ => part.label.clone(),
        };
        rows.push((part.dim(), label, part.mult));
    }
    rows.sort();
    let mut labels = BTreeMap::new();
    for (_, l, k) in &rows {
        if let Some(l) = l {
            *labels.entry(l.clone()).or_insert(0) += k;
        }
    }
    let summands: Vec<Value> = rows
        .iter()
        .map(|(d, l, k)| json!({ "dim": d, "mult": k, "label": l }))
        .collect();
    let mut out = json!({ "dim": dec.dim, "summands": summands });
    if klein {
        out["labels"] = json!(labels);
    }
    Ok(out)
}

pub fn cmd_classify(m: &ERep, cfg: &RunConfig) -> Result<Value, CliError> {
    if m.p != 2 || m.n != 2 {
        return Err(usage("classification needs a module over the Klein four group"));
    }
    Ok(classify(m, cfg.seed)?.to_json())
}

pub fn cmd_theta(m: &ERep, lam: &str, level: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let lam = parse_lambda(&m.field, lam)?;
    let level: Level = level.parse().map_err(usage)?;
    let v = theta_object(m, &lam, level, cfg.seed)?;
    Ok(theta_json(&v))
}

fn theta_json(v: &ThetaValue) -> Value {
    let t = serde_json::to_value(v).unwrap();
    t["value"].clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CategoryKind {
    Ver,
    VerPlus,
    Rep,
}

/// `Rep` reads the generators of `H` from the module file without imposing relations.
pub fn cmd_phi(
    kind: CategoryKind,
    file: Option<&Path>,
    lam: &str,
    level: usize,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    let (p, n) = (cfg.p.unwrap_or(2), cfg.n.unwrap_or(2));
    let spec = match kind {
        CategoryKind::Ver => CategorySpec::Ver { p, n },
        CategoryKind::VerPlus => CategorySpec::VerPlus { p, n },
        CategoryKind::Rep => {
            let mf = read_module_file(file.ok_or_else(|| usage("rep needs a file with the group generators"))?)?;
            let field = mf.field.to_field()?;
            let gens = mf.gens.iter().map(|g| Mat::from_json(&field, g)).collect::<Result<Vec<_>, _>>()?;
            CategorySpec::RepH { field, gens }
        }
    };
    let lv = match &spec {
        CategorySpec::RepH { .. } => None,
        _ => cfg.lv_in(basis_lv(p, n).field())?,
    };
    let opts = PhiOptions { budget: cfg.budget.unwrap_or(PhiOptions::default().budget), ..Default::default() };
    let h = PhiHarness::new(&spec, lv.as_ref(), &opts, cfg.seed)?;
    let lamf = cfg.field_or(2, 4)?;
    let lam = parse_lambda(&lamf, lam)?;
    Ok(serde_json::to_value(h.verdict(&lam, level, cfg.seed)?)?)
}

// ---------------------------------------------------------------- clap surface

#[derive(Debug, Parser)]
#[command(name = "verlinde-lab", about = "Exact computations in Rep C_p^n, tilting modules and Verlinde categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: CommonOpts,
}

#[derive(Debug, clap::Args)]
pub struct CommonOpts {
    /// working field as p,k
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<(u32, u32)>,
    /// lambda vector entries: codes, alpha, alpha+1 or gen
    #[arg(long, global = true, value_delimiter = ',')]
    pub lv: Option<Vec<String>>,
    /// seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// dimension budget
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite (or `all`)
    Verify { suite: String },
    /// Write a module file
    Make {
        #[arg(value_enum)]
        kind: MakeKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        lam: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        i: Option<i64>,
    },
    /// Tensor, direct sum or dual of module files
    Combine {
        #[arg(value_enum)]
        op: CombineOp,
        files: Vec<PathBuf>,
    },
    Decompose { file: PathBuf },
    Classify { file: PathBuf },
    Theta {
        file: PathBuf,
        #[arg(long)]
        lam: String,
        #[arg(long, default_value = "1")]
        level: String,
    },
    /// Decide exactness of the O-functor for a category
    Phi {
        #[arg(value_enum)]
        category: CategoryKind,
        file: Option<PathBuf>,
        #[arg(long)]
        lam: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
}

impl CommonOpts {
    fn config(&self) -> RunConfig {
        RunConfig {
            field: self.field,
            lv: self.lv.clone(),
            seed: self.seed,
            samples: self.samples,
            budget: self.budget,
            p: self.p,
            n: self.n,
            out: self.out.clone(),
            format: self.format,
        }
    }
}

/// Caps the rayon pool at `VERLINDE_LAB_THREADS` when set.
pub fn init_threads() {
    if let Some(k) = std::env::var("VERLINDE_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

fn tsv_of_value(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, x)| format!("{k}\t{x}\n")).collect(),
        other => format!("{other}\n"),
    }
}

fn emit(text: &str, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_value(v: &Value, cfg: &RunConfig) -> String {
    match cfg.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).unwrap()),
        Format::Tsv => tsv_of_value(v),
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<i32, CliError> {
    let module_out = |m: &ERep| -> Result<i32, CliError> {
        emit(&format!("{}\n", serde_json::to_string_pretty(&m.to_file())?), cfg)?;
        Ok(EXIT_PASS)
    };
    match cmd {
        Command::Verify { suite } => {
            let r = run_suite(suite, cfg)?;
            let text = match cfg.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&r)?),
                Format::Tsv => r.tsv(),
            };
            emit(&text, cfg)?;
            for c in r.failures() {
                eprintln!("FAIL {} {}: {}", c.anchor, c.case, c.detail.as_deref().unwrap_or(""));
            }
            eprintln!("{}: {} passed, {} failed", r.suite, r.passed, r.failed);
            Ok(r.exit_code())
        }
        Command::Make { kind, m, lam, i } => {
            module_out(&cmd_make(*kind, &MakeArgs { m: *m, lam: lam.clone(), i: *i }, cfg)?)
        }
        Command::Combine { op, files } => {
            let mods = files.iter().map(|p| read_module(p)).collect::<Result<Vec<_>, _>>()?;
            module_out(&cmd_combine(*op, &mods)?)
        }
        Command::Decompose { file } => {
            emit(&render_value(&cmd_decompose(&read_module(file)?, cfg)?, cfg), cfg)?;
            Ok(EXIT_PASS)
        }
        Command::Classify { file } => {
            emit(&render_value(&cmd_classify(&read_module(file)?, cfg)?, cfg), cfg)?;
            Ok(EXIT_PASS)
        }
        Command::Theta { file, lam, level } => {
            emit(&render_value(&cmd_theta(&read_module(file)?, lam, level, cfg)?, cfg), cfg)?;
            Ok(EXIT_PASS)
        }
        Command::Phi { category, file, lam, level } => {
            emit(&render_value(&cmd_phi(*category, file.as_deref(), lam, *level, cfg)?, cfg), cfg)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_TOOL } else { EXIT_PASS };
        }
    };
    init_threads();
    let cfg = cli.opts.config();
    match execute(&cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_TOOL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_parsing() {
        let f = gf(2, 4);
        let a = f.alpha().unwrap();
        assert_eq!(parse_element(&f, "alpha").unwrap(), a);
        assert_eq!(parse_element(&f, "alpha+1").unwrap(), f.add(a, 1));
        assert_eq!(parse_element(&f, "7").unwrap(), 7);
        assert!(parse_element(&f, "16").is_err());
        assert!(parse_element(&gf(2, 3), "alpha").is_err());
        assert!(parse_lambda(&f, "inf").unwrap().is_infinity());
        assert_eq!(parse_field("2,6").unwrap(), (2, 6));
        assert!(parse_field("26").is_err());
    }

    #[test]
    fn unknown_suite_is_a_tool_error() {
        assert!(matches!(run_suite("nope", &RunConfig::default()), Err(CliError::UnknownSuite(_))));
        assert_eq!(main_with_args(["verlinde-lab", "verify", "nope"]), EXIT_TOOL);
    }

    #[test]
    fn failed_assertions_exit_with_one() {
        let mut r = Report::new("x", &RunConfig::default());
        r.eq("a", "c", 1, 1);
        assert_eq!(r.exit_code(), EXIT_PASS);
        r.eq("a", "d", 1, 2);
        assert_eq!((r.exit_code(), r.failed), (EXIT_FAIL, 1));
        assert_eq!(r.failures().next().unwrap().detail.as_deref(), Some("got 1, expected 2"));
        assert!(r.tsv().contains("FAIL"));
    }

    #[test]
    fn classify_zero_module() {
        let z = zero_module(&gf(2, 2), 2);
        assert_eq!(cmd_classify(&z, &RunConfig::default()).unwrap(), json!({}));
    }

    #[test]
    fn theta_of_a1_alpha() {
        let f = gf(2, 2);
        let a1 = make_A(1, &PP1Point::finite(&f, f.alpha().unwrap()), &f);
        assert_eq!(cmd_theta(&a1, "alpha", "1", &RunConfig::default()).unwrap(), json!({"V": 1}));
    }
}
