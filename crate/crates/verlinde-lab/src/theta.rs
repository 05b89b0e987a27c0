//! The symmetric monoidal functors out of `Rep C_2 x C_2`: `Theta^lam_1` into `Ver_4`,
//! `Theta^lam_0` into `Rep C_2`, `Theta^lam_m` into `Rep alpha_2`, and the two functors
//! `Theta^lam_inf`, `Theta_inf` into (graded) vector spaces.
//!
//! Objects go through the Klein classifier. Morphisms, for small levels, go through the
//! cokernel extension `Y -> coker F(Y ⊗ f_Δ)` of a functor `F` known on the subcategory
//! generated by `X = A_(m+1)(lam)`.

use crate::exactla::{Mat, Subspace};
use crate::ffield::{common_field, gf, FieldError, FqField, PP1Point};
use crate::klein::{classify, render_lambda, KleinError, KleinLabel};
use crate::repe::{make_A, strip_projective, tensor, trivial, ERep, LambdaVec, RepError};
use crate::verlinde::{
    basic_algebra, bmodule_map, classify_bmodule, name_table, quot_hom_in, realize, BModule, BRealization,
    BasicAlgebra, NameTable, TensorIdeal, VerError,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("Theta^lam_{level} is not defined for lam = {lam}")]
    Undefined { lam: String, level: usize },
    #[error("no map f: X -> 1 with F(f) != 0")]
    NoGoodF,
    #[error("unexpected value {0}")]
    Unexpected(String),
    #[error(transparent)]
    Klein(#[from] KleinError),
    #[error(transparent)]
    Ver(#[from] VerError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

// ---------------------------------------------------------------- values

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum ThetaValue {
    /// multiplicities of `1`, `V`, `P(1)`
    Ver4Obj(BTreeMap<String, usize>),
    Alpha2Obj { trivial: usize, free: usize },
    C2Obj { trivial: usize, free: usize },
    GradedDims(BTreeMap<i64, usize>),
    Dim(usize),
}

impl ThetaValue {
    pub fn ver4(pairs: &[(&str, usize)]) -> ThetaValue {
        let mut m = BTreeMap::new();
        for &(k, v) in pairs {
            if v > 0 {
                *m.entry(k.to_string()).or_default() += v;
            }
        }
        ThetaValue::Ver4Obj(m)
    }

    pub fn dim(&self) -> usize {
        match self {
            ThetaValue::Ver4Obj(m) => m.iter().map(|(k, v)| ver4_dim(k) * v).sum(),
            ThetaValue::Alpha2Obj { trivial, free } | ThetaValue::C2Obj { trivial, free } => trivial + 2 * free,
            ThetaValue::GradedDims(m) => m.values().sum(),
            ThetaValue::Dim(d) => *d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Direct sum; `None` if the variants differ.
    pub fn add(&self, o: &ThetaValue) -> Option<ThetaValue> {
        use ThetaValue::*;
        Some(match (self, o) {
            (Ver4Obj(a), Ver4Obj(b)) => {
                let mut m = a.clone();
                for (k, v) in b {
                    *m.entry(k.clone()).or_default() += v;
                }
                Ver4Obj(m)
            }
            (Alpha2Obj { trivial: a, free: b }, Alpha2Obj { trivial: c, free: d }) => {
                Alpha2Obj { trivial: a + c, free: b + d }
            }
            (C2Obj { trivial: a, free: b }, C2Obj { trivial: c, free: d }) => C2Obj { trivial: a + c, free: b + d },
            (GradedDims(a), GradedDims(b)) => {
                let mut m = a.clone();
                for (k, v) in b {
                    *m.entry(*k).or_default() += v;
                }
                GradedDims(m)
            }
            (Dim(a), Dim(b)) => Dim(a + b),
            _ => return None,
        })
    }

    /// The zero value of the same variant.
    pub fn zero_like(&self) -> ThetaValue {
        use ThetaValue::*;
        match self {
            Ver4Obj(_) => Ver4Obj(BTreeMap::new()),
            Alpha2Obj { .. } => Alpha2Obj { trivial: 0, free: 0 },
            C2Obj { .. } => C2Obj { trivial: 0, free: 0 },
            GradedDims(_) => GradedDims(BTreeMap::new()),
            Dim(_) => Dim(0),
        }
    }

    /// `1^2` or the free object, for 2-dimensional values.
    pub fn two_dim_type(&self) -> Option<TwoDim> {
        match self {
            ThetaValue::Ver4Obj(m) => {
                let get = |k: &str| m.get(k).copied().unwrap_or(0);
                match (get("1"), get("V"), get("P(1)")) {
                    (2, 0, 0) => Some(TwoDim::Split),
                    (0, 0, 1) => Some(TwoDim::Free),
                    _ => None,
                }
            }
            ThetaValue::Alpha2Obj { trivial, free } | ThetaValue::C2Obj { trivial, free } => match (trivial, free) {
                (2, 0) => Some(TwoDim::Split),
                (0, 1) => Some(TwoDim::Free),
                _ => None,
            },
            _ => None,
        }
    }
}

fn ver4_dim(name: &str) -> usize {
    if name == "P(1)" {
        2
    } else {
        1
    }
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |parts: Vec<String>| if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        let pow = |k: String, m: usize| if m == 1 { k } else { format!("{k}^{m}") };
        match self {
            ThetaValue::Ver4Obj(m) => {
                write!(f, "Ver4[{}]", join(m.iter().map(|(k, v)| pow(k.clone(), *v)).collect()))
            }
            ThetaValue::Alpha2Obj { trivial, free } | ThetaValue::C2Obj { trivial, free } => {
                let tag = if matches!(self, ThetaValue::C2Obj { .. }) { "C2" } else { "alpha2" };
                let mut parts = vec![];
                if *trivial > 0 {
                    parts.push(pow("1".into(), *trivial));
                }
                if *free > 0 {
                    parts.push(pow("P".into(), *free));
                }
                write!(f, "{tag}[{}]", join(parts))
            }
            ThetaValue::GradedDims(m) => {
                write!(f, "Z[{}]", join(m.iter().map(|(k, v)| pow(format!("1<{k}>"), *v)).collect()))
            }
            ThetaValue::Dim(d) => write!(f, "Vec[{d}]"),
        }
    }
}

/// Tensor products of `1`, `V`, `P(1)` in `Ver_4`.
pub fn ver4_fuse(a: &ThetaValue, b: &ThetaValue) -> Option<ThetaValue> {
    let (ThetaValue::Ver4Obj(x), ThetaValue::Ver4Obj(y)) = (a, b) else {
        return None;
    };
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    for (k, m) in x {
        for (l, n) in y {
            let (name, mult) = match (k.as_str(), l.as_str()) {
                ("1", o) | (o, "1") => (o, 1),
                ("V", "V") => ("P(1)", 1),
                ("V", "P(1)") | ("P(1)", "V") => ("V", 2),
                ("P(1)", "P(1)") => ("P(1)", 2),
                _ => return None,
            };
            *out.entry(name.to_string()).or_default() += m * n * mult;
        }
    }
    Some(ThetaValue::Ver4Obj(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoDim {
    Split,
    Free,
}

/// Which functor: `Theta^lam_m` for finite `m`, `Theta^lam_inf`, or `Theta_inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Fin(usize),
    Infinity,
    Graded,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Level, String> {
        match s {
            "inf" => Ok(Level::Infinity),
            "graded" => Ok(Level::Graded),
            _ => s.parse().map(Level::Fin).map_err(|_| format!("bad level {s}")),
        }
    }
}

// ---------------------------------------------------------------- points

/// `F2`, `F4` or `generic`: the orbit type of `lam` used to key the split table.
pub fn lambda_class(lam: &PP1Point) -> &'static str {
    match lam {
        PP1Point::Infinity => "F2",
        PP1Point::Finite(e) => match e.field.degree_of(e.code) {
            1 => "F2",
            2 => "F4",
            _ => "generic",
        },
    }
}

/// `0`, `alpha`, and a generator of GF(16) outside GF(4).
pub fn class_representative(class: &str) -> PP1Point {
    match class {
        "F2" => PP1Point::finite(&gf(2, 1), 0),
        "F4" => {
            let f = gf(2, 2);
            PP1Point::finite(&f, f.alpha().unwrap())
        }
        _ => PP1Point::finite(&gf(2, 4), 2),
    }
}

fn field_with(field: &FqField, lam: &PP1Point) -> Result<FqField, ThetaError> {
    Ok(match lam.field() {
        Some(g) => common_field(field, g)?,
        None => field.clone(),
    })
}

fn lift(m: &ERep, f: &FqField) -> Result<ERep, ThetaError> {
    Ok(if m.field == *f { m.clone() } else { m.extend_field(f)? })
}

// ---------------------------------------------------------------- Theta^lam_1, fast path

/// `Theta^lam_1` for `lam` outside `P^1(F_2)`, via the basic algebra of `Ver_4`.
pub struct Theta1 {
    pub lam: PP1Point,
    pub alg: BasicAlgebra,
    pub table: NameTable,
    seed: u64,
}

impl Theta1 {
    pub fn new(lam: &PP1Point, field: &FqField, seed: u64) -> Result<Theta1, ThetaError> {
        if lam.is_prime_rational() {
            return Err(ThetaError::Undefined { lam: render_lambda(lam), level: 1 });
        }
        let f = field_with(field, lam)?;
        let lv = LambdaVec::klein(lam, &f)?;
        let alg = basic_algebra(2, 2, &lv, seed)?;
        let table = name_table(&alg, seed);
        Ok(Theta1 { lam: lam.clone(), alg, table, seed })
    }

    pub fn bmodule(&self, m: &ERep) -> Result<BModule, ThetaError> {
        let m = lift(m, &self.alg.field)?;
        Ok(realize(&m, &self.alg).bmodule)
    }

    pub fn value(&self, m: &ERep) -> Result<ThetaValue, ThetaError> {
        let c = classify_bmodule(&self.bmodule(m)?, &self.table, self.seed);
        if !c.unmatched.is_empty() {
            return Err(ThetaError::Unexpected(c.to_string()));
        }
        Ok(ThetaValue::Ver4Obj(c.entries))
    }
}

pub fn theta1(m: &ERep, lam: &PP1Point, seed: u64) -> Result<ThetaValue, ThetaError> {
    Theta1::new(lam, &m.field, seed)?.value(m)
}

// ---------------------------------------------------------------- Theta^lam_0

/// `(c', g)`: the subgroup generator acting trivially on `A_1(lam)` and a complement.
fn theta0_generators(m: &ERep, lam: &PP1Point) -> Result<(Mat, Mat), ThetaError> {
    let (g1, g2) = (&m.gens[0], &m.gens[1]);
    match lam {
        PP1Point::Infinity => Ok((g1.clone(), g2.clone())),
        PP1Point::Finite(e) if e.code == 0 => Ok((g2.clone(), g1.clone())),
        PP1Point::Finite(e) if e.code == 1 => Ok((g1.mul(g2), g1.clone())),
        _ => Err(ThetaError::Undefined { lam: render_lambda(lam), level: 0 }),
    }
}

/// Rank of `y` on the subquotient `ker / im` of a square-zero `n` that commutes with `y`.
fn subquotient_rank(n: &Mat, y: &Mat) -> (usize, usize) {
    let ker = Subspace::from_cols(&n.kernel());
    let im = Subspace::from_cols(n);
    let yk = Subspace::from_cols(&y.mul(&ker.basis.transpose()));
    let d = ker.dim() - im.dim();
    (d, yk.sum(&im).dim() - im.dim())
}

/// `Theta^lam_0` for `lam` in `P^1(F_2)`: semisimplify the subgroup fixing `A_1(lam)`.
pub fn theta0(m: &ERep, lam: &PP1Point) -> Result<ThetaValue, ThetaError> {
    let (c, g) = theta0_generators(m, lam)?;
    let one = Mat::identity(&m.field, m.dim);
    let (d, r) = subquotient_rank(&c.sub(&one), &g.sub(&one));
    Ok(ThetaValue::C2Obj { trivial: d - 2 * r, free: r })
}

// ---------------------------------------------------------------- the object rules

fn unit_value(lam: &PP1Point, level: Level, degree: i64) -> ThetaValue {
    match level {
        Level::Fin(1) if !lam.is_prime_rational() => ThetaValue::ver4(&[("1", 1)]),
        Level::Fin(_) => ThetaValue::Alpha2Obj { trivial: 1, free: 0 },
        Level::Infinity => ThetaValue::Dim(1),
        Level::Graded => ThetaValue::GradedDims(BTreeMap::from([(degree, 1)])),
    }
}

fn empty_value(lam: &PP1Point, level: Level) -> ThetaValue {
    unit_value(lam, level, 0).zero_like()
}

fn split_value(t: TwoDim, ver4: bool) -> ThetaValue {
    match (t, ver4) {
        (TwoDim::Split, true) => ThetaValue::ver4(&[("1", 2)]),
        (TwoDim::Free, true) => ThetaValue::ver4(&[("P(1)", 1)]),
        (TwoDim::Split, false) => ThetaValue::Alpha2Obj { trivial: 2, free: 0 },
        (TwoDim::Free, false) => ThetaValue::Alpha2Obj { trivial: 0, free: 1 },
    }
}

/// The value on one indecomposable label.
pub fn theta_label(l: &KleinLabel, lam: &PP1Point, level: Level, seed: u64) -> Result<ThetaValue, ThetaError> {
    let zero = empty_value(lam, level);
    Ok(match l {
        KleinLabel::Proj => zero,
        KleinLabel::Omega(i) => unit_value(lam, level, *i),
        KleinLabel::A { m: j, lam: mu } => {
            let Level::Fin(m) = level else { return Ok(zero) };
            let ver4 = m == 1 && !lam.is_prime_rational();
            if mu != lam || (*j <= m && !ver4) {
                return Ok(zero);
            }
            match (ver4, *j) {
                (true, 1) => ThetaValue::ver4(&[("V", 1)]),
                (true, 2) => ThetaValue::ver4(&[("P(1)", 1)]),
                (false, j) if j == m + 1 => split_value(TwoDim::Free, false),
                _ => split_value(split_verdict(*j, lam, m, seed)?, ver4),
            }
        }
    })
}

/// Object-level `Theta`, driven by the classifier.
pub fn theta_object(m: &ERep, lam: &PP1Point, level: Level, seed: u64) -> Result<ThetaValue, ThetaError> {
    if level == Level::Fin(0) {
        return theta0(m, lam);
    }
    let ms = classify(m, seed)?;
    let mut out = empty_value(lam, level);
    for (l, mult) in &ms.entries {
        let v = theta_label(l, lam, level, seed)?;
        for _ in 0..*mult {
            out = out.add(&v).expect("same variant");
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- the split table

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub class: String,
    pub level: usize,
    pub j: usize,
    pub verdict: TwoDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTable {
    pub version: u32,
    pub rows: Vec<SplitRow>,
}

pub const SPLIT_MAX_LEVEL: usize = 3;
pub const SPLIT_MAX_J: usize = 6;

pub fn split_golden() -> &'static SplitTable {
    static T: OnceLock<SplitTable> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../data/theta_split.json")).expect("golden table"))
}

/// Recomputes the table through the cokernel construction.
pub fn compute_split_table(seed: u64) -> Result<SplitTable, ThetaError> {
    let mut rows = Vec::new();
    for class in ["F2", "F4", "generic"] {
        let lam = class_representative(class);
        for level in 1..=SPLIT_MAX_LEVEL {
            let fun = ThetaFunctor::new(&lam, level, &gf(2, 1), seed)?;
            for j in level + 1..=SPLIT_MAX_J {
                let verdict = fun.split_type(j)?;
                rows.push(SplitRow { class: class.into(), level, j, verdict });
            }
        }
    }
    Ok(SplitTable { version: 1, rows })
}

/// `1^2` or free for `Theta^lam_m(A_j(lam))`, `j > m`, by the cokernel construction.
pub fn theta_split_oracle(j: usize, lam: &PP1Point, m: usize, seed: u64) -> Result<TwoDim, ThetaError> {
    ThetaFunctor::new(lam, m, &gf(2, 1), seed)?.split_type(j)
}

fn split_verdict(j: usize, lam: &PP1Point, m: usize, seed: u64) -> Result<TwoDim, ThetaError> {
    let class = lambda_class(lam);
    if let Some(r) = split_golden().rows.iter().find(|r| r.class == class && r.level == m && r.j == j) {
        return Ok(r.verdict);
    }
    theta_split_oracle(j, lam, m, seed)
}

// ---------------------------------------------------------------- the cokernel construction

/// `F ⊗ coker`-style extension of `F = Hom(X, -)/I` (or of `Ver_4` at level 1).
pub struct ThetaFunctor {
    pub lam: PP1Point,
    pub level: usize,
    /// `A_(level+1)(lam)`
    pub x: ERep,
    /// `f: X -> 1` with `F(f) != 0`
    pub f: Mat,
    pub alg: BasicAlgebra,
    table: Option<NameTable>,
    seed: u64,
}

/// `F(Y ⊗ X)`, the cokernel `Theta(Y)` and its projections.
pub struct ThetaObject {
    pub inner: BRealization,
    pub coker: BModule,
    pub projs: Vec<Mat>,
    pub sections: Vec<Mat>,
}

/// `Theta(g)` as per-vertex matrices between cokernels.
pub struct ThetaMap {
    pub source: ThetaValue,
    pub target: ThetaValue,
    pub blocks: Vec<Mat>,
}

impl ThetaMap {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }
    /// All entries, vertex by vertex.
    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| (0..b.rows).flat_map(move |i| b.row(i).to_vec())).collect()
    }
}

/// The ideal whose quotient on the subcategory generated by `A_l(lam)` is a tensor
/// category: projectives for `l = 1`, `K` for `l = 2` off `F_2`, else generated by
/// `A_(l-1)(lam)`.
fn local_ideal(l: usize, lam: &PP1Point, f: &FqField) -> Result<TensorIdeal, ThetaError> {
    Ok(match l {
        1 => TensorIdeal::projectives(f, 2),
        2 if !lam.is_prime_rational() => TensorIdeal::k(&LambdaVec::klein(lam, f)?),
        _ => TensorIdeal::generated_by(&make_A(l - 1, lam, f)),
    })
}

/// `End(A_l(lam))` modulo the local ideal, as a one-vertex algebra.
pub fn local_algebra(l: usize, lam: &PP1Point, field: &FqField) -> Result<BasicAlgebra, ThetaError> {
    let f = field_with(field, lam)?;
    let x = make_A(l, lam, &f);
    let alg = BasicAlgebra::from_vertices(&f, vec![x], vec![format!("A{l}")], local_ideal(l, lam, &f)?)?;
    if alg.hom_dims[0][0] != 2 {
        return Err(ThetaError::Unexpected(format!("End(A_{l}) has quotient dimension {}", alg.hom_dims[0][0])));
    }
    Ok(alg)
}

/// The action of the radical generator `x` of a 2-dimensional local algebra.
pub fn x_action(alg: &BasicAlgebra, b: &BModule) -> Mat {
    let id = &alg.identities[0];
    let eps = &alg.augmentations[0];
    for k in 0..alg.hom_dims[0][0] {
        let mut v: Vec<u32> = id.iter().map(|&c| alg.field.mul(c, eps[k])).collect();
        v[k] = alg.field.sub(v[k], 1);
        if v.iter().any(|&c| c != 0) {
            return b.act_on(0, 0, &v);
        }
    }
    unreachable!("the algebra is 2-dimensional")
}

impl ThetaFunctor {
    pub fn new(lam: &PP1Point, level: usize, field: &FqField, seed: u64) -> Result<ThetaFunctor, ThetaError> {
        let f = field_with(field, lam)?;
        if level == 0 && !lam.is_prime_rational() {
            return Err(ThetaError::Undefined { lam: render_lambda(lam), level });
        }
        let ver4 = level == 1 && !lam.is_prime_rational();
        let (alg, table) = if ver4 {
            let alg = basic_algebra(2, 2, &LambdaVec::klein(lam, &f)?, seed)?;
            let t = name_table(&alg, seed);
            (alg, Some(t))
        } else {
            (local_algebra(level + 1, lam, &f)?, None)
        };
        let x = make_A(level + 1, lam, &f);
        let one = trivial(&f, 2);
        let q = quot_hom_in(&x, &one, alg.ideal());
        let rx = realize(&x, &alg);
        let r1 = realize(&one, &alg);
        let mut cands: Vec<Mat> = q.reps();
        for a in 0..q.quotient_dim {
            for b in a + 1..q.quotient_dim {
                cands.push(q.rep(a).add(q.rep(b)));
            }
        }
        let good = cands.into_iter().find(|c| bmodule_map(c, &rx, &r1).iter().any(|m| !m.is_zero()));
        let f_map = good.ok_or(ThetaError::NoGoodF)?;
        Ok(ThetaFunctor { lam: lam.clone(), level, x, f: f_map, alg, table, seed })
    }

    pub fn field(&self) -> &FqField {
        &self.alg.field
    }

    fn is_ver4(&self) -> bool {
        self.table.is_some()
    }

    /// `f_Δ = f ⊗ X − X ⊗ f : X ⊗ X -> X`.
    pub fn f_delta(&self) -> Mat {
        let id = Mat::identity(self.field(), self.x.dim);
        self.f.kron(&id).sub(&id.kron(&self.f))
    }

    pub fn object(&self, y: &ERep) -> Result<ThetaObject, ThetaError> {
        let y = lift(y, self.field())?;
        let yx = tensor(&y, &self.x);
        let yxx = tensor(&yx, &self.x);
        let map = Mat::identity(self.field(), y.dim).kron(&self.f_delta());
        let inner = realize(&yx, &self.alg);
        let outer = realize(&yxx, &self.alg);
        let fm = bmodule_map(&map, &outer, &inner);
        let (coker, projs, sections) = inner.bmodule.cokernel(&fm);
        Ok(ThetaObject { inner, coker, projs, sections })
    }

    pub fn value_of(&self, o: &ThetaObject) -> Result<ThetaValue, ThetaError> {
        if let Some(t) = &self.table {
            let c = classify_bmodule(&o.coker, t, self.seed);
            if !c.unmatched.is_empty() {
                return Err(ThetaError::Unexpected(c.to_string()));
            }
            return Ok(ThetaValue::Ver4Obj(c.entries));
        }
        let d = o.coker.total_dim();
        let r = if d == 0 { 0 } else { x_action(&self.alg, &o.coker).rank() };
        Ok(if self.level == 0 {
            ThetaValue::C2Obj { trivial: d - 2 * r, free: r }
        } else {
            ThetaValue::Alpha2Obj { trivial: d - 2 * r, free: r }
        })
    }

    pub fn value(&self, y: &ERep) -> Result<ThetaValue, ThetaError> {
        self.value_of(&self.object(y)?)
    }

    /// `Theta(g)` for an intertwiner `g: src -> tgt`.
    pub fn morphism(&self, g: &Mat, src: &ERep, tgt: &ERep) -> Result<ThetaMap, ThetaError> {
        let g = crate::repe::embed_mat(g, self.field())?;
        let os = self.object(src)?;
        let ot = self.object(tgt)?;
        let gx = g.kron(&Mat::identity(self.field(), self.x.dim));
        let maps = bmodule_map(&gx, &os.inner, &ot.inner);
        let blocks = maps
            .iter()
            .enumerate()
            .map(|(a, m)| ot.projs[a].mul(m).mul(&os.sections[a]))
            .collect();
        Ok(ThetaMap { source: self.value_of(&os)?, target: self.value_of(&ot)?, blocks })
    }

    pub fn split_type(&self, j: usize) -> Result<TwoDim, ThetaError> {
        let v = self.value(&make_A(j, &self.lam, self.field()))?;
        v.two_dim_type().ok_or_else(|| ThetaError::Unexpected(v.to_string()))
    }

    pub fn describe(&self) -> String {
        let target = if self.is_ver4() { "Ver4" } else if self.level == 0 { "Rep C2" } else { "Rep alpha2" };
        format!("Theta^{}_{} -> {target}", render_lambda(&self.lam), self.level)
    }
}

/// Codimension of the kernel of `Theta` on `Hom(1, y)`.
pub fn unit_hom_kernel_codim(fun: &ThetaFunctor, y: &ERep) -> Result<usize, ThetaError> {
    let y = lift(y, fun.field())?;
    let one = trivial(fun.field(), 2);
    let rows = crate::repe::hom_space(&one, &y)
        .basis
        .iter()
        .map(|g| Ok(fun.morphism(g, &one, &y)?.flatten()))
        .collect::<Result<Vec<_>, ThetaError>>()?;
    if rows.is_empty() || rows[0].is_empty() {
        return Ok(0);
    }
    Ok(Mat::from_rows(fun.field(), &rows).rank())
}

/// `Theta^lam_m(g)` through the cokernel construction.
pub fn theta_ext(g: &Mat, src: &ERep, tgt: &ERep, lam: &PP1Point, level: usize, seed: u64) -> Result<ThetaMap, ThetaError> {
    let f = common_field(&src.field, &tgt.field)?;
    ThetaFunctor::new(lam, level, &f, seed)?.morphism(g, src, tgt)
}

// ---------------------------------------------------------------- the three k[x]/x^2 categories

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TensorType {
    RepC2,
    RepAlpha2,
    Ver4Plus,
}

impl fmt::Display for TensorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TensorType::RepC2 => "Rep C2",
            TensorType::RepAlpha2 => "Rep alpha2",
            TensorType::Ver4Plus => "Ver4+",
        };
        write!(f, "{s}")
    }
}

/// The swap of tensor factors on `x ⊗ x`.
pub fn swap_matrix(field: &FqField, d: usize) -> Mat {
    Mat::from_fn(field, d * d, d * d, |r, c| ((c % d) * d + c / d == r) as u32)
}

/// Identifies the quotient of the subcategory generated by `A_l(lam)` from the action of
/// `1 + sigma` on `F(P ⊗ P) = P^2`: write it as `x M` and read off the class of `M`.
pub fn braiding_fingerprint(l: usize, lam: &PP1Point, seed: u64) -> Result<TensorType, ThetaError> {
    let _ = seed;
    let f0 = match lam.field() {
        Some(g) => g.clone(),
        None => gf(2, 1),
    };
    let alg = local_algebra(l, lam, &f0)?;
    let f = alg.field.clone();
    let x = &alg.vertices[0];
    let xx = tensor(x, x);
    let r = realize(&xx, &alg);
    let n = Mat::identity(&f, xx.dim).add(&swap_matrix(&f, x.dim));
    let s = bmodule_map(&n, &r, &r).remove(0);
    let xa = x_action(&alg, &r.bmodule);
    if r.bmodule.total_dim() != 4 || xa.rank() != 2 {
        return Err(ThetaError::Unexpected(format!("F(X ⊗ X) is not free of rank 2 for A_{l}")));
    }
    let x_im = Subspace::from_cols(&xa);
    if !s.mul(&xa).is_zero() || Subspace::from_cols(&s).sum(&x_im).dim() != x_im.dim() {
        return Err(ThetaError::Unexpected("1 + sigma is not divisible by x".into()));
    }
    // representatives of F / xF, their images under x, and M in that basis
    let reps: Vec<usize> = x_im.complement_indices();
    let basis: Vec<Vec<u32>> = reps.iter().map(|&i| xa.col(i)).collect();
    let b = Mat::from_cols(&f, 4, &basis);
    let cols: Vec<Vec<u32>> = reps
        .iter()
        .map(|&i| {
            let mut e = vec![0; 4];
            e[i] = 1;
            let img = s.mul_vec(&e);
            b.solve(&Mat::from_cols(&f, 4, &[img])).expect("image lies in xF").col(0)
        })
        .collect();
    let m = Mat::from_cols(&f, 2, &cols);
    match (m.rank(), m.mul(&m).is_zero()) {
        (1, false) => Ok(TensorType::RepC2),
        (1, true) => Ok(TensorType::RepAlpha2),
        (2, _) => Ok(TensorType::Ver4Plus),
        _ => Err(ThetaError::Unexpected("1 + sigma vanishes".into())),
    }
}

/// What the classification predicts for `B_l(lam)` modulo its maximal ideal.
pub fn expected_tensor_type(l: usize, lam: &PP1Point) -> TensorType {
    match (l, lam.is_prime_rational()) {
        (1, true) => TensorType::RepC2,
        (2, false) => TensorType::Ver4Plus,
        _ => TensorType::RepAlpha2,
    }
}

// ---------------------------------------------------------------- maps 1 -> Omega^-1 1

/// Whether `Theta^lam_inf` kills a nonzero `g: 1 -> Omega^-1 1`: exactly when
/// `g ⊗ A_2(lam)` is not a stable isomorphism, i.e. its cokernel is not projective.
pub fn theta_inf_kills(g: &Mat, target: &ERep, lam: &PP1Point) -> Result<bool, ThetaError> {
    let f = field_with(&target.field, lam)?;
    let t = lift(target, &f)?;
    let g = crate::repe::embed_mat(g, &f)?;
    let a = make_A(2, lam, &f);
    let ta = tensor(&t, &a);
    let ga = g.kron(&Mat::identity(&f, a.dim));
    let (q, _) = crate::repe::quotient(&ta, &Subspace::from_cols(&ga))?;
    Ok(strip_projective(&q).core.dim != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repe::{omega, regular};

    #[test]
    fn object_rules() {
        let f = gf(2, 2);
        let al = PP1Point::finite(&f, f.alpha().unwrap());
        let zero = PP1Point::finite(&f, 0);
        for (j, v) in [(1, ThetaValue::ver4(&[("V", 1)])), (2, ThetaValue::ver4(&[("P(1)", 1)]))] {
            assert_eq!(theta_object(&make_A(j, &al, &f), &al, Level::Fin(1), 0).unwrap(), v);
        }
        assert!(theta_object(&make_A(2, &al, &f), &al, Level::Fin(2), 0).unwrap().is_zero());
        assert!(theta_object(&make_A(1, &zero, &f), &al, Level::Fin(1), 0).unwrap().is_zero());
        assert!(theta_object(&regular(&f, 2), &zero, Level::Fin(1), 0).unwrap().is_zero());
        let om = omega(&trivial(&f, 2), 1);
        assert_eq!(
            theta_object(&om, &al, Level::Graded, 0).unwrap(),
            ThetaValue::GradedDims(BTreeMap::from([(1, 1)]))
        );
        assert_eq!(theta_object(&make_A(3, &al, &f), &al, Level::Infinity, 0).unwrap(), ThetaValue::Dim(0));
    }

    #[test]
    fn theta0_values() {
        let f = gf(2, 1);
        for c in [0, 1] {
            let lam = PP1Point::finite(&f, c);
            assert_eq!(theta0(&make_A(1, &lam, &f), &lam).unwrap(), ThetaValue::C2Obj { trivial: 0, free: 1 });
            assert_eq!(theta0(&trivial(&f, 2), &lam).unwrap(), ThetaValue::C2Obj { trivial: 1, free: 0 });
            assert!(theta0(&regular(&f, 2), &lam).unwrap().is_zero());
        }
    }

    #[test]
    fn fusion_of_ver4() {
        let v = ThetaValue::ver4(&[("V", 1)]);
        let p = ThetaValue::ver4(&[("P(1)", 1)]);
        assert_eq!(ver4_fuse(&v, &v).unwrap(), p);
        assert_eq!(ver4_fuse(&v, &p).unwrap(), ThetaValue::ver4(&[("V", 2)]));
        assert_eq!(ver4_fuse(&p, &p).unwrap(), ThetaValue::ver4(&[("P(1)", 2)]));
    }

    #[test]
    fn json_tags() {
        let v = ThetaValue::Alpha2Obj { trivial: 2, free: 0 };
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"kind":"Alpha2Obj","value":{"trivial":2,"free":0}}"#);
        assert_eq!(serde_json::from_str::<ThetaValue>(&s).unwrap(), v);
    }

    #[test]
    fn swap_is_an_involution() {
        let f = gf(2, 1);
        let s = swap_matrix(&f, 3);
        assert!(s.mul(&s).is_identity());
        assert_eq!(s.get(1, 3), 1);
    }
}
