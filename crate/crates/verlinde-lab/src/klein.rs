//! Naming indecomposable modules of the Klein four group `C_2 x C_2`: the projective
//! cover `kE`, the Heller shifts `Omega^i 1`, and the modules `A_m(lambda)`.

use crate::exactla::Mat;
use crate::ffield::{factor_univariate, make_field, roots, FieldError, FieldSpec, FqField, PP1Point, Poly};
use crate::krull::{decompose, Decomposition, OperatorModule};
use crate::repe::{omega, radical, socle, top, trivial, ERep, RepError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KleinError {
    #[error("not a module over C2 x C2")]
    NotKlein,
    #[error("degenerate pencil on an even-dimensional indecomposable of dimension {0}")]
    DegeneratePencil(usize),
    #[error("odd-dimensional indecomposable with (dim, top, socle) = {0:?} matches no Heller shift")]
    UnknownOdd((usize, usize, usize)),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KleinLabel {
    Proj,
    Omega(i64),
    A { m: usize, lam: PP1Point },
}

impl KleinLabel {
    pub fn dim(&self) -> usize {
        match self {
            KleinLabel::Proj => 4,
            KleinLabel::Omega(i) => 2 * i.unsigned_abs() as usize + 1,
            KleinLabel::A { m, .. } => 2 * m,
        }
    }

    pub fn a(m: usize, lam: PP1Point) -> KleinLabel {
        KleinLabel::A { m, lam }
    }

    /// Builds a module with this label over `field`.
    pub fn construct(&self, field: &FqField) -> ERep {
        match self {
            KleinLabel::Proj => crate::repe::regular(field, 2),
            KleinLabel::Omega(i) => omega(&trivial(field, 2), *i),
            KleinLabel::A { m, lam } => crate::repe::make_A(*m, lam, field),
        }
    }

    fn sort_key(&self) -> (u8, i64, String) {
        match self {
            KleinLabel::Omega(i) => (0, *i, String::new()),
            KleinLabel::A { m, lam } => (1, *m as i64, render_lambda(lam)),
            KleinLabel::Proj => (2, 0, String::new()),
        }
    }
}

impl fmt::Display for KleinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KleinLabel::Proj => write!(f, "Proj"),
            KleinLabel::Omega(i) => write!(f, "Omega({i})"),
            KleinLabel::A { m, lam } => write!(f, "A({m},{})", render_lambda(lam)),
        }
    }
}

/// `inf`, `0`, `1`, `alpha`, `alpha+1`, or `minpoly:index` where the index locates the
/// point among the roots of its minimal polynomial in the smallest field containing it.
pub fn render_lambda(lam: &PP1Point) -> String {
    let e = match lam {
        PP1Point::Infinity => return "inf".into(),
        PP1Point::Finite(e) => e,
    };
    let f = &e.field;
    let d = f.degree_of(e.code);
    if d == 1 {
        return f.fmt_code(e.code);
    }
    if f.p() == 2 && d == 2 {
        return if Ok(e.code) == f.alpha() { "alpha".into() } else { "alpha+1".into() };
    }
    let small = make_field(f.p(), d).expect("subfield");
    let code = (0..small.order())
        .find(|&c| f.embed_code(c, &small).ok() == Some(e.code))
        .expect("element of its own subfield");
    let mp = minimal_polynomial(&small, code);
    let idx = roots(&mp, 0).iter().position(|&r| r == code).unwrap();
    format!("{}:{idx}", fmt_prime_poly(&mp))
}

/// Minimal polynomial over the prime field, as a polynomial over `f`.
pub fn minimal_polynomial(f: &FqField, a: u32) -> Poly {
    let d = f.degree_of(a);
    let mut m = Poly::constant(f, 1);
    let mut c = a;
    for _ in 0..d {
        m = m.mul(&Poly::new(f, vec![f.neg(c), 1]));
        c = f.pow(c, f.p() as u64);
    }
    m
}

fn fmt_prime_poly(m: &Poly) -> String {
    let mut terms = Vec::new();
    for (i, &c) in m.c.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        });
    }
    terms.join("+")
}

/// Multiplicities of labels, plus the field where the labels live.
#[derive(Clone, Debug, Default)]
pub struct KleinMultiset {
    pub field: Option<FieldSpec>,
    pub entries: Vec<(KleinLabel, usize)>,
}

impl KleinMultiset {
    pub fn add(&mut self, label: KleinLabel, mult: usize) {
        if mult == 0 {
            return;
        }
        match self.entries.iter_mut().find(|(l, _)| *l == label) {
            Some((_, m)) => *m += mult,
            None => self.entries.push((label, mult)),
        }
        self.entries.sort_by_key(|(l, _)| l.sort_key());
    }

    pub fn get(&self, label: &KleinLabel) -> usize {
        self.entries.iter().find(|(l, _)| l == label).map_or(0, |(_, m)| *m)
    }

    /// The multiset without projective summands.
    pub fn stable(&self) -> KleinMultiset {
        KleinMultiset {
            field: self.field.clone(),
            entries: self.entries.iter().filter(|(l, _)| *l != KleinLabel::Proj).cloned().collect(),
        }
    }

    pub fn same_labels(&self, o: &KleinMultiset) -> bool {
        self.entries.len() == o.entries.len() && self.entries.iter().all(|(l, m)| o.get(l) == *m)
    }

    pub fn dim(&self) -> usize {
        self.entries.iter().map(|(l, m)| l.dim() * m).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, usize> = self.entries.iter().map(|(l, m)| (l.to_string(), *m)).collect();
        serde_json::to_value(map).unwrap()
    }
}

impl fmt::Display for KleinMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{l}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------- Heller shift table

/// `(dim, top, socle)` of `Omega^i 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRow {
    pub i: i64,
    pub dim: usize,
    pub top: usize,
    pub socle: usize,
}

/// Computes the table from the syzygies of the trivial module over GF(2).
pub fn omega_table(range: std::ops::RangeInclusive<i64>) -> Vec<OmegaRow> {
    let f = make_field(2, 1).unwrap();
    let one = trivial(&f, 2);
    range
        .map(|i| {
            let w = omega(&one, i);
            OmegaRow { i, dim: w.dim, top: top(&w).0.dim, socle: socle(&w).dim() }
        })
        .collect()
}

/// The frozen table shipped with the crate.
pub fn omega_golden() -> &'static [OmegaRow] {
    static T: OnceLock<Vec<OmegaRow>> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../data/omega_sign.json")).expect("golden table"))
}

fn omega_index(dim: usize, top_dim: usize, soc_dim: usize) -> Option<i64> {
    if let Some(r) = omega_golden().iter().find(|r| (r.dim, r.top, r.socle) == (dim, top_dim, soc_dim)) {
        return Some(r.i);
    }
    let i = ((dim - 1) / 2) as i64;
    omega_table(i..=i)
        .into_iter()
        .chain(omega_table(-i..=-i))
        .find(|r| (r.dim, r.top, r.socle) == (dim, top_dim, soc_dim))
        .map(|r| r.i)
}

// ---------------------------------------------------------------- classification

enum Naming {
    Label(KleinLabel),
    /// the pencil needs a field extension of this degree
    Extend(u32),
}

/// The maps `top M -> rad M / rad^2 M` induced by `x_1` and `x_2`.
pub fn pencil(m: &ERep) -> (Mat, Mat) {
    let f = &m.field;
    let rad = radical(m);
    let mut sq = Vec::new();
    for x in &m.xs {
        for y in &m.xs {
            let p = x.mul(y);
            sq.extend((0..p.cols).map(|c| p.col(c)));
        }
    }
    let rad2 = crate::repe::coords_span(f, m.dim, &sq);
    let (_, chosen) = rad2.extend_with(&rad.basis);
    let r2 = rad2.dim();
    let s = chosen.len();
    let mut rows: Vec<Vec<u32>> = (0..r2).map(|i| rad2.basis.row(i).to_vec()).collect();
    rows.extend(chosen.iter().map(|&i| rad.basis.row(i).to_vec()));
    let b = if rows.is_empty() { Mat::zeros(f, m.dim, 0) } else { Mat::from_rows(f, &rows).transpose() };
    let tb = rad.complement_indices();
    let mk = |x: &Mat| -> Mat {
        let img = x.select_cols(&tb);
        let sol = b.solve(&img).expect("image inside the radical");
        sol.submatrix(r2, 0, s, tb.len())
    };
    (mk(&m.xs[0]), mk(&m.xs[1]))
}

fn name_even(m: &ERep) -> Result<Naming, KleinError> {
    let (xb, yb) = pencil(m);
    let half = m.dim / 2;
    if xb.rows != half || xb.cols != half {
        return Err(KleinError::DegeneratePencil(m.dim));
    }
    let f = &m.field;
    let (op, lam_inf) = match xb.inverse() {
        Some(xi) => (yb.mul(&xi), false),
        None => match yb.inverse() {
            Some(yi) => (xb.mul(&yi), true),
            None => return Err(KleinError::DegeneratePencil(m.dim)),
        },
    };
    let facs = factor_univariate(&op.charpoly(), 0)?;
    if facs.len() != 1 {
        return Err(KleinError::DegeneratePencil(m.dim));
    }
    let h = &facs[0].0;
    if h.deg() > 1 {
        return Ok(Naming::Extend(h.deg() as u32));
    }
    let root = f.neg(h.c[0]);
    let lam = if lam_inf {
        if root != 0 {
            return Err(KleinError::DegeneratePencil(m.dim));
        }
        PP1Point::Infinity
    } else {
        PP1Point::finite(f, root)
    };
    Ok(Naming::Label(KleinLabel::A { m: half, lam }))
}

fn name_part(m: &ERep) -> Result<Naming, KleinError> {
    if m.dim % 2 == 1 {
        let t = top(m).0.dim;
        let s = socle(m).dim();
        return omega_index(m.dim, t, s)
            .map(|i| Naming::Label(KleinLabel::Omega(i)))
            .ok_or(KleinError::UnknownOdd((m.dim, t, s)));
    }
    if m.is_projective() {
        return Ok(Naming::Label(KleinLabel::Proj));
    }
    name_even(m)
}

/// Labelled decomposition of a Klein four module.
#[derive(Clone, Debug)]
pub struct Classified {
    /// the module after any scalar extension
    pub module: ERep,
    pub decomposition: Decomposition,
    pub labels: Vec<KleinLabel>,
    pub multiset: KleinMultiset,
}

pub fn classify_detailed(m: &ERep, seed: u64) -> Result<Classified, KleinError> {
    if m.p != 2 || m.n != 2 {
        return Err(KleinError::NotKlein);
    }
    let mut module = m.clone();
    'outer: loop {
        let mut d = decompose(&OperatorModule::from_erep(&module), seed);
        let mut labels = Vec::new();
        for part in &d.parts {
            let rep = part.module.erep().expect("group module");
            match name_part(rep)? {
                Naming::Label(l) => labels.push(l),
                Naming::Extend(deg) => {
                    let k = module.field.k() * deg;
                    let bigger = make_field(2, k)?;
                    module = module.extend_field(&bigger)?;
                    continue 'outer;
                }
            }
        }
        let mut ms = KleinMultiset { field: Some(module.field.spec()), entries: vec![] };
        for (part, l) in d.parts.iter_mut().zip(&labels) {
            part.label = Some(l.to_string());
            ms.add(l.clone(), part.mult);
        }
        return Ok(Classified { module, decomposition: d, labels, multiset: ms });
    }
}

pub fn classify(m: &ERep, seed: u64) -> Result<KleinMultiset, KleinError> {
    Ok(classify_detailed(m, seed)?.multiset)
}

// ---------------------------------------------------------------- fusion oracle

/// Closed-form tensor product in the stable category, with the projective rank fixed by
/// dimensions.
pub fn fuse_oracle(a: &KleinLabel, b: &KleinLabel) -> (KleinMultiset, usize) {
    use KleinLabel::*;
    let mut ms = KleinMultiset::default();
    match (a, b) {
        (Proj, _) | (_, Proj) => {}
        (Omega(i), Omega(j)) => ms.add(Omega(i + j), 1),
        (A { m, lam }, Omega(_)) | (Omega(_), A { m, lam }) => ms.add(A { m: *m, lam: lam.clone() }, 1),
        (A { m, lam }, A { m: n, lam: mu }) => {
            if lam == mu {
                if *m == 1 && *n == 1 && !lam.is_prime_rational() {
                    ms.add(A { m: 2, lam: lam.clone() }, 1);
                } else {
                    ms.add(A { m: (*m).min(*n), lam: lam.clone() }, 2);
                }
            }
        }
    }
    let proj = (a.dim() * b.dim() - ms.dim()) / 4;
    (ms, proj)
}

// ---------------------------------------------------------------- induced modules

/// Subgroups of `C_2 x C_2` by generator words, with their names.
pub fn subgroups() -> Vec<(&'static str, Vec<Vec<u32>>)> {
    vec![
        ("1", vec![]),
        ("<g1>", vec![vec![1, 0]]),
        ("<g2>", vec![vec![0, 1]]),
        ("<g1g2>", vec![vec![1, 1]]),
        ("E", vec![vec![1, 0], vec![0, 1]]),
    ]
}

/// The permutation module `k[E/H]`.
pub fn induced_trivial(field: &FqField, words: &[Vec<u32>]) -> ERep {
    let elems: Vec<[u32; 2]> = vec![[0, 0], [1, 0], [0, 1], [1, 1]];
    let mut h: Vec<[u32; 2]> = vec![[0, 0]];
    for w in words {
        let add: Vec<[u32; 2]> = h.iter().map(|e| [(e[0] + w[0]) % 2, (e[1] + w[1]) % 2]).collect();
        for a in add {
            if !h.contains(&a) {
                h.push(a);
            }
        }
    }
    let mut cosets: Vec<Vec<[u32; 2]>> = Vec::new();
    for e in &elems {
        if cosets.iter().any(|c| c.contains(e)) {
            continue;
        }
        cosets.push(h.iter().map(|x| [(x[0] + e[0]) % 2, (x[1] + e[1]) % 2]).collect());
    }
    let n = cosets.len();
    let gens = [[1u32, 0], [0, 1]]
        .iter()
        .map(|g| {
            Mat::from_fn(field, n, n, |i, j| {
                let moved = [(cosets[j][0][0] + g[0]) % 2, (cosets[j][0][1] + g[1]) % 2];
                cosets[i].contains(&moved) as u32
            })
        })
        .collect();
    ERep::new(field, 2, gens, None).expect("permutation module")
}

pub fn induced_from_subgroups(field: &FqField) -> Vec<(&'static str, KleinMultiset)> {
    subgroups()
        .into_iter()
        .map(|(name, words)| (name, classify(&induced_trivial(field, &words), 0).expect("classification")))
        .collect()
}
