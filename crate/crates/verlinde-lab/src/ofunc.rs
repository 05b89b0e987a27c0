//! Klein actions on `Hom(Q, P^{⊗4})` through the permutation embedding `C_2^2 < S_4`,
//! and the exactness tests built on them. A second part scans `R(St_(n-1)) ⊗ M` for
//! summands outside the subcategory generated by `V_lam`.
//!
//! Categories come in two presentations: finite groups given by generator matrices,
//! and `Ver_(2^n)` (or its `+` part) through the vertices of its basic algebra.

use crate::exactla::{Mat, Subspace};
use crate::ffield::{FqField, PP1Point};
use crate::klein::{classify, KleinError, KleinLabel, KleinMultiset};
use crate::krull::{decompose, hom_ops, iso_test, MatSpan, OperatorModule};
use crate::repe::{random_module, strip_projective, tensor, tensor_all, trivial, ERep, LambdaVec, RepError};
use crate::sl2tilt::{basis_lv, prime_catalog, restrict, TiltError};
use crate::theta::{theta_label, Level, ThetaError, ThetaValue};
use crate::verlinde::{basic_algebra, quot_hom_in, realize, BasicAlgebra, StableQuot, VerError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OfuncError {
    #[error("the permutation action does not preserve the ideal: {0}")]
    Unstable(String),
    #[error("dimension {0} exceeds the budget {1}")]
    Budget(usize, usize),
    #[error("the matrices generate more than {0} elements")]
    GroupTooLarge(usize),
    #[error("{0}")]
    Category(String),
    #[error(transparent)]
    Ver(#[from] VerError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Klein(#[from] KleinError),
    #[error(transparent)]
    Tilt(#[from] TiltError),
}

// ---------------------------------------------------------------- permutations

/// `C_p^n < S_(p^n)`: generator `i` adds 1 to digit `a_i` of `a - 1 = sum a_i p^(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermEmbedding {
    pub p: u32,
    pub n: u32,
    /// `perms[i][a - 1]` is the image of `a`
    pub perms: Vec<Vec<usize>>,
}

pub fn perm_embedding(p: u32, n: u32) -> PermEmbedding {
    let deg = p.pow(n) as usize;
    let perms = (0..n)
        .map(|i| {
            let w = p.pow(i) as usize;
            (0..deg)
                .map(|a| {
                    let digit = (a / w) % p as usize;
                    let shifted = a - digit * w + ((digit + 1) % p as usize) * w;
                    shifted + 1
                })
                .collect()
        })
        .collect();
    PermEmbedding { p, n, perms }
}

impl PermEmbedding {
    pub fn degree(&self) -> usize {
        self.p.pow(self.n) as usize
    }

    /// Cycle notation, e.g. `(12)(34)`; points are comma separated past degree 9.
    pub fn cycles(&self, i: usize) -> String {
        let perm = &self.perms[i];
        let sep = if perm.len() > 9 { "," } else { "" };
        let mut seen = vec![false; perm.len()];
        let mut out = String::new();
        for start in 0..perm.len() {
            if seen[start] || perm[start] == start + 1 {
                continue;
            }
            let mut cyc = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                cyc.push((a + 1).to_string());
                a = perm[a] - 1;
            }
            out.push_str(&format!("({})", cyc.join(sep)));
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }

    /// The generators commute, have order `p`, and the group acts regularly.
    pub fn check(&self) -> bool {
        let deg = self.degree();
        let apply = |g: &[usize], a: usize| g[a] - 1;
        for g in &self.perms {
            for a in 0..deg {
                let mut b = a;
                for _ in 0..self.p {
                    b = apply(g, b);
                }
                if b != a || apply(g, a) == a {
                    return false;
                }
            }
        }
        for g in &self.perms {
            for h in &self.perms {
                if (0..deg).any(|a| apply(g, apply(h, a)) != apply(h, apply(g, a))) {
                    return false;
                }
            }
        }
        // orbit of 1 under the group is everything
        let mut orbit = vec![false; deg];
        let mut stack = vec![0];
        orbit[0] = true;
        while let Some(a) = stack.pop() {
            for g in &self.perms {
                let b = apply(g, a);
                if !orbit[b] {
                    orbit[b] = true;
                    stack.push(b);
                }
            }
        }
        orbit.iter().all(|&x| x)
    }
}

/// The permutation of tensor factors on `X^{⊗N}`, `dim X = d`: factor `t` moves to
/// position `perm[t] - 1`.
pub fn factor_permutation(field: &FqField, d: usize, perm: &[usize]) -> Mat {
    let big = perm.len();
    let total = d.pow(big as u32);
    let mut m = Mat::zeros(field, total, total);
    let mut digits = vec![0usize; big];
    let mut out = vec![0usize; big];
    for col in 0..total {
        let mut c = col;
        for t in (0..big).rev() {
            digits[t] = c % d;
            c /= d;
        }
        for t in 0..big {
            out[perm[t] - 1] = digits[t];
        }
        let row = out.iter().fold(0, |acc, &x| acc * d + x);
        m.set(row, col, 1);
    }
    m
}

/// `X ⊗ Y -> Y ⊗ X`.
pub fn swap_pair(field: &FqField, dx: usize, dy: usize) -> Mat {
    let mut m = Mat::zeros(field, dx * dy, dx * dy);
    for i in 0..dx {
        for j in 0..dy {
            m.set(j * dx + i, i * dy + j, 1);
        }
    }
    m
}

/// `(phi ⊗ psi) g` without forming the Kronecker product.
pub fn kron_apply(phi: &Mat, psi: &Mat, g: &Mat) -> Mat {
    let f = &g.field;
    let (a, a1, b, b1) = (phi.rows, phi.cols, psi.rows, psi.cols);
    assert_eq!(g.rows, a1 * b1);
    let psi_t = psi.transpose();
    let mut out = Mat::zeros(f, a * b, g.cols);
    for c in 0..g.cols {
        let gm = Mat::from_fn(f, a1, b1, |i, j| g.get(i * b1 + j, c));
        let r = phi.mul(&gm).mul(&psi_t);
        for i in 0..a {
            for j in 0..b {
                out.set(i * b + j, c, r.get(i, j));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- categories

#[derive(Clone, Debug)]
pub enum CategorySpec {
    /// modules over the group generated by invertible matrices over a field of
    /// characteristic 2
    RepH { field: FqField, gens: Vec<Mat> },
    Ver { p: u32, n: u32 },
    /// the subcategory generated by the even tilting modules
    VerPlus { p: u32, n: u32 },
}

impl CategorySpec {
    pub fn tag(&self) -> String {
        match self {
            CategorySpec::RepH { .. } => "RepH".into(),
            CategorySpec::Ver { p, n } => format!("Ver({p},{n})"),
            CategorySpec::VerPlus { p, n } => format!("Ver+({p},{n})"),
        }
    }

    /// The cyclic group of order 2 acting on `k^2` by the swap, over `field`.
    pub fn rep_c2(field: &FqField) -> CategorySpec {
        CategorySpec::RepH { field: field.clone(), gens: vec![Mat::from_rows(field, &[vec![0, 1], vec![1, 0]])] }
    }

    pub fn rep_trivial(field: &FqField) -> CategorySpec {
        CategorySpec::RepH { field: field.clone(), gens: vec![] }
    }
}

impl fmt::Display for CategorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// A Klein module `Hom(Q, P^{⊗4})`; `source` is `Q`, `base` is `P`.
#[derive(Clone, Debug)]
pub struct HomPower {
    pub source: String,
    pub base: String,
    pub module: ERep,
    pub route: &'static str,
}

/// Swaps the two Klein generators.
pub fn swap_generators(m: &ERep) -> ERep {
    ERep::new(&m.field, 2, vec![m.gens[1].clone(), m.gens[0].clone()], m.label.clone()).expect("same relations")
}

fn klein_module(field: &FqField, sigma: Mat, tau: Mat, what: &str) -> Result<ERep, OfuncError> {
    ERep::new(field, 2, vec![sigma, tau], None).map_err(|e| OfuncError::Unstable(format!("{what}: {e}")))
}

fn klein_perms() -> (Vec<usize>, Vec<usize>) {
    let pe = perm_embedding(2, 2);
    (pe.perms[0].clone(), pe.perms[1].clone())
}

// ---------------------------------------------------------------- RepH

/// All elements of the group generated by `gens`, identity first.
pub fn enumerate_group(field: &FqField, d: usize, gens: &[Mat], cap: usize) -> Result<Vec<Mat>, OfuncError> {
    let id = Mat::identity(field, d);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    index.insert(id.data.clone(), 0);
    let mut elems = vec![id];
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let h = g.mul(&elems[k]);
            if !index.contains_key(&h.data) {
                if elems.len() == cap {
                    return Err(OfuncError::GroupTooLarge(cap));
                }
                index.insert(h.data.clone(), elems.len());
                elems.push(h);
            }
        }
        k += 1;
    }
    Ok(elems)
}

/// The regular module `kH`, as the action of each generator by left multiplication.
pub fn regular_action(field: &FqField, elems: &[Mat], gens: &[Mat]) -> Vec<Mat> {
    let index: HashMap<&[u32], usize> = elems.iter().enumerate().map(|(i, e)| (e.data.as_slice(), i)).collect();
    gens.iter()
        .map(|g| {
            let mut m = Mat::zeros(field, elems.len(), elems.len());
            for (j, e) in elems.iter().enumerate() {
                m.set(index[g.mul(e).data.as_slice()], j, 1);
            }
            m
        })
        .collect()
}

/// A module over `H` given by the action of each generator.
#[derive(Clone, Debug)]
pub struct HModule {
    pub name: String,
    pub dim: usize,
    pub gens: Vec<Mat>,
}

/// Representatives of the indecomposable projectives: the distinct summands of `kH`.
pub fn projective_objects(field: &FqField, gens: &[Mat], seed: u64) -> Result<Vec<HModule>, OfuncError> {
    let d = gens.first().map_or(1, |g| g.rows);
    let elems = enumerate_group(field, d, gens, 4096)?;
    let reg = regular_action(field, &elems, gens);
    if gens.is_empty() {
        return Ok(vec![HModule { name: "1".into(), dim: 1, gens: vec![] }]);
    }
    let dec = decompose(&OperatorModule::generic(field, elems.len(), reg), seed);
    Ok(dec
        .parts
        .iter()
        .enumerate()
        .map(|(i, pt)| HModule {
            name: if dec.parts.len() == 1 && pt.mult == 1 { "kH".into() } else { format!("P{i}") },
            dim: pt.dim(),
            gens: pt.module.ops.clone(),
        })
        .collect())
}

/// `Hom_H(Q, P^{⊗4})` with the Klein group permuting the factors.
pub fn hom_power_group(field: &FqField, q: &HModule, p: &HModule, budget: usize) -> Result<HomPower, OfuncError> {
    let big = p.dim.pow(4);
    if big > budget {
        return Err(OfuncError::Budget(big, budget));
    }
    let pow_gens: Vec<Mat> = p.gens.iter().map(|g| g.kron(g).kron(g).kron(g)).collect();
    let src = OperatorModule::generic(field, q.dim, q.gens.clone());
    let tgt = OperatorModule::generic(field, big, pow_gens);
    let basis = if q.gens.is_empty() {
        // trivial group: every linear map
        (0..big * q.dim)
            .map(|k| {
                let mut m = Mat::zeros(field, big, q.dim);
                m.set(k / q.dim, k % q.dim, 1);
                m
            })
            .collect()
    } else {
        hom_ops(&src, &tgt)
    };
    let span = MatSpan::new(field, big, q.dim, &basis);
    let basis = span.basis();
    let (s1, s2) = klein_perms();
    let act = |perm: &[usize]| -> Result<Mat, OfuncError> {
        let pm = factor_permutation(field, p.dim, perm);
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| span.coords(&pm.mul(b)).ok_or_else(|| OfuncError::Unstable("Hom_H is not preserved".into())))
            .collect::<Result<_, _>>()?;
        Ok(Mat::from_cols(field, basis.len(), &cols))
    };
    let module = if basis.is_empty() {
        crate::repe::zero_module(field, 2)
    } else {
        klein_module(field, act(&s1)?, act(&s2)?, "Hom_H")?
    };
    Ok(HomPower { source: q.name.clone(), base: p.name.clone(), module, route: "group" })
}

// ---------------------------------------------------------------- Ver(2, n)

/// `P ⊗ P ≅ ⊕_k V_(a_k)` modulo the ideal, with the swap in these coordinates.
#[derive(Clone, Debug)]
pub struct SquareSplit {
    pub types: Vec<usize>,
    /// `swap[k][k']`: coordinates in `Q(a_k', a_k)` of `beta_k ∘ s ∘ alpha_k'`
    pub swap: Vec<Vec<Vec<u32>>>,
}

/// Splits `core(V_base ⊗ V_base)` into vertices: `alpha_k` lift a basis of the top of its
/// vertex spaces, `beta_k` is the dual family modulo the ideal.
pub fn square_split(alg: &BasicAlgebra, base: usize) -> Result<SquareSplit, OfuncError> {
    let f = &alg.field;
    let ideal = alg.ideal();
    let x = &alg.vertices[base];
    let w = tensor(x, x);
    let wc = strip_projective(&w);
    let c = wc.core.clone();
    let s_c = wc.pi.mul(&crate::theta::swap_matrix(f, x.dim)).mul(&wc.iota);
    let real = realize(&c, alg);
    let bm = &real.bmodule;
    let nv = alg.num_vertices();
    let mut types = Vec::new();
    let mut alphas: Vec<Mat> = Vec::new();
    for a in 0..nv {
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for b in 0..nv {
            for i in 0..alg.hom_dims[a][b] {
                let mut e = vec![0; alg.hom_dims[a][b]];
                e[i] = 1;
                if b == a {
                    f.axpy(&mut e, f.neg(alg.augmentations[a][i]), &alg.identities[a]);
                }
                let m = bm.act_on(a, b, &e);
                cols.extend((0..m.cols).map(|j| m.col(j)));
            }
        }
        let rad = if cols.is_empty() { Subspace::zero(f, bm.dims[a]) } else { Subspace::from_cols(&Mat::from_cols(f, bm.dims[a], &cols)) };
        let sq = &real.quots[a];
        for k in rad.complement_indices() {
            types.push(a);
            alphas.push(sq.core.iota.mul(sq.quot.rep(k)));
        }
    }
    for b in 0..nv {
        let expect: usize = types.iter().map(|&a| alg.hom_dims[b][a]).sum();
        if expect != bm.dims[b] {
            return Err(OfuncError::Category(format!(
                "P⊗P for base {} is not a sum of vertices modulo the ideal",
                alg.vertex_label(base)
            )));
        }
    }
    let mut betas: Vec<Mat> = Vec::new();
    for (k, &ak) in types.iter().enumerate() {
        let h = quot_hom_in(&c, &alg.vertices[ak], ideal);
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<Vec<u32>> = Vec::new();
        for (l, &al) in types.iter().enumerate() {
            let blocks: Vec<Vec<u32>> = (0..h.quotient_dim)
                .map(|j| alg.homs[al][ak].reduce(&h.rep(j).mul(&alphas[l])).expect("intertwiner"))
                .collect();
            for r in 0..alg.hom_dims[al][ak] {
                rows.push(blocks.iter().map(|b| b[r]).collect());
                rhs.push(vec![if k == l { alg.identities[ak][r] } else { 0 }]);
            }
        }
        let a_mat = Mat::from_rows(f, &rows);
        let sol = if h.quotient_dim == 0 { None } else { a_mat.solve(&Mat::from_rows(f, &rhs)) };
        let sol = sol.ok_or_else(|| OfuncError::Category("no dual family for the square".into()))?;
        let mut beta = Mat::zeros(f, alg.vertices[ak].dim, c.dim);
        for j in 0..h.quotient_dim {
            beta.add_scaled(sol.get(j, 0), h.rep(j));
        }
        betas.push(beta);
    }
    let swap = types
        .iter()
        .enumerate()
        .map(|(k, &ak)| {
            types
                .iter()
                .enumerate()
                .map(|(k2, &ak2)| alg.homs[ak2][ak].reduce(&betas[k].mul(&s_c).mul(&alphas[k2])).expect("intertwiner"))
                .collect()
        })
        .collect();
    Ok(SquareSplit { types, swap })
}

/// `Hom(V_source, V_a ⊗ V_b)` modulo the ideal, per pair of vertex types.
struct PairHoms<'a> {
    alg: &'a BasicAlgebra,
    homs: HashMap<(usize, usize), StableQuot>,
    post: HashMap<(usize, usize, usize, usize, usize, usize), Mat>,
    swaps: HashMap<(usize, usize), Mat>,
}

impl<'a> PairHoms<'a> {
    fn new(alg: &'a BasicAlgebra, source: usize, types: &[usize]) -> PairHoms<'a> {
        let mut distinct = types.to_vec();
        distinct.sort();
        distinct.dedup();
        let pairs: Vec<(usize, usize)> = distinct.iter().flat_map(|&a| distinct.iter().map(move |&b| (a, b))).collect();
        let built: Vec<StableQuot> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let t = tensor(&alg.vertices[a], &alg.vertices[b]);
                StableQuot::new(&alg.vertices[source], &t, alg.ideal())
            })
            .collect();
        PairHoms { alg, homs: pairs.into_iter().zip(built).collect(), post: HashMap::new(), swaps: HashMap::new() }
    }

    fn dim(&self, a: usize, b: usize) -> usize {
        self.homs[&(a, b)].quot.quotient_dim
    }

    fn rep(&self, a: usize, b: usize, t: usize) -> Mat {
        let h = &self.homs[&(a, b)];
        h.core.iota.mul(h.quot.rep(t))
    }

    /// Postcomposition with `phi_i ⊗ psi_j`, `phi_i in Q(a2, a)`, `psi_j in Q(b2, b)`.
    fn post(&mut self, a2: usize, b2: usize, a: usize, b: usize, i: usize, j: usize) -> &Mat {
        let key = (a2, b2, a, b, i, j);
        if !self.post.contains_key(&key) {
            let phi = self.alg.homs[a2][a].rep(i);
            let psi = self.alg.homs[b2][b].rep(j);
            let tgt = &self.homs[&(a, b)];
            let cols: Vec<Vec<u32>> = (0..self.dim(a2, b2))
                .map(|t| tgt.reduce(&kron_apply(phi, psi, &self.rep(a2, b2, t))).expect("intertwiner"))
                .collect();
            let m = Mat::from_cols(&self.alg.field, self.dim(a, b), &cols);
            self.post.insert(key, m);
        }
        &self.post[&key]
    }

    /// Postcomposition with the swap `V_b ⊗ V_a -> V_a ⊗ V_b`.
    fn swap(&mut self, a: usize, b: usize) -> &Mat {
        if !self.swaps.contains_key(&(a, b)) {
            let (da, db) = (self.alg.vertices[a].dim, self.alg.vertices[b].dim);
            let sw = swap_pair(&self.alg.field, db, da);
            let tgt = &self.homs[&(a, b)];
            let cols: Vec<Vec<u32>> = (0..self.dim(b, a))
                .map(|t| tgt.reduce(&sw.mul(&self.rep(b, a, t))).expect("intertwiner"))
                .collect();
            let m = Mat::from_cols(&self.alg.field, self.dim(a, b), &cols);
            self.swaps.insert((a, b), m);
        }
        &self.swaps[&(a, b)]
    }
}

fn place(dst: &mut Mat, r0: usize, c0: usize, coef: u32, m: &Mat) {
    let f = dst.field.clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            let v = m.get(i, j);
            if v != 0 {
                let cur = dst.get(r0 + i, c0 + j);
                dst.set(r0 + i, c0 + j, f.add(cur, f.mul(coef, v)));
            }
        }
    }
}

/// `Hom(V_source, V_base^{⊗4})` modulo the ideal, through the split of `V_base ⊗ V_base`:
/// `sigma = (12)(34)` acts as `s ⊗ s`, `tau = (13)(24)` as the swap of the two squares.
pub fn hom_power_ver(alg: &BasicAlgebra, source: usize, base: usize, sq: &SquareSplit) -> Result<HomPower, OfuncError> {
    let f = &alg.field;
    let ty = &sq.types;
    let nsum = ty.len();
    let mut ph = PairHoms::new(alg, source, ty);
    let mut off = vec![vec![0usize; nsum]; nsum];
    let mut total = 0;
    for k in 0..nsum {
        for l in 0..nsum {
            off[k][l] = total;
            total += ph.dim(ty[k], ty[l]);
        }
    }
    let mut sigma = Mat::zeros(f, total, total);
    let mut tau = Mat::zeros(f, total, total);
    for k in 0..nsum {
        for l in 0..nsum {
            let (a, b) = (ty[k], ty[l]);
            if ph.dim(a, b) == 0 {
                continue;
            }
            for k2 in 0..nsum {
                for l2 in 0..nsum {
                    let (a2, b2) = (ty[k2], ty[l2]);
                    if ph.dim(a2, b2) == 0 {
                        continue;
                    }
                    for (i, &ci) in sq.swap[k][k2].iter().enumerate() {
                        if ci == 0 {
                            continue;
                        }
                        for (j, &cj) in sq.swap[l][l2].iter().enumerate() {
                            if cj == 0 {
                                continue;
                            }
                            let m = ph.post(a2, b2, a, b, i, j).clone();
                            place(&mut sigma, off[k][l], off[k2][l2], f.mul(ci, cj), &m);
                        }
                    }
                }
            }
            let m = ph.swap(a, b).clone();
            place(&mut tau, off[k][l], off[l][k], 1, &m);
        }
    }
    let module = if total == 0 {
        crate::repe::zero_module(f, 2)
    } else {
        klein_module(f, sigma, tau, "vertex split")?
    };
    Ok(HomPower { source: alg.vertex_label(source), base: alg.vertex_label(base), module, route: "split" })
}

/// The same module from the full tensor power with the literal factor permutations,
/// checking that they preserve the ideal.
pub fn hom_power_direct(alg: &BasicAlgebra, source: usize, base: usize, budget: usize) -> Result<HomPower, OfuncError> {
    let f = &alg.field;
    let x = &alg.vertices[base];
    let big = x.dim.pow(4);
    if big > budget {
        return Err(OfuncError::Budget(big, budget));
    }
    let m = tensor_all(&[x.clone(), x.clone(), x.clone(), x.clone()]);
    let qh = quot_hom_in(&alg.vertices[source], &m, alg.ideal());
    let (s1, s2) = klein_perms();
    let act = |perm: &[usize]| -> Result<Mat, OfuncError> {
        let pm = factor_permutation(f, x.dim, perm);
        for r in 0..qh.ideal.dim() {
            let g = qh.full.combine(qh.ideal.basis.row(r));
            if !qh.in_ideal(&pm.mul(&g)) {
                return Err(OfuncError::Unstable(format!("ideal vector {r} leaves the ideal")));
            }
        }
        let cols: Vec<Vec<u32>> = (0..qh.quotient_dim).map(|t| qh.reduce(&pm.mul(qh.rep(t))).expect("intertwiner")).collect();
        Ok(Mat::from_cols(f, qh.quotient_dim, &cols))
    };
    let module = if qh.quotient_dim == 0 {
        crate::repe::zero_module(f, 2)
    } else {
        klein_module(f, act(&s1)?, act(&s2)?, "direct")?
    };
    Ok(HomPower { source: alg.vertex_label(source), base: alg.vertex_label(base), module, route: "direct" })
}

/// Vertex index of `R(T_i)`.
pub fn vertex_of(alg: &BasicAlgebra, i: usize) -> Option<usize> {
    alg.proj_indices.iter().position(|&j| j == i)
}

// ---------------------------------------------------------------- the harness

#[derive(Clone, Debug)]
pub struct PhiOptions {
    /// let `Q` range over all vertices instead of the two smallest when there are more
    pub full_range: bool,
    /// largest dimension of a full tensor power built by the group route
    pub budget: usize,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions { full_range: false, budget: 4096 }
    }
}

#[derive(Clone, Debug)]
pub struct PairModule {
    pub hom: HomPower,
    pub klein: KleinMultiset,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub klein: BTreeMap<String, usize>,
    pub theta_nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiVerdict {
    pub category: String,
    pub lam: String,
    pub level: usize,
    pub exact: bool,
    pub witness: Option<PairReport>,
    pub pairs: Vec<PairReport>,
}

fn multiset_map(m: &KleinMultiset) -> BTreeMap<String, usize> {
    m.entries.iter().map(|(l, k)| (l.to_string(), *k)).collect()
}

/// `Theta` of a classified module.
pub fn theta_of_multiset(m: &KleinMultiset, lam: &PP1Point, level: usize, seed: u64) -> Result<ThetaValue, OfuncError> {
    let mut out: Option<ThetaValue> = None;
    for (l, k) in &m.entries {
        let v = theta_label(l, lam, Level::Fin(level), seed)?;
        for _ in 0..*k {
            out = Some(match out {
                None => v.clone(),
                Some(o) => o.add(&v).expect("same kind"),
            });
        }
    }
    Ok(match out {
        Some(v) => v,
        None => theta_label(&KleinLabel::Proj, lam, Level::Fin(level), seed)?,
    })
}

/// All Klein modules `Hom(Q, P^{⊗4})` of a category, computed once.
#[derive(Clone, Debug)]
pub struct PhiHarness {
    pub category: String,
    pub field: FqField,
    pub pairs: Vec<PairModule>,
}

impl PhiHarness {
    pub fn new(spec: &CategorySpec, lv: Option<&LambdaVec>, opts: &PhiOptions, seed: u64) -> Result<PhiHarness, OfuncError> {
        let (field, homs) = match spec {
            CategorySpec::RepH { field, gens } => {
                if field.p() != 2 {
                    return Err(OfuncError::Category("the Klein embedding needs characteristic 2".into()));
                }
                let objs = projective_objects(field, gens, seed)?;
                let mut homs = Vec::new();
                for p in &objs {
                    for q in &objs {
                        homs.push(hom_power_group(field, q, p, opts.budget)?);
                    }
                }
                (field.clone(), homs)
            }
            CategorySpec::Ver { p, n } | CategorySpec::VerPlus { p, n } => {
                if *p != 2 {
                    return Err(OfuncError::Category(format!("Ver({p},{n}): only p = 2 has a Klein embedding")));
                }
                let lv = lv.cloned().unwrap_or_else(|| basis_lv(*p, *n));
                let alg = basic_algebra(*p, *n, &lv, seed)?;
                let plus = matches!(spec, CategorySpec::VerPlus { .. });
                let verts: Vec<usize> =
                    (0..alg.num_vertices()).filter(|&a| !plus || alg.proj_indices[a] % 2 == 0).collect();
                let sources: Vec<usize> =
                    if opts.full_range || verts.len() <= 2 { verts.clone() } else { verts[..2].to_vec() };
                let splits: Vec<SquareSplit> = verts.iter().map(|&b| square_split(&alg, b)).collect::<Result<_, _>>()?;
                let jobs: Vec<(usize, usize)> =
                    (0..verts.len()).flat_map(|bi| sources.iter().map(move |&s| (bi, s))).collect();
                let homs: Vec<HomPower> = jobs
                    .par_iter()
                    .map(|&(bi, s)| hom_power_ver(&alg, s, verts[bi], &splits[bi]))
                    .collect::<Result<_, _>>()?;
                (alg.field.clone(), homs)
            }
        };
        let pairs = homs
            .into_par_iter()
            .enumerate()
            .map(|(i, hom)| {
                let klein = classify(&hom.module, seed ^ i as u64)?;
                Ok(PairModule { hom, klein })
            })
            .collect::<Result<Vec<_>, OfuncError>>()?;
        Ok(PhiHarness { category: spec.tag(), field, pairs })
    }

    pub fn verdict(&self, lam: &PP1Point, level: usize, seed: u64) -> Result<PhiVerdict, OfuncError> {
        if level == 0 {
            return Err(OfuncError::Category("levels start at 1".into()));
        }
        let mut reports = Vec::new();
        for pm in &self.pairs {
            let v = theta_of_multiset(&pm.klein, lam, level, seed)?;
            reports.push(PairReport {
                p: pm.hom.base.clone(),
                q: pm.hom.source.clone(),
                klein: multiset_map(&pm.klein),
                theta_nonzero: !v.is_zero(),
            });
        }
        let witness = reports.iter().find(|r| r.theta_nonzero).cloned();
        Ok(PhiVerdict {
            category: self.category.clone(),
            lam: crate::klein::render_lambda(lam),
            level,
            exact: witness.is_some(),
            witness,
            pairs: reports,
        })
    }

    /// Every indecomposable label seen, with total multiplicity.
    pub fn labels(&self) -> KleinMultiset {
        let mut out = KleinMultiset::default();
        for pm in &self.pairs {
            for (l, k) in &pm.klein.entries {
                out.add(l.clone(), *k);
            }
        }
        out
    }
}

pub fn phi_exact(
    spec: &CategorySpec,
    lam: &PP1Point,
    level: usize,
    lv: Option<&LambdaVec>,
    seed: u64,
) -> Result<PhiVerdict, OfuncError> {
    PhiHarness::new(spec, lv, &PhiOptions::default(), seed)?.verdict(lam, level, seed)
}

// ---------------------------------------------------------------- ThmVer4 lists

#[derive(Clone, Debug, Serialize)]
pub struct Ver4Conditions {
    pub category: String,
    pub labels: BTreeMap<String, usize>,
    /// labels in `{Omega^i 1} ∪ {A_m(alpha)} ∪ {A_m(alpha+1)}`
    pub cond3_hits: Vec<String>,
    /// labels in `{1, A_1(alpha), A_2(alpha)}`
    pub cond4_hits: Vec<String>,
    /// only `A_1(0)`, `A_1(1)`, `A_1(inf)` and projectives occur
    pub permutation_only: bool,
}

fn in_f4_minus_f2(lam: &PP1Point) -> bool {
    match lam {
        PP1Point::Infinity => false,
        PP1Point::Finite(e) => e.field.degree_of(e.code) == 2 && e.field.p() == 2,
    }
}

fn is_alpha(lam: &PP1Point) -> bool {
    match lam {
        PP1Point::Finite(e) if in_f4_minus_f2(lam) => e.field.alpha().ok() == Some(e.code),
        _ => false,
    }
}

pub fn ver4_conditions_of(h: &PhiHarness) -> Ver4Conditions {
    let labels = h.labels();
    let mut cond3 = Vec::new();
    let mut cond4 = Vec::new();
    let mut perm_only = true;
    for (l, _) in &labels.entries {
        let s = l.to_string();
        match l {
            KleinLabel::Omega(i) => {
                cond3.push(s.clone());
                if *i == 0 {
                    cond4.push(s);
                }
                perm_only = false;
            }
            KleinLabel::A { m, lam } => {
                if in_f4_minus_f2(lam) {
                    cond3.push(s.clone());
                    if is_alpha(lam) && *m <= 2 {
                        cond4.push(s);
                    }
                }
                if !(*m == 1 && lam.is_prime_rational()) {
                    perm_only = false;
                }
            }
            KleinLabel::Proj => {}
        }
    }
    Ver4Conditions {
        category: h.category.clone(),
        labels: multiset_map(&labels),
        cond3_hits: cond3,
        cond4_hits: cond4,
        permutation_only: perm_only,
    }
}

pub fn thmver4_conditions(spec: &CategorySpec, lv: Option<&LambdaVec>, seed: u64) -> Result<Ver4Conditions, OfuncError> {
    Ok(ver4_conditions_of(&PhiHarness::new(spec, lv, &PhiOptions::default(), seed)?))
}

// ---------------------------------------------------------------- the D_lam scan

/// Indecomposable non-projective summands of `R(T_i)`, `i <= imax`, up to isomorphism.
#[derive(Clone, Debug)]
pub struct DCatalog {
    pub imax: usize,
    pub entries: Vec<(String, OperatorModule)>,
}

pub fn d_catalog(lv: &LambdaVec, imax: usize, seed: u64) -> Result<DCatalog, OfuncError> {
    let p = lv.field().p();
    let cat = prime_catalog(p, imax)?;
    let mut entries: Vec<(String, OperatorModule)> = Vec::new();
    for t in cat.iter().take(imax + 1) {
        let core = strip_projective(&restrict(&t.hyper, lv)?).core;
        if core.dim == 0 {
            continue;
        }
        let dec = decompose(&OperatorModule::from_erep(&core), seed ^ t.i as u64);
        let single = dec.num_summands() == 1;
        for (k, pt) in dec.parts.iter().enumerate() {
            let known = entries
                .iter()
                .any(|(_, e)| e.dim == pt.dim() && iso_test(e, &pt.module, seed).is_some());
            if !known {
                let name = if single { format!("R(T{})", t.i) } else { format!("R(T{})#{k}", t.i) };
                entries.push((name, pt.module.clone()));
            }
        }
    }
    Ok(DCatalog { imax, entries })
}

impl DCatalog {
    pub fn find(&self, m: &OperatorModule, seed: u64) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, e)| e.dim == m.dim && iso_test(e, m, seed).is_some())
            .map(|(n, _)| n.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleResult {
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub pass: bool,
    /// catalog names of the non-projective summands, with multiplicity
    pub summands: BTreeMap<String, usize>,
    pub free_rank: usize,
    /// for failures: the sample and every unmatched summand as module files
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub p: u32,
    pub n: u32,
    pub lv: Vec<u32>,
    pub catalog_imax: usize,
    pub catalog: Vec<String>,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<SampleResult>,
}

/// Tests `R(St_(n-1)) ⊗ m` summand by summand against the catalog.
pub fn scan_one(st: &ERep, m: &ERep, catalog: &DCatalog, index: usize, seed: u64) -> SampleResult {
    let x = tensor(st, m);
    let c = strip_projective(&x);
    let mut summands = BTreeMap::new();
    let mut bad = Vec::new();
    if c.core.dim > 0 {
        let dec = decompose(&OperatorModule::from_erep(&c.core), seed);
        for pt in &dec.parts {
            match catalog.find(&pt.module, seed) {
                Some(name) => *summands.entry(name.to_string()).or_insert(0) += pt.mult,
                None => bad.push(pt.module.erep().expect("group module").to_file()),
            }
        }
    }
    let pass = bad.is_empty();
    SampleResult {
        index,
        seed,
        dim: m.dim,
        pass,
        summands,
        free_rank: c.free_rank,
        certificate: (!pass).then(|| serde_json::json!({ "sample": m.to_file(), "unmatched": bad })),
    }
}

/// `samples` seeded random modules of dimension at most `budget`; sample 0 is `1`.
pub fn conjecture_scan(
    p: u32,
    n: u32,
    lv: &LambdaVec,
    samples: usize,
    budget: usize,
    seed: u64,
) -> Result<ConjectureReport, OfuncError> {
    if !matches!((p, n), (2, 2) | (2, 3) | (3, 2)) {
        return Err(OfuncError::Category(format!("({p},{n}) is outside the desk-scale range")));
    }
    let imax = 2 * p.pow(n) as usize - 2;
    let catalog = d_catalog(lv, imax, seed)?;
    let cat = prime_catalog(p, imax)?;
    let st = restrict(&cat[p.pow(n - 1) as usize - 1].hyper, lv)?;
    let field = st.field.clone();
    let results: Vec<SampleResult> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
            let m = if i == 0 { trivial(&field, n as usize) } else { random_module(&field, n as usize, budget, s) };
            scan_one(&st, &m, &catalog, i, s)
        })
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(ConjectureReport {
        p,
        n,
        lv: lv.codes(),
        catalog_imax: imax,
        catalog: catalog.entries.iter().map(|(n, _)| n.clone()).collect(),
        samples,
        passed,
        failed: samples - passed,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::gf;

    #[test]
    fn small_embeddings() {
        let e = perm_embedding(2, 2);
        assert_eq!(e.cycles(0), "(12)(34)");
        assert_eq!(e.cycles(1), "(13)(24)");
        assert!(e.check());
        assert_eq!(perm_embedding(2, 1).cycles(0), "(12)");
        assert_eq!(perm_embedding(3, 1).cycles(0), "(123)");
        assert!(perm_embedding(3, 2).check());
        assert!(perm_embedding(2, 4).check());
    }

    #[test]
    fn factor_permutation_moves_factors() {
        let f = gf(2, 1);
        let m = factor_permutation(&f, 2, &[2, 1]);
        assert_eq!(m, swap_pair(&f, 2, 2));
        let s = swap_pair(&f, 2, 3);
        assert_eq!(s.mul(&swap_pair(&f, 3, 2)), Mat::identity(&f, 6));
    }

    #[test]
    fn kron_apply_matches_kronecker() {
        use rand::SeedableRng;
        let f = gf(2, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let phi = Mat::random(&f, 3, 2, &mut rng);
        let psi = Mat::random(&f, 2, 4, &mut rng);
        let g = Mat::random(&f, 8, 5, &mut rng);
        assert_eq!(kron_apply(&phi, &psi, &g), phi.kron(&psi).mul(&g));
    }

    #[test]
    fn trivial_group_gives_the_unit() {
        let f = gf(2, 1);
        let h = PhiHarness::new(&CategorySpec::rep_trivial(&f), None, &PhiOptions::default(), 0).unwrap();
        assert_eq!(h.pairs.len(), 1);
        assert_eq!(h.pairs[0].klein.to_string(), "Omega(0)");
    }

    #[test]
    fn group_enumeration() {
        let f = gf(2, 1);
        let s3 = vec![
            Mat::from_rows(&f, &[vec![0, 1], vec![1, 0]]),
            Mat::from_rows(&f, &[vec![0, 1], vec![1, 1]]),
        ];
        assert_eq!(enumerate_group(&f, 2, &s3, 100).unwrap().len(), 6);
        assert!(matches!(enumerate_group(&f, 2, &s3, 4), Err(OfuncError::GroupTooLarge(4))));
    }
}
