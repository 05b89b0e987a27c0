//! Finite-dimensional representations of `E = C_p^n`.
//!
//! A module is stored by the images `g_i` of the ordered generators together with the
//! nilpotent operators `x_i = g_i - 1`. The group algebra `kE` has the monomial basis
//! `x^a`, `0 <= a_i < p`, with index `sum a_i p^(n-1-i)` (so `a_1` is most significant).

use crate::exactla::{intersect_kernels, LaError, Mat, MatJson, StructuredOp, Subspace};
use crate::ffield::{FieldError, FieldSpec, FqElem, FqField, PP1Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("generator relations fail: {0}")]
    Relations(String),
    #[error("modules over different groups or fields")]
    Mismatch,
    #[error("lambda entries are linearly dependent over the prime field")]
    Dependent,
    #[error("not a submodule")]
    NotSubmodule,
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("bad module file: {0}")]
    File(String),
}

#[derive(Clone, Debug)]
pub struct ERep {
    pub field: FqField,
    pub p: u32,
    pub n: usize,
    pub dim: usize,
    pub gens: Vec<Mat>,
    pub xs: Vec<Mat>,
    pub label: Option<String>,
}

/// Exponent vectors of the monomial basis of `kE`, in index order.
pub fn monomials(p: u32, n: usize) -> Vec<Vec<u32>> {
    let q = (p as usize).pow(n as u32);
    (0..q)
        .map(|mut idx| {
            let mut a = vec![0u32; n];
            for i in (0..n).rev() {
                a[i] = (idx % p as usize) as u32;
                idx /= p as usize;
            }
            a
        })
        .collect()
}

/// For each monomial index (except 0): a pair `(i, prev)` with `x^a = x_i x^prev`.
fn mono_chain(p: u32, n: usize) -> Vec<(usize, usize)> {
    monomials(p, n)
        .iter()
        .enumerate()
        .map(|(idx, a)| match a.iter().position(|&e| e > 0) {
            Some(i) => (i, idx - (p as usize).pow((n - 1 - i) as u32)),
            None => (0, 0),
        })
        .collect()
}

fn identity_gens(field: &FqField, n: usize, dim: usize) -> Vec<Mat> {
    vec![Mat::identity(field, dim); n]
}

impl ERep {
    /// Validated constructor: `g_i^p = 1` and the generators commute.
    pub fn new(field: &FqField, p: u32, gens: Vec<Mat>, label: Option<String>) -> Result<ERep, RepError> {
        if field.p() != p {
            return Err(RepError::Relations(format!("characteristic {} is not {p}", field.p())));
        }
        let dim = gens.first().map(|g| g.rows).unwrap_or(0);
        for (i, g) in gens.iter().enumerate() {
            if g.field != *field || !g.is_square() || g.rows != dim {
                return Err(RepError::Relations(format!("generator {i} has the wrong shape or field")));
            }
            if !g.pow(p as u64).is_identity() {
                return Err(RepError::Relations(format!("g_{} has order not dividing {p}", i + 1)));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].mul(&gens[j]) != gens[j].mul(&gens[i]) {
                    return Err(RepError::Relations(format!("g_{} and g_{} do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(ERep::from_gens_trusted(field, p, gens, label))
    }

    fn from_gens_trusted(field: &FqField, p: u32, gens: Vec<Mat>, label: Option<String>) -> ERep {
        let dim = gens.first().map(|g| g.rows).unwrap_or(0);
        let id = Mat::identity(field, dim);
        let xs = gens.iter().map(|g| g.sub(&id)).collect();
        ERep { field: field.clone(), p, n: gens.len(), dim, gens, xs, label }
    }

    pub(crate) fn from_xs_trusted(field: &FqField, p: u32, xs: Vec<Mat>) -> ERep {
        let dim = xs.first().map(|x| x.rows).unwrap_or(0);
        let id = Mat::identity(field, dim);
        let gens = xs.iter().map(|x| x.add(&id)).collect();
        ERep { field: field.clone(), p, n: xs.len(), dim, gens, xs, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> ERep {
        self.label = Some(label.into());
        self
    }

    /// A module of dimension `dim` for the rank-`n` group with trivial action.
    pub fn trivial_of_dim(field: &FqField, n: usize, dim: usize) -> ERep {
        ERep::from_gens_trusted(field, field.p(), identity_gens(field, n, dim), None)
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    pub fn same_group(&self, o: &ERep) -> bool {
        self.field == o.field && self.p == o.p && self.n == o.n
    }

    fn check_same(&self, o: &ERep) -> Result<(), RepError> {
        if self.same_group(o) {
            Ok(())
        } else {
            Err(RepError::Mismatch)
        }
    }

    /// Images `x^a B` of the columns of `b` under every monomial.
    pub fn mono_images(&self, b: &Mat) -> Vec<Mat> {
        let chain = mono_chain(self.p, self.n);
        let mut out: Vec<Mat> = Vec::with_capacity(chain.len());
        out.push(b.clone());
        for &(i, prev) in &chain[1..] {
            let img = self.xs[i].mul(&out[prev]);
            out.push(img);
        }
        out
    }

    /// Evaluate `sum_a c_a x^a` on the columns of `b`.
    pub fn apply_element(&self, coeffs: &[u32], b: &Mat) -> Mat {
        let imgs = self.mono_images(b);
        let mut acc = Mat::zeros(&self.field, self.dim, b.cols);
        for (a, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc.add_scaled(c, &imgs[a]);
            }
        }
        acc
    }

    /// `N = prod x_i^(p-1)`, the action of the norm element.
    pub fn norm_matrix(&self) -> Mat {
        let mut m = Mat::identity(&self.field, self.dim);
        for x in &self.xs {
            m = x.pow((self.p - 1) as u64).mul(&m);
        }
        m
    }

    pub fn is_projective(&self) -> bool {
        self.norm_matrix().rank() * self.order() == self.dim
    }

    /// Change of field along the canonical embedding.
    pub fn extend_field(&self, target: &FqField) -> Result<ERep, RepError> {
        let gens = self
            .gens
            .iter()
            .map(|g| embed_mat(g, target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ERep::from_gens_trusted(target, self.p, gens, self.label.clone()))
    }

    pub fn is_intertwiner(&self, target: &ERep, f: &Mat) -> bool {
        f.rows == target.dim
            && f.cols == self.dim
            && self.xs.iter().zip(&target.xs).all(|(a, b)| b.mul(f) == f.mul(a))
    }

    pub fn to_file(&self) -> ModuleFile {
        ModuleFile {
            p: self.p,
            n: self.n,
            field: self.field.spec(),
            gens: self.gens.iter().map(|g| g.spec_json()).collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_file(m: &ModuleFile) -> Result<ERep, RepError> {
        let field = m.field.to_field()?;
        if m.gens.len() != m.n {
            return Err(RepError::File(format!("{} generators for rank {}", m.gens.len(), m.n)));
        }
        let gens = m
            .gens
            .iter()
            .map(|g| Mat::from_json(&field, g))
            .collect::<Result<Vec<_>, _>>()?;
        if m.n == 0 {
            return Err(RepError::File("rank 0".into()));
        }
        ERep::new(&field, m.p, gens, m.label.clone())
    }
}

pub fn embed_mat(m: &Mat, target: &FqField) -> Result<Mat, RepError> {
    if m.field == *target {
        return Ok(m.clone());
    }
    let data = m
        .data
        .iter()
        .map(|&c| target.embed_code(c, &m.field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mat { field: target.clone(), rows: m.rows, cols: m.cols, data })
}

/// Serialized module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleFile {
    pub p: u32,
    pub n: usize,
    pub field: FieldSpec,
    pub gens: Vec<MatJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// The group morphism `E -> k^+`, `g_i -> lambda_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaVec {
    pub entries: Vec<FqElem>,
}

impl LambdaVec {
    pub fn new(entries: Vec<FqElem>) -> Result<LambdaVec, RepError> {
        let Some(first) = entries.first() else {
            return Err(RepError::Dependent);
        };
        let f = first.field.clone();
        if entries.iter().any(|e| e.field != f) {
            return Err(RepError::Mismatch);
        }
        let fp = f.prime_field();
        let rows: Vec<Vec<u32>> = entries.iter().map(|e| f.coeffs(e.code)).collect();
        if Mat::from_rows(&fp, &rows).rank() < entries.len() {
            return Err(RepError::Dependent);
        }
        Ok(LambdaVec { entries })
    }

    pub fn from_codes(field: &FqField, codes: &[u32]) -> Result<LambdaVec, RepError> {
        LambdaVec::new(codes.iter().map(|&c| field.elem(c)).collect())
    }

    /// `(1, lam)` for the Klein four group, or `(0, 1)` for `lam = inf`.
    pub fn klein(lam: &PP1Point, field: &FqField) -> Result<LambdaVec, RepError> {
        match lam.embed(field)? {
            PP1Point::Infinity => LambdaVec::from_codes(field, &[0, 1]),
            PP1Point::Finite(l) => LambdaVec::from_codes(field, &[1, l.code]),
        }
    }

    pub fn field(&self) -> &FqField {
        &self.entries[0].field
    }
    pub fn codes(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.code).collect()
    }
    pub fn n(&self) -> usize {
        self.entries.len()
    }
}

// ---------------------------------------------------------------- constructors

pub fn trivial(field: &FqField, n: usize) -> ERep {
    ERep::trivial_of_dim(field, n, 1).with_label("1")
}

pub fn zero_module(field: &FqField, n: usize) -> ERep {
    ERep::trivial_of_dim(field, n, 0)
}

/// The regular module `kE` in the monomial basis.
pub fn regular(field: &FqField, n: usize) -> ERep {
    let p = field.p();
    let mons = monomials(p, n);
    let q = mons.len();
    let xs = (0..n)
        .map(|i| {
            let step = (p as usize).pow((n - 1 - i) as u32);
            let mut x = Mat::zeros(field, q, q);
            for (idx, a) in mons.iter().enumerate() {
                if a[i] + 1 < p {
                    x.set(idx + step, idx, 1);
                }
            }
            x
        })
        .collect();
    let mut m = ERep::from_xs_trusted(field, p, xs);
    m.label = Some("kE".into());
    m
}

/// `kE^r`.
pub fn free(field: &FqField, n: usize, r: usize) -> ERep {
    let ke = regular(field, n);
    (0..r).fold(zero_module(field, n), |acc, _| dsum(&acc, &ke))
}

/// `A_m(lam)` for the Klein four group: `g1 = [[I,0],[I,I]]`, `g2 = [[I,0],[J,I]]` with
/// `J` the Jordan block of eigenvalue `lam`; for `lam = inf` the generators are swapped.
#[allow(non_snake_case)]
pub fn make_A(m: usize, lam: &PP1Point, field: &FqField) -> ERep {
    assert!(field.p() == 2 && m >= 1, "A_m(lam) needs characteristic 2 and m >= 1");
    let lam = lam.embed(field).expect("lam must lie in the field");
    let (l, swap) = match &lam {
        PP1Point::Infinity => (0, true),
        PP1Point::Finite(e) => (e.code, false),
    };
    let id_m = Mat::identity(field, m);
    let jord = Mat::from_fn(field, m, m, |i, j| {
        if i == j {
            l
        } else {
            (j == i + 1) as u32
        }
    });
    let block = |low: &Mat| {
        let z = Mat::zeros(field, m, m);
        id_m.hstack(&z).vstack(&low.hstack(&id_m))
    };
    let g1 = block(&id_m);
    let g2 = block(&jord);
    let gens = if swap { vec![g2, g1] } else { vec![g1, g2] };
    let name = match &lam {
        PP1Point::Infinity => "inf".to_string(),
        PP1Point::Finite(e) => field.fmt_code(e.code),
    };
    ERep::from_gens_trusted(field, 2, gens, Some(format!("A_{m}({name})")))
}

/// `V_lambda`: `g_i -> [[1,0],[lambda_i,1]]`; the socle is spanned by `e_2`.
#[allow(non_snake_case)]
pub fn make_V(lv: &LambdaVec) -> ERep {
    let f = lv.field().clone();
    let gens = lv
        .codes()
        .iter()
        .map(|&l| Mat::from_rows(&f, &[vec![1, 0], vec![l, 1]]))
        .collect();
    ERep::from_gens_trusted(&f, f.p(), gens, Some("V".into()))
}

// ---------------------------------------------------------------- operations

pub fn tensor(a: &ERep, b: &ERep) -> ERep {
    a.check_same(b).expect("tensor of modules over different groups");
    let gens = a.gens.iter().zip(&b.gens).map(|(x, y)| x.kron(y)).collect();
    ERep::from_gens_trusted(&a.field, a.p, gens, None)
}

pub fn tensor_all(mods: &[ERep]) -> ERep {
    let mut it = mods.iter();
    let first = it.next().expect("empty tensor product").clone();
    it.fold(first, |acc, m| tensor(&acc, m))
}

pub fn dual(a: &ERep) -> ERep {
    let gens = a
        .gens
        .iter()
        .map(|g| g.pow((a.p - 1) as u64).transpose())
        .collect();
    ERep::from_gens_trusted(&a.field, a.p, gens, None)
}

pub fn dsum(a: &ERep, b: &ERep) -> ERep {
    a.check_same(b).expect("direct sum of modules over different groups");
    let gens = a.gens.iter().zip(&b.gens).map(|(x, y)| x.dsum(y)).collect();
    ERep::from_gens_trusted(&a.field, a.p, gens, None)
}

pub fn dsum_all(field: &FqField, n: usize, mods: &[ERep]) -> ERep {
    mods.iter().fold(zero_module(field, n), |acc, m| dsum(&acc, m))
}

/// The submodule on an invariant subspace, with its inclusion (columns = RREF basis).
pub fn submodule(a: &ERep, s: &Subspace) -> Result<(ERep, Mat), RepError> {
    let inc = s.basis.transpose();
    let mut xs = Vec::with_capacity(a.n);
    for x in &a.xs {
        let img = x.mul(&inc);
        let act = img.select_rows(&s.pivots);
        if inc.mul(&act) != img {
            return Err(RepError::NotSubmodule);
        }
        xs.push(act);
    }
    if a.n > 0 && s.dim() == 0 {
        return Ok((zero_module(&a.field, a.n), inc));
    }
    Ok((ERep::from_xs_trusted(&a.field, a.p, xs), inc))
}

/// The quotient by an invariant subspace, with the projection. The quotient basis is
/// the image of the standard vectors at the non-pivot positions of `s`.
pub fn quotient(a: &ERep, s: &Subspace) -> Result<(ERep, Mat), RepError> {
    let comp = s.complement_indices();
    let f = &a.field;
    let mut proj = Mat::zeros(f, comp.len(), a.dim);
    for j in 0..a.dim {
        let mut e = vec![0u32; a.dim];
        e[j] = 1;
        let r = s.reduce(&e);
        for (t, &c) in comp.iter().enumerate() {
            proj.set(t, j, r[c]);
        }
    }
    let mut xs = Vec::with_capacity(a.n);
    for x in &a.xs {
        for i in 0..s.dim() {
            if !s.contains(&x.mul_vec(s.basis.row(i))) {
                return Err(RepError::NotSubmodule);
            }
        }
        xs.push(proj.mul(&x.select_cols(&comp)));
    }
    if comp.is_empty() {
        return Ok((zero_module(f, a.n), proj));
    }
    Ok((ERep::from_xs_trusted(f, a.p, xs), proj))
}

/// The smallest submodule containing the columns of `v`.
pub fn generated_submodule(a: &ERep, v: &Mat) -> Subspace {
    let f = &a.field;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut queue: Vec<Vec<u32>> = (0..v.cols).map(|j| v.col(j)).collect();
    let mut space = Subspace::zero(f, a.dim);
    while let Some(w) = queue.pop() {
        let r = space.reduce(&w);
        if r.iter().all(|&c| c == 0) {
            continue;
        }
        rows.push(r);
        space = Subspace::from_rows(&Mat::from_rows(f, &rows));
        let last = rows.last().unwrap().clone();
        for x in &a.xs {
            queue.push(x.mul_vec(&last));
        }
    }
    space
}

/// Restriction to the subgroup generated by `h_j = prod_i g_i^(words[j][i])`.
pub fn restrict_to_subgroup(a: &ERep, words: &[Vec<u32>]) -> Result<ERep, RepError> {
    let mut gens = Vec::new();
    for w in words {
        if w.len() != a.n {
            return Err(RepError::Relations(format!("word {w:?} has the wrong length")));
        }
        let mut h = Mat::identity(&a.field, a.dim);
        for (g, &e) in a.gens.iter().zip(w) {
            h = h.mul(&g.pow(e as u64));
        }
        gens.push(h);
    }
    ERep::new(&a.field, a.p, gens, None)
}

/// `rad M = sum_i im x_i`.
pub fn radical(a: &ERep) -> Subspace {
    let f = &a.field;
    let mut m = Mat::zeros(f, 0, a.dim);
    for x in &a.xs {
        m = m.vstack(&x.transpose());
    }
    Subspace::from_rows(&m)
}

/// `soc M = H^0(E, M) = cap_i ker x_i`.
pub fn socle(a: &ERep) -> Subspace {
    let stacked = Mat::vstack_all(&a.field, a.dim, &a.xs);
    Subspace::from_rows(&stacked.kernel_rows())
}

pub fn invariants(a: &ERep) -> Subspace {
    socle(a)
}

/// `M / rad M` with its projection.
pub fn top(a: &ERep) -> (ERep, Mat) {
    quotient(a, &radical(a)).expect("radical is a submodule")
}

/// Splitting off the free part: `M = F ⊕ core` with `F` free.
#[derive(Clone, Debug)]
pub struct Core {
    pub core: ERep,
    /// `dim M x dim core`
    pub iota: Mat,
    /// `dim core x dim M`, projection along `F`
    pub pi: Mat,
    pub free_rank: usize,
    /// `dim M x |E| r`: column `j |E| + idx(a)` is `x^a v_j`
    pub free_iota: Mat,
    /// `|E| r x dim M`, projection onto `F` along the core
    pub free_pi: Mat,
}

/// The projective-free part of `M`.
///
/// With `N` the norm, pick `v_j` with `N v_j` a basis of `N M` and `psi_j` dual to it.
/// `pi(m)_(j,a) = psi_j(x^(abar) m)`, `abar = (p-1) - a`, is a module map `M -> kE^r`
/// that is unitriangular on the free submodule spanned by the `x^a v_j`, so its kernel
/// is a projective-free complement.
pub fn strip_projective(a: &ERep) -> Core {
    let f = &a.field;
    let nm = a.norm_matrix();
    let (_, piv, r) = nm.rref();
    if r == 0 {
        return Core {
            core: a.clone(),
            iota: Mat::identity(f, a.dim),
            pi: Mat::identity(f, a.dim),
            free_rank: 0,
            free_iota: Mat::zeros(f, a.dim, 0),
            free_pi: Mat::zeros(f, 0, a.dim),
        };
    }
    let q = a.order();
    let c = nm.select_cols(&piv);
    let psi = c.transpose().solve(&Mat::identity(f, r)).expect("norm image basis").transpose();
    // rows (j, a) of pi; x^abar = x^(q-1-idx(a)) in the monomial order
    let vs = Mat::identity(f, a.dim).select_cols(&piv);
    let mut free_cols = Vec::with_capacity(q * r);
    let imgs = a.mono_images(&vs);
    for j in 0..r {
        for img in &imgs {
            free_cols.push(img.col(j));
        }
    }
    let iota_f = Mat::from_cols(f, a.dim, &free_cols);
    let mut pi_rows = Vec::with_capacity(q * r);
    let psi_t = psi.transpose();
    let dual_imgs = dual_action_images(a, &psi_t);
    for j in 0..r {
        for idx in 0..q {
            pi_rows.push(dual_imgs[q - 1 - idx].col(j));
        }
    }
    let pi_f = Mat::from_rows(f, &pi_rows);
    let tri = pi_f.mul(&iota_f).inverse().expect("unitriangular");
    let ker = Subspace::from_rows(&pi_f.kernel_rows());
    let (core, iota) = submodule(a, &ker).expect("kernel of a module map");
    let proj = Mat::identity(f, a.dim).sub(&iota_f.mul(&tri).mul(&pi_f));
    let pi = proj.select_rows(&ker.pivots);
    let free_pi = tri.mul(&pi_f);
    Core { core, iota, pi, free_rank: r, free_iota: iota_f, free_pi }
}

/// Columns `(x^a)^T psi` for row functionals given as the columns of `psi_t`.
fn dual_action_images(a: &ERep, psi_t: &Mat) -> Vec<Mat> {
    let xt: Vec<Mat> = a.xs.iter().map(|x| x.transpose()).collect();
    let chain = mono_chain(a.p, a.n);
    let mut out: Vec<Mat> = vec![psi_t.clone()];
    for &(i, prev) in &chain[1..] {
        let img = xt[i].mul(&out[prev]);
        out.push(img);
    }
    out
}

/// The minimal projective cover over the top: generators are the standard vectors at
/// the positions not covered by the radical.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// `dim M x t`
    pub gens: Mat,
    /// `dim M x (|E| t)`: column `j |E| + idx(a)` is `x^a m_j`
    pub cover: Mat,
    /// `(|E| t) x dim M` with `cover * section = 1`
    pub section: Mat,
    /// columns generate `ker cover` as a module
    pub relations: Mat,
}

pub fn presentation(a: &ERep) -> Presentation {
    let f = &a.field;
    let gidx = radical(a).complement_indices();
    let gens = Mat::identity(f, a.dim).select_cols(&gidx);
    let imgs = a.mono_images(&gens);
    let q = a.order();
    let t = gidx.len();
    let mut cols = Vec::with_capacity(q * t);
    for j in 0..t {
        for img in &imgs {
            cols.push(img.col(j));
        }
    }
    let cover = Mat::from_cols(f, a.dim, &cols);
    let section = if t == 0 {
        Mat::zeros(f, 0, a.dim)
    } else {
        cover.solve(&Mat::identity(f, a.dim)).expect("cover is onto")
    };
    let relations = if t == 0 {
        Mat::zeros(f, 0, 0)
    } else {
        let free_t = free(f, a.n, t);
        let kerm = cover.kernel_rows();
        let (rel_mod, inc) = submodule(&free_t, &Subspace::from_rows(&kerm)).expect("kernel");
        let top_idx = radical(&rel_mod).complement_indices();
        inc.select_cols(&top_idx)
    };
    Presentation { gens, cover, section, relations }
}

/// Kernel of the minimal cover (`i > 0`, iterated), the dual construction (`i < 0`), or
/// the projective-free part (`i = 0`).
pub fn omega(a: &ERep, i: i64) -> ERep {
    if i < 0 {
        return dual(&omega(&dual(a), -i));
    }
    let mut m = strip_projective(a).core;
    for _ in 0..i {
        let pres = presentation(&m);
        let t = pres.gens.cols;
        let free_t = free(&m.field, m.n, t);
        let ker = Subspace::from_rows(&pres.cover.kernel_rows());
        m = submodule(&free_t, &ker).expect("kernel").0;
    }
    m
}

// ---------------------------------------------------------------- Hom spaces

/// A basis of `Hom_E(source, target)`, normalized by the images of the generators of
/// the source presentation (RREF in `target^t`).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: ERep,
    pub target: ERep,
    pub basis: Vec<Mat>,
    gens: Mat,
    images: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn gen_vector(&self, f: &Mat) -> Vec<u32> {
        let y = f.mul(&self.gens);
        let mut v = Vec::with_capacity(y.rows * y.cols);
        for j in 0..y.cols {
            v.extend(y.col(j));
        }
        v
    }

    /// Coordinates of an intertwiner; `None` if `f` is not one.
    pub fn coords(&self, f: &Mat) -> Option<Vec<u32>> {
        if !self.source.is_intertwiner(&self.target, f) {
            return None;
        }
        self.images.coords(&self.gen_vector(f))
    }

    pub fn combine(&self, c: &[u32]) -> Mat {
        let fl = &self.target.field;
        let mut m = Mat::zeros(fl, self.target.dim, self.source.dim);
        for (b, &x) in self.basis.iter().zip(c) {
            m.add_scaled(x, b);
        }
        m
    }

    /// The subspace of coordinate space spanned by the given intertwiners.
    pub fn span_of(&self, maps: &[Mat]) -> Subspace {
        let rows: Vec<Vec<u32>> = maps
            .iter()
            .map(|m| self.coords(m).expect("map is not an intertwiner"))
            .collect();
        coords_span(&self.target.field, self.dim(), &rows)
    }
}

pub fn coords_span(field: &FqField, dim: usize, rows: &[Vec<u32>]) -> Subspace {
    if rows.is_empty() {
        Subspace::zero(field, dim)
    } else {
        Subspace::from_rows(&Mat::from_rows(field, rows))
    }
}

/// Apply a relation `r in kE^t` to candidate generator images (`b` is `t dim(y) x c`).
fn apply_relation(y: &ERep, rel: &[u32], t: usize, b: &Mat) -> Mat {
    let q = y.order();
    let dy = y.dim;
    let mut out = Mat::zeros(&y.field, dy, b.cols);
    for j in 0..t {
        let coeffs = &rel[j * q..(j + 1) * q];
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let bj = b.submatrix(j * dy, 0, dy, b.cols);
        let nz: Vec<usize> = (0..b.cols).filter(|&c| (0..dy).any(|i| bj.get(i, c) != 0)).collect();
        if nz.is_empty() {
            continue;
        }
        let part = y.apply_element(coeffs, &bj.select_cols(&nz));
        for (k, &c) in nz.iter().enumerate() {
            for i in 0..dy {
                let v = part.get(i, k);
                if v != 0 {
                    out.set(i, c, y.field.add(out.get(i, c), v));
                }
            }
        }
    }
    out
}

/// `Hom(a, b)`: generator images `(y_j) in b^t` subject to the relations of `a`.
pub fn hom_space(a: &ERep, b: &ERep) -> HomSpace {
    a.check_same(b).expect("Hom between modules over different groups");
    let pres = presentation(a);
    hom_from_presentation(a, b, &pres)
}

pub fn hom_from_presentation(a: &ERep, b: &ERep, pres: &Presentation) -> HomSpace {
    let f = &a.field;
    let t = pres.gens.cols;
    let q = a.order();
    let dy = b.dim;
    let mut sol = Mat::identity(f, t * dy);
    let mut rels: Vec<Vec<u32>> = (0..pres.relations.cols).map(|j| pres.relations.col(j)).collect();
    rels.sort_by_key(|r| (0..t).filter(|&j| r[j * q..(j + 1) * q].iter().any(|&c| c != 0)).count());
    for r in &rels {
        if sol.cols == 0 {
            break;
        }
        let img = apply_relation(b, r, t, &sol);
        let k = img.kernel();
        sol = sol.mul(&k);
    }
    let images = Subspace::from_cols(&sol);
    let basis = (0..images.dim())
        .map(|k| {
            let yv = images.basis.row(k);
            let ys = Mat::from_fn(f, dy, t, |i, j| yv[j * dy + i]);
            let imgs = b.mono_images(&ys);
            let mut cols = Vec::with_capacity(q * t);
            for j in 0..t {
                for img in &imgs {
                    cols.push(img.col(j));
                }
            }
            Mat::from_cols(f, dy, &cols).mul(&pres.section)
        })
        .collect();
    HomSpace { source: a.clone(), target: b.clone(), basis, gens: pres.gens.clone(), images }
}

/// Independent route: solve `x_i f = f x_i` on `vec(f)` (row-major) directly.
pub fn hom_space_dense(a: &ERep, b: &ERep) -> Vec<Mat> {
    let f = &a.field;
    let (da, db) = (a.dim, b.dim);
    if da * db == 0 {
        return vec![];
    }
    let ops: Vec<StructuredOp> = a
        .xs
        .iter()
        .zip(&b.xs)
        .map(|(xa, xb)| {
            StructuredOp::kron(f, 1, vec![xb.clone(), Mat::identity(f, da)])
                .plus(StructuredOp::kron(f, f.neg(1), vec![Mat::identity(f, db), xa.transpose()]))
        })
        .collect();
    let k = intersect_kernels(&ops, da * db).expect("commutant equations");
    (0..k.cols)
        .map(|c| {
            let v = k.col(c);
            Mat::from_fn(f, db, da, |i, j| v[i * da + j])
        })
        .collect()
}

// ---------------------------------------------------------------- H_lambda and K

/// `H_lambda(M) = sum_{f: V -> M} f(v)` with `v` the socle vector of `V_lambda`.
pub fn h_lambda(m: &ERep, lv: &LambdaVec) -> Subspace {
    let v = make_V(lv);
    let h = hom_space(&v, m);
    let rows: Vec<Vec<u32>> = h.basis.iter().map(|g| g.col(1)).collect();
    coords_span(&m.field, m.dim, &rows)
}

/// `K(x, y) = { g (u ⊗ id_x) : g in Hom(V ⊗ x, y) }` inside `Hom(x, y)`.
#[derive(Clone, Debug)]
pub struct KIdeal {
    pub hom: HomSpace,
    /// subspace of the coordinate space of `hom`
    pub sub: Subspace,
}

impl KIdeal {
    pub fn maps(&self) -> Vec<Mat> {
        (0..self.sub.dim()).map(|i| self.hom.combine(self.sub.basis.row(i))).collect()
    }
}

pub fn k_ideal(x: &ERep, y: &ERep, lv: &LambdaVec) -> KIdeal {
    k_ideal_in(hom_space(x, y), lv)
}

/// `u ⊗ id_x` sends `x_i` to index `dim x + i` of `V ⊗ x`, so the maps in `K` are the
/// right halves of the maps `V ⊗ x -> y`.
pub fn k_ideal_in(hom: HomSpace, lv: &LambdaVec) -> KIdeal {
    let x = &hom.source;
    let vx = tensor(&make_V(lv), x);
    let big = hom_space(&vx, &hom.target);
    let cols: Vec<usize> = (x.dim..2 * x.dim).collect();
    let rows: Vec<Vec<u32>> = big
        .basis
        .iter()
        .map(|g| hom.coords(&g.select_cols(&cols)).expect("restriction is an intertwiner"))
        .collect();
    let sub = coords_span(&x.field, hom.dim(), &rows);
    KIdeal { hom, sub }
}

/// `f: M -> N` is negligible iff `tr(f g) = 0` for all `g: N -> M`.
pub fn negligible(f: &Mat, source: &ERep, target: &ERep) -> bool {
    hom_space(target, source).basis.iter().all(|g| f.mul(g).trace() == 0)
}

// ---------------------------------------------------------------- sampling

/// Cokernel of a seeded random map `kE^s -> kE^t`, with relations added until the
/// dimension is at most `budget`.
pub fn random_module(field: &FqField, n: usize, budget: usize, seed: u64) -> ERep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = (field.p() as usize).pow(n as u32);
    if budget == 0 {
        return zero_module(field, n);
    }
    let t = rng.gen_range(1..=(budget.div_ceil(q) + 1).min(budget));
    let ft = free(field, n, t);
    let mut rels = Mat::zeros(field, ft.dim, 0);
    let mut sub = Subspace::zero(field, ft.dim);
    while ft.dim - sub.dim() > budget || rels.cols == 0 {
        // relations in the radical keep all t generators
        let mut r = Mat::random(field, ft.dim, 1, &mut rng);
        for j in 0..t {
            r.set(j * q, 0, 0);
        }
        rels = rels.hstack(&r);
        sub = generated_submodule(&ft, &rels);
    }
    quotient(&ft, &sub).expect("generated submodule").0
}
