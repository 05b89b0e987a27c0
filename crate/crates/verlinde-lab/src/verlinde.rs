//! The quotient `D_lambda / K` inside `Rep C_p^n`, the basic algebra of the projective
//! objects of `Ver_(p^n)`, and objects of `Ver_(p^n)` as modules over that algebra.
//!
//! Hom spaces are always taken modulo an ideal that contains every map through a
//! projective module, so targets may be replaced by their projective-free cores.

use crate::exactla::{Mat, Subspace};
use crate::ffield::{common_field, FieldError, FqField};
use crate::krull::{decompose, iso_test, OperatorModule};
use crate::repe::{
    coords_span, dual, hom_space, make_V, regular, strip_projective, tensor, trivial, Core, ERep, HomSpace,
    LambdaVec, RepError,
};
use crate::sl2tilt::{prime_catalog, restrict, TiltError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerError {
    #[error("composition is not associative on vertices {0:?}")]
    Associativity((usize, usize, usize, usize)),
    #[error("the identity of vertex {0} does not act as a unit")]
    Identity(usize),
    #[error("R(T_{0}) is projective, so it cannot be a vertex")]
    ProjectiveVertex(usize),
    #[error("module relation violated: {0}")]
    Relation(String),
    #[error("(p, n) = ({0}, {1}) is beyond the supported scale")]
    Scale(u32, u32),
    #[error(transparent)]
    Tilt(#[from] TiltError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub(crate) fn lift(m: &ERep, f: &FqField) -> ERep {
    if m.field == *f {
        m.clone()
    } else {
        m.extend_field(f).expect("field embedding")
    }
}

// ---------------------------------------------------------------- ideals

/// The tensor ideal generated by a map `u: 1 -> w`, optionally together with all maps
/// through projective modules. Its component in `Hom(x, y)` is
/// `{ g (u ⊗ id_x) : g in Hom(w ⊗ x, y) }`.
#[derive(Clone, Debug)]
pub struct TensorIdeal {
    pub w: ERep,
    pub u: Vec<u32>,
    pub with_projectives: bool,
}

impl TensorIdeal {
    /// `K`: generated by the socle inclusion `1 -> V_lambda`.
    pub fn k(lv: &LambdaVec) -> TensorIdeal {
        TensorIdeal { w: make_V(lv), u: vec![0, 1], with_projectives: false }
    }

    /// Generated by `id_a` (through `coev: 1 -> a ⊗ a*`) and the projectives.
    pub fn generated_by(a: &ERep) -> TensorIdeal {
        let d = a.dim;
        let w = tensor(a, &dual(a));
        let mut coev = vec![0; d * d];
        for i in 0..d {
            coev[i * d + i] = 1;
        }
        let c = strip_projective(&w);
        let u = c.pi.mul_vec(&coev);
        TensorIdeal { w: c.core, u, with_projectives: true }
    }

    /// Only the maps through projectives.
    pub fn projectives(field: &FqField, n: usize) -> TensorIdeal {
        TensorIdeal { w: crate::repe::zero_module(field, n), u: vec![], with_projectives: true }
    }

    pub fn field(&self) -> &FqField {
        &self.w.field
    }

    pub fn lift(&self, f: &FqField) -> TensorIdeal {
        if self.w.field == *f {
            return self.clone();
        }
        let u = self.u.iter().map(|&c| f.embed_code(c, &self.w.field).expect("field embedding")).collect();
        TensorIdeal { w: lift(&self.w, f), u, with_projectives: self.with_projectives }
    }

    /// `u ⊗ id_x: x -> w ⊗ x` (column `j` goes to `sum_i u_i e_(i dim x + j)`).
    fn arrow(w_dim: usize, u: &[u32], x: &ERep) -> Mat {
        let dx = x.dim;
        let mut m = Mat::zeros(&x.field, w_dim * dx, dx);
        for (i, &c) in u.iter().enumerate() {
            if c != 0 {
                for j in 0..dx {
                    m.set(i * dx + j, j, c);
                }
            }
        }
        m
    }

    /// The ideal's component as a subspace of the coordinates of `hom`.
    pub fn subspace(&self, hom: &HomSpace) -> Subspace {
        let x = &hom.source;
        let y = &hom.target;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        if self.u.iter().any(|&c| c != 0) && x.dim > 0 {
            let wx = tensor(&self.w, x);
            let phi = TensorIdeal::arrow(self.w.dim, &self.u, x);
            let (src, phi) = if self.with_projectives {
                let c = strip_projective(&wx);
                let phi = c.pi.mul(&phi);
                (c.core, phi)
            } else {
                (wx, phi)
            };
            for g in hom_space(&src, y).basis {
                rows.push(hom.coords(&g.mul(&phi)).expect("ideal element is an intertwiner"));
            }
        }
        if self.with_projectives && x.dim > 0 {
            let q = x.order();
            let ke = regular(&x.field, x.n);
            let mut u = vec![0; q];
            u[q - 1] = 1;
            let phi = TensorIdeal::arrow(q, &u, x);
            for g in hom_space(&tensor(&ke, x), y).basis {
                rows.push(hom.coords(&g.mul(&phi)).expect("ideal element is an intertwiner"));
            }
        }
        coords_span(&x.field, hom.dim(), &rows)
    }
}

// ---------------------------------------------------------------- quotient Homs

/// `Hom(source, target)` modulo an ideal, with the quotient basis given by the basis
/// maps of `full` at the non-pivot positions of `ideal`.
#[derive(Clone, Debug)]
pub struct QuotHom {
    pub source: ERep,
    pub target: ERep,
    pub full: HomSpace,
    pub ideal: Subspace,
    pub quotient_dim: usize,
    pub complement: Vec<usize>,
}

impl QuotHom {
    pub fn from_parts(full: HomSpace, ideal: Subspace) -> QuotHom {
        let complement = ideal.complement_indices();
        QuotHom {
            source: full.source.clone(),
            target: full.target.clone(),
            quotient_dim: complement.len(),
            complement,
            ideal,
            full,
        }
    }

    /// The chosen representative of quotient basis vector `k`.
    pub fn rep(&self, k: usize) -> &Mat {
        &self.full.basis[self.complement[k]]
    }

    pub fn reps(&self) -> Vec<Mat> {
        (0..self.quotient_dim).map(|k| self.rep(k).clone()).collect()
    }

    /// Quotient coordinates of an intertwiner; `None` if `f` is not one.
    pub fn reduce(&self, f: &Mat) -> Option<Vec<u32>> {
        let c = self.full.coords(f)?;
        let r = self.ideal.reduce(&c);
        Some(self.complement.iter().map(|&j| r[j]).collect())
    }

    pub fn in_ideal(&self, f: &Mat) -> bool {
        self.reduce(f).is_some_and(|c| c.iter().all(|&x| x == 0))
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.dim()
    }
}

pub fn quot_hom_in(x: &ERep, y: &ERep, ideal: &TensorIdeal) -> QuotHom {
    let full = hom_space(x, y);
    let sub = ideal.subspace(&full);
    QuotHom::from_parts(full, sub)
}

/// `Hom_E(x, y) / K(x, y)` over the smallest field containing all inputs.
pub fn quot_hom(x: &ERep, y: &ERep, lv: &LambdaVec) -> QuotHom {
    let f = common_field(&common_field(&x.field, &y.field).expect("fields"), lv.field()).expect("fields");
    let ideal = TensorIdeal::k(lv).lift(&f);
    quot_hom_in(&lift(x, &f), &lift(y, &f), &ideal)
}

/// A target replaced by its core: `Hom(x, y)/I = Hom(x, core y)/I` via `pi`.
#[derive(Clone, Debug)]
pub struct StableQuot {
    pub core: Core,
    pub quot: QuotHom,
}

impl StableQuot {
    pub fn new(x: &ERep, y: &ERep, ideal: &TensorIdeal) -> StableQuot {
        let core = strip_projective(y);
        let quot = quot_hom_in(x, &core.core, ideal);
        StableQuot { core, quot }
    }

    /// Quotient coordinates of a map `x -> y`.
    pub fn reduce(&self, f: &Mat) -> Option<Vec<u32>> {
        self.quot.reduce(&self.core.pi.mul(f))
    }
}

// ---------------------------------------------------------------- the basic algebra

/// Structure constants `consts[i][j]` of `e_j ∘ e_i` for `e_i: P_a -> P_b`,
/// `e_j: P_b -> P_c`, in the quotient basis of `Hom(P_a, P_c)`.
#[derive(Clone, Debug, Serialize)]
pub struct MultBlock {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub consts: Vec<Vec<Vec<u32>>>,
}

/// Whether the first index past the vertex range gives a zero object, and whether the
/// vertices are pairwise distinct stable indecomposables.
#[derive(Clone, Debug, Serialize)]
pub struct RangeCheck {
    pub past_end_index: usize,
    pub past_end_vanishes: bool,
    pub vertices_indecomposable: bool,
    pub vertices_distinct: bool,
}

#[derive(Clone, Debug)]
pub struct BasicAlgebra {
    pub p: u32,
    pub n: u32,
    /// set for the algebras of `Ver_(p^n)`
    pub lv: Option<LambdaVec>,
    pub field: FqField,
    pub proj_indices: Vec<usize>,
    pub vertex_names: Vec<String>,
    /// projective-free cores of `R(T_i)`
    pub vertices: Vec<ERep>,
    pub homs: Vec<Vec<QuotHom>>,
    pub hom_dims: Vec<Vec<usize>>,
    pub identities: Vec<Vec<u32>>,
    /// per vertex: the residue of each basis vector of the local algebra `Q(a, a)`
    pub augmentations: Vec<Vec<u32>>,
    pub blocks: Vec<MultBlock>,
    pub range_check: Option<RangeCheck>,
    ideal: TensorIdeal,
}

impl BasicAlgebra {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn total_dim(&self) -> usize {
        self.hom_dims.iter().flatten().sum()
    }

    pub fn ideal(&self) -> &TensorIdeal {
        &self.ideal
    }

    pub fn block(&self, a: usize, b: usize, c: usize) -> &MultBlock {
        let v = self.num_vertices();
        &self.blocks[(a * v + b) * v + c]
    }

    /// Product `g ∘ f` of quotient vectors `f in Q(a,b)`, `g in Q(b,c)`.
    pub fn compose(&self, a: usize, b: usize, c: usize, f: &[u32], g: &[u32]) -> Vec<u32> {
        let fl = &self.field;
        let blk = self.block(a, b, c);
        let mut out = vec![0; self.hom_dims[a][c]];
        for (i, &x) in f.iter().enumerate() {
            for (j, &y) in g.iter().enumerate() {
                let s = fl.mul(x, y);
                if s != 0 {
                    fl.axpy(&mut out, s, &blk.consts[i][j]);
                }
            }
        }
        out
    }

    pub fn vertex_label(&self, a: usize) -> String {
        self.vertex_names[a].clone()
    }

    /// Vertices `vertices` (projective-free, with local endomorphism rings modulo the
    /// ideal) and all composition constants.
    pub fn from_vertices(
        field: &FqField,
        vertices: Vec<ERep>,
        vertex_names: Vec<String>,
        ideal: TensorIdeal,
    ) -> Result<BasicAlgebra, VerError> {
        let nv = vertices.len();
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (0..nv).map(move |b| (a, b))).collect();
        let flat: Vec<QuotHom> = pairs
            .par_iter()
            .map(|&(a, b)| quot_hom_in(&vertices[a], &vertices[b], &ideal))
            .collect();
        let mut homs: Vec<Vec<QuotHom>> = vec![Vec::with_capacity(nv); nv];
        for ((a, _), q) in pairs.iter().zip(flat) {
            homs[*a].push(q);
        }
        let hom_dims: Vec<Vec<usize>> = homs.iter().map(|r| r.iter().map(|q| q.quotient_dim).collect()).collect();
        let identities: Vec<Vec<u32>> = (0..nv)
            .map(|a| homs[a][a].reduce(&Mat::identity(field, vertices[a].dim)).expect("identity"))
            .collect();
        let triples: Vec<(usize, usize, usize)> =
            (0..nv).flat_map(|a| (0..nv).flat_map(move |b| (0..nv).map(move |c| (a, b, c)))).collect();
        let blocks: Vec<MultBlock> = triples
            .par_iter()
            .map(|&(a, b, c)| {
                let consts = (0..hom_dims[a][b])
                    .map(|i| {
                        (0..hom_dims[b][c])
                            .map(|j| {
                                let comp = homs[b][c].rep(j).mul(homs[a][b].rep(i));
                                homs[a][c].reduce(&comp).expect("composite is an intertwiner")
                            })
                            .collect()
                    })
                    .collect();
                MultBlock { a, b, c, consts }
            })
            .collect();
        let mut alg = BasicAlgebra {
            p: field.p(),
            n: vertices.first().map(|v| v.n).unwrap_or(0) as u32,
            lv: None,
            field: field.clone(),
            proj_indices: (0..nv).collect(),
            vertex_names,
            vertices,
            homs,
            hom_dims,
            identities,
            augmentations: vec![],
            blocks,
            range_check: None,
            ideal,
        };
        check_algebra(&alg)?;
        alg.augmentations = (0..nv).map(|a| augmentation(&alg, a)).collect::<Result<_, _>>()?;
        Ok(alg)
    }

    pub fn export(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "n": self.n,
            "field": self.field.spec(),
            "lv": self.lv.as_ref().map(|l| l.codes()),
            "vertices": self.proj_indices.iter().map(|i| format!("R(T_{i})")).collect::<Vec<_>>(),
            "hom_dims": self.hom_dims,
            "identities": self.identities,
            "mult": self.blocks,
            "range_check": self.range_check,
        })
    }
}

/// Vertex labels `p^(n-1) - 1 <= i <= p^n - 2`.
pub fn proj_range(p: u32, n: u32) -> Vec<usize> {
    let lo = p.pow(n - 1) as usize - 1;
    let hi = p.pow(n) as usize - 2;
    (lo..=hi).collect()
}

pub fn basic_algebra(p: u32, n: u32, lv: &LambdaVec, seed: u64) -> Result<BasicAlgebra, VerError> {
    if p.pow(n) > 16 {
        return Err(VerError::Scale(p, n));
    }
    let idx = proj_range(p, n);
    let top = p.pow(n) as usize - 1;
    let cat = prime_catalog(p, top)?;
    let restricted: Vec<ERep> = idx
        .iter()
        .map(|&i| restrict(&cat[i].hyper, lv))
        .collect::<Result<_, _>>()?;
    let field = restricted[0].field.clone();
    let ideal = TensorIdeal::k(lv).lift(&field);
    let vertices: Vec<ERep> = restricted.iter().map(|r| strip_projective(r).core).collect();
    for (a, v) in vertices.iter().enumerate() {
        if v.dim == 0 {
            return Err(VerError::ProjectiveVertex(idx[a]));
        }
    }
    let names = idx.iter().map(|i| format!("T{i}")).collect();
    let mut alg = BasicAlgebra::from_vertices(&field, vertices, names, ideal)?;
    let nv = alg.num_vertices();
    let vertices = &alg.vertices;
    let past = restrict(&cat[top].hyper, lv)?;
    let past_q = quot_hom_in(&lift(&past, &field), &lift(&past, &field), &alg.ideal);
    let om: Vec<OperatorModule> = vertices.iter().map(OperatorModule::from_erep).collect();
    let vertices_indecomposable = om.iter().enumerate().all(|(a, m)| decompose(m, seed ^ a as u64).num_summands() == 1);
    let vertices_distinct = (0..nv).all(|a| (a + 1..nv).all(|b| iso_test(&om[a], &om[b], seed).is_none()));
    let range_check = RangeCheck {
        past_end_index: top,
        past_end_vanishes: past_q.quotient_dim == 0,
        vertices_indecomposable,
        vertices_distinct,
    };
    alg.p = p;
    alg.n = n;
    alg.lv = Some(lv.clone());
    alg.proj_indices = idx;
    alg.range_check = Some(range_check);
    Ok(alg)
}

/// The residues of the basis of the local algebra `Q(a, a)`: the unique eigenvalue of
/// right multiplication by each basis vector.
fn augmentation(alg: &BasicAlgebra, a: usize) -> Result<Vec<u32>, VerError> {
    let d = alg.hom_dims[a][a];
    (0..d)
        .map(|i| {
            let e = unit_vec(d, i);
            let cols: Vec<Vec<u32>> = (0..d).map(|k| alg.compose(a, a, a, &unit_vec(d, k), &e)).collect();
            let m = Mat::from_cols(&alg.field, d, &cols);
            let r = crate::ffield::roots(&m.charpoly(), i as u64);
            match r.as_slice() {
                [c] => Ok(*c),
                _ => Err(VerError::Relation(format!("Q({a}, {a}) is not local"))),
            }
        })
        .collect()
}

fn unit_vec(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Associativity on basis triples and two-sided units.
pub fn check_algebra(alg: &BasicAlgebra) -> Result<(), VerError> {
    let nv = alg.num_vertices();
    let d = &alg.hom_dims;
    for a in 0..nv {
        for b in 0..nv {
            for i in 0..d[a][b] {
                let e = unit_vec(d[a][b], i);
                if alg.compose(a, b, b, &e, &alg.identities[b]) != e || alg.compose(a, a, b, &alg.identities[a], &e) != e {
                    return Err(VerError::Identity(a));
                }
            }
        }
    }
    for a in 0..nv {
        for b in 0..nv {
            for c in 0..nv {
                for dd in 0..nv {
                    for i in 0..d[a][b] {
                        let f = unit_vec(d[a][b], i);
                        for j in 0..d[b][c] {
                            let g = unit_vec(d[b][c], j);
                            let gf = alg.compose(a, b, c, &f, &g);
                            for k in 0..d[c][dd] {
                                let h = unit_vec(d[c][dd], k);
                                let left = alg.compose(a, c, dd, &gf, &h);
                                let hg = alg.compose(b, c, dd, &g, &h);
                                let right = alg.compose(a, b, dd, &f, &hg);
                                if left != right {
                                    return Err(VerError::Associativity((a, b, c, dd)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- modules over it

/// A right module over the basic algebra: `dims[a]` is the dimension at vertex `a` and
/// `act[a][b][i]: M_b -> M_a` is precomposition with basis vector `i` of `Q(a, b)`.
#[derive(Clone, Debug)]
pub struct BModule {
    pub field: FqField,
    pub dims: Vec<usize>,
    pub act: Vec<Vec<Vec<Mat>>>,
}

impl BModule {
    pub fn zero(alg: &BasicAlgebra) -> BModule {
        let nv = alg.num_vertices();
        let act = (0..nv)
            .map(|a| (0..nv).map(|b| vec![Mat::zeros(&alg.field, 0, 0); alg.hom_dims[a][b]]).collect())
            .collect();
        BModule { field: alg.field.clone(), dims: vec![0; nv], act }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dsum(&self, o: &BModule) -> BModule {
        let act = self
            .act
            .iter()
            .zip(&o.act)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(xa, xb)| xa.iter().zip(xb).map(|(m1, m2)| m1.dsum(m2)).collect())
                    .collect()
            })
            .collect();
        let dims = self.dims.iter().zip(&o.dims).map(|(a, b)| a + b).collect();
        BModule { field: self.field.clone(), dims, act }
    }

    /// The action of a quotient vector `f in Q(a, b)`.
    pub fn act_on(&self, a: usize, b: usize, f: &[u32]) -> Mat {
        let mut m = Mat::zeros(&self.field, self.dims[a], self.dims[b]);
        for (i, &c) in f.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &self.act[a][b][i]);
            }
        }
        m
    }

    /// `(m g) f = m (g f)` on all basis pairs, and units act as identities.
    pub fn check(&self, alg: &BasicAlgebra) -> Result<(), VerError> {
        let nv = alg.num_vertices();
        let d = &alg.hom_dims;
        for a in 0..nv {
            if !self.act_on(a, a, &alg.identities[a]).is_identity() {
                return Err(VerError::Relation(format!("unit at vertex {a}")));
            }
            for b in 0..nv {
                for c in 0..nv {
                    for i in 0..d[a][b] {
                        for j in 0..d[b][c] {
                            let gf = alg.compose(a, b, c, &unit_vec(d[a][b], i), &unit_vec(d[b][c], j));
                            let lhs = self.act_on(a, c, &gf);
                            let rhs = self.act[a][b][i].mul(&self.act[b][c][j]);
                            if lhs != rhs {
                                return Err(VerError::Relation(format!("arrows {a}->{b}->{c}")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for d in &self.dims {
            off.push(off.last().unwrap() + d);
        }
        off
    }

    /// Vertex projectors and all arrows, on `⊕_a M_a`.
    pub fn operator_module(&self) -> OperatorModule {
        let f = &self.field;
        let total = self.total_dim();
        let off = self.offsets();
        let mut ops = Vec::new();
        for a in 0..self.dims.len() {
            let mut e = Mat::zeros(f, total, total);
            for k in off[a]..off[a + 1] {
                e.set(k, k, 1);
            }
            ops.push(e);
        }
        for (a, row) in self.act.iter().enumerate() {
            for (b, arrows) in row.iter().enumerate() {
                for m in arrows {
                    let mut big = Mat::zeros(f, total, total);
                    for r in 0..m.rows {
                        for c in 0..m.cols {
                            big.set(off[a] + r, off[b] + c, m.get(r, c));
                        }
                    }
                    ops.push(big);
                }
            }
        }
        OperatorModule::generic(f, total, ops)
    }

    /// `M / im(f)` for per-vertex maps `f_a: N_a -> M_a`, with projections and sections.
    pub fn cokernel(&self, f: &[Mat]) -> (BModule, Vec<Mat>, Vec<Mat>) {
        let nv = self.dims.len();
        let images: Vec<Subspace> = (0..nv).map(|a| Subspace::from_cols(&f[a])).collect();
        let projs: Vec<Mat> = images.iter().map(quotient_projection).collect();
        let sections: Vec<Mat> = images.iter().map(quotient_section).collect();
        let dims: Vec<usize> = projs.iter().map(|q| q.rows).collect();
        let act = (0..nv)
            .map(|a| {
                (0..nv)
                    .map(|b| self.act[a][b].iter().map(|m| projs[a].mul(m).mul(&sections[b])).collect())
                    .collect()
            })
            .collect();
        (BModule { field: self.field.clone(), dims, act }, projs, sections)
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

/// `k^n -> k^n / S` in the coordinates at the non-pivot positions of `S`.
pub fn quotient_projection(s: &Subspace) -> Mat {
    let comp = s.complement_indices();
    let n = s.ambient();
    let mut q = Mat::zeros(s.field(), comp.len(), n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let r = s.reduce(&e);
        for (k, &c) in comp.iter().enumerate() {
            q.set(k, j, r[c]);
        }
    }
    q
}

/// The inclusion of the non-pivot coordinates, a section of `quotient_projection`.
pub fn quotient_section(s: &Subspace) -> Mat {
    let comp = s.complement_indices();
    let mut m = Mat::zeros(s.field(), s.ambient(), comp.len());
    for (k, &c) in comp.iter().enumerate() {
        m.set(c, k, 1);
    }
    m
}

/// `to_bmodule` with the data needed to act on morphisms.
#[derive(Clone, Debug)]
pub struct BRealization {
    pub bmodule: BModule,
    pub quots: Vec<StableQuot>,
}

pub fn realize(m: &ERep, alg: &BasicAlgebra) -> BRealization {
    let f = common_field(&m.field, &alg.field).expect("fields");
    assert!(f == alg.field, "the module's field must embed in the algebra's field");
    let m = lift(m, &f);
    let nv = alg.num_vertices();
    let quots: Vec<StableQuot> = (0..nv).map(|a| StableQuot::new(&alg.vertices[a], &m, &alg.ideal)).collect();
    let dims: Vec<usize> = quots.iter().map(|q| q.quot.quotient_dim).collect();
    let act = (0..nv)
        .map(|a| {
            (0..nv)
                .map(|b| {
                    (0..alg.hom_dims[a][b])
                        .map(|i| {
                            let e = alg.homs[a][b].rep(i);
                            let cols: Vec<Vec<u32>> = (0..dims[b])
                                .map(|k| quots[a].quot.reduce(&quots[b].quot.rep(k).mul(e)).expect("intertwiner"))
                                .collect();
                            Mat::from_cols(&f, dims[a], &cols)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    BRealization { bmodule: BModule { field: f, dims, act }, quots }
}

/// Vertex spaces `Hom(R(T_a), M) / K`, acted on by precomposition.
pub fn to_bmodule(m: &ERep, alg: &BasicAlgebra) -> BModule {
    realize(m, alg).bmodule
}

/// The map of vertex spaces induced by an intertwiner `g: M -> N` (postcomposition).
pub fn bmodule_map(g: &Mat, src: &BRealization, tgt: &BRealization) -> Vec<Mat> {
    src.quots
        .iter()
        .zip(&tgt.quots)
        .map(|(s, t)| {
            let lifted = g.mul(&s.core.iota);
            let cols: Vec<Vec<u32>> = (0..s.quot.quotient_dim)
                .map(|k| t.reduce(&lifted.mul(s.quot.rep(k))).expect("intertwiner"))
                .collect();
            Mat::from_cols(&s.quot.target.field, t.quot.quotient_dim, &cols)
        })
        .collect()
}

// ---------------------------------------------------------------- naming

/// Reference indecomposables of the basic algebra, named by their role in `Ver_(p^n)`.
#[derive(Clone, Debug)]
pub struct NameTable {
    pub entries: Vec<(String, BModule)>,
}

fn iso_bmodules(a: &BModule, b: &BModule, seed: u64) -> bool {
    a.dims == b.dims && iso_test(&a.operator_module(), &b.operator_module(), seed).is_some()
}

fn simple_at(alg: &BasicAlgebra, a: usize) -> BModule {
    let nv = alg.num_vertices();
    let mut dims = vec![0; nv];
    dims[a] = 1;
    let act = (0..nv)
        .map(|x| {
            (0..nv)
                .map(|y| {
                    (0..alg.hom_dims[x][y])
                        .map(|i| {
                            let mut m = Mat::zeros(&alg.field, dims[x], dims[y]);
                            if x == a && y == a {
                                m.set(0, 0, alg.augmentations[a][i]);
                            }
                            m
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    BModule { field: alg.field.clone(), dims, act }
}

/// `1`, `V`, the projective covers (`P(1)` for the cover of the unit, `T<i>` otherwise)
/// and the simple tops `L<i>`, keeping the first name of each isomorphism class.
pub fn name_table(alg: &BasicAlgebra, seed: u64) -> NameTable {
    let f = &alg.field;
    let n = alg.n as usize;
    let unit = to_bmodule(&trivial(f, n), alg);
    let mut cands: Vec<(String, BModule)> = vec![("1".into(), unit.clone()), ];
    if let Some(lv) = &alg.lv {
        cands.push(("V".into(), to_bmodule(&make_V(lv), alg)));
    }
    for a in 0..alg.num_vertices() {
        let pa = to_bmodule(&alg.vertices[a], alg);
        let top = simple_at(alg, a);
        let name = if iso_bmodules(&top, &unit, seed) { "P(1)".to_string() } else { alg.vertex_label(a) };
        cands.push((name, pa));
        cands.push((format!("L{}", alg.proj_indices[a]), top));
    }
    let mut entries: Vec<(String, BModule)> = Vec::new();
    for (name, m) in cands {
        if m.is_zero() {
            continue;
        }
        if decompose(&m.operator_module(), seed).num_summands() != 1 {
            continue;
        }
        if !entries.iter().any(|(_, e)| iso_bmodules(e, &m, seed)) {
            entries.push((name, m));
        }
    }
    NameTable { entries }
}

/// A `BModule` split into named indecomposables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerMultiset {
    pub entries: BTreeMap<String, usize>,
    /// vertex dimensions of indecomposables matching no reference
    pub unmatched: Vec<Vec<usize>>,
}

impl VerMultiset {
    pub fn get(&self, name: &str) -> usize {
        self.entries.get(name).copied().unwrap_or(0)
    }
    pub fn from_pairs(pairs: &[(&str, usize)]) -> VerMultiset {
        let mut m = VerMultiset::default();
        for &(k, v) in pairs {
            if v > 0 {
                *m.entries.entry(k.to_string()).or_default() += v;
            }
        }
        m
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.unmatched.is_empty()
    }
}

impl std::fmt::Display for VerMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, &m)| if m == 1 { k.clone() } else { format!("{k}^{m}") })
            .collect();
        for d in &self.unmatched {
            parts.push(format!("?{d:?}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn classify_bmodule(b: &BModule, table: &NameTable, seed: u64) -> VerMultiset {
    let mut out = VerMultiset::default();
    if b.is_zero() {
        return out;
    }
    let nv = b.dims.len();
    let refs: Vec<(&String, OperatorModule)> = table.entries.iter().map(|(n, e)| (n, e.operator_module())).collect();
    let d = decompose(&b.operator_module(), seed);
    for part in &d.parts {
        let m = &part.module;
        match refs.iter().find(|(_, r)| iso_test(r, m, seed).is_some()) {
            Some((name, _)) => *out.entries.entry((*name).clone()).or_default() += part.mult,
            None => {
                let dims: Vec<usize> = (0..nv).map(|a| m.ops[a].rank()).collect();
                for _ in 0..part.mult {
                    out.unmatched.push(dims.clone());
                }
            }
        }
    }
    out.unmatched.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::gf;
    use crate::repe::{free, make_V};
    use crate::sl2tilt::basis_lv;

    #[test]
    fn ver4_algebra() {
        let lv = basis_lv(2, 2);
        let alg = basic_algebra(2, 2, &lv, 1).unwrap();
        assert_eq!(alg.proj_indices, vec![1, 2]);
        assert_eq!(alg.hom_dims, vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(alg.total_dim(), 3);
        assert!(alg.range_check.as_ref().unwrap().past_end_vanishes);
        assert!(alg.range_check.as_ref().unwrap().vertices_distinct);
        // End(P(1)) is local: the non-identity basis vector squares to zero modulo the unit
        let big = &alg.homs[1][1];
        assert_eq!(big.quotient_dim, 2);
    }

    #[test]
    fn ver2_is_vec() {
        let lv = basis_lv(2, 1);
        let alg = basic_algebra(2, 1, &lv, 0).unwrap();
        assert_eq!(alg.proj_indices, vec![0]);
        assert_eq!(alg.hom_dims, vec![vec![1]]);
    }

    #[test]
    fn small_quotients() {
        let lv = basis_lv(2, 2);
        let f = lv.field().clone();
        let v = make_V(&lv);
        assert_eq!(quot_hom(&v, &v, &lv).quotient_dim, 1);
        let one = trivial(&f, 2);
        assert_eq!(quot_hom(&one, &free(&f, 2, 1), &lv).quotient_dim, 0);
        assert_eq!(quot_hom(&one, &one, &lv).quotient_dim, 1);
    }

    #[test]
    fn ver4_objects() {
        let lv = basis_lv(2, 2);
        let f = lv.field().clone();
        let alg = basic_algebra(2, 2, &lv, 1).unwrap();
        let v = make_V(&lv);
        let bv = to_bmodule(&v, &alg);
        assert_eq!(bv.dims, vec![1, 0]);
        let one = to_bmodule(&trivial(&f, 2), &alg);
        assert_eq!(one.dims, vec![0, 1]);
        assert!(to_bmodule(&free(&f, 2, 1), &alg).is_zero());
        let table = name_table(&alg, 3);
        let names: Vec<&str> = table.entries.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["1", "V", "P(1)"]);
        let vv = to_bmodule(&tensor(&v, &v), &alg);
        vv.check(&alg).unwrap();
        assert_eq!(classify_bmodule(&vv, &table, 0), VerMultiset::from_pairs(&[("P(1)", 1)]));
        assert_eq!(classify_bmodule(&one.dsum(&one), &table, 0), VerMultiset::from_pairs(&[("1", 2)]));
        assert!(classify_bmodule(&BModule::zero(&alg), &table, 0).is_empty());
    }

    #[test]
    fn ideal_generated_by_identity_of_v() {
        // the ideal generated by id_V contains the socle map 1 -> V and projective maps
        let lv = basis_lv(2, 2);
        let v = make_V(&lv);
        let f = gf(2, 2);
        let i = TensorIdeal::generated_by(&v);
        let q = quot_hom_in(&v, &v, &i);
        assert_eq!(q.quotient_dim, 0);
        let one = trivial(&f, 2);
        assert_eq!(quot_hom_in(&one, &one, &i).quotient_dim, 1);
    }
}
