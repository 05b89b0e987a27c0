//! Krull–Schmidt decomposition of modules given by lists of operators.
//!
//! Splitting is Las Vegas (Fitting decomposition of random endomorphisms). A summand is
//! declared indecomposable only with a certificate: its endomorphism algebra modulo the
//! Jacobson radical is a field.

use crate::exactla::{intersect_kernels, Mat, StructuredOp, Subspace};
use crate::ffield::{factor_univariate, FqField};
use crate::repe::{hom_space, radical, strip_projective, ERep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// How the operators are to be read.
#[derive(Clone, Debug)]
pub enum ModKind {
    /// `ops` are the `x_i` of a module over `C_p^n`.
    Group(ERep),
    /// Basis vectors are homogeneous of the given weights and every endomorphism
    /// preserves weights (the weight projectors lie in the operator algebra).
    Graded(Vec<i64>),
    Generic,
}

#[derive(Clone, Debug)]
pub struct OperatorModule {
    pub field: FqField,
    pub dim: usize,
    pub ops: Vec<Mat>,
    pub kind: ModKind,
}

impl OperatorModule {
    pub fn from_erep(m: &ERep) -> OperatorModule {
        OperatorModule {
            field: m.field.clone(),
            dim: m.dim,
            ops: m.xs.clone(),
            kind: ModKind::Group(m.clone()),
        }
    }

    pub fn generic(field: &FqField, dim: usize, ops: Vec<Mat>) -> OperatorModule {
        assert!(ops.iter().all(|o| o.rows == dim && o.cols == dim && o.field == *field));
        OperatorModule { field: field.clone(), dim, ops, kind: ModKind::Generic }
    }

    pub fn graded(field: &FqField, ops: Vec<Mat>, weights: Vec<i64>) -> OperatorModule {
        let dim = weights.len();
        assert!(ops.iter().all(|o| o.rows == dim && o.cols == dim && o.field == *field));
        OperatorModule { field: field.clone(), dim, ops, kind: ModKind::Graded(weights) }
    }

    pub fn erep(&self) -> Option<&ERep> {
        match &self.kind {
            ModKind::Group(e) => Some(e),
            _ => None,
        }
    }

    /// The summand with inclusion `iota` and projection `pi` (`pi iota = 1`).
    pub fn restrict(&self, iota: &Mat, pi: &Mat) -> OperatorModule {
        let ops: Vec<Mat> = self.ops.iter().map(|o| pi.mul(o).mul(iota)).collect();
        let kind = match &self.kind {
            ModKind::Group(e) => ModKind::Group(ERep::from_xs_trusted(&self.field, e.p, ops.clone())),
            ModKind::Graded(w) => ModKind::Graded(
                (0..iota.cols)
                    .map(|j| {
                        let i = (0..iota.rows).find(|&i| iota.get(i, j) != 0).expect("zero column");
                        w[i]
                    })
                    .collect(),
            ),
            ModKind::Generic => ModKind::Generic,
        };
        let kind = match kind {
            ModKind::Group(_) if iota.cols == 0 => {
                ModKind::Group(crate::repe::zero_module(&self.field, self.ops.len()))
            }
            k => k,
        };
        OperatorModule { field: self.field.clone(), dim: iota.cols, ops, kind }
    }

    pub fn is_endomorphism(&self, f: &Mat) -> bool {
        self.ops.iter().all(|o| o.mul(f) == f.mul(o))
    }
}

/// A linear span of equally shaped matrices, held in RREF on the flattened entries.
#[derive(Clone, Debug)]
pub struct MatSpan {
    pub rows: usize,
    pub cols: usize,
    pub sub: Subspace,
}

impl MatSpan {
    pub fn new(field: &FqField, rows: usize, cols: usize, mats: &[Mat]) -> MatSpan {
        let flat: Vec<Vec<u32>> = mats.iter().map(|m| m.data.clone()).collect();
        let sub = if flat.is_empty() {
            Subspace::zero(field, rows * cols)
        } else {
            Subspace::from_rows(&Mat::from_rows(field, &flat))
        };
        MatSpan { rows, cols, sub }
    }
    pub fn dim(&self) -> usize {
        self.sub.dim()
    }
    pub fn basis(&self) -> Vec<Mat> {
        (0..self.dim()).map(|i| self.elem(self.sub.basis.row(i))).collect()
    }
    fn elem(&self, flat: &[u32]) -> Mat {
        Mat { field: self.sub.field().clone(), rows: self.rows, cols: self.cols, data: flat.to_vec() }
    }
    pub fn coords(&self, m: &Mat) -> Option<Vec<u32>> {
        self.sub.coords(&m.data)
    }
    pub fn combine(&self, c: &[u32]) -> Mat {
        let f = self.sub.field();
        let mut m = Mat::zeros(f, self.rows, self.cols);
        for (i, &x) in c.iter().enumerate() {
            f.axpy(&mut m.data, x, self.sub.basis.row(i));
        }
        m
    }
}

/// Maps `a -> b` intertwining the operator lists.
pub fn hom_ops(a: &OperatorModule, b: &OperatorModule) -> Vec<Mat> {
    let f = &a.field;
    if a.dim * b.dim == 0 {
        return vec![];
    }
    match (&a.kind, &b.kind) {
        (ModKind::Group(x), ModKind::Group(y)) => hom_space(x, y).basis,
        (ModKind::Graded(wa), ModKind::Graded(wb)) => graded_hom(a, b, wa, wb),
        _ => {
            let ops: Vec<StructuredOp> = a
                .ops
                .iter()
                .zip(&b.ops)
                .map(|(oa, ob)| {
                    StructuredOp::kron(f, 1, vec![ob.clone(), Mat::identity(f, a.dim)])
                        .plus(StructuredOp::kron(f, f.neg(1), vec![Mat::identity(f, b.dim), oa.transpose()]))
                })
                .collect();
            let k = intersect_kernels(&ops, a.dim * b.dim).expect("Sylvester equations");
            (0..k.cols)
                .map(|c| {
                    let v = k.col(c);
                    Mat::from_fn(f, b.dim, a.dim, |i, j| v[i * a.dim + j])
                })
                .collect()
        }
    }
}

/// Only weight-preserving entries are unknowns.
fn graded_hom(a: &OperatorModule, b: &OperatorModule, wa: &[i64], wb: &[i64]) -> Vec<Mat> {
    let f = &a.field;
    let unknowns: Vec<(usize, usize)> = (0..b.dim)
        .flat_map(|i| (0..a.dim).filter(move |&j| wb[i] == wa[j]).map(move |j| (i, j)))
        .collect();
    let u = unknowns.len();
    if u == 0 {
        return vec![];
    }
    // equation (r, c) of op: sum_s X[r,s] A[s,c] - sum_s B[r,s] X[s,c]
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (oa, ob) in a.ops.iter().zip(&b.ops) {
        let mut eqs = vec![vec![0u32; u]; b.dim * a.dim];
        for (k, &(i, j)) in unknowns.iter().enumerate() {
            for c in 0..a.dim {
                let v = oa.get(j, c);
                if v != 0 {
                    let e = &mut eqs[i * a.dim + c][k];
                    *e = f.add(*e, v);
                }
            }
            for r in 0..b.dim {
                let v = ob.get(r, i);
                if v != 0 {
                    let e = &mut eqs[r * a.dim + j][k];
                    *e = f.sub(*e, v);
                }
            }
        }
        rows.extend(eqs.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
    }
    let k = if rows.is_empty() {
        Mat::identity(f, u)
    } else {
        Mat::from_rows(f, &rows).kernel()
    };
    (0..k.cols)
        .map(|c| {
            let mut m = Mat::zeros(f, b.dim, a.dim);
            for (t, &(i, j)) in unknowns.iter().enumerate() {
                m.set(i, j, k.get(t, c));
            }
            m
        })
        .collect()
}

/// Basis of `End(m)`, in canonical (RREF) form.
pub fn commutant(m: &OperatorModule) -> MatSpan {
    let maps = hom_ops(m, m);
    MatSpan::new(&m.field, m.dim, m.dim, &maps)
}

// ---------------------------------------------------------------- radicals

/// Entries of `F_q` as `k x k` matrices over `F_p` (basis `1, x, .., x^(k-1)`).
fn restrict_scalars(a: &Mat) -> Vec<Vec<u64>> {
    let f = &a.field;
    let k = f.k() as usize;
    let n = a.rows * k;
    let mut out = vec![vec![0u64; n]; n];
    let powers: Vec<u32> = (0..k)
        .map(|j| {
            let mut c = vec![0u32; k];
            c[j] = 1;
            f.from_coeffs(&c)
        })
        .collect();
    for r in 0..a.rows {
        for c in 0..a.cols {
            let v = a.get(r, c);
            if v == 0 {
                continue;
            }
            for (j, &xj) in powers.iter().enumerate() {
                for (i, &co) in f.coeffs(f.mul(v, xj)).iter().enumerate() {
                    out[r * k + i][c * k + j] = co as u64;
                }
            }
        }
    }
    out
}

fn int_mul(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for (k, &x) in a[i].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + x * b[k][j]) % m;
            }
        }
    }
    out
}

/// `Tr(lift(x)^(p^i)) / p^i mod p`.
fn ciw_g(x: &[Vec<u64>], p: u64, i: u32) -> u64 {
    let m = p.pow(i + 1);
    let mut y: Vec<Vec<u64>> = x.to_vec();
    for _ in 0..i {
        let mut acc = y.clone();
        for _ in 1..p {
            acc = int_mul(&acc, &y, m);
        }
        y = acc;
    }
    let tr = (0..y.len()).fold(0, |s, k| (s + y[k][k]) % m);
    tr / p.pow(i) % p
}

/// F_q-coordinates (w.r.t. `basis`) of a spanning set of the Jacobson radical of the
/// algebra spanned by `basis`, by the trace-form descent over the prime field.
pub fn algebra_radical(field: &FqField, basis: &[Mat]) -> Vec<Vec<u32>> {
    let e = basis.len();
    if e == 0 {
        return vec![];
    }
    let p = field.p() as u64;
    let k = field.k() as usize;
    let fp = field.prime_field();
    let powers: Vec<u32> = (0..k)
        .map(|j| {
            let mut c = vec![0u32; k];
            c[j] = 1;
            field.from_coeffs(&c)
        })
        .collect();
    // F_p basis: x^j b_i at index i k + j
    let ap: Vec<Vec<Vec<u64>>> = basis
        .iter()
        .flat_map(|b| powers.iter().map(move |&x| restrict_scalars(&b.scale(x))))
        .collect();
    let ep = ap.len();
    let nn = ap[0].len();
    let combine = |c: &[u32]| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; nn]; nn];
        for (t, &x) in c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for r in 0..nn {
                for s in 0..nn {
                    m[r][s] = (m[r][s] + x as u64 * ap[t][r][s]) % p;
                }
            }
        }
        m
    };
    let mut ideal: Vec<Vec<u32>> = (0..ep).map(|t| (0..ep).map(|s| (s == t) as u32).collect()).collect();
    let levels = (nn as f64).log(p as f64).floor() as u32;
    for lvl in 0..=levels {
        if ideal.is_empty() {
            break;
        }
        let mats: Vec<Vec<Vec<u64>>> = ideal.iter().map(|c| combine(c)).collect();
        let g = Mat::from_fn(&fp, ideal.len(), ep, |u, v| ciw_g(&int_mul(&mats[u], &ap[v], p), p, lvl) as u32);
        let comb = g.left_kernel_rows();
        let cur = Mat::from_rows(&fp, &ideal);
        ideal = if comb.rows == 0 {
            vec![]
        } else {
            let nxt = comb.mul(&cur);
            (0..nxt.rows).map(|r| nxt.row(r).to_vec()).collect()
        };
    }
    ideal
        .iter()
        .map(|c| (0..e).map(|i| field.from_coeffs(&c[i * k..(i + 1) * k])).collect())
        .collect()
}

/// Certificate that `End(m)` is local.
#[derive(Clone, Debug)]
pub struct LocalCert {
    /// the radical, in the coordinates of `commutant(m)`
    pub radical: Subspace,
    /// dimension over the base field of the residue field `End/J`
    pub residue_dim: usize,
}

/// `Some(cert)` iff `End(m)` is local. For group modules the computation is done in
/// the image of `End(m)` in `End(top m)`; the kernel of that restriction is nilpotent.
pub fn locality(m: &OperatorModule, end: &MatSpan) -> Option<LocalCert> {
    let f = &m.field;
    let e = end.dim();
    if e == 0 {
        return None;
    }
    let basis = end.basis();
    let reduced: Vec<Mat> = match &m.kind {
        ModKind::Group(rep) => {
            let comp = radical(rep).complement_indices();
            let (_, proj) = crate::repe::top(rep);
            basis.iter().map(|b| proj.mul(b).select_cols(&comp)).collect()
        }
        _ => basis.clone(),
    };
    let (rr, rc) = (reduced[0].rows, reduced[0].cols);
    let img = MatSpan::new(f, rr, rc, &reduced);
    let ib = img.basis();
    let jcoords = algebra_radical(f, &ib);
    let jimg = coords_span(f, img.dim(), &jcoords);
    // local iff image / J is a field: commutative with one-dimensional Frobenius fixed space
    let comp = jimg.complement_indices();
    let in_j = |m: &Mat| jimg.contains(&img.coords(m).expect("closed under products"));
    for &i in &comp {
        for &j in &comp {
            if i < j && !in_j(&ib[i].mul(&ib[j]).sub(&ib[j].mul(&ib[i]))) {
                return None;
            }
        }
    }
    let q = f.order() as u64;
    let quot_coords = |m: &Mat| -> Vec<u32> {
        let c = jimg.reduce(&img.coords(m).unwrap());
        comp.iter().map(|&t| c[t]).collect()
    };
    let frob_minus_id: Vec<Vec<u32>> = comp
        .iter()
        .map(|&t| {
            let a = &ib[t];
            let d = a.pow(q).sub(a);
            quot_coords(&d)
        })
        .collect();
    let fixed = Mat::from_rows(f, &frob_minus_id).left_kernel_rows().rows;
    if fixed != 1 {
        return None;
    }
    // pull the radical back: c . basis lies in J iff its image vanishes in image / J
    let proj_q: Vec<Vec<u32>> = reduced.iter().map(quot_coords).collect();
    let ker = Mat::from_rows(f, &proj_q).left_kernel_rows();
    let jrows: Vec<Vec<u32>> = (0..ker.rows).map(|r| ker.row(r).to_vec()).collect();
    Some(LocalCert { radical: coords_span(f, e, &jrows), residue_dim: comp.len() })
}

fn coords_span(f: &FqField, dim: usize, rows: &[Vec<u32>]) -> Subspace {
    crate::repe::coords_span(f, dim, rows)
}

// ---------------------------------------------------------------- splitting

/// A direct-sum split `m = A ⊕ B` with inclusions and projections.
#[derive(Clone, Debug)]
pub struct Split {
    pub iota_a: Mat,
    pub pi_a: Mat,
    pub iota_b: Mat,
    pub pi_b: Mat,
}

#[derive(Clone, Debug)]
pub enum SplitResult {
    Indecomposable(LocalCert),
    Split(Split),
}

/// Fitting decomposition of `m` along the first irreducible factor of the
/// characteristic polynomial of `phi`, when there are at least two.
fn fitting_split(m: &OperatorModule, phi: &Mat, seed: u64) -> Option<Split> {
    let cp = phi.charpoly();
    let facs = factor_univariate(&cp, seed).ok()?;
    if facs.len() < 2 {
        return None;
    }
    let psi = phi.eval_poly(&facs[0].0).pow(m.dim as u64);
    let ker = psi.kernel();
    let im = Subspace::from_cols(&psi).basis.transpose();
    let full = ker.hstack(&im);
    let inv = full.inverse().expect("Fitting decomposition");
    let (a, b) = (ker.cols, im.cols);
    Some(Split {
        iota_a: ker,
        pi_a: inv.submatrix(0, 0, a, m.dim),
        iota_b: im,
        pi_b: inv.submatrix(a, 0, b, m.dim),
    })
}

/// Number of random endomorphisms tried before asking for a locality certificate.
pub const LAS_VEGAS_TRIES: usize = 24;

pub fn split_once(m: &OperatorModule, seed: u64) -> SplitResult {
    let end = commutant(m);
    split_with(m, &end, seed)
}

fn split_with(m: &OperatorModule, end: &MatSpan, seed: u64) -> SplitResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &m.field;
    let e = end.dim();
    let attempt = |rng: &mut ChaCha8Rng| -> Option<Split> {
        let c: Vec<u32> = (0..e).map(|_| f.random(rng)).collect();
        let phi = end.combine(&c);
        fitting_split(m, &phi, rng.gen())
    };
    if e > 1 && m.dim > 1 {
        for _ in 0..LAS_VEGAS_TRIES {
            if let Some(s) = attempt(&mut rng) {
                return SplitResult::Split(s);
            }
        }
    }
    if let Some(cert) = locality(m, end) {
        return SplitResult::Indecomposable(cert);
    }
    // certified decomposable: keep sampling
    loop {
        if let Some(s) = attempt(&mut rng) {
            return SplitResult::Split(s);
        }
    }
}

// ---------------------------------------------------------------- decomposition

/// One isomorphism class of summands.
#[derive(Clone, Debug)]
pub struct Part {
    /// the representative, in its own basis
    pub module: OperatorModule,
    pub mult: usize,
    /// per copy: `dim m x dim part`, a module map from the representative
    pub embeddings: Vec<Mat>,
    /// per copy: `dim part x dim m`, left inverse of the embedding
    pub projections: Vec<Mat>,
    pub end: MatSpan,
    pub cert: LocalCert,
    pub label: Option<String>,
}

impl Part {
    pub fn dim(&self) -> usize {
        self.module.dim
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub parts: Vec<Part>,
}

impl Decomposition {
    /// The change of basis whose columns are all embeddings; conjugating the operators
    /// by it gives block-diagonal matrices with equal blocks per part.
    pub fn certificate(&self, field: &FqField) -> Mat {
        let mut c = Mat::zeros(field, self.dim, 0);
        for p in &self.parts {
            for e in &p.embeddings {
                c = c.hstack(e);
            }
        }
        c
    }

    pub fn report(&self) -> Vec<ReportEntry> {
        self.parts
            .iter()
            .map(|p| ReportEntry { label: p.label.clone(), dim: p.dim(), mult: p.mult })
            .collect()
    }

    pub fn num_summands(&self) -> usize {
        self.parts.iter().map(|p| p.mult).sum()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportEntry {
    pub label: Option<String>,
    pub dim: usize,
    pub mult: usize,
}

struct Piece {
    module: OperatorModule,
    iota: Mat,
    pi: Mat,
}

pub fn decompose(m: &OperatorModule, seed: u64) -> Decomposition {
    let f = &m.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indecs: Vec<(Piece, MatSpan, LocalCert)> = Vec::new();
    let mut work: Vec<Piece> = Vec::new();
    let mut free_parts: Vec<Piece> = Vec::new();
    match &m.kind {
        ModKind::Group(rep) if m.dim > 0 => {
            let c = strip_projective(rep);
            let q = rep.order();
            let reg = crate::repe::regular(f, rep.n);
            for j in 0..c.free_rank {
                let cols: Vec<usize> = (j * q..(j + 1) * q).collect();
                free_parts.push(Piece {
                    module: OperatorModule::from_erep(&reg),
                    iota: c.free_iota.select_cols(&cols),
                    pi: c.free_pi.select_rows(&cols),
                });
            }
            if c.core.dim > 0 {
                work.push(Piece { module: OperatorModule::from_erep(&c.core), iota: c.iota, pi: c.pi });
            }
        }
        _ if m.dim > 0 => work.push(Piece {
            module: m.clone(),
            iota: Mat::identity(f, m.dim),
            pi: Mat::identity(f, m.dim),
        }),
        _ => {}
    }
    while let Some(piece) = work.pop() {
        let end = commutant(&piece.module);
        match split_with(&piece.module, &end, rng.gen()) {
            SplitResult::Indecomposable(cert) => indecs.push((piece, end, cert)),
            SplitResult::Split(s) => {
                for (io, pi) in [(s.iota_a, s.pi_a), (s.iota_b, s.pi_b)] {
                    let module = piece.module.restrict(&io, &pi);
                    work.push(Piece { module, iota: piece.iota.mul(&io), pi: pi.mul(&piece.pi) });
                }
            }
        }
    }
    let mut parts: Vec<Part> = Vec::new();
    if let Some(first) = free_parts.first() {
        let end = commutant(&first.module);
        let cert = locality(&first.module, &end).expect("kE is local");
        parts.push(Part {
            module: first.module.clone(),
            mult: free_parts.len(),
            embeddings: free_parts.iter().map(|p| p.iota.clone()).collect(),
            projections: free_parts.iter().map(|p| p.pi.clone()).collect(),
            end,
            cert,
            label: Some("kE".into()),
        });
    }
    for (piece, end, cert) in indecs {
        let mut placed = false;
        for part in parts.iter_mut() {
            if part.dim() != piece.module.dim {
                continue;
            }
            if let Some(phi) = iso_indecomposable(&part.module, &part.end, &part.cert, &piece.module) {
                let inv = phi.inverse().expect("isomorphism");
                part.embeddings.push(piece.iota.mul(&phi));
                part.projections.push(inv.mul(&piece.pi));
                part.mult += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            parts.push(Part {
                module: piece.module,
                mult: 1,
                embeddings: vec![piece.iota],
                projections: vec![piece.pi],
                end,
                cert,
                label: None,
            });
        }
    }
    parts.sort_by_key(|p| p.dim());
    Decomposition { dim: m.dim, parts }
}

/// For `a` indecomposable with local `End(a)`: an isomorphism `a -> b`, or `None` when
/// every composite `b -> a` after `a -> b` lies in the radical (then no iso exists).
pub fn iso_indecomposable(a: &OperatorModule, end: &MatSpan, cert: &LocalCert, b: &OperatorModule) -> Option<Mat> {
    if a.dim != b.dim {
        return None;
    }
    let fs = hom_ops(a, b);
    if fs.is_empty() {
        return None;
    }
    let gs = hom_ops(b, a);
    for fm in &fs {
        for g in &gs {
            let c = end.coords(&g.mul(fm)).expect("endomorphism");
            if !cert.radical.contains(&c) {
                return Some(fm.clone());
            }
        }
    }
    None
}

/// An explicit isomorphism `a -> b`, or `None` if the modules are not isomorphic.
pub fn iso_test(a: &OperatorModule, b: &OperatorModule, seed: u64) -> Option<Mat> {
    let f = &a.field;
    if a.dim != b.dim || a.ops.len() != b.ops.len() {
        return None;
    }
    if a.dim == 0 {
        return Some(Mat::zeros(f, 0, 0));
    }
    let fs = hom_ops(a, b);
    if fs.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut m = Mat::zeros(f, b.dim, a.dim);
        for h in &fs {
            m.add_scaled(f.random(&mut rng), h);
        }
        if m.inverse().is_some() {
            return Some(m);
        }
    }
    // exact verdict from the two decompositions
    let da = decompose(a, rng.gen());
    let db = decompose(b, rng.gen());
    let mut used = vec![false; db.parts.len()];
    let mut iso = Mat::zeros(f, b.dim, a.dim);
    for pa in &da.parts {
        let found = db.parts.iter().enumerate().find_map(|(j, pb)| {
            if used[j] || pb.mult != pa.mult {
                return None;
            }
            iso_indecomposable(&pa.module, &pa.end, &pa.cert, &pb.module).map(|phi| (j, phi))
        });
        let (j, phi) = found?;
        used[j] = true;
        let pb = &db.parts[j];
        for (ea, eb) in pa.projections.iter().zip(&pb.embeddings) {
            iso = iso.add(&eb.mul(&phi).mul(ea));
        }
    }
    if used.iter().all(|&u| u) {
        Some(iso)
    } else {
        None
    }
}
