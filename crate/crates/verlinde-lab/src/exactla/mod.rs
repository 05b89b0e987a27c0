//! Exact dense matrices over `FqField`, subspaces, and structured tensor operators.
//!
//! Kronecker convention: in `kron(a, b)` the leftmost factor is most significant, so
//! basis vector `e_i ⊗ e_j` has index `i * dim(b) + j`.

mod structured;

pub use structured::{intersect_kernels, StructuredOp, Term};

use crate::ffield::{FieldError, FieldSpec, FqField, Poly};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("field mismatch")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: FqField,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows.min(24) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: &FqField, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FqField, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of element codes.
    pub fn from_rows(field: &FqField, rows: &[Vec<u32>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(field: &FqField, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &FqField, n: usize, cols: &[Vec<u32>]) -> Mat {
        Mat::from_fn(field, n, cols.len(), |i, j| cols[j][i])
    }

    pub fn random<R: Rng + ?Sized>(field: &FqField, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for x in m.data.iter_mut() {
            *x = field.random(rng);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    fn same_field(&self, o: &Mat) -> Result<(), LaError> {
        if self.field != o.field {
            Err(LaError::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_mul(&self, o: &Mat) -> Result<Mat, LaError> {
        self.same_field(o)?;
        if self.cols != o.rows {
            return Err(LaError::Dim(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, o.cols);
        if o.cols == 0 {
            return Ok(out);
        }
        for i in 0..self.rows {
            let arow = self.row(i);
            let orow = &mut out.data[i * o.cols..(i + 1) * o.cols];
            for (k, &a) in arow.iter().enumerate() {
                if a != 0 {
                    f.axpy(orow, a, &o.data[k * o.cols..(k + 1) * o.cols]);
                }
            }
        }
        Ok(out)
    }

    /// Product; panics on mismatch.
    pub fn mul(&self, o: &Mat) -> Mat {
        self.try_mul(o).expect("matrix product")
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols && self.field == o.field);
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { data, ..self.clone_shape() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols && self.field == o.field);
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { data, ..self.clone_shape() }
    }

    pub fn scale(&self, c: u32) -> Mat {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Mat { data, ..self.clone_shape() }
    }

    /// `self += c * o`.
    pub fn add_scaled(&mut self, c: u32, o: &Mat) {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let f = self.field.clone();
        f.axpy(&mut self.data, c, &o.data);
    }

    fn clone_shape(&self) -> Mat {
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn trace(&self) -> u32 {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        kron(self, o).expect("kron")
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut m = Mat::zeros(&self.field, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            m.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            m.row_mut(i)[self.cols..].copy_from_slice(o.row(i));
        }
        m
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat {
            field: self.field.clone(),
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Vertical concatenation of many blocks with equal column counts.
    pub fn vstack_all(field: &FqField, cols: usize, blocks: &[Mat]) -> Mat {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn dsum(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(&self.field, self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            m.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
        }
        for i in 0..o.rows {
            m.row_mut(self.rows + i)[self.cols..].copy_from_slice(o.row(i));
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat {
            field: self.field.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Reduced row echelon form with leftmost pivoting. Returns `(R, pivots, rank)`.
    pub fn rref(&self) -> (Mat, Vec<usize>, usize) {
        let mut m = self.clone();
        let piv = rref_in_place(&mut m);
        let r = piv.len();
        (m, piv, r)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        echelon_in_place(&mut m).len()
    }

    /// Columns form a basis of the null space.
    pub fn kernel(&self) -> Mat {
        self.kernel_rows().transpose()
    }

    /// Rows form a basis of the null space (in canonical RREF-derived form).
    pub fn kernel_rows(&self) -> Mat {
        let (r, piv, rank) = self.rref();
        kernel_from_rref(&r, &piv, rank)
    }

    /// Rows form a basis of `{v : v * self = 0}`.
    pub fn left_kernel_rows(&self) -> Mat {
        self.transpose().kernel_rows()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n));
        let (r, piv, rank) = aug.rref();
        if n == 0 {
            return Some(self.clone());
        }
        if rank < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    /// Some `X` with `self * X = b`, if one exists.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let aug = self.hstack(b);
        let (r, piv, _) = aug.rref();
        if piv.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Mat::zeros(&self.field, n, b.cols);
        for (i, &p) in piv.iter().enumerate() {
            x.row_mut(p).copy_from_slice(&r.row(i)[n..]);
        }
        Some(x)
    }

    /// Characteristic polynomial `det(x - self)`, via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(r) = (c + 1..n).find(|&r| h.get(r, c) != 0) else {
                continue;
            };
            if r != c + 1 {
                for j in 0..n {
                    h.data.swap(r * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + r, i * n + c + 1);
                }
            }
            let piv_inv = f.inv(h.get(c + 1, c));
            for i in c + 2..n {
                let u = f.mul(h.get(i, c), piv_inv);
                if u == 0 {
                    continue;
                }
                let (lo, hi) = h.data.split_at_mut(i * n);
                f.axpy(&mut hi[..n], f.neg(u), &lo[(c + 1) * n..(c + 2) * n]);
                for k in 0..n {
                    let v = h.get(k, i);
                    if v != 0 {
                        let w = f.add(h.get(k, c + 1), f.mul(u, v));
                        h.set(k, c + 1, w);
                    }
                }
            }
        }
        // p_m = (x - h_mm) p_(m-1) - sum_i h_im (prod_(j=i+1..m) h_(j,j-1)) p_(i-1)
        let mut ps: Vec<Poly> = vec![Poly::constant(&f, 1)];
        for m in 0..n {
            let lin = Poly::new(&f, vec![f.neg(h.get(m, m)), 1]);
            let mut pm = lin.mul(&ps[m]);
            let mut prod = 1u32;
            for i in (0..m).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                let c = f.mul(h.get(i, m), prod);
                if c != 0 {
                    pm = pm.sub(&ps[i].scale(c));
                }
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zeros(&self.field, n, n);
        for &c in p.c.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn spec_json(&self) -> MatJson {
        MatJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|&a| self.field.coeffs(a)).collect())
                .collect(),
        }
    }

    pub fn from_json(field: &FqField, m: &MatJson) -> Result<Mat, LaError> {
        if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
            return Err(LaError::Dim("matrix entries do not match rows/cols".into()));
        }
        let mut out = Mat::zeros(field, m.rows, m.cols);
        for (i, r) in m.entries.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                if c.len() > field.k() as usize || c.iter().any(|&x| x >= field.p()) {
                    return Err(LaError::Dim(format!("bad coefficient vector {c:?}")));
                }
                out.set(i, j, field.from_coeffs(c));
            }
        }
        Ok(out)
    }
}

/// Serialized matrix: entries are coefficient vectors over the prime field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Vec<u32>>>,
}

/// Field descriptor together with a matrix, for standalone matrix files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatFile {
    pub field: FieldSpec,
    #[serde(flatten)]
    pub mat: MatJson,
}

/// Kronecker product, leftmost factor most significant.
pub fn kron(a: &Mat, b: &Mat) -> Result<Mat, LaError> {
    a.same_field(b)?;
    let f = &a.field;
    let (r, c) = (a.rows * b.rows, a.cols * b.cols);
    let mut m = Mat::zeros(f, r, c);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..b.rows {
                let dst = &mut m.data[(i * b.rows + k) * c + j * b.cols..][..b.cols];
                f.axpy(dst, x, b.row(k));
            }
        }
    }
    Ok(m)
}

/// Forward elimination only; returns pivot columns. Rows below rank are zero.
pub fn echelon_in_place(m: &mut Mat) -> Vec<usize> {
    eliminate(m, false)
}

/// Full RREF in place; returns pivot columns.
pub fn rref_in_place(m: &mut Mat) -> Vec<usize> {
    eliminate(m, true)
}

fn eliminate(m: &mut Mat, reduce_above: bool) -> Vec<usize> {
    let f = m.field.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut piv = Vec::new();
    let mut r = 0;
    let mut scratch = vec![0u32; cols];
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]);
        f.scale_slice(&mut m.data[r * cols + c..(r + 1) * cols], inv);
        scratch[c..].copy_from_slice(&m.data[r * cols + c..(r + 1) * cols]);
        let start = if reduce_above { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let x = m.data[i * cols + c];
            if x != 0 {
                let nx = f.neg(x);
                f.axpy(&mut m.data[i * cols + c..(i + 1) * cols], nx, &scratch[c..]);
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

fn kernel_from_rref(r: &Mat, piv: &[usize], rank: usize) -> Mat {
    let f = &r.field;
    let n = r.cols;
    let mut is_piv = vec![false; n];
    for &p in piv {
        is_piv[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_piv[j]).collect();
    let mut k = Mat::zeros(f, free.len(), n);
    for (t, &j) in free.iter().enumerate() {
        k.set(t, j, 1);
        for i in 0..rank {
            let x = r.get(i, j);
            if x != 0 {
                k.set(t, piv[i], f.neg(x));
            }
        }
    }
    k
}

/// A subspace of `field^n`, held as an RREF row basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Mat,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FqField, n: usize) -> Subspace {
        Subspace {
            basis: Mat::zeros(field, 0, n),
            pivots: vec![],
        }
    }

    pub fn full(field: &FqField, n: usize) -> Subspace {
        Subspace {
            basis: Mat::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_rows(m: &Mat) -> Subspace {
        let mut b = m.clone();
        let piv = rref_in_place(&mut b);
        b.rows = piv.len();
        b.data.truncate(piv.len() * b.cols);
        Subspace { basis: b, pivots: piv }
    }

    /// Span of the columns of `m`.
    pub fn from_cols(m: &Mat) -> Subspace {
        Subspace::from_rows(&m.transpose())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn ambient(&self) -> usize {
        self.basis.cols
    }
    pub fn field(&self) -> &FqField {
        &self.basis.field
    }

    /// Residue of `v` after reduction by the basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let x = w[p];
            if x != 0 {
                f.axpy(&mut w, f.neg(x), self.basis.row(i));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        (0..o.dim()).all(|i| self.contains(o.basis.row(i)))
    }

    /// Coordinates of `v` in the RREF basis; `None` if `v` is outside.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        Subspace::from_rows(&self.basis.vstack(&o.basis))
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // solve a*A = b*B
        let n = self.ambient();
        if self.dim() == 0 || o.dim() == 0 {
            return Subspace::zero(self.field(), n);
        }
        let stacked = self.basis.vstack(&o.basis);
        let rel = stacked.left_kernel_rows();
        let a = rel.submatrix(0, 0, rel.rows, self.dim());
        Subspace::from_rows(&a.mul(&self.basis))
    }

    /// Standard basis vectors at the non-pivot columns span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.ambient()];
        for &p in &self.pivots {
            is_piv[p] = true;
        }
        (0..self.ambient()).filter(|&j| !is_piv[j]).collect()
    }

    /// Indices (into the rows of `gens`) of a subset that extends `self` to
    /// `self + span(gens)`, chosen greedily in order.
    pub fn extend_with(&self, gens: &Mat) -> (Subspace, Vec<usize>) {
        let f = self.field().clone();
        let n = self.ambient();
        let mut rows: Vec<Vec<u32>> = (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect();
        let mut pivots = self.pivots.clone();
        let mut chosen = Vec::new();
        for g in 0..gens.rows {
            let mut w = gens.row(g).to_vec();
            for (i, &p) in pivots.iter().enumerate() {
                let x = w[p];
                if x != 0 {
                    f.axpy(&mut w, f.neg(x), &rows[i]);
                }
            }
            if let Some(p) = w.iter().position(|&x| x != 0) {
                let inv = f.inv(w[p]);
                f.scale_slice(&mut w, inv);
                rows.push(w);
                pivots.push(p);
                chosen.push(g);
            }
        }
        let m = Mat::from_rows(&f, &rows);
        let m = if rows.is_empty() { Mat::zeros(&f, 0, n) } else { m };
        (Subspace::from_rows(&m), chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::gf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn charpoly_matches_determinant() {
        let f = gf(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 0..7 {
            let a = Mat::random(&f, n, n, &mut rng);
            let cp = a.charpoly();
            assert_eq!(cp.deg(), n as isize);
            assert!(a.eval_poly(&cp).is_zero());
            // constant term is (-1)^n det, detected via invertibility
            assert_eq!(cp.c.first().map_or(true, |&c| c != 0) || n == 0, a.inverse().is_some());
        }
        let f2 = gf(2, 1);
        let j = Mat::from_rows(&f2, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
        assert_eq!(j.charpoly().c, vec![1, 1, 0, 1]);
    }

    #[test]
    fn rref_examples() {
        let f = gf(2, 1);
        assert_eq!(Mat::from_rows(&f, &[vec![1, 0], vec![1, 1]]).rref().2, 2);
        assert_eq!(Mat::zeros(&f, 3, 3).rref().2, 0);
        let m = Mat::from_rows(&f, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rref().2, 1);
        assert_eq!(m.kernel(), Mat::from_rows(&f, &[vec![1], vec![1]]));
    }

    #[test]
    fn kernel_examples() {
        let f = gf(2, 1);
        let g = Mat::from_rows(&f, &[vec![1, 0], vec![1, 1]]);
        let x = g.sub(&Mat::identity(&f, 2));
        assert_eq!(x.kernel(), Mat::from_rows(&f, &[vec![0], vec![1]]));
        assert_eq!(Mat::identity(&f, 3).kernel().cols, 0);
        let f4 = gf(2, 2);
        let k = Mat::from_rows(&f4, &[vec![1, 1]]).kernel();
        assert_eq!(k, Mat::from_rows(&f4, &[vec![1], vec![1]]));
    }

    #[test]
    fn kron_examples() {
        let f = gf(3, 1);
        let i2 = Mat::identity(&f, 2);
        assert!(i2.kron(&i2).is_identity());
        let a = Mat::identity(&f, 3);
        let k = i2.kron(&a);
        assert_eq!((k.rows, k.cols), (6, 6));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ms: Vec<Mat> = (0..4).map(|_| Mat::random(&f, 2, 2, &mut rng)).collect();
        assert_eq!(
            ms[0].kron(&ms[1]).mul(&ms[2].kron(&ms[3])),
            ms[0].mul(&ms[2]).kron(&ms[1].mul(&ms[3]))
        );
        assert_eq!(kron(&i2, &Mat::identity(&gf(2, 1), 2)), Err(LaError::FieldMismatch));
    }

    #[test]
    fn kron_index_convention() {
        let f = gf(2, 1);
        let e = |i: usize, n: usize| Mat::from_fn(&f, n, 1, |r, _| (r == i) as u32);
        // e_1 ⊗ e_0 in 2 ⊗ 3 is index 3
        assert_eq!(e(1, 2).kron(&e(0, 3)), e(3, 6));
    }

    #[test]
    fn inverse_and_solve() {
        let f = gf(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut found = 0;
        while found < 10 {
            let a = Mat::random(&f, 5, 5, &mut rng);
            if let Some(ai) = a.inverse() {
                assert!(a.mul(&ai).is_identity());
                found += 1;
                let b = Mat::random(&f, 5, 2, &mut rng);
                let x = a.solve(&b).unwrap();
                assert_eq!(a.mul(&x), b);
            } else {
                assert!(a.rank() < 5);
            }
        }
    }

    #[test]
    fn subspace_ops() {
        let f = gf(3, 1);
        let a = Subspace::from_rows(&Mat::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 0]]));
        let b = Subspace::from_rows(&Mat::from_rows(&f, &[vec![0, 1, 1], vec![1, 1, 1]]));
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[1, 0, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert_eq!(a.complement_indices(), vec![2]);
        assert_eq!(b.coords(&[1, 2, 2]), Some(vec![1, 2]));
    }
}
