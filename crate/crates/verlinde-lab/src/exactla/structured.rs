//! Lazily evaluated operators on tensor-product spaces.

use super::{LaError, Mat, Subspace};
use crate::ffield::FqField;

/// One summand of a structured operator.
#[derive(Clone, Debug)]
pub enum Term {
    /// `coef * (f_1 ⊗ ... ⊗ f_m)`.
    Kron { coef: u32, factors: Vec<Mat> },
    /// `coef * P` where `P` permutes the tensor factors of `V_1 ⊗ ... ⊗ V_m`
    /// (`dims[i] = dim V_i`): output factor `i` is input factor `perm[i]`.
    Perm { coef: u32, dims: Vec<usize>, perm: Vec<usize> },
    Dense { coef: u32, mat: Mat },
}

impl Term {
    fn shape(&self) -> (usize, usize) {
        match self {
            Term::Kron { factors, .. } => (
                factors.iter().map(|f| f.rows).product(),
                factors.iter().map(|f| f.cols).product(),
            ),
            Term::Perm { dims, .. } => {
                let d = dims.iter().product();
                (d, d)
            }
            Term::Dense { mat, .. } => (mat.rows, mat.cols),
        }
    }
}

/// A sum of terms, all with the same shape.
#[derive(Clone, Debug)]
pub struct StructuredOp {
    pub field: FqField,
    pub dim_out: usize,
    pub dim_in: usize,
    pub terms: Vec<Term>,
}

impl StructuredOp {
    pub fn new(field: &FqField, terms: Vec<Term>) -> Result<StructuredOp, LaError> {
        let Some(first) = terms.first() else {
            return Err(LaError::Dim("empty operator".into()));
        };
        let (r, c) = first.shape();
        if terms.iter().any(|t| t.shape() != (r, c)) {
            return Err(LaError::Dim("terms of different shapes".into()));
        }
        Ok(StructuredOp {
            field: field.clone(),
            dim_out: r,
            dim_in: c,
            terms,
        })
    }

    pub fn zero(field: &FqField, dim_out: usize, dim_in: usize) -> StructuredOp {
        StructuredOp {
            field: field.clone(),
            dim_out,
            dim_in,
            terms: vec![Term::Dense {
                coef: 0,
                mat: Mat::zeros(field, dim_out, dim_in),
            }],
        }
    }

    pub fn kron(field: &FqField, coef: u32, factors: Vec<Mat>) -> StructuredOp {
        StructuredOp::new(field, vec![Term::Kron { coef, factors }]).unwrap()
    }

    /// Sum of two operators of the same shape.
    pub fn plus(mut self, o: StructuredOp) -> StructuredOp {
        assert_eq!((self.dim_out, self.dim_in), (o.dim_out, o.dim_in));
        self.terms.extend(o.terms);
        self
    }

    /// Apply to the columns of `b` (`dim_in x r`), giving `dim_out x r`.
    pub fn apply(&self, b: &Mat) -> Mat {
        assert_eq!(b.rows, self.dim_in, "operator input dimension");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.dim_out, b.cols);
        for t in &self.terms {
            let (coef, part) = match t {
                Term::Kron { coef, factors } => (*coef, apply_kron(factors, b)),
                Term::Perm { coef, dims, perm } => (*coef, apply_perm(dims, perm, b)),
                Term::Dense { coef, mat } => (*coef, mat.mul(b)),
            };
            if coef != 0 {
                f.axpy(&mut out.data, coef, &part.data);
            }
        }
        out
    }

    pub fn apply_vec(&self, v: &[u32]) -> Vec<u32> {
        let b = Mat::from_cols(&self.field, v.len(), &[v.to_vec()]);
        self.apply(&b).data
    }

    pub fn to_dense(&self) -> Mat {
        self.apply(&Mat::identity(&self.field, self.dim_in))
    }
}

/// Mode product along the tensor factors, rightmost first.
fn apply_kron(factors: &[Mat], b: &Mat) -> Mat {
    let f = &b.field;
    let r = b.cols;
    let mut shape: Vec<usize> = factors.iter().map(|m| m.cols).collect();
    let mut cur = b.data.clone();
    for (j, a) in factors.iter().enumerate().rev() {
        let left: usize = shape[..j].iter().product();
        let right: usize = shape[j + 1..].iter().product::<usize>() * r;
        let dj = shape[j];
        let mut next = vec![0u32; left * a.rows * right];
        for l in 0..left {
            for x in 0..a.rows {
                let dst = &mut next[(l * a.rows + x) * right..][..right];
                for y in 0..dj {
                    let c = a.get(x, y);
                    if c != 0 {
                        f.axpy(dst, c, &cur[(l * dj + y) * right..][..right]);
                    }
                }
            }
        }
        shape[j] = a.rows;
        cur = next;
    }
    Mat {
        field: f.clone(),
        rows: shape.iter().product(),
        cols: r,
        data: cur,
    }
}

fn apply_perm(dims: &[usize], perm: &[usize], b: &Mat) -> Mat {
    let m = dims.len();
    let n: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut in_stride = vec![1usize; m];
    for i in (0..m.saturating_sub(1)).rev() {
        in_stride[i] = in_stride[i + 1] * dims[i + 1];
    }
    let mut out = Mat::zeros(&b.field, n, b.cols);
    let mut idx = vec![0usize; m];
    for o in 0..n {
        let src: usize = (0..m).map(|i| idx[i] * in_stride[perm[i]]).sum();
        out.row_mut(o).copy_from_slice(b.row(src));
        for i in (0..m).rev() {
            idx[i] += 1;
            if idx[i] < out_dims[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    out
}

/// Basis (as columns) of the common kernel, by iterated restriction: the kernel of the
/// first operator, then the kernel of the next operator restricted to it, and so on.
pub fn intersect_kernels(ops: &[StructuredOp], dim: usize) -> Result<Mat, LaError> {
    let Some(first) = ops.first() else {
        return Err(LaError::Dim("no operators".into()));
    };
    let f = first.field.clone();
    if ops.iter().any(|o| o.dim_in != dim) {
        return Err(LaError::Dim("operators act on different spaces".into()));
    }
    let mut basis: Option<Mat> = None;
    for op in ops {
        let img = match &basis {
            None => op.to_dense(),
            Some(b) => op.apply(b),
        };
        let k = img.kernel();
        basis = Some(match basis {
            None => k,
            Some(b) => b.mul(&k),
        });
        if basis.as_ref().unwrap().cols == 0 {
            break;
        }
    }
    let b = basis.unwrap_or_else(|| Mat::identity(&f, dim));
    // canonical form: RREF of the span
    Ok(Subspace::from_cols(&b).basis.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::gf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_term_matches_dense() {
        let f = gf(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Mat::random(&f, 2, 3, &mut rng);
        let b = Mat::random(&f, 4, 2, &mut rng);
        let c = Mat::random(&f, 3, 3, &mut rng);
        let op = StructuredOp::kron(&f, 1, vec![a.clone(), b.clone(), c.clone()]);
        assert_eq!(op.to_dense(), a.kron(&b).kron(&c));
    }

    #[test]
    fn perm_term_swaps_factors() {
        let f = gf(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = Mat::random(&f, 2, 1, &mut rng);
        let y = Mat::random(&f, 3, 1, &mut rng);
        let op = StructuredOp::new(
            &f,
            vec![Term::Perm { coef: 1, dims: vec![2, 3], perm: vec![1, 0] }],
        )
        .unwrap();
        assert_eq!(op.apply(&x.kron(&y)), y.kron(&x));
    }

    #[test]
    fn intersect_examples() {
        let f = gf(2, 1);
        let z = StructuredOp::zero(&f, 3, 3);
        assert_eq!(intersect_kernels(&[z], 3).unwrap().cols, 3);
        let id = StructuredOp::kron(&f, 1, vec![Mat::identity(&f, 3)]);
        assert_eq!(intersect_kernels(&[id], 3).unwrap().cols, 0);
        // regular representation of C2 x C2: g1 = s ⊗ 1, g2 = 1 ⊗ s
        let s = Mat::from_rows(&f, &[vec![0, 1], vec![1, 0]]);
        let i2 = Mat::identity(&f, 2);
        let ops: Vec<StructuredOp> = [(s.clone(), i2.clone()), (i2.clone(), s.clone())]
            .into_iter()
            .map(|(a, b)| {
                StructuredOp::kron(&f, 1, vec![a, b])
                    .plus(StructuredOp::kron(&f, 1, vec![i2.clone(), i2.clone()]))
            })
            .collect();
        let k = intersect_kernels(&ops, 4).unwrap();
        assert_eq!(k.cols, 1);
        assert_eq!(k.col(0), vec![1, 1, 1, 1]);
    }
}
