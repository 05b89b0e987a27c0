//! Dense univariate polynomials over `FqField` and their factorization.

use super::{prime_factors, FieldError, FqField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Coefficients low degree first, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub field: FqField,
    pub c: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &ci) in self.c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = self.field.fmt_code(ci);
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            terms.push(match (i, ci == 1) {
                (0, _) => coef,
                (1, true) => "y".into(),
                (1, false) => format!("{coef}*y"),
                (_, true) => format!("y^{i}"),
                (_, false) => format!("{coef}*y^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &FqField, c: Vec<u32>) -> Poly {
        let mut p = Poly { field: field.clone(), c };
        p.trim();
        p
    }
    pub fn zero(field: &FqField) -> Poly {
        Poly { field: field.clone(), c: vec![] }
    }
    pub fn constant(field: &FqField, a: u32) -> Poly {
        Poly::new(field, vec![a])
    }
    pub fn x(field: &FqField) -> Poly {
        Poly::new(field, vec![0, 1])
    }
    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree, -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    pub fn lead(&self) -> u32 {
        *self.c.last().unwrap_or(&0)
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, a: u32) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| f.add(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| f.sub(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(f, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u32; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            f.axpy(&mut c[i..i + o.c.len()], a, &o.c);
        }
        Poly::new(f, c)
    }

    /// Quotient and remainder. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.field;
        if self.deg() < d.deg() {
            return (Poly::zero(f), self.clone());
        }
        let mut r = self.c.clone();
        let dn = d.c.len();
        let inv = f.inv(d.lead());
        let mut q = vec![0u32; r.len() - dn + 1];
        for i in (0..q.len()).rev() {
            let t = f.mul(r[i + dn - 1], inv);
            q[i] = t;
            if t != 0 {
                let nt = f.neg(t);
                f.axpy(&mut r[i..i + dn], nt, &d.c);
            }
        }
        r.truncate(dn - 1);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(&self.field, 1).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// For `self = g(y^p)`, the polynomial whose p-th power is `self`.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let c = self.c.iter().step_by(p).map(|&a| f.frobenius(a, -1)).collect();
        Poly::new(f, c)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = self.deg();
        if n <= 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let n = n as u64;
        let f = self.monic();
        let q = self.field.order() as u64;
        let x = Poly::x(&self.field);
        let frob_pow = |j: u64| {
            let mut h = x.clone();
            for _ in 0..j {
                h = h.powmod(q, &f);
            }
            h
        };
        if frob_pow(n) != x.rem(&f) {
            return false;
        }
        prime_factors(n)
            .into_iter()
            .all(|r| frob_pow(n / r).sub(&x).gcd(&f).is_one())
    }

    fn canonical_key(&self) -> (usize, Vec<u32>) {
        (self.c.len(), self.c.iter().rev().copied().collect())
    }
}

fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let field = &f.field;
    let p = field.p() as usize;
    let mut out = Vec::new();
    let fp = f.derivative();
    let mut c = f.gcd(&fp);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if !c.is_one() {
        let r = c.pth_root();
        for (g, j) in square_free(&r) {
            out.push((g, j * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = &f.field;
    let q = field.order() as u64;
    let x = Poly::x(field);
    let mut g = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1usize;
    while g.deg() >= 2 * i as isize {
        h = h.powmod(q, &g);
        let d = h.sub(&x).gcd(&g);
        if !d.is_one() {
            g = g.divrem(&d).0;
            h = h.rem(&g);
            out.push((d, i));
        }
        i += 1;
    }
    if g.deg() > 0 {
        let d = g.deg() as usize;
        out.push((g.monic(), d));
    }
    out
}

fn random_poly(field: &FqField, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new(field, (0..n).map(|_| field.random(rng)).collect())
}

fn splitter(a: &Poly, f: &Poly, d: usize) -> Poly {
    let field = &f.field;
    let q = field.order() as u64;
    if field.p() == 2 {
        let mut b = a.rem(f);
        let mut s = b.clone();
        for _ in 1..(field.k() as usize * d) {
            b = b.mulmod(&b, f);
            s = s.add(&b);
        }
        s
    } else {
        let mut b = a.rem(f);
        let mut norm = b.clone();
        for _ in 1..d {
            b = b.powmod(q, f);
            norm = norm.mulmod(&b, f);
        }
        norm.powmod((q - 1) / 2, f).sub(&Poly::constant(field, 1))
    }
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if f.deg() as usize == d {
        out.push(f.monic());
        return;
    }
    let n = f.deg() as usize;
    loop {
        let a = random_poly(&f.field, n, rng);
        if a.deg() < 1 {
            continue;
        }
        let g = splitter(&a, f, d).gcd(f);
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = f.divrem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Factorization into monic irreducibles with multiplicities, sorted by degree then
/// coefficients (leading first). Deterministic for a given seed.
pub fn factor_univariate(f: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPoly);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = f.monic();
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (g, mult) in square_free(&f) {
        for (h, d) in distinct_degree(&g) {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts);
            out.extend(parts.into_iter().map(|p| (p, mult)));
        }
    }
    out.sort_by_key(|(p, m)| (p.canonical_key(), *m));
    Ok(out)
}

/// Distinct roots of `f` in its coefficient field, ascending by code.
pub fn roots(f: &Poly, seed: u64) -> Vec<u32> {
    if f.is_zero() {
        return Vec::new();
    }
    let field = &f.field;
    let mut out: Vec<u32> = factor_univariate(f, seed)
        .unwrap()
        .into_iter()
        .filter(|(p, _)| p.deg() == 1)
        .map(|(p, _)| field.neg(p.c[0]))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::gf;

    fn prod(fs: &[(Poly, usize)], field: &FqField) -> Poly {
        let mut acc = Poly::constant(field, 1);
        for (p, m) in fs {
            for _ in 0..*m {
                acc = acc.mul(p);
            }
        }
        acc
    }

    #[test]
    fn spec_examples() {
        let f2 = gf(2, 1);
        let g = Poly::new(&f2, vec![1, 1, 1]);
        assert_eq!(factor_univariate(&g, 0).unwrap(), vec![(g.clone(), 1)]);

        let f4 = gf(2, 2);
        let a = f4.gen();
        let g4 = Poly::new(&f4, vec![1, 1, 1]);
        let fs = factor_univariate(&g4, 3).unwrap();
        assert_eq!(fs.len(), 2);
        let mut consts: Vec<u32> = fs.iter().map(|(p, _)| p.c[0]).collect();
        consts.sort();
        assert_eq!(consts, vec![a, f4.add(a, 1)]);

        let sq = Poly::new(&f2, vec![1, 0, 1]);
        assert_eq!(
            factor_univariate(&sq, 0).unwrap(),
            vec![(Poly::new(&f2, vec![1, 1]), 2)]
        );
        assert!(factor_univariate(&Poly::zero(&f2), 0).is_err());
    }

    #[test]
    fn refactor_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, k) in [(2, 1), (2, 4), (3, 1), (3, 2), (5, 1), (2, 6)] {
            let field = gf(p, k);
            for t in 0..200 {
                let n = 1 + t % 9;
                let mut c: Vec<u32> = (0..n).map(|_| field.random(&mut rng)).collect();
                c.push(field.random_nonzero(&mut rng));
                let f = Poly::new(&field, c);
                let fs = factor_univariate(&f, t as u64).unwrap();
                assert_eq!(prod(&fs, &field), f.monic());
                assert!(fs.iter().all(|(g, _)| g.is_irreducible() && g.lead() == 1));
            }
        }
    }

    #[test]
    fn repeated_factors_in_char_p() {
        let f3 = gf(3, 1);
        // (y+1)^3 (y^2+1)^2
        let a = Poly::new(&f3, vec![1, 1]);
        let b = Poly::new(&f3, vec![1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        assert_eq!(factor_univariate(&f, 1).unwrap(), vec![(a, 3), (b, 2)]);
    }

    #[test]
    fn root_finding() {
        let f16 = gf(2, 4);
        let x = Poly::x(&f16);
        let y = f16.gen();
        let f = x.sub(&Poly::constant(&f16, y)).mul(&x.sub(&Poly::constant(&f16, 1)));
        let mut want = vec![1, y];
        want.sort();
        assert_eq!(roots(&f, 0), want);
    }
}
