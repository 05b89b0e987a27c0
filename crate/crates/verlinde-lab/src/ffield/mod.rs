//! Finite fields GF(p^k).
//!
//! Elements are stored as integer codes: the element `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! has code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. In characteristic 2 addition is XOR
//! of codes.

mod poly;

pub use poly::{factor_univariate, roots, Poly};

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Largest field order supported. Codes are `u32`.
pub const MAX_ORDER: u64 = 1 << 32;

const TABLE_LIMIT: u64 = 256;
const LOG_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the supported bound 2^32")]
    TooLarge { p: u32, k: u32 },
    #[error("cannot embed GF({p}^{from}) into GF({p}^{to})")]
    NoEmbedding { p: u32, from: u32, to: u32 },
    #[error("mixed fields GF({0}) and GF({1})")]
    Mismatch(u64, u64),
    #[error("zero polynomial")]
    ZeroPoly,
    #[error("invalid field spec: {0}")]
    BadSpec(String),
}

enum Backend {
    Table { mul: Vec<u32>, inv: Vec<u32> },
    Log { exp: Vec<u32>, log: Vec<u32> },
    Poly,
}

pub struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// monic, length k+1, low degree first
    modulus: Vec<u32>,
    backend: Backend,
    /// source degree -> code of the chosen root of the source modulus
    embed_cache: Mutex<HashMap<u32, u32>>,
}

/// A shared field descriptor. Two descriptors are equal iff they have the same `(p, k)`,
/// because the modulus is canonical.
#[derive(Clone)]
pub struct FqField(Arc<FieldInner>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), FqField>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), FqField>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The field GF(p^k) with its canonical modulus. Descriptors are interned.
pub fn make_field(p: u32, k: u32) -> Result<FqField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = match (p as u64).checked_pow(k) {
        Some(q) if q < MAX_ORDER => q,
        _ => return Err(FieldError::TooLarge { p, k }),
    };
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = if k == 1 { vec![0, 1] } else { canonical_modulus(p, k) };
    let mut inner = FieldInner {
        p,
        k,
        q: q as u32,
        modulus,
        backend: Backend::Poly,
        embed_cache: Mutex::new(HashMap::new()),
    };
    inner.backend = build_backend(&inner);
    let f = FqField(Arc::new(inner));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, k)).or_insert(f).clone())
}

/// Shorthand that panics on invalid input. Intended for tests and examples.
pub fn gf(p: u32, k: u32) -> FqField {
    make_field(p, k).expect("valid field")
}

/// Least monic irreducible of degree k over GF(p), ordering monics by the code of
/// their lower coefficients.
fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    let base = gf(p, 1);
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut c = Vec::with_capacity(k as usize + 1);
        let mut t = code;
        for _ in 0..k {
            c.push((t % p as u64) as u32);
            t /= p as u64;
        }
        c.push(1);
        let f = Poly::new(&base, c.clone());
        if f.is_irreducible() {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_backend(f: &FieldInner) -> Backend {
    let q = f.q as u64;
    if q <= TABLE_LIMIT {
        let qs = q as usize;
        let mut mul = vec![0u32; qs * qs];
        for a in 0..qs {
            for b in a..qs {
                let c = poly_mul_code(f, a as u32, b as u32);
                mul[a * qs + b] = c;
                mul[b * qs + a] = c;
            }
        }
        let mut inv = vec![0u32; qs];
        for a in 1..qs {
            for b in 1..qs {
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Backend::Table { mul, inv }
    } else if q <= LOG_LIMIT {
        let g = primitive_code(f);
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = poly_mul_code(f, x, g);
        }
        Backend::Log { exp, log }
    } else {
        Backend::Poly
    }
}

fn digits(f: &FieldInner, mut a: u32) -> Vec<u32> {
    let mut d = vec![0u32; f.k as usize];
    for slot in d.iter_mut() {
        *slot = a % f.p;
        a /= f.p;
    }
    d
}

fn undigits(f: &FieldInner, d: &[u32]) -> u32 {
    let mut c = 0u64;
    for &x in d.iter().rev() {
        c = c * f.p as u64 + x as u64;
    }
    c as u32
}

fn poly_add_code(f: &FieldInner, a: u32, b: u32) -> u32 {
    if f.p == 2 {
        return a ^ b;
    }
    if f.k == 1 {
        return ((a as u64 + b as u64) % f.p as u64) as u32;
    }
    let (mut a, mut b) = (a, b);
    let (mut out, mut place) = (0u64, 1u64);
    for _ in 0..f.k {
        let s = (a % f.p + b % f.p) % f.p;
        out += s as u64 * place;
        place *= f.p as u64;
        a /= f.p;
        b /= f.p;
    }
    out as u32
}

fn poly_neg_code(f: &FieldInner, a: u32) -> u32 {
    if f.p == 2 {
        return a;
    }
    let d: Vec<u32> = digits(f, a).into_iter().map(|x| (f.p - x) % f.p).collect();
    undigits(f, &d)
}

fn poly_mul_code(f: &FieldInner, a: u32, b: u32) -> u32 {
    let k = f.k as usize;
    if f.p == 2 {
        let mut acc: u64 = 0;
        for i in 0..k {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u64) << i;
            }
        }
        let m: u64 = f
            .modulus
            .iter()
            .enumerate()
            .fold(0, |s, (i, &c)| s | ((c as u64) << i));
        for i in (k..2 * k).rev() {
            if (acc >> i) & 1 == 1 {
                acc ^= m << (i - k);
            }
        }
        return acc as u32;
    }
    let p = f.p as u64;
    let da = digits(f, a);
    let db = digits(f, b);
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        if da[i] == 0 {
            continue;
        }
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
        }
    }
    for i in (k..2 * k).rev() {
        let c = prod[i] % p;
        if c == 0 {
            continue;
        }
        for j in 0..k {
            let sub = c * f.modulus[j] as u64 % p;
            prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
        }
        prod[i] = 0;
    }
    let d: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
    undigits(f, &d)
}

fn poly_pow_code(f: &FieldInner, a: u32, mut e: u64) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_code(f, acc, base);
        }
        base = poly_mul_code(f, base, base);
        e >>= 1;
    }
    acc
}

fn primitive_code(f: &FieldInner) -> u32 {
    let n = f.q as u64 - 1;
    let ps = prime_factors(n);
    for g in 2..f.q {
        if ps.iter().all(|&r| poly_pow_code(f, g, n / r) != 1) {
            return g;
        }
    }
    1
}

impl FqField {
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    /// Field order p^k.
    pub fn order(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn prime_field(&self) -> FqField {
        gf(self.0.p, 1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a ^ b
        } else if f.k == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else {
            poly_add_code(f, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a
        } else if f.k == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            poly_neg_code(f, a)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.0.p == 2 {
            a ^ b
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        match &f.backend {
            Backend::Table { mul, .. } => mul[(a * f.q + b) as usize],
            Backend::Log { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
            Backend::Poly => poly_mul_code(f, a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let f = &*self.0;
        match &f.backend {
            Backend::Table { inv, .. } => inv[a as usize],
            Backend::Log { exp, log } => {
                let n = f.q - 1;
                exp[((n - log[a as usize]) % n) as usize]
            }
            Backend::Poly => poly_pow_code(f, a, f.q as u64 - 2),
        }
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^i)`; negative `i` applies the inverse automorphism.
    pub fn frobenius(&self, a: u32, i: i64) -> u32 {
        let k = self.0.k as i64;
        let r = i.rem_euclid(k);
        let mut x = a;
        for _ in 0..r {
            x = self.pow(x, self.0.p as u64);
        }
        x
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Code of the polynomial generator `x` (zero for prime fields, whose modulus is `x`).
    pub fn gen(&self) -> u32 {
        if self.0.k == 1 {
            0
        } else {
            self.0.p
        }
    }

    /// Coefficients over the prime field, low degree first.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        digits(&self.0, a)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        let mut d = vec![0u32; self.0.k as usize];
        for (i, &x) in c.iter().enumerate() {
            if i < d.len() {
                d[i] = x % self.0.p;
            } else {
                assert!(x % self.0.p == 0, "coefficient vector too long");
            }
        }
        undigits(&self.0, &d)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.0.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.0.q)
    }

    pub fn elem(&self, code: u32) -> FqElem {
        assert!(code < self.0.q, "code out of range");
        FqElem {
            field: self.clone(),
            code,
        }
    }

    /// `dst[i] += c * src[i]`.
    #[inline]
    pub fn axpy(&self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        let f = &*self.0;
        match (&f.backend, f.p) {
            (Backend::Table { mul, .. }, 2) => {
                let row = &mul[(c * f.q) as usize..((c + 1) * f.q) as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= row[s as usize];
                }
            }
            (Backend::Table { mul, .. }, _) => {
                let row = &mul[(c * f.q) as usize..((c + 1) * f.q) as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = self.add(*d, row[s as usize]);
                }
            }
            _ => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add(*d, self.mul(c, s));
                    }
                }
            }
        }
    }

    /// `v[i] *= c`.
    pub fn scale_slice(&self, v: &mut [u32], c: u32) {
        if c == 1 {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    /// Image of `code` from `src` under the canonical embedding `src -> self`.
    pub fn embed_code(&self, code: u32, src: &FqField) -> Result<u32, FieldError> {
        if src == self {
            return Ok(code);
        }
        let (p, ks, kt) = (self.0.p, src.0.k, self.0.k);
        if src.0.p != p || kt % ks != 0 {
            return Err(FieldError::NoEmbedding { p, from: ks, to: kt });
        }
        let c = src.coeffs(code);
        if ks == 1 {
            return Ok(c[0]);
        }
        let r = self.embedding_root(src);
        Ok(self.eval_coeffs(&c, r))
    }

    /// `sum_i c_i r^i` for prime-field coefficients `c`.
    fn eval_coeffs(&self, c: &[u32], r: u32) -> u32 {
        let mut acc = 0u32;
        let mut pw = 1u32;
        for &ci in c {
            acc = self.add(acc, self.mul(ci, pw));
            pw = self.mul(pw, r);
        }
        acc
    }

    /// Image in `self` of the generator `x` of `src` (`1 < k_src < k_self`, `k_src | k_self`).
    ///
    /// Embeddings compose: for `a | b | c` the route `a -> b -> c` agrees with `a -> c`.
    /// Maximal subfields get the least root of their modulus compatible with the roots
    /// already chosen for the other maximal subfields; smaller subfields are reached
    /// through a maximal subfield containing them.
    fn embedding_root(&self, src: &FqField) -> u32 {
        let ks = src.0.k;
        if let Some(&r) = self.0.embed_cache.lock().unwrap().get(&ks) {
            return r;
        }
        let maximal = self.maximal_subfield_roots();
        let r = match maximal.iter().find(|(d, _)| *d == ks) {
            Some(&(_, r)) => r,
            None => {
                let &(d, _) = maximal.iter().find(|(d, _)| d % ks == 0).expect("maximal subfield");
                let mid = make_field(self.0.p, d).expect("subfield");
                let inner = mid.embed_code(src.gen(), src).expect("subfield");
                self.embed_code(inner, &mid).expect("subfield")
            }
        };
        self.0.embed_cache.lock().unwrap().insert(ks, r);
        r
    }

    fn maximal_subfield_roots(&self) -> Vec<(u32, u32)> {
        let (p, kt) = (self.0.p, self.0.k);
        let primes: Vec<u32> = (2..=kt).filter(|&l| kt % l == 0 && (2..l).all(|d| l % d != 0)).collect();
        let mut chosen: Vec<(u32, u32)> = Vec::new();
        for l in primes {
            let d = kt / l;
            if d == 1 {
                continue;
            }
            if let Some(&r) = self.0.embed_cache.lock().unwrap().get(&d) {
                chosen.push((d, r));
                continue;
            }
            let sub = make_field(p, d).expect("subfield");
            let m = Poly::new(self, sub.modulus().to_vec());
            let r = roots(&m, 0)
                .into_iter()
                .find(|&r| {
                    chosen.iter().all(|&(d2, r2)| {
                        let e = gcd(d, d2);
                        if e == 1 {
                            return true;
                        }
                        let ef = make_field(p, e).expect("subfield");
                        let sub2 = make_field(p, d2).expect("subfield");
                        let via1 = sub.coeffs(sub.embed_code(ef.gen(), &ef).unwrap());
                        let via2 = sub2.coeffs(sub2.embed_code(ef.gen(), &ef).unwrap());
                        self.eval_coeffs(&via1, r) == self.eval_coeffs(&via2, r2)
                    })
                })
                .expect("compatible root of a subfield modulus");
            self.0.embed_cache.lock().unwrap().insert(d, r);
            chosen.push((d, r));
        }
        chosen
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            k: self.0.k,
            modulus: self.0.modulus.clone(),
        }
    }

    /// Canonical image of the generator α of GF(4) (root of x²+x+1). Requires p = 2, k even.
    pub fn alpha(&self) -> Result<u32, FieldError> {
        let f4 = make_field(2, 2)?;
        if self.0.p != 2 {
            return Err(FieldError::NoEmbedding { p: self.0.p, from: 2, to: self.0.k });
        }
        self.embed_code(f4.gen(), &f4)
    }

    /// Degree over the prime field of the smallest subfield containing `a`.
    pub fn degree_of(&self, a: u32) -> u32 {
        let mut x = self.pow(a, self.0.p as u64);
        let mut d = 1;
        while x != a {
            x = self.pow(x, self.0.p as u64);
            d += 1;
        }
        d
    }

    /// Human-readable rendering: a polynomial in `x` over the prime field.
    pub fn fmt_code(&self, a: u32) -> String {
        if self.0.k == 1 {
            return a.to_string();
        }
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Serialized form of a field descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<FqField, FieldError> {
        let f = make_field(self.p, self.k)?;
        if !self.modulus.is_empty() && self.modulus != f.modulus() {
            return Err(FieldError::BadSpec(format!(
                "modulus {:?} is not the canonical modulus {:?}",
                self.modulus,
                f.modulus()
            )));
        }
        Ok(f)
    }
}

/// A field element bound to its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    pub field: FqField,
    pub code: u32,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_code(self.code))
    }
}

impl FqElem {
    fn check(&self, o: &FqElem) -> Result<(), FieldError> {
        if self.field != o.field {
            return Err(FieldError::Mismatch(
                self.field.order() as u64,
                o.field.order() as u64,
            ));
        }
        Ok(())
    }
    pub fn try_add(&self, o: &FqElem) -> Result<FqElem, FieldError> {
        self.check(o)?;
        Ok(self.field.elem(self.field.add(self.code, o.code)))
    }
    pub fn try_mul(&self, o: &FqElem) -> Result<FqElem, FieldError> {
        self.check(o)?;
        Ok(self.field.elem(self.field.mul(self.code, o.code)))
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    pub fn inv(&self) -> FqElem {
        self.field.elem(self.field.inv(self.code))
    }
    pub fn pow(&self, e: u64) -> FqElem {
        self.field.elem(self.field.pow(self.code, e))
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }
}

macro_rules! elem_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr for &FqElem {
            type Output = FqElem;
            fn $m(self, o: &FqElem) -> FqElem {
                self.check(o).expect("mixed-field arithmetic");
                self.field.elem(self.field.$f(self.code, o.code))
            }
        }
        impl std::ops::$tr for FqElem {
            type Output = FqElem;
            fn $m(self, o: FqElem) -> FqElem {
                (&self).$m(&o)
            }
        }
    };
}
elem_op!(Add, add, add);
elem_op!(Sub, sub, sub);
elem_op!(Mul, mul, mul);
elem_op!(Div, div, div);

/// `e^(p^i)`.
pub fn frobenius(e: &FqElem, i: i64) -> FqElem {
    e.field.elem(e.field.frobenius(e.code, i))
}

/// Image of `e` under the canonical embedding into `target`.
pub fn embed(e: &FqElem, target: &FqField) -> Result<FqElem, FieldError> {
    Ok(target.elem(target.embed_code(e.code, &e.field)?))
}

/// The smallest field of characteristic p containing both GF(p^a) and GF(p^b).
pub fn common_field(a: &FqField, b: &FqField) -> Result<FqField, FieldError> {
    if a.p() != b.p() {
        return Err(FieldError::Mismatch(a.order() as u64, b.order() as u64));
    }
    let (x, y) = (a.k(), b.k());
    let mut g = x.max(y);
    let mut h = x.min(y);
    while h != 0 {
        let t = g % h;
        g = h;
        h = t;
    }
    make_field(a.p(), x / g * y)
}

/// A point of the projective line.
#[derive(Clone, Debug)]
pub enum PP1Point {
    Finite(FqElem),
    Infinity,
}

impl PP1Point {
    pub fn finite(f: &FqField, code: u32) -> PP1Point {
        PP1Point::Finite(f.elem(code))
    }
    pub fn is_infinity(&self) -> bool {
        matches!(self, PP1Point::Infinity)
    }
    /// Whether the point lies in ℙ¹(GF(p)).
    pub fn is_prime_rational(&self) -> bool {
        match self {
            PP1Point::Infinity => true,
            PP1Point::Finite(e) => e.code < e.field.p(),
        }
    }
    /// The point transported into a field containing it.
    pub fn embed(&self, target: &FqField) -> Result<PP1Point, FieldError> {
        Ok(match self {
            PP1Point::Infinity => PP1Point::Infinity,
            PP1Point::Finite(e) => PP1Point::Finite(embed(e, target)?),
        })
    }
    pub fn field(&self) -> Option<&FqField> {
        match self {
            PP1Point::Infinity => None,
            PP1Point::Finite(e) => Some(&e.field),
        }
    }
}

impl PartialEq for PP1Point {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (PP1Point::Infinity, PP1Point::Infinity) => true,
            (PP1Point::Finite(a), PP1Point::Finite(b)) => {
                if a.field == b.field {
                    return a.code == b.code;
                }
                match common_field(&a.field, &b.field) {
                    Ok(c) => {
                        c.embed_code(a.code, &a.field).ok() == c.embed_code(b.code, &b.field).ok()
                    }
                    Err(_) => false,
                }
            }
            _ => false,
        }
    }
}
impl Eq for PP1Point {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_moduli() {
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(2, 3).modulus(), &[1, 1, 0, 1]);
        assert_eq!(gf(2, 4).modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(make_field(2, 32), Err(FieldError::TooLarge { .. })));
        assert!(make_field(2, 31).is_ok());
    }

    #[test]
    fn frobenius_examples() {
        let f = gf(2, 2);
        let a = f.elem(f.gen());
        assert_eq!(frobenius(&a, 1).code, f.add(a.code, 1));
        assert_eq!(frobenius(&a, 0), a);
        assert_eq!(frobenius(&a, 2), a);
        assert_eq!(frobenius(&a, -1).code, f.add(a.code, 1));
    }

    #[test]
    fn backends_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, k) in [(2, 8), (2, 10), (2, 17), (3, 5), (3, 7), (5, 2), (7, 3), (3, 11)] {
            let f = gf(p, k);
            for _ in 0..200 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                let ab = f.mul(a, b);
                assert_eq!(ab, poly_mul_code(&f.0, a, b));
                assert_eq!(f.mul(ab, c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(ab, f.mul(a, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn embeddings_preserve_relations() {
        let f4 = gf(2, 2);
        let f8 = gf(2, 3);
        let f64 = gf(2, 6);
        let a = embed(&f4.elem(f4.gen()), &f64).unwrap();
        assert_eq!((&(&a * &a) + &a).code, 1);
        let b = embed(&f8.elem(f8.gen()), &f64).unwrap();
        assert_eq!(b.pow(3), &b + &f64.elem(1));
        assert_eq!(embed(&gf(2, 1).elem(1), &f64).unwrap().code, 1);
        assert!(embed(&f8.elem(2), &gf(2, 4)).is_err());
    }

    #[test]
    fn pp1_equality_across_fields() {
        let f4 = gf(2, 2);
        let f16 = gf(2, 4);
        let a = PP1Point::finite(&f4, f4.gen());
        let a16 = PP1Point::finite(&f16, f16.alpha().unwrap());
        assert_eq!(a, a16);
        assert_ne!(a, PP1Point::Infinity);
        assert!(PP1Point::finite(&f16, 1).is_prime_rational());
        assert!(!a16.is_prime_rational());
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_field_arithmetic_panics() {
        let _ = gf(2, 2).elem(1) + gf(2, 4).elem(1);
    }

    #[test]
    fn embeddings_compose() {
        for (p, c) in [(2u32, 12u32), (2, 24), (3, 6), (2, 30)] {
            let big = gf(p, c);
            for b in (1..c).filter(|b| c % b == 0) {
                let mid = gf(p, b);
                for a in (2..b).filter(|a| b % a == 0) {
                    let small = gf(p, a);
                    let g = small.gen();
                    let two_step = big.embed_code(mid.embed_code(g, &small).unwrap(), &mid).unwrap();
                    assert_eq!(two_step, big.embed_code(g, &small).unwrap(), "{p}^{a} -> {p}^{b} -> {p}^{c}");
                }
            }
        }
    }

    #[test]
    fn degree_of_subfield_elements() {
        let f = gf(2, 6);
        assert_eq!(f.degree_of(f.alpha().unwrap()), 2);
        assert_eq!(f.degree_of(1), 1);
        assert_eq!(f.degree_of(f.gen()), 6);
    }
}
