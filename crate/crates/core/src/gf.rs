//! Arithmetic in F_q for prime powers q up to [`MAX_ORDER`].
//!
//! Elements are encoded as integers in `[0, q)`. For a prime field the
//! encoding is the residue; for `q = p^e` with `e > 1` it is the base-p digit
//! string of the polynomial residue, constant term least significant. So in
//! F_4 = F_2[x]/(x^2 + x + 1) the class of `x` is encoded as 2 and `x + 1` as 3.
//!
//! Extension fields use the lexicographically least monic irreducible
//! polynomial of degree e, ordering candidates by the integer whose base-p
//! digits are the non-leading coefficients (constant term least significant).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 32;

/// An element of F_q, by its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps an encoding without checking it against a field; use
    /// [`FieldSpec::element`] for validated construction.
    pub const fn from_raw(rep: u8) -> Self {
        FieldElement(rep)
    }

    pub const fn rep(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Description of F_q together with precomputed operation tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u8>,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Polynomials over F_p as coefficient vectors, constant term first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let lead = *r.last().unwrap();
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `code`.
    pub fn monic_from_code(code: u32, deg: u32, p: u32) -> Vec<u32> {
        let mut c = code;
        let mut out = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            out.push(c % p);
            c /= p;
        }
        out.push(1);
        out
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = (m.len() - 1) as u32;
        for d in 1..=deg / 2 {
            for code in 0..p.pow(d) {
                let f = monic_from_code(code, d, p);
                if rem_monic(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldSpec {
    /// Builds F_q. Errors if `q` is not a prime power or exceeds [`MAX_ORDER`].
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::UnsupportedOrder(q));
        }
        let (q, p) = (q as u32, p as u32);
        let modulus: Vec<u32> = if e == 1 {
            Vec::new()
        } else {
            (0..p.pow(e))
                .map(|code| poly::monic_from_code(code, e, p))
                .find(|m| poly::is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };

        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut x = x;
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum) as u8;
                let prod = if e == 1 {
                    (a * b) % p
                } else {
                    let mut pa = da.clone();
                    let mut pb = db.clone();
                    poly::trim(&mut pa);
                    poly::trim(&mut pb);
                    let r = poly::rem_monic(&poly::mul(&pa, &pb, p), &modulus, p);
                    undigits(&r)
                };
                mul[(a * q + b) as usize] = prod as u8;
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..n).find(|&b| mul[a * n + b] == 1).expect("field has no zero divisors") as u8
                }
            })
            .collect();

        Ok(FieldSpec {
            q,
            p,
            e,
            modulus: modulus.into_iter().map(|c| c as u8).collect(),
            tables: Arc::new(Tables { add, mul, neg, inv }),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial, constant term first, leading 1
    /// included. Empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Validated element construction.
    pub fn element(&self, rep: u64) -> Result<FieldElement> {
        if rep < self.q as u64 {
            Ok(FieldElement(rep as u8))
        } else {
            Err(Error::InvalidElement { value: rep, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|r| FieldElement(r as u8))
    }

    /// Polynomial coefficients (constant term first) of an element.
    pub fn decode(&self, a: FieldElement) -> Vec<u32> {
        let mut x = a.0 as u32;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// Inverse of [`FieldSpec::decode`].
    pub fn encode(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.e as usize {
            return Err(Error::LengthMismatch { expected: self.e as usize, got: coeffs.len() });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidElement { value: bad as u64, q: self.p });
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0, |acc, &d| acc * self.p + d) as u8))
    }

    #[inline]
    fn idx(&self, a: FieldElement, b: FieldElement) -> usize {
        a.0 as usize * self.q as usize + b.0 as usize
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.tables.add[self.idx(a, b)])
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.tables.mul[self.idx(a, b)])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.tables.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.tables.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Σ u_i v_i.
    pub fn dot(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch { expected: u.len(), got: v.len() });
        }
        Ok(self.dot_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        u.iter()
            .zip(v)
            .fold(FieldElement::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}
