//! Prime and extension fields F_{p^k}.
//!
//! An element is a `u32` whose base-p digits are the coefficients of its
//! polynomial representative (constant term least significant). Prime fields
//! use plain modular arithmetic; proper extensions multiply through log/exp
//! tables built from a generator found at construction time.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Elem = u32;

/// Largest extension field order for which tables are built.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^16")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported limit")]
    TooLarge(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    Reducible(u32),
}

/// Serializable description of a field: p, k and the modulus coefficients
/// (constant term first, leading 1 included).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // only populated when k > 1
    exp: Vec<u32>,
    log: Vec<u32>,
    digit_pow: Vec<u32>,
}

/// Cheap to clone; clones share the same tables.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// F_{p^k} with the lexicographically first monic irreducible modulus,
    /// ordering candidates by the integer whose base-p digits are the
    /// non-leading coefficients.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        check_prime(p)?;
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if k > 1 && order > MAX_EXTENSION_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        if k == 1 {
            return Ok(Self::build(p, 1, vec![0, 1]));
        }
        for n in 0..(p as u64).pow(k - 1) * p as u64 {
            let mut modulus = digits(n, p, k as usize);
            modulus.push(1);
            if poly::is_irreducible(&modulus, p) {
                return Ok(Self::build(p, k, modulus));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        check_prime(p)?;
        if modulus.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        let k = (modulus.len() - 1) as u32;
        if *modulus.last().unwrap() != 1
            || modulus.iter().any(|&c| c >= p)
            || !poly::is_irreducible(&modulus, p)
        {
            return Err(FieldError::Reducible(k));
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if k > 1 && order > MAX_EXTENSION_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        Ok(Self::build(p, k, modulus))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self, FieldError> {
        Self::with_modulus(d.p, d.modulus.clone())
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(k);
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            digit_pow: (0..k).map(|i| p.pow(i)).collect(),
        };
        if k > 1 {
            let (exp, log) = build_tables(&inner);
            inner.exp = exp;
            inner.log = log;
        }
        FiniteField(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.0.p, k: self.0.k, modulus: self.0.modulus.clone() }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    /// Element with the given polynomial coefficients (constant first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Elem {
        let mut e = 0;
        for (i, &c) in coeffs.iter().enumerate().take(self.0.k as usize) {
            e += (c % self.0.p) * self.0.digit_pow[i];
        }
        e
    }

    pub fn to_coeffs(&self, e: Elem) -> Vec<u32> {
        digits(e as u64, self.0.p, self.0.k as usize)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            for &w in &self.0.digit_pow {
                out += ((a % p + b % p) % p) * w;
                a /= p;
                b /= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            for &w in &self.0.digit_pow {
                out += ((p - a % p) % p) * w;
                a /= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.k == 1 {
            ((a as u64 * b as u64) % self.0.p as u64) as Elem
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = self.0.q as usize - 1;
            let s = self.0.log[a as usize] as usize + self.0.log[b as usize] as usize;
            self.0.exp[if s >= n { s - n } else { s }]
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if self.0.k == 1 {
            Some(self.pow(a, (self.0.p - 2) as u64))
        } else {
            let n = self.0.q as usize - 1;
            let l = self.0.log[a as usize] as usize;
            Some(self.0.exp[(n - l) % n])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }
}

fn check_prime(p: u32) -> Result<(), FieldError> {
    if p >= 1 << 16 || !is_prime(p) {
        Err(FieldError::NotPrime(p))
    } else {
        Ok(())
    }
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

fn build_tables(inner: &Inner) -> (Vec<u32>, Vec<u32>) {
    let (p, k, q) = (inner.p, inner.k as usize, inner.q as usize);
    let encode = |c: &[u32]| -> u32 { c.iter().zip(&inner.digit_pow).map(|(a, w)| a * w).sum() };
    for g in 2..q as u32 {
        let gc = digits(g as u64, p, k);
        let mut exp = Vec::with_capacity(q - 1);
        let mut cur = vec![0u32; k];
        cur[0] = 1;
        let mut ok = true;
        for i in 0..q - 1 {
            let e = encode(&cur);
            if i > 0 && e == 1 {
                ok = false;
                break;
            }
            exp.push(e);
            cur = poly::mulmod(&cur, &gc, &inner.modulus, p);
        }
        if ok {
            let mut log = vec![0u32; q];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return (exp, log);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

/// Dense polynomials over F_p, constant term first.
mod poly {
    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm && !r.is_empty() {
            let top = *r.last().unwrap();
            if top != 0 {
                let f = top as u64 * lead_inv % p as u64;
                let shift = r.len() - 1 - dm;
                for (i, &c) in m.iter().enumerate() {
                    let s = (f * c as u64) % p as u64;
                    r[shift + i] = ((r[shift + i] as u64 + p as u64 - s) % p as u64) as u32;
                }
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0);
        }
        trim(r)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Product reduced modulo `m`, padded to deg m coefficients.
    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = rem(&mul(a, b, p), m, p);
        r.resize(m.len() - 1, 0);
        r
    }

    fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !is_zero(&b) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub_x(a: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        if a.len() < 2 {
            a.resize(2, 0);
        }
        a[1] = (a[1] + p - 1) % p;
        trim(a)
    }

    fn prime_divisors(mut n: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
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

    /// Rabin's test: x^{p^k} = x mod f, and gcd(x^{p^{k/r}} - x, f) = 1 for
    /// each prime r | k.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        // iterated Frobenius images of x
        let mut frob = vec![rem(&[0, 1], f, p)];
        for _ in 0..k {
            let last = frob.last().unwrap();
            let mut acc = vec![1u32];
            let mut base = last.clone();
            let mut e = p as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), f, p);
                }
                base = rem(&mul(&base, &base, p), f, p);
                e >>= 1;
            }
            frob.push(acc);
        }
        if !is_zero(&sub_x(&frob[k], p)) {
            return false;
        }
        for r in prime_divisors(k as u32) {
            let j = k / r as usize;
            let g = gcd(f, &sub_x(&frob[j], p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FiniteField::prime(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_int(-1), 6);
        assert!(FiniteField::prime(9).is_err());
        assert!(FiniteField::prime(65537).is_err());
    }

    #[test]
    fn conventional_moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert!(FiniteField::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    fn brute_irreducible(f: &[u32], p: u32) -> bool {
        // no monic factor of degree 1..=deg/2
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            for n in 0..(p as u64).pow(d as u32) {
                let mut g = digits(n, p, d);
                g.push(1);
                if poly::rem(f, &g, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for &(p, k) in &[(2u32, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)] {
            for n in 0..(p as u64).pow(k as u32) {
                let mut f = digits(n, p, k);
                f.push(1);
                assert_eq!(poly::is_irreducible(&f, p), brute_irreducible(&f, p), "{f:?} over F_{p}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for &(p, k) in &[(2u32, 1u32), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (61, 1)] {
            let f = FiniteField::new(p, k).unwrap();
            let q = f.order();
            assert!(q <= 64);
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "{f:?} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn extension_multiplication_matches_polynomials() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in 0..f.order() {
            for b in 0..f.order() {
                let prod = poly::mulmod(&f.to_coeffs(a), &f.to_coeffs(b), f.modulus(), 3);
                assert_eq!(f.mul(a, b), f.from_coeffs(&prod));
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = FiniteField::new(5, 2).unwrap();
        let fixed: Vec<_> = f.elements().filter(|&a| f.pow(a, 5) == a).collect();
        assert_eq!(fixed, vec![0, 1, 2, 3, 4]);
    }
}
