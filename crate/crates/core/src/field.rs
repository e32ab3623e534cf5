//! Finite fields `F_q` with `q = p^k`.
//!
//! Elements are stored as a packed integer code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of their coefficient vector in `F_p[x]/(m(x))`. The code is canonical, so
//! equality of elements is equality of codes, and the prime subfield occupies
//! the codes `0..p`.
//!
//! Extension fields up to [`TABLE_LIMIT`] elements carry discrete log/exp
//! tables; larger extensions fall back to schoolbook multiplication.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `q` for which multiplication tables are built for extension fields.
pub const TABLE_LIMIT: u64 = 1 << 22;
/// Codes are `u32`; every field must satisfy `q < 2^31`.
pub const MAX_Q: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    /// Low-to-high coefficients of the monic modulus, length k+1. `[0, 1]` for prime fields.
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// A finite field descriptor. Cheap to clone and immutable.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.p)
            .field("k", &self.0.k)
            .field("modulus", &self.modulus())
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.k)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// `Some((p, k))` if `q = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    Some((p, k))
}

// Dense polynomials over F_p, low-to-high, used for modulus handling.
mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    /// Remainder of `a` modulo `m` (m nonzero).
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or irreducibility test for a polynomial of degree >= 1.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..=k / 2 {
            h = powmod(&h, p, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds `F_{p^k}`. Without an explicit modulus, the monic irreducible of
    /// degree `k` with the smallest code `c_0 + c_1 p + ...` is used.
    /// `modulus` is given low-to-high and must include the leading `1`.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) || p > MAX_Q {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: "0".into(),
            });
        }
        let q = (p as u128)
            .checked_pow(k)
            .filter(|&q| q <= MAX_Q as u128)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{k} does not fit a 31-bit code")))? as u64;
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u64> = m.to_vec();
                fp_poly::trim(&mut m);
                if m.len() != k as usize + 1 || m[k as usize] != 1 {
                    return Err(Error::DegreeMismatch {
                        expected: k,
                        found: format!("{m:?}"),
                    });
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch {
                        expected: k,
                        found: format!("coefficients {m:?} not reduced mod {p}"),
                    });
                }
                if !fp_poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None if k == 1 => vec![0, 1],
            None => Self::search_modulus(p, k),
        };
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        if k > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(Self::build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Parses `"p"` or `"p^k"`.
    pub fn from_spec(spec: &str) -> Result<Field> {
        let spec = spec.trim();
        let bad = || Error::InvalidFieldSpec(spec.to_string());
        let (p, k) = match spec.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (spec.parse::<u64>().map_err(|_| bad())?, 1),
        };
        Field::new(p, k, None)
    }

    fn search_modulus(p: u64, k: u32) -> Vec<u64> {
        let lower = p.pow(k);
        for code in 1..lower {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            if m[0] == 0 {
                continue;
            }
            m.push(1);
            if fp_poly::is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_tables(inner: &Inner) -> Tables {
        let q = inner.q;
        let order = q - 1;
        let factors = prime_factors(order);
        let as_poly = |code: u64| {
            let mut v = Vec::with_capacity(inner.k as usize);
            let mut c = code;
            for _ in 0..inner.k {
                v.push(c % inner.p);
                c /= inner.p;
            }
            v
        };
        let generator = (inner.p..q)
            .find(|&g| {
                let gp = as_poly(g);
                factors.iter().all(|&r| {
                    let mut e = fp_poly::powmod(&gp, order / r, &inner.modulus, inner.p);
                    fp_poly::trim(&mut e);
                    e != [1]
                })
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let gpoly = as_poly(generator);
        let mut cur = vec![1u64];
        for i in 0..order as usize {
            let code = cur.iter().rev().fold(0u64, |acc, &c| acc * inner.p + c) as u32;
            exp[i] = code;
            exp[i + order as usize] = code;
            log[code as usize] = i as u32;
            cur = fp_poly::mulmod(&cur, &gpoly, &inner.modulus, inner.p);
        }
        Tables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus, low-to-high; empty for prime fields.
    pub fn modulus(&self) -> Vec<u64> {
        if self.0.k == 1 {
            Vec::new()
        } else {
            self.0.modulus.clone()
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code < self.0.q {
            Ok(Elem(code as u32))
        } else {
            Err(Error::ArityMismatch {
                expected: self.0.q as usize,
                found: code as usize,
            })
        }
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given coefficient vector (low-to-high, at most k entries), reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Elem> {
        if coeffs.len() > self.0.k as usize {
            return Err(Error::ArityMismatch {
                expected: self.0.k as usize,
                found: coeffs.len(),
            });
        }
        let p = self.0.p as i64;
        let code = coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.0.p + c.rem_euclid(p) as u64);
        Ok(Elem(code as u32))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.0.k as usize);
        let mut c = a.0 as u64;
        for _ in 0..self.0.k {
            v.push(c % self.0.p);
            c /= self.0.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q as u32).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem(if s >= p { s - p } else { s } as u32);
        }
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out as u32)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { (p - a.0 as u64) as u32 });
        }
        if p == 2 {
            return a;
        }
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            let d = (p - x % p) % p;
            out += d * place;
            place *= p;
            x /= p;
        }
        Elem(out as u32)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.0.k == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.0.p) as u32);
        }
        if let Some(t) = &self.0.tables {
            return Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        let prod = fp_poly::mulmod(&self.coeffs(a), &self.coeffs(b), &self.0.modulus, self.0.p);
        Elem(prod.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c) as u32)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let order = self.0.q - 1;
            let l = (t.log[a.0 as usize] as u128 * (e % order) as u128 % order as u128) as usize;
            return Elem(t.exp[l]);
        }
        let mut result = Elem::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let order = (self.0.q - 1) as u32;
            let l = t.log[a.0 as usize];
            return Ok(Elem(t.exp[((order - l) % order) as usize]));
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `F_{q^m}` built over the same prime with the default modulus.
    pub fn extension(&self, m: u32) -> Result<Field> {
        if m == 1 {
            return Ok(self.clone());
        }
        Field::new(self.0.p, self.0.k * m, None)
    }

    /// An embedding of `self` into `ext`, which must have the same characteristic
    /// and a degree divisible by `self.degree()`.
    pub fn embed_into(&self, ext: &Field) -> Result<Embedding> {
        if self == ext {
            return Ok(Embedding {
                basis: Vec::new(),
                source: self.clone(),
                target: ext.clone(),
            });
        }
        if self.0.p != ext.0.p || !ext.0.k.is_multiple_of(self.0.k) {
            return Err(Error::IncompatibleFields(format!(
                "F_{self} does not embed into F_{ext}"
            )));
        }
        if self.0.k == 1 {
            return Ok(Embedding {
                basis: Vec::new(),
                source: self.clone(),
                target: ext.clone(),
            });
        }
        // Smallest root of our modulus inside ext.
        let root = ext
            .elements()
            .find(|&r| {
                let mut acc = Elem::ZERO;
                for &c in self.0.modulus.iter().rev() {
                    acc = ext.add(ext.mul(acc, r), Elem(c as u32));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::IncompatibleFields("modulus has no root in extension".into()))?;
        let mut basis = Vec::with_capacity(self.0.k as usize);
        let mut cur = Elem::ONE;
        for _ in 0..self.0.k {
            basis.push(cur);
            cur = ext.mul(cur, root);
        }
        Ok(Embedding {
            basis,
            source: self.clone(),
            target: ext.clone(),
        })
    }

    /// Renders an element in the system-file syntax: an integer for prime
    /// fields, `c0|c1|...` otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.0.k == 1 {
            a.0.to_string()
        } else {
            self.coeffs(a)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("|")
        }
    }

    /// Inverse of [`Field::format_elem`]; integers are reduced mod p.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let parts: Vec<i64> = s
            .split('|')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad coefficient {s:?}"),
            })?;
        self.from_coeffs(&parts)
    }
}

/// A field homomorphism `F_q -> F_{q^m}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    // Images of 1, x, ..., x^{k-1}; empty when the source is a prime field or equals the target.
    basis: Vec<Elem>,
    source: Field,
    target: Field,
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, a: Elem) -> Elem {
        if self.basis.is_empty() {
            return a;
        }
        let t = &self.target;
        self.source
            .coeffs(a)
            .iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (&c, &b)| t.add(acc, t.mul(Elem(c as u32), b)))
    }
}
