//! Truncated Chow-ring arithmetic in `Z[t0, t1, ..., ts] / (t0^(n+2))`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::degree_bounds;
use crate::error::{Error, Result};
use crate::homopoly::{Certificate, DegreePattern};

/// An element of the truncated ring; only `t0` is truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    n: usize,
    s: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ChowClass {
    pub fn zero(n: usize, s: usize) -> ChowClass {
        ChowClass {
            n,
            s,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, s: usize) -> ChowClass {
        let mut c = ChowClass::zero(n, s);
        c.terms.insert(vec![0; s + 1], BigInt::one());
        c
    }

    /// `sum_j coeffs[j] * t_j`.
    pub fn linear(n: usize, s: usize, coeffs: &[BigInt]) -> ChowClass {
        assert_eq!(coeffs.len(), s + 1);
        let mut c = ChowClass::zero(n, s);
        for (j, a) in coeffs.iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0; s + 1];
                e[j] = 1;
                c.terms.insert(e, a.clone());
            }
        }
        c.truncate();
        c
    }

    /// `t0^k`.
    pub fn theta0_pow(n: usize, s: usize, k: u32) -> ChowClass {
        let mut c = ChowClass::zero(n, s);
        let mut e = vec![0; s + 1];
        e[0] = k;
        c.terms.insert(e, BigInt::one());
        c.truncate();
        c
    }

    fn truncate(&mut self) {
        let cap = self.n as u32 + 1;
        self.terms.retain(|e, c| e[0] <= cap && !c.is_zero());
    }

    pub fn mul(&self, other: &ChowClass) -> ChowClass {
        assert_eq!((self.n, self.s), (other.n, other.s), "classes from different rings");
        let cap = self.n as u32 + 1;
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                if ea[0] + eb[0] > cap {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let mut c = ChowClass {
            n: self.n,
            s: self.s,
            terms: out,
        };
        c.truncate();
        c
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            *out.entry(e.clone()).or_insert_with(BigInt::zero) += c;
        }
        let mut c = ChowClass {
            n: self.n,
            s: self.s,
            terms: out,
        };
        c.truncate();
        c
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        (0..k).fold(ChowClass::one(self.n, self.s), |acc, _| acc.mul(self))
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    /// Coefficient of `t0^(n+1)`.
    pub fn top_coeff(&self) -> BigInt {
        let mut e = vec![0; self.s + 1];
        e[0] = self.n as u32 + 1;
        self.coeff(&e)
    }

    /// Coefficient of `t0^n * t_i`, `1 <= i <= s`.
    pub fn extract_bound(&self, i: usize) -> Result<BigInt> {
        if i < 1 || i > self.s {
            return Err(Error::IndexOutOfRange {
                index: i,
                lo: 1,
                hi: self.s,
            });
        }
        let mut e = vec![0; self.s + 1];
        e[0] = self.n as u32;
        e[i] = 1;
        Ok(self.coeff(&e))
    }
}

/// The class of the incidence variety behind the `nons` or `irr`
/// certificate.
pub fn chow_class(cert: Certificate, pattern: &DegreePattern) -> Result<ChowClass> {
    let (n, s) = (pattern.n(), pattern.s());
    let sigma = BigInt::from(pattern.sigma());
    let mut product = ChowClass::one(n, s);
    for (i, &d) in pattern.degrees().iter().enumerate() {
        let mut coeffs = vec![BigInt::zero(); s + 1];
        coeffs[0] = BigInt::from(d);
        coeffs[i + 1] = BigInt::one();
        product = product.mul(&ChowClass::linear(n, s, &coeffs));
    }
    let mut coeffs = vec![BigInt::one(); s + 1];
    coeffs[0] = sigma;
    let jac = ChowClass::linear(n, s, &coeffs);
    match cert {
        Certificate::Nons => Ok(product.mul(&jac.pow((n - s + 1) as u32))),
        Certificate::Irr => {
            if n < s + 1 {
                return Err(Error::PatternViolation("irr needs n >= s+1".into()));
            }
            Ok(product
                .mul(&jac.pow(2))
                .mul(&ChowClass::theta0_pow(n, s, (n - s - 1) as u32)))
        }
        other => Err(Error::UnsupportedCertificate(format!("no class expansion for {other}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowRow {
    pub i: usize,
    pub coefficient: String,
    pub closed_form: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowTable {
    pub cert: Certificate,
    pub n: usize,
    pub s: usize,
    pub d: Vec<u32>,
    pub rows: Vec<ChowRow>,
    pub top: ChowRow,
    pub all_match: bool,
}

/// Extracted coefficients next to their closed forms.
pub fn chow_table(cert: Certificate, pattern: &DegreePattern) -> Result<ChowTable> {
    let cls = chow_class(cert, pattern)?;
    let closed = degree_bounds(pattern, cert)?;
    let mut rows = Vec::new();
    for i in 1..=pattern.s() {
        let c = cls.extract_bound(i)?;
        let e = BigInt::from(closed.per_form[i - 1].clone());
        rows.push(ChowRow {
            i,
            coefficient: c.to_string(),
            closed_form: e.to_string(),
            matches: c == e,
        });
    }
    let sigma = BigUint::from(pattern.sigma());
    let delta = BigUint::from(pattern.delta());
    let top_closed = match cert {
        Certificate::Nons => sigma.pow((pattern.n() - pattern.s() + 1) as u32) * delta,
        _ => &sigma * &sigma * delta,
    };
    let top_closed = BigInt::from(top_closed);
    let t = cls.top_coeff();
    let top = ChowRow {
        i: 0,
        coefficient: t.to_string(),
        closed_form: top_closed.to_string(),
        matches: t == top_closed,
    };
    let all_match = top.matches && rows.iter().all(|r| r.matches);
    Ok(ChowTable {
        cert,
        n: pattern.n(),
        s: pattern.s(),
        d: pattern.degrees().to_vec(),
        rows,
        top,
        all_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(n: usize, d: &[u32]) -> DegreePattern {
        DegreePattern::new(n, d.to_vec()).unwrap()
    }

    #[test]
    fn plane_cubic_expansion() {
        // (3t0 + t1)(2t0 + t1)^2 = 12 t0^3 + 16 t0^2 t1 + 7 t0 t1^2 + t1^3
        let c = chow_class(Certificate::Nons, &pat(2, &[3])).unwrap();
        assert_eq!(c.coeff(&[3, 0]), BigInt::from(12));
        assert_eq!(c.coeff(&[2, 1]), BigInt::from(16));
        assert_eq!(c.coeff(&[1, 2]), BigInt::from(7));
        assert_eq!(c.coeff(&[0, 3]), BigInt::from(1));
        assert_eq!(c.extract_bound(1).unwrap(), BigInt::from(16));
    }

    #[test]
    fn quadric_pair() {
        let p = pat(3, &[2, 2]);
        let nons = chow_class(Certificate::Nons, &p).unwrap();
        assert_eq!(nons.top_coeff(), BigInt::from(16));
        assert_eq!(nons.extract_bound(1).unwrap(), BigInt::from(24));
        assert_eq!(nons.extract_bound(2).unwrap(), BigInt::from(24));
        let irr = chow_class(Certificate::Irr, &p).unwrap();
        assert_eq!(irr.extract_bound(1).unwrap(), BigInt::from(24));
        assert!(matches!(irr.extract_bound(3), Err(Error::IndexOutOfRange { .. })));
        assert!(chow_table(Certificate::Nons, &p).unwrap().all_match);
    }

    #[test]
    fn truncation_drops_high_t0() {
        let c = ChowClass::theta0_pow(2, 1, 2).mul(&ChowClass::theta0_pow(2, 1, 2));
        assert!(c.terms().is_empty());
    }
}
