//! Exact numbers rendered both as exact text and as a decimal approximation.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An exact value (`"93/101"` or `"1827"`) with its `f64` approximation.
/// The exact form is authoritative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub approx: f64,
}

impl Exact {
    pub fn rational(r: &BigRational) -> Exact {
        Exact {
            exact: rational_text(r),
            approx: rational_to_f64(r),
        }
    }

    pub fn int(n: &BigUint) -> Exact {
        Exact {
            exact: n.to_string(),
            approx: n.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    pub fn signed(n: &BigInt) -> Exact {
        Exact {
            exact: n.to_string(),
            approx: n.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

/// `"a/b"`, or just `"a"` when the denominator is 1.
pub fn rational_text(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// far beyond the `f64` range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if n.is_zero() {
        return 0.0;
    }
    if let (Some(a), Some(b)) = (n.to_f64(), d.to_f64()) {
        if a.is_finite() && b.is_finite() {
            return a / b;
        }
    }
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let n = n.abs().to_biguint().expect("nonnegative");
    let d = d.abs().to_biguint().expect("nonnegative");
    // Scale so that the integer quotient carries about 64 significant bits.
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    sign * q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render() {
        let r = BigRational::new(BigInt::from(93), BigInt::from(101));
        assert_eq!(rational_text(&r), "93/101");
        assert_eq!(rational_text(&BigRational::from_integer(BigInt::from(7))), "7");
        assert_eq!(parse_rational("93/101").unwrap(), r);
        assert!((rational_to_f64(&r) - 93.0 / 101.0).abs() < 1e-15);
    }

    #[test]
    fn huge_ratio() {
        let big = BigInt::from(9u32).pow(2000);
        let r = BigRational::new(
            BigInt::from(2) * &big,
            BigInt::from(3) * &big * BigInt::from(9u32).pow(40),
        );
        let expect = (2.0f64 / 3.0) / 9f64.powi(40);
        assert!(((rational_to_f64(&r) - expect) / expect).abs() < 1e-12);
    }
}
