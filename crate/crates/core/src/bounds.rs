//! Closed-form quantities: pattern statistics, obstruction degree bounds,
//! probability lower bounds with their guards, the multihomogeneous zero
//! bound, and the combinatorics of degree patterns with a fixed Bezout
//! number. Everything that feeds a verdict is exact.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_factors, prime_power};
use crate::homopoly::{Certificate, DegreePattern};
use crate::numfmt::{rational_text, Exact};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `p_n = q^n + ... + q + 1`, the number of points of `P^n(F_q)`; `p_{-1} = 0`.
pub fn projective_count(n: i64, q: &BigUint) -> BigUint {
    if n < 0 {
        return BigUint::zero();
    }
    let mut acc = BigUint::zero();
    for _ in 0..=n {
        acc = acc * q + 1u32;
    }
    acc
}

fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternStats {
    pub delta: u64,
    pub sigma: u32,
    /// `D_i = C(d_i + n, n) - 1`, the projective dimension of the space of
    /// degree-`d_i` forms.
    pub dims: Vec<u64>,
    pub dim_total: u64,
}

/// `D = C(d + n, n) - 1`.
pub fn form_space_dim(n: usize, d: u32) -> BigUint {
    binomial(d as u64 + n as u64, n as u64) - 1u32
}

pub fn pattern_stats(p: &DegreePattern) -> Result<PatternStats> {
    let dims: Vec<u64> = p
        .degrees()
        .iter()
        .map(|&d| {
            form_space_dim(p.n(), d).to_u64().ok_or_else(|| Error::TooLarge {
                size: format!("D for d={d}"),
                cap: u64::MAX,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PatternStats {
        delta: p.delta(),
        sigma: p.sigma(),
        dim_total: dims.iter().sum(),
        dims,
    })
}

/// Per-form degree bounds `e_i` of an obstruction polynomial and the
/// uniform bound `e >= e_i` used by the concise probability bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBounds {
    pub cert: Certificate,
    pub per_form: Vec<BigUint>,
    pub concise: BigUint,
}

pub fn degree_bounds(p: &DegreePattern, cert: Certificate) -> Result<DegreeBounds> {
    let (n, s) = (p.n() as u32, p.s() as u32);
    let delta = big(p.delta());
    let sigma = big(p.sigma() as u64);
    let quot = |d: u32| &delta / big(d as u64);
    let (per_form, concise): (Vec<BigUint>, BigUint) = match cert {
        Certificate::Stci => {
            let per: Vec<BigUint> = p.degrees().iter().map(|&d| quot(d)).collect();
            let e = per.iter().max().cloned().expect("s >= 1");
            (per, e)
        }
        Certificate::Ci => (
            p.degrees().iter().map(|&d| &sigma * quot(d) + &delta).collect(),
            big(2) * &sigma * &delta,
        ),
        Certificate::Nons => {
            let sp = Pow::pow(&sigma, n - s);
            (
                p.degrees()
                    .iter()
                    .map(|&d| &sp * (&sigma * quot(d) + big((n - s + 1) as u64) * &delta))
                    .collect(),
                (&sigma + big(n as u64)) * &sp * &delta,
            )
        }
        Certificate::Irr => {
            if n < s + 1 {
                return Err(Error::PatternViolation("irr needs n >= s+1".into()));
            }
            (
                p.degrees()
                    .iter()
                    .map(|&d| &sigma * (&sigma * quot(d) + big(2) * &delta))
                    .collect(),
                big(3) * &sigma * &sigma * &delta,
            )
        }
    };
    Ok(DegreeBounds {
        cert,
        per_form,
        concise,
    })
}

/// The degree at which the Macaulay test of each certificate's system runs.
pub fn certificate_macaulay_degree(p: &DegreePattern, cert: Certificate) -> u32 {
    let sigma = p.sigma();
    let (n, s) = (p.n() as u32, p.s() as u32);
    match cert {
        Certificate::Stci => sigma + 1,
        Certificate::Ci => 2 * sigma,
        Certificate::Nons => sigma + (n - s + 1) * (sigma - 1) + 1,
        Certificate::Irr => 3 * sigma - 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Guard {
    Met,
    Unmet,
}

impl Guard {
    fn from_bool(b: bool) -> Guard {
        if b {
            Guard::Met
        } else {
            Guard::Unmet
        }
    }

    pub fn is_met(self) -> bool {
        self == Guard::Met
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityBound {
    pub cert: Certificate,
    pub q: u64,
    /// `1 - s e / q`.
    pub concise: BigRational,
    pub guard: Guard,
    /// The smallest `q` satisfying the concise bound's hypothesis, as a
    /// rational threshold (`q >= threshold`).
    pub guard_threshold: BigRational,
    /// `prod (1 - e_i / q)`.
    pub product: BigRational,
    /// Product bound hypothesis `e_i <= q` for all i.
    pub product_guard: Guard,
}

pub fn check_prime_power(q: u64) -> Result<()> {
    prime_power(q)
        .map(|_| ())
        .ok_or_else(|| Error::InvalidFieldSpec(format!("{q} is not a prime power")))
}

/// Lower bound on the fraction of `f` in `P^D(F_q)` passing `cert`.
pub fn probability_lower_bound(p: &DegreePattern, q: u64, cert: Certificate) -> Result<ProbabilityBound> {
    check_prime_power(q)?;
    let b = degree_bounds(p, cert)?;
    let s = BigInt::from(p.s());
    let qq = BigInt::from(q);
    let e = BigInt::from(b.concise.clone());
    let se = &s * &e;
    let concise = BigRational::one() - BigRational::new(se.clone(), qq.clone());
    let threshold = BigRational::new(se.clone(), BigInt::from(3));
    let mut guard = BigRational::from_integer(qq.clone()) >= threshold;
    if cert == Certificate::Stci {
        // No corollary for stci; the proposition's own hypotheses apply.
        guard &= e <= qq;
    }
    let mut product = BigRational::one();
    for ei in &b.per_form {
        product *= BigRational::one() - BigRational::new(BigInt::from(ei.clone()), qq.clone());
    }
    let product_guard = b.per_form.iter().all(|ei| ei <= &big(q));
    Ok(ProbabilityBound {
        cert,
        q,
        concise,
        guard: Guard::from_bool(guard),
        guard_threshold: threshold,
        product,
        product_guard: Guard::from_bool(product_guard),
    })
}

/// Upper bound on the zeros in `P^{n_1} x ... x P^{n_s}(F_q)` of a nonzero
/// multihomogeneous polynomial of multidegree `d` with all `d_i <= q`.
pub fn multihomog_zero_bound(d: &[u64], n: &[u64], q: u64) -> Result<BigInt> {
    if d.len() != n.len() {
        return Err(Error::ArityMismatch {
            expected: d.len(),
            found: n.len(),
        });
    }
    if let Some(&di) = d.iter().find(|&&di| di > q) {
        return Err(Error::HypothesisViolated(format!("degree {di} exceeds q = {q}")));
    }
    let s = d.len();
    let qq = big(q);
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << s) {
        let mut term = BigInt::one();
        for i in 0..s {
            let eps = (mask >> i) & 1;
            if eps == 1 {
                term *= BigInt::from(d[i]);
            }
            term *= BigInt::from(projective_count(n[i] as i64 - eps as i64, &qq));
        }
        if mask.count_ones() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

pub fn smallest_prime_factor(b: u64) -> u64 {
    prime_factors(b).first().copied().unwrap_or(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GValue {
    pub b: u64,
    pub n: usize,
    /// Smallest prime factor of `b`.
    pub rho: u64,
    pub g: BigInt,
    /// `C(b+n, n) - 2 C(b/2+n, n)` for even `b`.
    pub convexity_lower: Option<BigInt>,
}

/// `g(b) = C(b+n, n) - C(b/rho+n, n) - C(rho+n, n)`, and 0 for prime `b`.
pub fn g_of_b(b: u64, n: usize) -> GValue {
    let nn = n as u64;
    let rho = smallest_prime_factor(b);
    let g = if b < 2 || is_prime(b) {
        BigInt::zero()
    } else {
        BigInt::from(binomial(b + nn, nn))
            - BigInt::from(binomial(b / rho + nn, nn))
            - BigInt::from(binomial(rho + nn, nn))
    };
    let convexity_lower = b
        .is_multiple_of(2)
        .then(|| BigInt::from(binomial(b + nn, nn)) - BigInt::from(2u32) * BigInt::from(binomial(b / 2 + nn, nn)));
    GValue {
        b,
        n,
        rho,
        g,
        convexity_lower,
    }
}

/// Nonincreasing factor tuples of `b` with every factor `>= 2` and at most
/// `s` factors.
pub fn factorizations(b: u64, s: usize) -> Vec<Vec<u64>> {
    fn rec(b: u64, max: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if b == 1 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        let mut f = max.min(b);
        while f >= 2 {
            if b.is_multiple_of(f) {
                cur.push(f);
                rec(b / f, f, slots - 1, cur, out);
                cur.pop();
            }
            f -= 1;
        }
    }
    let mut out = Vec::new();
    if b >= 2 {
        rec(b, b, s, &mut Vec::new(), &mut out);
    }
    out
}

/// `M_s(b)`, the number of degree patterns with Bezout number `b` and `s`
/// forms. The pattern `(b)` itself is counted.
pub fn factorization_count(b: u64, s: usize) -> u64 {
    fn rec(b: u64, max: u64, slots: usize) -> u64 {
        if b == 1 {
            return 1;
        }
        if slots == 0 {
            return 0;
        }
        let mut count = 0;
        let mut f = 2;
        while f <= max.min(b) {
            if b.is_multiple_of(f) {
                count += rec(b / f, f, slots - 1);
            }
            f += 1;
        }
        count
    }
    if b < 2 {
        return 0;
    }
    rec(b, b, s)
}

/// `b^(log2 log2 b)`, the general upper bound on `M_s(b)`.
pub fn factorization_lemma_bound(b: u64) -> f64 {
    let b = b as f64;
    b.powf(b.log2().log2())
}

/// Bell number `B_m` via the Bell triangle.
pub fn bell_number(m: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().expect("nonempty"));
        for x in &row {
            let v = next.last().expect("nonempty") + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

/// `log2` of a big integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").log2() + shift as f64
}

/// Sides of `log2 B_m <= m log2(0.8 m / ln m)` and whether it holds with a
/// margin that dominates floating-point error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellCheck {
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn bell_lemma_check(m: usize) -> BellCheck {
    let lhs = log2_big(&bell_number(m));
    let mf = m as f64;
    let rhs = mf * (0.8 * mf / mf.ln()).log2();
    // Both sides are within a few ulps of magnitude ~100; 1e-9 is far
    // beyond the accumulated rounding.
    let tol = 1e-9 * rhs.abs().max(1.0);
    BellCheck {
        m,
        lhs,
        rhs,
        holds: rhs - lhs > tol,
    }
}

/// `prod_{k=0}^{s-2} (q^{n+1} - q^k) / (q - 1)`, the number of linearly
/// independent `(s-1)`-tuples of points of `P^n(F_q)`.
pub fn independent_tuples(n: usize, s: usize, q: u64) -> BigUint {
    let qq = big(q);
    let top = Pow::pow(&qq, (n + 1) as u32);
    let mut acc = BigUint::one();
    for k in 0..s.saturating_sub(1) {
        acc *= (&top - Pow::pow(&qq, k as u32)) / (&qq - 1u32);
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceBounds {
    pub n: usize,
    pub s: usize,
    pub b: u64,
    pub q: u64,
    pub n_ind: BigUint,
    /// `p_{D_b} p_n^{s-1}`.
    pub reference: BigUint,
    pub g: BigInt,
    pub m_s: u64,
    /// `(1 + 9/q) / q^{n-s+3}`.
    pub hyp_main: BigRational,
    /// Relative error bound for all hypersurface-type complete
    /// intersections, with `M_s(b)`.
    pub hyp_error: BigRational,
    /// Same with `b^(log2 log2 b)` in place of `M_s(b)`.
    pub hyp_error_lemma: f64,
    /// Relative error for absolutely irreducible ones with the hypersurface
    /// pattern.
    pub irr_pattern_error: BigRational,
    /// True when `b = 2` and `n - s <= 3`, where the constant is `14 q^2`.
    pub irr_exceptional: bool,
    pub irr_error: BigRational,
    pub irr_error_lemma: f64,
    /// `1 - irr_pattern_error - 2 M_s(b) / q^g`.
    pub p_irr_lower: BigRational,
    pub p_irr_lower_lemma: f64,
}

fn q_pow_neg(q: u64, e: &BigInt) -> BigRational {
    let qq = BigInt::from(q);
    let k: u32 = e.magnitude().to_u32().expect("exponent fits u32");
    let p = Pow::pow(&qq, k);
    if e.sign() == num_bigint::Sign::Minus {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn hypersurface_census_bounds(n: usize, s: usize, b: u64, q: u64) -> Result<HypersurfaceBounds> {
    if s == 0 || s >= n {
        return Err(Error::PatternViolation(format!("need 0 < s < n, got s={s}, n={n}")));
    }
    if b < 2 {
        return Err(Error::PatternViolation("b >= 2 required".into()));
    }
    check_prime_power(q)?;
    let qq = big(q);
    let d_b = form_space_dim(n, b as u32);
    let reference = projective_count(d_b.to_i64().unwrap_or(i64::MAX), &qq)
        * Pow::pow(projective_count(n as i64, &qq), (s - 1) as u32);
    let gv = g_of_b(b, n);
    let m_s = factorization_count(b, s);
    let codim_exp = (n - s + 3) as u32;
    let qe = BigRational::from_integer(BigInt::from(Pow::pow(&qq, codim_exp)));
    let hyp_main = (BigRational::one() + ratio(9, q)) / &qe;
    let tail = BigRational::from_integer(BigInt::from(m_s)) * q_pow_neg(q, &gv.g);
    let tail_f = q_pow_neg(q, &gv.g).to_f64_lossy();
    let lemma = factorization_lemma_bound(b);
    let irr_exceptional = b == 2 && n - s <= 3;
    let irr_const = if irr_exceptional {
        BigRational::from_integer(BigInt::from(14u64) * BigInt::from(q) * BigInt::from(q))
    } else {
        BigRational::one() + ratio(14, q)
    };
    let irr_pattern_error = irr_const / &qe;
    let irr_error = &irr_pattern_error + &tail;
    let p_irr_lower = BigRational::one() - &irr_pattern_error - BigRational::from_integer(BigInt::from(2)) * &tail;
    Ok(HypersurfaceBounds {
        n,
        s,
        b,
        q,
        n_ind: independent_tuples(n, s, q),
        reference,
        g: gv.g,
        m_s,
        hyp_error: &hyp_main + &tail,
        hyp_error_lemma: hyp_main.to_f64_lossy() + lemma * tail_f,
        irr_error_lemma: irr_pattern_error.to_f64_lossy() + lemma * tail_f,
        p_irr_lower_lemma: 1.0 - irr_pattern_error.to_f64_lossy() - 2.0 * lemma * tail_f,
        hyp_main,
        irr_pattern_error,
        irr_exceptional,
        irr_error,
        p_irr_lower,
    })
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        crate::numfmt::rational_to_f64(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternEntry {
    pub d: Vec<u64>,
    pub dim: String,
    /// `|D^(b)| - |D(d)|`.
    pub margin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternLandscape {
    pub b: u64,
    pub n: usize,
    pub s: usize,
    pub patterns: Vec<PatternEntry>,
    pub hypersurface: Vec<u64>,
    pub rho: u64,
    pub g: String,
    pub m_s: u64,
    pub m_s_lemma_bound: f64,
    /// Smallest margin over rivals; absent when `b` has no rival pattern.
    pub min_margin: Option<String>,
    pub dominance: bool,
    pub margin_at_least_g: bool,
}

/// `|D(d)| = sum (C(d_i + n, n) - 1)` over a pattern padded with ones.
pub fn pattern_dim(n: usize, d: &[u64]) -> BigUint {
    d.iter().map(|&di| form_space_dim(n, di as u32)).sum()
}

/// All patterns with Bezout number `b` and `s` forms, the hypersurface
/// pattern first.
pub fn pattern_landscape(b: u64, n: usize, s: usize) -> Result<PatternLandscape> {
    if s == 0 || s >= n {
        return Err(Error::PatternViolation(format!("need 0 < s < n, got s={s}, n={n}")));
    }
    if b < 2 {
        return Err(Error::PatternViolation("b >= 2 required".into()));
    }
    let pad = |mut f: Vec<u64>| {
        f.resize(s, 1);
        f
    };
    let pats: Vec<Vec<u64>> = factorizations(b, s).into_iter().map(pad).collect();
    let hyp = pad(vec![b]);
    let hyp_dim = pattern_dim(n, &hyp);
    let gv = g_of_b(b, n);
    let mut entries = Vec::new();
    let mut min_margin: Option<BigInt> = None;
    for d in &pats {
        let dim = pattern_dim(n, d);
        let margin = BigInt::from(hyp_dim.clone()) - BigInt::from(dim.clone());
        if d != &hyp {
            min_margin = Some(match min_margin {
                Some(m) if m <= margin => m,
                _ => margin.clone(),
            });
        }
        entries.push(PatternEntry {
            d: d.clone(),
            dim: dim.to_string(),
            margin: margin.to_string(),
        });
    }
    let dominance = min_margin.as_ref().is_none_or(|m| m > &BigInt::zero());
    let margin_at_least_g = min_margin.as_ref().is_none_or(|m| m >= &gv.g);
    Ok(PatternLandscape {
        b,
        n,
        s,
        patterns: entries,
        hypersurface: hyp,
        rho: gv.rho,
        g: gv.g.to_string(),
        m_s: factorization_count(b, s),
        m_s_lemma_bound: factorization_lemma_bound(b),
        min_margin: min_margin.map(|m| m.to_string()),
        dominance,
        margin_at_least_g,
    })
}

impl PatternLandscape {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,dim,margin\n");
        for e in &self.patterns {
            let d: Vec<String> = e.d.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("\"{}\",{},{}\n", d.join(","), e.dim, e.margin));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuardReport {
    pub status: Guard,
    /// The bound holds for `q >= threshold`.
    pub threshold: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub concise: Exact,
    pub guard: GuardReport,
    pub product: Exact,
    pub product_guard: Guard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub cert: Certificate,
    pub per_form: Vec<String>,
    pub concise: String,
    pub macaulay_degree: u32,
    pub guarantee: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<ProbabilityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub s: usize,
    pub d: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub stats: PatternStats,
    /// `p_n`, the number of points of `P^n(F_q)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_n: Option<String>,
    /// `p_D = prod p_{D_i}`, the number of systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_d: Option<String>,
    pub certificates: Vec<CertificateReport>,
}

/// Number of systems `p_D = prod p_{D_i}` with the given pattern over `F_q`.
pub fn system_count(p: &DegreePattern, q: u64) -> Result<BigUint> {
    let stats = pattern_stats(p)?;
    Ok(stats
        .dims
        .iter()
        .map(|&d| projective_count(d as i64, &big(q)))
        .product())
}

pub fn bounds_report(p: &DegreePattern, q: Option<u64>) -> Result<BoundsReport> {
    let stats = pattern_stats(p)?;
    let mut certificates = Vec::new();
    for cert in Certificate::ALL {
        if cert == Certificate::Irr && p.n() < p.s() + 1 {
            continue;
        }
        let b = degree_bounds(p, cert)?;
        let probability = match q {
            Some(q) => {
                let pb = probability_lower_bound(p, q, cert)?;
                Some(ProbabilityReport {
                    concise: Exact::rational(&pb.concise),
                    guard: GuardReport {
                        status: pb.guard,
                        threshold: Exact::rational(&pb.guard_threshold),
                    },
                    product: Exact::rational(&pb.product),
                    product_guard: pb.product_guard,
                })
            }
            None => None,
        };
        certificates.push(CertificateReport {
            cert,
            per_form: b.per_form.iter().map(|x| x.to_string()).collect(),
            concise: b.concise.to_string(),
            macaulay_degree: certificate_macaulay_degree(p, cert),
            guarantee: cert.guarantee().to_string(),
            probability,
        });
    }
    if let Some(q) = q {
        check_prime_power(q)?;
    }
    Ok(BoundsReport {
        n: p.n(),
        s: p.s(),
        d: p.degrees().to_vec(),
        q,
        p_n: q.map(|q| projective_count(p.n() as i64, &big(q)).to_string()),
        p_d: q.map(|q| system_count(p, q)).transpose()?.map(|x| x.to_string()),
        stats,
        certificates,
    })
}

/// Text form of an exact rational for tables.
pub fn show(r: &BigRational) -> String {
    rational_text(r)
}

/// `ceil(r * n)` for a nonnegative rational.
pub fn ceil_mul(r: &BigRational, n: &BigUint) -> BigInt {
    let x = r * BigRational::from_integer(BigInt::from(n.clone()));
    let (q, rem) = x.numer().div_rem(x.denom());
    if rem.is_zero() || x.numer() < &BigInt::zero() {
        q
    } else {
        q + 1
    }
}
