//! Sampling and exhaustive enumeration of systems, certificate pass
//! frequencies compared against the lower bounds, and brute-force oracles
//! used to cross-check the Macaulay test.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{ceil_mul, pattern_stats, probability_lower_bound, projective_count, system_count, Guard};
use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Embedding, Field, MAX_Q};
use crate::homopoly::{Certificate, DegreePattern, HomoPoly, Monomial, PolySystem};
use crate::macaulay::{certify, forms_empty};
use crate::numfmt::{rational_to_f64, Exact};

/// Default cap on the number of systems enumerated in exhaustive mode.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 10_000_000;
/// Default cap on the number of points searched by the brute-force oracle.
pub const DEFAULT_SEARCH_CAP: u64 = 30_000_000;
/// Schema version of census run records.
pub const SCHEMA_VERSION: u32 = 1;

/// The field `F_q` with its default modulus.
pub fn field_for_q(q: u64) -> Result<Field> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidFieldSpec(q.to_string()))?;
    if q > MAX_Q {
        return Err(Error::FieldTooLarge(q.to_string()));
    }
    Field::new(p, k, None)
}

/// Random number generator for trial `trial` of a run with master seed
/// `seed`: one ChaCha stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_nonzero_vector(field: &Field, len: usize, rng: &mut impl Rng) -> Vec<Elem> {
    let q = field.order() as u32;
    loop {
        let v: Vec<Elem> = (0..len).map(|_| Elem(rng.gen_range(0..q))).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// A uniformly random form of the given degree with a nonzero coefficient
/// vector.
pub fn random_form(field: &Field, nvars: usize, degree: u32, rng: &mut impl Rng) -> HomoPoly {
    let len = Monomial::all_of_degree(nvars, degree).len();
    HomoPoly::from_dense(field, nvars, degree, &random_nonzero_vector(field, len, rng))
}

/// Draws each form uniformly from the nonzero coefficient vectors.
pub fn sample_system_with(pattern: &DegreePattern, field: &Field, rng: &mut impl Rng) -> PolySystem {
    let forms = pattern
        .degrees()
        .iter()
        .map(|&d| random_form(field, pattern.nvars(), d, rng))
        .collect();
    PolySystem::new(pattern.n(), forms).expect("valid pattern yields a valid system")
}

/// Deterministic in `(pattern, field, seed)`.
pub fn sample_system(pattern: &DegreePattern, field: &Field, seed: u64) -> PolySystem {
    sample_system_with(pattern, field, &mut trial_rng(seed, 0))
}

/// The `index`-th canonical representative (first nonzero entry 1) of a
/// point of `P^{len-1}(F_q)`; indices run over `0..p_{len-1}`.
pub fn decode_projective(q: u64, len: usize, mut index: u64) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; len];
    for lead in 0..len {
        let tail = (len - lead - 1) as u32;
        let block = q.pow(tail);
        if index < block {
            out[lead] = Elem::ONE;
            for j in (lead + 1..len).rev() {
                out[j] = Elem((index % q) as u32);
                index /= q;
            }
            return out;
        }
        index -= block;
    }
    unreachable!("index beyond p_(len-1)")
}

fn projective_size(q: u64, len: usize) -> Option<u64> {
    let mut acc: u64 = 0;
    for _ in 0..len {
        acc = acc.checked_mul(q)?.checked_add(1)?;
    }
    Some(acc)
}

/// All canonical representatives of `P^n(F_q)`, in index order.
pub fn projective_points(field: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    let q = field.order();
    let total = projective_size(q, n + 1).expect("point count fits u64");
    (0..total).map(move |i| decode_projective(q, n + 1, i))
}

/// The forms of the `index`-th system of the exhaustive enumeration.
pub fn decode_system(pattern: &DegreePattern, field: &Field, index: u64) -> PolySystem {
    let q = field.order();
    let nvars = pattern.nvars();
    let mut rem = index;
    let mut coeffs: Vec<(u32, Vec<Elem>)> = Vec::new();
    // Last form varies fastest.
    for &d in pattern.degrees().iter().rev() {
        let len = Monomial::all_of_degree(nvars, d).len();
        let size = projective_size(q, len).expect("checked against the cap");
        coeffs.push((d, decode_projective(q, len, rem % size)));
        rem /= size;
    }
    coeffs.reverse();
    let forms = coeffs
        .into_iter()
        .map(|(d, c)| HomoPoly::from_dense(field, nvars, d, &c))
        .collect();
    PolySystem::new(pattern.n(), forms).expect("valid pattern yields a valid system")
}

/// Every system of the pattern once, as canonical representatives.
pub fn enumerate_systems(pattern: &DegreePattern, field: &Field, cap: u64) -> Result<impl Iterator<Item = PolySystem>> {
    let total = exhaustive_size(pattern, field.order(), cap)?;
    let (pattern, field) = (pattern.clone(), field.clone());
    Ok((0..total).map(move |i| decode_system(&pattern, &field, i)))
}

/// `p_D`, checked against `cap`.
pub fn exhaustive_size(pattern: &DegreePattern, q: u64, cap: u64) -> Result<u64> {
    let total = system_count(pattern, q)?;
    match total.to_u64() {
        Some(t) if t <= cap => Ok(t),
        _ => Err(Error::TooLarge {
            size: total.to_string(),
            cap,
        }),
    }
}

/// Forms compiled for fast repeated evaluation.
struct Compiled {
    terms: Vec<(Vec<u16>, Elem)>,
}

impl Compiled {
    fn new(f: &HomoPoly) -> Compiled {
        Compiled {
            terms: f.terms().iter().map(|(m, c)| (m.0.clone(), *c)).collect(),
        }
    }

    fn eval(&self, field: &Field, pows: &[Vec<Elem>]) -> Elem {
        let mut acc = Elem::ZERO;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = field.mul(t, pows[i][k as usize]);
                    if t.is_zero() {
                        break;
                    }
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

fn power_table(field: &Field, x: &[Elem], max_deg: u32, out: &mut Vec<Vec<Elem>>) {
    out.resize(x.len(), Vec::new());
    for (row, &xi) in out.iter_mut().zip(x) {
        row.clear();
        let mut cur = Elem::ONE;
        for _ in 0..=max_deg {
            row.push(cur);
            cur = field.mul(cur, xi);
        }
    }
}

/// Common zeros of `forms` in `P^n(F_q)` over the forms' own field.
pub fn count_points(forms: &[HomoPoly]) -> u64 {
    let field = forms[0].field().clone();
    let n = forms[0].nvars() - 1;
    let compiled: Vec<Compiled> = forms.iter().map(Compiled::new).collect();
    let max_deg = forms.iter().map(|f| f.degree()).max().unwrap_or(0);
    let mut pows = Vec::new();
    projective_points(&field, n)
        .filter(|x| {
            power_table(&field, x, max_deg, &mut pows);
            compiled.iter().all(|g| g.eval(&field, &pows).is_zero())
        })
        .count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum BruteVerdict {
    /// A common zero with coordinates in `F_{q^m}` (rendered in that field).
    Nonempty { point: Vec<String>, m: u32 },
    /// No common zero over `F_{q^m}` for any `m <= max_ext`.
    EmptyUpTo { max_ext: u32 },
}

impl BruteVerdict {
    pub fn is_empty(&self) -> bool {
        matches!(self, BruteVerdict::EmptyUpTo { .. })
    }
}

/// Extension degrees that must be searched to cover every `m <= max_ext`:
/// 1 first, then `(max_ext/2, max_ext]`, since each smaller degree divides
/// one of those.
pub fn search_degrees(max_ext: u32) -> Vec<u32> {
    let mut ms = vec![1];
    ms.extend((max_ext / 2 + 1).max(2)..=max_ext);
    ms
}

/// Number of points the brute-force search visits in the worst case.
pub fn search_size(q: u64, n: usize, max_ext: u32) -> Option<u64> {
    search_degrees(max_ext).into_iter().try_fold(0u64, |acc, m| {
        let qm = q.checked_pow(m)?;
        acc.checked_add(projective_size(qm, n + 1)?)
    })
}

/// Default extension bound for the brute-force search: the product of the
/// degrees (a nonempty zero set always has a point of at most that degree).
pub fn default_max_ext(forms: &[HomoPoly]) -> u32 {
    forms.iter().map(|f| f.degree().max(1)).product::<u32>().max(1)
}

/// Searches `P^n(F_{q^m})` for a common zero of the forms.
pub fn brute_force_empty(forms: &[HomoPoly], max_ext: Option<u32>, cap: u64) -> Result<BruteVerdict> {
    let first = forms.first().ok_or(Error::EmptyInput)?;
    let field = first.field().clone();
    if forms.iter().any(|f| f.field() != &field) {
        return Err(Error::MixedFields);
    }
    let nvars = first.nvars();
    if forms.iter().any(|f| f.nvars() != nvars) {
        return Err(Error::ArityMismatch {
            expected: nvars,
            found: forms.len(),
        });
    }
    let max_ext = max_ext.unwrap_or_else(|| default_max_ext(forms)).max(1);
    let size = search_size(field.order(), nvars - 1, max_ext);
    match size {
        Some(s) if s <= cap => {}
        _ => {
            return Err(Error::SearchSpaceTooLarge {
                size: size.map_or_else(|| "overflow".into(), |s| s.to_string()),
                cap,
            })
        }
    }
    let max_deg = forms.iter().map(|f| f.degree()).max().unwrap_or(0);
    for m in search_degrees(max_ext) {
        let ext = field.extension(m)?;
        let emb: Embedding = field.embed_into(&ext)?;
        let compiled: Vec<Compiled> = forms
            .iter()
            .map(|f| f.embed(&emb).map(|g| Compiled::new(&g)))
            .collect::<Result<_>>()?;
        let mut pows = Vec::new();
        for x in projective_points(&ext, nvars - 1) {
            power_table(&ext, &x, max_deg, &mut pows);
            if compiled.iter().all(|g| g.eval(&ext, &pows).is_zero()) {
                let point = x.iter().map(|&c| ext.format_elem(c)).collect();
                let q = field.order();
                // Report the smallest field containing the normalized point.
                let m = (1..=m)
                    .filter(|k| m % k == 0)
                    .find(|&k| x.iter().all(|&c| ext.pow(c, q.pow(k)) == c))
                    .unwrap_or(m);
                return Ok(BruteVerdict::Nonempty { point, m });
            }
        }
    }
    Ok(BruteVerdict::EmptyUpTo { max_ext })
}

/// True iff `f` has no factorization into forms of lower degree over
/// `F_{q^m}` for any `m <= max_ext` (default: `deg f`, which decides
/// absolute irreducibility).
pub fn brute_force_absirr(f: &HomoPoly, max_ext: Option<u32>, cap: u64) -> Result<bool> {
    let d = f.degree();
    if f.is_zero() {
        return Ok(false);
    }
    if d <= 1 {
        return Ok(true);
    }
    let field = f.field().clone();
    let nvars = f.nvars();
    let max_ext = max_ext.unwrap_or(d).max(1);
    let degrees = search_degrees(max_ext);
    let mut size: u64 = 0;
    for &m in &degrees {
        let qm = field.order().checked_pow(m);
        for e in 1..=d / 2 {
            let len = Monomial::all_of_degree(nvars, e).len();
            let s = qm.and_then(|qm| projective_size(qm, len));
            size = s.and_then(|s| size.checked_add(s)).unwrap_or(u64::MAX);
        }
    }
    if size > cap {
        return Err(Error::SearchSpaceTooLarge {
            size: size.to_string(),
            cap,
        });
    }
    for m in degrees {
        let ext = field.extension(m)?;
        let emb = field.embed_into(&ext)?;
        let fe = f.embed(&emb)?;
        let qm = ext.order();
        for e in 1..=d / 2 {
            let len = Monomial::all_of_degree(nvars, e).len();
            let total = projective_size(qm, len).expect("checked against the cap");
            for i in 0..total {
                let g = HomoPoly::from_dense(&ext, nvars, e, &decode_projective(qm, len, i));
                if fe.divide_exact(&g)?.is_some() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Wilson score interval for `k` successes in `n` trials at `z` sigmas.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Number of sigmas of the census confidence intervals.
pub const WILSON_Z: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    pub n: usize,
    pub s: usize,
    pub d: Vec<u32>,
    pub q: u64,
    pub certs: Vec<Certificate>,
    /// Count `F_q`-points of `Z(f)` for ci-certified systems.
    pub count_points: bool,
    pub exhaustive_cap: u64,
}

impl CensusParams {
    pub fn new(pattern: &DegreePattern, q: u64, certs: Vec<Certificate>) -> CensusParams {
        CensusParams {
            n: pattern.n(),
            s: pattern.s(),
            d: pattern.degrees().to_vec(),
            q,
            certs,
            count_points: false,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }

    pub fn pattern(&self) -> Result<DegreePattern> {
        let p = DegreePattern::new(self.n, self.d.clone())?;
        if p.s() != self.s {
            return Err(Error::PatternViolation(format!(
                "s={} but {} degrees given",
                self.s,
                self.d.len()
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    MonteCarlo { trials: u64, seed: u64 },
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertStats {
    pub count: u64,
    pub total: u64,
    pub freq: Exact,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    pub bound: Exact,
    pub guard: Guard,
    /// Exhaustive mode: `ceil(bound * total)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required: Option<String>,
    pub verdict: Verdict,
    pub product_bound: Exact,
    pub product_guard: Guard,
    pub product_verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCheck {
    /// Number of ci-certified systems whose points were counted.
    pub checked: u64,
    pub max_points: u64,
    /// `delta * p_{n-s}`.
    pub bound: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema: u32,
    pub params: CensusParams,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub total: u64,
    pub per_cert: BTreeMap<Certificate, CertStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_check: Option<PointCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl CensusReport {
    pub fn any_violated(&self) -> bool {
        self.per_cert
            .values()
            .any(|c| c.verdict == Verdict::Violated || c.product_verdict == Verdict::Violated)
            || self.point_check.as_ref().is_some_and(|p| p.violations > 0)
    }

    /// JSON without the wall-clock field; identical across repeated runs.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.runtime_ms = None;
        serde_json::to_string_pretty(&r).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cert,count,total,freq,lo,hi,bound,verdict\n");
        for (cert, c) in &self.per_cert {
            let (lo, hi) = c
                .interval
                .map_or((String::new(), String::new()), |i| (i.lo.to_string(), i.hi.to_string()));
            let verdict = serde_json::to_value(c.verdict).expect("serializable");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                cert,
                c.count,
                c.total,
                c.freq.exact,
                lo,
                hi,
                c.bound.exact,
                verdict.as_str().expect("string")
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub system: String,
    pub verdicts: BTreeMap<Certificate, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<u64>,
}

fn evaluate_system(sys: &PolySystem, certs: &[Certificate], count_points: bool) -> Result<(Vec<bool>, Option<u64>)> {
    let verdicts: Vec<bool> = certs.iter().map(|&c| certify(sys, c)).collect::<Result<_>>()?;
    let ci_pass = match certs.iter().position(|&c| c == Certificate::Ci) {
        Some(i) => verdicts[i],
        None => certify(sys, Certificate::Ci)?,
    };
    let points = (count_points && ci_pass).then(|| count_points_of(sys));
    Ok((verdicts, points))
}

fn count_points_of(sys: &PolySystem) -> u64 {
    count_points(sys.forms())
}

/// One Monte Carlo trial.
pub fn run_trial(
    params: &CensusParams,
    pattern: &DegreePattern,
    field: &Field,
    seed: u64,
    trial: u64,
) -> Result<TrialRecord> {
    let sys = sample_system_with(pattern, field, &mut trial_rng(seed, trial));
    let (verdicts, points) = evaluate_system(&sys, &params.certs, params.count_points)?;
    Ok(TrialRecord {
        trial,
        seed,
        system: sys.canonical(),
        verdicts: params.certs.iter().copied().zip(verdicts).collect(),
        points,
    })
}

/// All trial records of a Monte Carlo run, in trial order.
pub fn monte_carlo_trials(params: &CensusParams, trials: u64, seed: u64) -> Result<Vec<TrialRecord>> {
    let pattern = params.pattern()?;
    let field = field_for_q(params.q)?;
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(params, &pattern, &field, seed, t))
        .collect()
}

#[derive(Default, Clone)]
struct Tally {
    passes: Vec<u64>,
    checked: u64,
    max_points: u64,
    violations: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        if self.passes.is_empty() {
            return other;
        }
        for (a, b) in self.passes.iter_mut().zip(other.passes) {
            *a += b;
        }
        self.checked += other.checked;
        self.max_points = self.max_points.max(other.max_points);
        self.violations += other.violations;
        self
    }
}

/// Runs a census and compares pass frequencies with the lower bounds.
pub fn run_census(params: &CensusParams, mode: Mode) -> Result<CensusReport> {
    let start = Instant::now();
    let pattern = params.pattern()?;
    let field = field_for_q(params.q)?;
    if params.certs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let stats = pattern_stats(&pattern)?;
    let point_bound = (BigUint::from(stats.delta)
        * projective_count(pattern.n() as i64 - pattern.s() as i64, &BigUint::from(params.q)))
    .to_u64()
    .unwrap_or(u64::MAX);
    let k = params.certs.len();
    let tally_one = |verdicts: Vec<bool>, points: Option<u64>| {
        let mut t = Tally {
            passes: verdicts.iter().map(|&v| v as u64).collect(),
            ..Tally::default()
        };
        if let Some(p) = points {
            t.checked = 1;
            t.max_points = p;
            t.violations = (p > point_bound) as u64;
        }
        t
    };
    let empty = || Tally {
        passes: vec![0; k],
        ..Tally::default()
    };
    let (total, tally) = match mode {
        Mode::MonteCarlo { trials, seed } => {
            let tally = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<Tally> {
                    let sys = sample_system_with(&pattern, &field, &mut trial_rng(seed, t));
                    let (v, p) = evaluate_system(&sys, &params.certs, params.count_points)?;
                    Ok(tally_one(v, p))
                })
                .try_reduce(empty, |a, b| Ok(a.merge(b)))?;
            (trials, tally)
        }
        Mode::Exhaustive => {
            let total = exhaustive_size(&pattern, params.q, params.exhaustive_cap)?;
            let tally = (0..total)
                .into_par_iter()
                .map(|i| -> Result<Tally> {
                    let sys = decode_system(&pattern, &field, i);
                    let (v, p) = evaluate_system(&sys, &params.certs, params.count_points)?;
                    Ok(tally_one(v, p))
                })
                .try_reduce(empty, |a, b| Ok(a.merge(b)))?;
            (total, tally)
        }
    };
    let mut per_cert = BTreeMap::new();
    for (idx, &cert) in params.certs.iter().enumerate() {
        let count = tally.passes[idx];
        let pb = probability_lower_bound(&pattern, params.q, cert)?;
        let freq = BigRational::new(count.into(), total.max(1).into());
        let (interval, required, verdict_of): (Option<Interval>, Option<String>, Box<dyn Fn(&BigRational) -> bool>) =
            match mode {
                Mode::MonteCarlo { .. } => {
                    let (lo, hi) = wilson_interval(count, total, WILSON_Z);
                    (
                        Some(Interval { lo, hi }),
                        None,
                        Box::new(move |b: &BigRational| hi < rational_to_f64(b)),
                    )
                }
                Mode::Exhaustive => {
                    let req = ceil_mul(&pb.concise, &BigUint::from(total));
                    let t = BigUint::from(total);
                    (
                        None,
                        Some(req.to_string()),
                        Box::new(move |b: &BigRational| num_bigint::BigInt::from(count) < ceil_mul(b, &t)),
                    )
                }
            };
        let judge = |guard: Guard, bound: &BigRational| {
            if !guard.is_met() {
                Verdict::Vacuous
            } else if verdict_of(bound) {
                Verdict::Violated
            } else {
                Verdict::Consistent
            }
        };
        per_cert.insert(
            cert,
            CertStats {
                count,
                total,
                freq: Exact::rational(&freq),
                interval,
                bound: Exact::rational(&pb.concise),
                guard: pb.guard,
                required,
                verdict: judge(pb.guard, &pb.concise),
                product_bound: Exact::rational(&pb.product),
                product_guard: pb.product_guard,
                product_verdict: judge(pb.product_guard, &pb.product),
            },
        );
    }
    let point_check = params.count_points.then_some(PointCheck {
        checked: tally.checked,
        max_points: tally.max_points,
        bound: point_bound,
        violations: tally.violations,
    });
    Ok(CensusReport {
        schema: SCHEMA_VERSION,
        params: params.clone(),
        mode,
        seed: match mode {
            Mode::MonteCarlo { seed, .. } => Some(seed),
            Mode::Exhaustive => None,
        },
        total,
        per_cert,
        point_check,
        runtime_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// One randomized emptiness instance for the oracle cross-check.
#[derive(Debug, Clone)]
pub struct OracleInstance {
    pub forms: Vec<HomoPoly>,
    /// How the instance was built: `random`, `planted_base` or
    /// `planted_ext`.
    pub kind: &'static str,
}

/// Sets one coefficient so that `f` vanishes at `x`.
fn plant_base(f: &HomoPoly, x: &[Elem]) -> HomoPoly {
    let field = f.field();
    let monos = Monomial::all_of_degree(f.nvars(), f.degree());
    let mut coeffs = f.to_dense();
    let value = |m: &Monomial| {
        m.0.iter()
            .zip(x)
            .fold(Elem::ONE, |t, (&e, &xi)| field.mul(t, field.pow(xi, e as u64)))
    };
    let Some(pivot) = monos.iter().position(|m| !value(m).is_zero()) else {
        return f.clone();
    };
    coeffs[pivot] = Elem::ZERO;
    let rest = HomoPoly::from_dense(field, f.nvars(), f.degree(), &coeffs)
        .eval(x)
        .expect("arity matches");
    coeffs[pivot] = field.neg(field.div(rest, value(&monos[pivot])).expect("nonzero pivot"));
    HomoPoly::from_dense(field, f.nvars(), f.degree(), &coeffs)
}

/// Adjusts two coefficients of `f` (over a prime field) so that it vanishes
/// at a point with coordinates in the quadratic extension.
fn plant_quadratic(f: &HomoPoly, emb: &Embedding, x: &[Elem]) -> HomoPoly {
    let field = f.field();
    let ext = emb.target();
    let monos = Monomial::all_of_degree(f.nvars(), f.degree());
    let vals: Vec<Elem> = monos
        .iter()
        .map(|m| {
            m.0.iter()
                .zip(x)
                .fold(Elem::ONE, |t, (&e, &xi)| ext.mul(t, ext.pow(xi, e as u64)))
        })
        .collect();
    let vec2 = |v: Elem| {
        let c = ext.coeffs(v);
        (field.from_int(c[0] as i64), field.from_int(c[1] as i64))
    };
    // Find two monomials whose values are independent over the base field.
    let mut pair = None;
    'outer: for i in 0..monos.len() {
        for j in i + 1..monos.len() {
            let (a, b) = vec2(vals[i]);
            let (c, d) = vec2(vals[j]);
            let det = field.sub(field.mul(a, d), field.mul(b, c));
            if !det.is_zero() {
                pair = Some((i, j, a, b, c, d, det));
                break 'outer;
            }
        }
    }
    let Some((i, j, a, b, c, d, det)) = pair else {
        return f.clone();
    };
    let mut coeffs = f.to_dense();
    coeffs[i] = Elem::ZERO;
    coeffs[j] = Elem::ZERO;
    let rest = HomoPoly::from_dense(field, f.nvars(), f.degree(), &coeffs)
        .eval_in(emb, x)
        .expect("arity matches");
    let (r0, r1) = vec2(rest);
    // Solve u (a,b) + v (c,d) = -(r0,r1).
    let (t0, t1) = (field.neg(r0), field.neg(r1));
    let inv = field.inv(det).expect("nonzero determinant");
    coeffs[i] = field.mul(inv, field.sub(field.mul(t0, d), field.mul(t1, c)));
    coeffs[j] = field.mul(inv, field.sub(field.mul(a, t1), field.mul(b, t0)));
    HomoPoly::from_dense(field, f.nvars(), f.degree(), &coeffs)
}

fn random_point(field: &Field, len: usize, rng: &mut impl Rng) -> Vec<Elem> {
    random_nonzero_vector(field, len, rng)
}

/// Draws a random emptiness instance: `n <= 3`, `q` in {2, 3, 5}, degree
/// product at most 8, and a brute-force search space within `cap`.
/// A third of the instances get a planted common zero over `F_q`, a sixth
/// one over `F_{q^2}`.
pub fn oracle_instance(rng: &mut impl Rng, cap: u64) -> OracleInstance {
    loop {
        let n = rng.gen_range(1..=3usize);
        let q = [2u64, 3, 5][rng.gen_range(0..3)];
        let mut degrees = Vec::with_capacity(n + 1);
        let mut prod = 1u32;
        for _ in 0..=n {
            let choices: Vec<u32> = (1..=3).filter(|e| prod * e <= 8).collect();
            let e = choices[rng.gen_range(0..choices.len())];
            prod *= e;
            degrees.push(e);
        }
        if degrees.iter().all(|&e| e == 1) && rng.gen_bool(0.7) {
            continue;
        }
        match search_size(q, n, prod) {
            Some(s) if s <= cap => {}
            _ => continue,
        }
        let field = field_for_q(q).expect("small prime");
        let mut forms: Vec<HomoPoly> = degrees.iter().map(|&e| random_form(&field, n + 1, e, rng)).collect();
        let roll = rng.gen_range(0..6);
        let kind = match roll {
            0 | 1 => {
                let x = random_point(&field, n + 1, rng);
                forms = forms.iter().map(|f| plant_base(f, &x)).collect();
                "planted_base"
            }
            2 => {
                let ext = field.extension(2).expect("small extension");
                let emb = field.embed_into(&ext).expect("subfield");
                let x = random_point(&ext, n + 1, rng);
                forms = forms.iter().map(|f| plant_quadratic(f, &emb, &x)).collect();
                "planted_ext"
            }
            _ => "random",
        };
        return OracleInstance { forms, kind };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub index: u64,
    pub system: String,
    pub macaulay_empty: bool,
    pub brute: BruteVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub trials: u64,
    pub seed: u64,
    pub agree: u64,
    pub disagree: u64,
    /// Instances both methods found empty / nonempty.
    pub both_empty: u64,
    pub both_nonempty: u64,
    pub by_kind: BTreeMap<String, u64>,
    pub search_cap: u64,
    /// How far the point search goes.
    pub max_ext_policy: String,
    pub disagreements: Vec<Disagreement>,
}

/// Cross-checks the Macaulay test against the brute-force point search.
pub fn oracle_check(trials: u64, seed: u64, cap: u64) -> Result<OracleReport> {
    let results: Vec<(bool, BruteVerdict, &'static str, String)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let inst = oracle_instance(&mut trial_rng(seed, t), cap);
            let mac = forms_empty(&inst.forms)?;
            let brute = brute_force_empty(&inst.forms, None, cap)?;
            let text = inst.forms.iter().map(|f| f.to_text()).collect::<Vec<_>>().join(" ; ");
            Ok((
                mac.empty,
                brute,
                inst.kind,
                format!("F_{}: {}", inst.forms[0].field(), text),
            ))
        })
        .collect::<Result<_>>()?;
    let mut report = OracleReport {
        trials,
        seed,
        agree: 0,
        disagree: 0,
        both_empty: 0,
        both_nonempty: 0,
        by_kind: BTreeMap::new(),
        search_cap: cap,
        max_ext_policy: "points over F_{q^m} for all m up to the product of the form degrees".into(),
        disagreements: Vec::new(),
    };
    for (i, (mac, brute, kind, text)) in results.into_iter().enumerate() {
        *report.by_kind.entry(kind.to_string()).or_default() += 1;
        if mac == brute.is_empty() {
            report.agree += 1;
            if mac {
                report.both_empty += 1;
            } else {
                report.both_nonempty += 1;
            }
        } else {
            report.disagree += 1;
            report.disagreements.push(Disagreement {
                index: i as u64,
                system: text,
                macaulay_empty: mac,
                brute,
            });
        }
    }
    Ok(report)
}

/// Monomials of a multihomogeneous polynomial on
/// `P^{n_1} x ... x P^{n_s}` of multidegree `d`, as per-block exponent
/// vectors concatenated.
pub fn multihomog_monomials(n: &[usize], d: &[u32]) -> Vec<Vec<u16>> {
    let mut out: Vec<Vec<u16>> = vec![Vec::new()];
    for (&ni, &di) in n.iter().zip(d) {
        let block = Monomial::all_of_degree(ni + 1, di);
        out = out
            .iter()
            .flat_map(|prefix| {
                block.iter().map(move |m| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(&m.0);
                    v
                })
            })
            .collect();
    }
    out
}

/// Zeros in `P^{n_1}(F_q) x ... x P^{n_s}(F_q)` of the multihomogeneous
/// polynomial with the given coefficients on [`multihomog_monomials`].
pub fn count_multihomog_zeros(field: &Field, n: &[usize], d: &[u32], coeffs: &[Elem]) -> u64 {
    let monos = multihomog_monomials(n, d);
    assert_eq!(monos.len(), coeffs.len());
    let q = field.order();
    let sizes: Vec<u64> = n.iter().map(|&ni| projective_size(q, ni + 1).expect("small")).collect();
    let total: u64 = sizes.iter().product();
    let mut zeros = 0;
    for mut idx in 0..total {
        let mut x = Vec::new();
        for (&ni, &size) in n.iter().zip(&sizes).rev() {
            let mut block = decode_projective(q, ni + 1, idx % size);
            block.append(&mut x);
            x = block;
            idx /= size;
        }
        let mut acc = Elem::ZERO;
        for (m, &c) in monos.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = m
                .iter()
                .zip(&x)
                .fold(c, |t, (&e, &xi)| field.mul(t, field.pow(xi, e as u64)));
            acc = field.add(acc, t);
        }
        if acc.is_zero() {
            zeros += 1;
        }
    }
    zeros
}

/// Zero counts of every nonzero multihomogeneous polynomial (one per
/// projective class) of the given shape.
pub fn multihomog_exhaustive(field: &Field, n: &[usize], d: &[u32]) -> Result<Vec<u64>> {
    let len = multihomog_monomials(n, d).len();
    let q = field.order();
    let total = projective_size(q, len)
        .filter(|&t| t <= DEFAULT_EXHAUSTIVE_CAP)
        .ok_or(Error::TooLarge {
            size: format!("{q}^{len}"),
            cap: DEFAULT_EXHAUSTIVE_CAP,
        })?;
    Ok((0..total)
        .into_par_iter()
        .map(|i| count_multihomog_zeros(field, n, d, &decode_projective(q, len, i)))
        .collect())
}

/// Zero counts of `samples` random nonzero multihomogeneous polynomials.
pub fn multihomog_sampled(field: &Field, n: &[usize], d: &[u32], samples: u64, seed: u64) -> Vec<u64> {
    let len = multihomog_monomials(n, d).len();
    (0..samples)
        .into_par_iter()
        .map(|t| {
            let coeffs = random_nonzero_vector(field, len, &mut trial_rng(seed, t));
            count_multihomog_zeros(field, n, d, &coeffs)
        })
        .collect()
}
