//! End-to-end acceptance checks. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cicert_core::bounds::{
    bell_lemma_check, degree_bounds, factorization_count, factorization_lemma_bound, multihomog_zero_bound,
    pattern_landscape, projective_count,
};
use cicert_core::census::{
    field_for_q, multihomog_exhaustive, multihomog_sampled, oracle_check, run_census, CensusParams, Mode, Verdict,
    DEFAULT_SEARCH_CAP,
};
use cicert_core::chow::chow_class;
use cicert_core::{Certificate, DegreePattern};
use num_bigint::{BigInt, BigUint};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn patterns(n: usize, s: usize, max_d: u32) -> Vec<DegreePattern> {
    fn rec(s: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for d in (1..=max).rev() {
            cur.push(d);
            rec(s, d, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(s, max_d, &mut Vec::new(), &mut raw);
    raw.into_iter().filter_map(|d| DegreePattern::new(n, d).ok()).collect()
}

fn chow_identity() -> Outcome {
    let mut cases = 0;
    for n in 2..=6 {
        for s in 1..n {
            for p in patterns(n, s, 4) {
                let sigma = BigInt::from(p.sigma());
                let delta = BigInt::from(p.delta());
                let ns = (n - s) as u32;
                let nons = chow_class(Certificate::Nons, &p).map_err(|e| e.to_string())?;
                let irr = chow_class(Certificate::Irr, &p).map_err(|e| e.to_string())?;
                for (i, &d) in p.degrees().iter().enumerate() {
                    let q = &delta / BigInt::from(d);
                    let want_nons = sigma.pow(ns) * (&sigma * &q + BigInt::from(ns + 1) * &delta);
                    let want_irr = &sigma * (&sigma * &q + BigInt::from(2) * &delta);
                    let got_nons = nons.extract_bound(i + 1).map_err(|e| e.to_string())?;
                    let got_irr = irr.extract_bound(i + 1).map_err(|e| e.to_string())?;
                    ensure(got_nons == want_nons, || {
                        format!("nons {p} i={}: {got_nons} != {want_nons}", i + 1)
                    })?;
                    ensure(got_irr == want_irr, || {
                        format!("irr {p} i={}: {got_irr} != {want_irr}", i + 1)
                    })?;
                }
                let top_nons = sigma.pow(ns + 1) * &delta;
                let top_irr = &sigma * &sigma * &delta;
                ensure(nons.top_coeff() == top_nons, || format!("nons top {p}"))?;
                ensure(irr.top_coeff() == top_irr, || format!("irr top {p}"))?;
                cases += 1;
            }
        }
    }
    ensure(cases >= 200, || format!("only {cases} patterns"))?;
    Ok(format!("{cases} patterns, per-form and top coefficients exact"))
}

fn boole_comparison() -> Outcome {
    let mut cases = 0;
    for n in 2..=6usize {
        for d in 2..=6u32 {
            let p = DegreePattern::new(n, vec![d]).map_err(|e| e.to_string())?;
            let got = degree_bounds(&p, Certificate::Nons)
                .map_err(|e| e.to_string())?
                .per_form[0]
                .clone();
            let want = BigUint::from((n as u64 + 1) * d as u64 - 1) * BigUint::from(d - 1).pow(n as u32 - 1);
            ensure(got == want, || format!("n={n} d={d}: {got} != {want}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} hypersurface cases equal ((n+1)d-1)(d-1)^(n-1)"))
}

fn oracle_agreement() -> Outcome {
    let r = oracle_check(240, 20_240_601, DEFAULT_SEARCH_CAP).map_err(|e| e.to_string())?;
    ensure(r.trials >= 200, || "too few instances".into())?;
    ensure(r.disagree == 0, || {
        format!("{} disagreements: {:?}", r.disagree, r.disagreements)
    })?;
    Ok(format!(
        "{}/{} agree ({} empty, {} nonempty; kinds {:?})",
        r.agree, r.trials, r.both_empty, r.both_nonempty, r.by_kind
    ))
}

fn exhaustive_stci() -> Outcome {
    let p = DegreePattern::new(2, vec![2]).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (q, want, want_total) in [(2u64, 32u64, 63u64), (3, 243, 364)] {
        let params = CensusParams::new(&p, q, vec![Certificate::Stci]);
        let r = run_census(&params, Mode::Exhaustive).map_err(|e| e.to_string())?;
        let c = &r.per_cert[&Certificate::Stci];
        let qq = BigUint::from(q);
        let closed = projective_count(5, &qq) - projective_count(4, &qq);
        ensure(BigUint::from(c.count) == closed, || {
            format!("q={q}: closed form {closed} != {}", c.count)
        })?;
        ensure(c.count == want && r.total == want_total, || {
            format!("q={q}: {}/{}", c.count, r.total)
        })?;
        // (1 - 1/q) p_D <= count
        ensure((q - 1) * want_total <= q * c.count, || {
            format!("q={q}: below the floor")
        })?;
        ensure(c.verdict == Verdict::Consistent, || {
            format!("q={q}: verdict {:?}", c.verdict)
        })?;
        parts.push(format!(
            "q={q}: {}/{} (floor {:.2})",
            c.count,
            r.total,
            (q - 1) as f64 * want_total as f64 / q as f64
        ));
    }
    Ok(parts.join("; "))
}

fn monte_carlo() -> Outcome {
    let p = DegreePattern::new(3, vec![2, 1]).map_err(|e| e.to_string())?;
    let certs = vec![Certificate::Ci, Certificate::Nons, Certificate::Irr];
    let params = CensusParams::new(&p, 101, certs.clone());
    let r = run_census(
        &params,
        Mode::MonteCarlo {
            trials: 10_000,
            seed: 1_000_003,
        },
    )
    .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (cert, floor) in certs.iter().zip(["93/101", "85/101", "89/101"]) {
        let c = &r.per_cert[cert];
        let iv = c.interval.expect("monte carlo interval");
        ensure(c.bound.exact == floor, || {
            format!("{cert}: bound {} != {floor}", c.bound.exact)
        })?;
        ensure(c.guard.is_met(), || format!("{cert}: guard unmet"))?;
        ensure(c.verdict == Verdict::Consistent, || {
            format!("{cert}: {:?}, interval [{}, {}]", c.verdict, iv.lo, iv.hi)
        })?;
        parts.push(format!(
            "{cert} {}/{} in [{:.4}, {:.4}] vs {floor}",
            c.count, c.total, iv.lo, iv.hi
        ));
    }
    Ok(parts.join("; "))
}

fn pattern_dominance() -> Outcome {
    let mut cases = 0;
    for b in 2..=60u64 {
        for n in 3..=8usize {
            for s in 2..=5usize.min(n - 1) {
                let l = pattern_landscape(b, n, s).map_err(|e| e.to_string())?;
                ensure(l.dominance, || format!("b={b} n={n} s={s}: dominance fails"))?;
                ensure(l.margin_at_least_g, || {
                    format!("b={b} n={n} s={s}: margin {:?} < g {}", l.min_margin, l.g)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} (b, n, s) landscapes: strict dominance and margin >= g"
    ))
}

fn factorization_lemma() -> Outcome {
    let mut worst: f64 = 0.0;
    for b in 3..=10_000u64 {
        let bound = factorization_lemma_bound(b);
        for s in 1..=8 {
            let m = factorization_count(b, s) as f64;
            // Counts are small integers; demand a clear relative gap.
            ensure(m <= bound * (1.0 - 1e-9), || format!("M_{s}({b}) = {m} > {bound}"))?;
            worst = worst.max(m / bound);
        }
    }
    let mut min_gap = f64::INFINITY;
    for m in 3..=25 {
        let c = bell_lemma_check(m);
        ensure(c.holds, || format!("Bell m={m}: lhs {} rhs {}", c.lhs, c.rhs))?;
        min_gap = min_gap.min(c.rhs - c.lhs);
    }
    Ok(format!("max M_s(b)/bound = {worst:.4}; min Bell gap {min_gap:.4} bits"))
}

fn multihomog_bound() -> Outcome {
    let f2 = field_for_q(2).map_err(|e| e.to_string())?;
    let counts = multihomog_exhaustive(&f2, &[1, 1], &[1, 1]).map_err(|e| e.to_string())?;
    let bound = multihomog_zero_bound(&[1, 1], &[1, 1], 2).map_err(|e| e.to_string())?;
    let max = counts.iter().copied().max().unwrap_or(0);
    ensure(BigInt::from(max) <= bound, || format!("exhaustive max {max} > {bound}"))?;
    let mut parts = vec![format!("exhaustive {} polys max {max} <= {bound}", counts.len())];
    for q in [3u64, 5] {
        let f = field_for_q(q).map_err(|e| e.to_string())?;
        let bound = multihomog_zero_bound(&[2, 2], &[1, 2], q).map_err(|e| e.to_string())?;
        let counts = multihomog_sampled(&f, &[1, 2], &[2, 2], 1000, 77 + q);
        let max = counts.iter().copied().max().unwrap_or(0);
        ensure(BigInt::from(max) <= bound, || {
            format!("q={q}: sampled max {max} > {bound}")
        })?;
        parts.push(format!("q={q}: 1000 samples max {max} <= {bound}"));
    }
    Ok(parts.join("; "))
}

fn point_count() -> Outcome {
    let p = DegreePattern::new(3, vec![2, 1]).map_err(|e| e.to_string())?;
    let mut params = CensusParams::new(&p, 2, vec![Certificate::Ci]);
    params.count_points = true;
    let r = run_census(&params, Mode::Exhaustive).map_err(|e| e.to_string())?;
    let pc = r.point_check.expect("point check requested");
    ensure(r.total == 15345, || format!("enumerated {}", r.total))?;
    ensure(pc.bound == 6, || format!("bound {}", pc.bound))?;
    ensure(pc.checked == r.per_cert[&Certificate::Ci].count, || {
        "not every certified system counted".into()
    })?;
    ensure(pc.checked > 0 && pc.violations == 0, || {
        format!("{} violations", pc.violations)
    })?;
    Ok(format!(
        "{} ci-certified systems, max #Z(f)(F_2) = {} <= 6",
        pc.checked, pc.max_points
    ))
}

fn determinism() -> Outcome {
    let p = DegreePattern::new(3, vec![2, 1]).map_err(|e| e.to_string())?;
    let params = CensusParams::new(&p, 101, Certificate::ALL.to_vec());
    let mode = Mode::MonteCarlo { trials: 400, seed: 99 };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| run_census(&params, mode))
            .map(|r| r.deterministic_json())
    };
    let a = run(1).map_err(|e| e.to_string())?;
    let b = run(4).map_err(|e| e.to_string())?;
    let c = run(4).map_err(|e| e.to_string())?;
    ensure(a == b && b == c, || "Monte Carlo JSON differs between runs".into())?;
    let ex = CensusParams::new(
        &DegreePattern::new(2, vec![2]).map_err(|e| e.to_string())?,
        3,
        Certificate::ALL.to_vec(),
    );
    let e1 = run_census(&ex, Mode::Exhaustive)
        .map_err(|e| e.to_string())?
        .deterministic_json();
    let e2 = run_census(&ex, Mode::Exhaustive)
        .map_err(|e| e.to_string())?
        .deterministic_json();
    ensure(e1 == e2, || "exhaustive JSON differs".into())?;
    let o1 = serde_json::to_string(&oracle_check(30, 5, DEFAULT_SEARCH_CAP).map_err(|e| e.to_string())?).unwrap();
    let o2 = serde_json::to_string(&oracle_check(30, 5, DEFAULT_SEARCH_CAP).map_err(|e| e.to_string())?).unwrap();
    ensure(o1 == o2, || "oracle JSON differs".into())?;
    Ok(format!(
        "byte-identical JSON across repeats and thread counts ({} bytes)",
        a.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("chow closed-form identity", Duration::from_secs(10), chow_identity),
        ("boole comparison", Duration::from_secs(1), boole_comparison),
        (
            "macaulay vs brute-force oracle",
            Duration::from_secs(300),
            oracle_agreement,
        ),
        ("exhaustive stci census", Duration::from_secs(60), exhaustive_stci),
        ("monte carlo bound consistency", Duration::from_secs(600), monte_carlo),
        ("pattern dominance", Duration::from_secs(30), pattern_dominance),
        (
            "factorization and bell lemma",
            Duration::from_secs(60),
            factorization_lemma,
        ),
        (
            "multihomogeneous zero bound",
            Duration::from_secs(120),
            multihomog_bound,
        ),
        ("ci point-count invariant", Duration::from_secs(300), point_count),
        ("determinism", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
