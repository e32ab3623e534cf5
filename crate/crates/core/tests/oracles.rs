//! Library results checked against small independent implementations.

use std::collections::{BTreeSet, HashMap};

use cicert_core::bounds::{factorization_count, factorizations, pattern_landscape};
use cicert_core::census::{
    brute_force_absirr, brute_force_empty, enumerate_systems, field_for_q, sample_system, wilson_interval,
    DEFAULT_SEARCH_CAP, WILSON_Z,
};
use cicert_core::chow::chow_class;
use cicert_core::macaulay::certify;
use cicert_core::{Certificate, DegreePattern, Monomial};
use num_bigint::BigInt;

type Poly = HashMap<Vec<u32>, i128>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += ca * cb;
        }
    }
    out
}

fn linear(coeffs: &[i128]) -> Poly {
    let mut p = Poly::new();
    for (j, &c) in coeffs.iter().enumerate() {
        let mut e = vec![0; coeffs.len()];
        e[j] = 1;
        p.insert(e, c);
    }
    p
}

/// Untruncated expansion of the nons / irr incidence classes.
fn naive_class(cert: Certificate, n: usize, d: &[u32]) -> Poly {
    let s = d.len();
    let sigma: i128 = d.iter().map(|&x| x as i128 - 1).sum();
    let mut acc: Poly = [(vec![0; s + 1], 1)].into_iter().collect();
    for (i, &di) in d.iter().enumerate() {
        let mut c = vec![0; s + 1];
        c[0] = di as i128;
        c[i + 1] = 1;
        acc = poly_mul(&acc, &linear(&c));
    }
    let mut jac = vec![1; s + 1];
    jac[0] = sigma;
    let (k, extra) = match cert {
        Certificate::Nons => (n - s + 1, 0),
        _ => (2, n - s - 1),
    };
    for _ in 0..k {
        acc = poly_mul(&acc, &linear(&jac));
    }
    let mut t0 = vec![0; s + 1];
    t0[0] = 1;
    for _ in 0..extra {
        acc = poly_mul(&acc, &linear(&t0.iter().map(|&x| x as i128).collect::<Vec<_>>()));
    }
    acc
}

#[test]
fn chow_classes_match_naive_expansion() {
    let cases: &[(usize, &[u32])] = &[
        (2, &[3]),
        (3, &[2, 2]),
        (4, &[3, 2]),
        (5, &[4, 3, 2]),
        (6, &[2, 2, 2, 2]),
        (6, &[4]),
    ];
    for &(n, d) in cases {
        let p = DegreePattern::new(n, d.to_vec()).unwrap();
        for cert in [Certificate::Nons, Certificate::Irr] {
            let got = chow_class(cert, &p).unwrap();
            let want = naive_class(cert, n, d);
            for (e, c) in &want {
                let expect = if e[0] <= n as u32 + 1 {
                    BigInt::from(*c)
                } else {
                    BigInt::from(0)
                };
                assert_eq!(got.coeff(e), expect, "{cert} n={n} d={d:?} exps {e:?}");
            }
            assert!(got.terms().keys().all(|e| want.contains_key(e)));
        }
    }
}

#[test]
fn plane_cubic_coefficients() {
    let want = naive_class(Certificate::Nons, 2, &[3]);
    assert_eq!(want[&vec![3, 0]], 12);
    assert_eq!(want[&vec![2, 1]], 16);
}

/// Factorizations reached from `(b)` by repeatedly splitting one factor.
fn split_closure(b: u64, s: usize) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![vec![b]];
    while let Some(f) = stack.pop() {
        if !seen.insert(f.clone()) || f.len() == s {
            continue;
        }
        for (i, &a) in f.iter().enumerate() {
            for x in 2..a {
                if a % x == 0 {
                    let mut g = f.clone();
                    g[i] = x;
                    g.push(a / x);
                    g.sort_unstable_by(|u, v| v.cmp(u));
                    stack.push(g);
                }
            }
        }
    }
    seen
}

#[test]
fn factorizations_match_split_closure() {
    for b in 2..=400u64 {
        for s in 1..=5 {
            let want = split_closure(b, s);
            let got: BTreeSet<Vec<u64>> = factorizations(b, s).into_iter().collect();
            assert_eq!(got, want, "b={b} s={s}");
            assert_eq!(factorization_count(b, s), want.len() as u64);
        }
    }
    assert_eq!(factorization_count(12, 2), 3);
    assert_eq!(factorization_count(12, 3), 4);
    assert_eq!(factorization_count(8, 3), 3);
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn landscape_dimensions_match_binomials() {
    for (b, n, s) in [(12u64, 4usize, 3usize), (4, 3, 2), (36, 6, 4), (30, 8, 5)] {
        let l = pattern_landscape(b, n, s).unwrap();
        for e in &l.patterns {
            let want: u128 = e.d.iter().map(|&di| binom(di as u128 + n as u128, n as u128) - 1).sum();
            assert_eq!(e.dim, want.to_string(), "b={b} d={:?}", e.d);
        }
    }
    let l = pattern_landscape(12, 4, 3).unwrap();
    let dims: Vec<&str> = l.patterns.iter().map(|e| e.dim.as_str()).collect();
    assert_eq!(dims, ["1827", "227", "107", "62"]);
    assert_eq!(l.g, "1595");
}

#[test]
fn stci_on_conics_means_nonvanishing_at_corner() {
    let p = DegreePattern::new(2, vec![2]).unwrap();
    for q in [2u64, 3, 4] {
        let field = field_for_q(q).unwrap();
        let corner = [field.one(), field.zero(), field.zero()];
        let mut passes = 0u64;
        for sys in enumerate_systems(&p, &field, 1_000_000).unwrap() {
            let f = &sys.forms()[0];
            let expect = !f.eval(&corner).unwrap().is_zero();
            assert_eq!(
                certify(&sys, Certificate::Stci).unwrap(),
                expect,
                "q={q}: {}",
                sys.canonical()
            );
            passes += expect as u64;
        }
        assert_eq!(passes, q.pow(5));
    }
}

#[test]
fn passing_certificates_are_sound_on_conics() {
    let p = DegreePattern::new(2, vec![2]).unwrap();
    for q in [2u64, 3] {
        let field = field_for_q(q).unwrap();
        for sys in enumerate_systems(&p, &field, 1_000_000).unwrap() {
            let f = &sys.forms()[0];
            if certify(&sys, Certificate::Irr).unwrap() {
                assert!(
                    brute_force_absirr(f, None, DEFAULT_SEARCH_CAP).unwrap(),
                    "{}",
                    sys.canonical()
                );
            }
            if certify(&sys, Certificate::Nons).unwrap() {
                let mut sing = vec![f.clone()];
                sing.extend((0..3).map(|j| f.derivative(j).unwrap()));
                let v = brute_force_empty(&sing, Some(2), DEFAULT_SEARCH_CAP).unwrap();
                assert!(v.is_empty(), "{} singular at {v:?}", sys.canonical());
            }
        }
    }
}

#[test]
fn sampled_conics_hit_exact_proportion() {
    let p = DegreePattern::new(2, vec![2]).unwrap();
    let field = field_for_q(2).unwrap();
    let x0sq = Monomial(vec![2, 0, 0]);
    let trials = 100_000u64;
    let hits = (0..trials)
        .filter(|&seed| !sample_system(&p, &field, seed).forms()[0].coeff(&x0sq).is_zero())
        .count() as u64;
    let (lo, hi) = wilson_interval(hits, trials, WILSON_Z);
    let exact = 32.0 / 63.0;
    assert!(lo <= exact && exact <= hi, "{hits}/{trials}: [{lo}, {hi}]");
}
