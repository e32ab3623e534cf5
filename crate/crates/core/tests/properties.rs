use cicert_core::bounds::{certificate_macaulay_degree, degree_bounds, g_of_b, probability_lower_bound, Guard};
use cicert_core::census::{field_for_q, random_form, sample_system, sample_system_with, trial_rng};
use cicert_core::chow::ChowClass;
use cicert_core::homopoly::{build_test_system, jacobian_det, jacobian_minor, parse_system_file};
use cicert_core::macaulay::{forms_empty, macaulay_degree, rank};
use cicert_core::{Certificate, DegreePattern, Elem, Field, HomoPoly, PolySystem};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn pattern_strategy() -> impl Strategy<Value = DegreePattern> {
    (2usize..=4)
        .prop_flat_map(|n| (Just(n), 1usize..n))
        .prop_flat_map(|(n, s)| (Just(n), proptest::collection::vec(1u32..=3, s)))
        .prop_filter_map("needs d_1 >= 2", |(n, mut d)| {
            d.sort_unstable_by(|a, b| b.cmp(a));
            DegreePattern::new(n, d).ok()
        })
}

fn small_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 9])
}

fn random_invertible(field: &Field, size: usize, rng: &mut impl Rng) -> Vec<Vec<Elem>> {
    let q = field.order();
    loop {
        let m: Vec<Vec<Elem>> = (0..size)
            .map(|_| (0..size).map(|_| field.elem(rng.gen_range(0..q)).unwrap()).collect())
            .collect();
        if rank(field, m.clone(), size) == size {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn minors_are_homogeneous_of_degree_sigma(p in pattern_strategy(), q in small_q(), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let sys = sample_system(&p, &field, seed);
        for k in p.s() + 1..=p.n() + 1 {
            let j = jacobian_minor(&sys, k).unwrap();
            prop_assert_eq!(j.degree(), p.sigma());
            for (m, _) in j.terms() {
                prop_assert_eq!(m.degree(), p.sigma());
            }
        }
        prop_assert_eq!(jacobian_det(&sys), jacobian_minor(&sys, p.s() + 1).unwrap());
    }

    #[test]
    fn test_systems_have_n_plus_one_forms(p in pattern_strategy(), q in small_q(), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let sys = sample_system(&p, &field, seed);
        for cert in Certificate::ALL {
            if cert == Certificate::Irr && p.n() < p.s() + 1 {
                prop_assert!(build_test_system(&sys, cert).is_err());
                continue;
            }
            let ts = build_test_system(&sys, cert).unwrap();
            prop_assert_eq!(ts.forms.len(), p.n() + 1);
            let n = macaulay_degree(&ts.degrees()).unwrap();
            prop_assert_eq!(n, certificate_macaulay_degree(&p, cert));
        }
    }

    #[test]
    fn polynomial_text_round_trip(p in pattern_strategy(), q in small_q(), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let sys = sample_system(&p, &field, seed);
        for f in sys.forms() {
            let back = HomoPoly::parse(&f.to_text(), &field, f.nvars()).unwrap();
            prop_assert_eq!(&back, f);
        }
        let text = sys.to_file_text();
        let (_, nvars, forms) = parse_system_file(&text).unwrap();
        let again = PolySystem::new(nvars - 1, forms).unwrap();
        prop_assert_eq!(again.to_file_text(), text);
    }

    #[test]
    fn emptiness_is_invariant(n in 1usize..=2, q in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let mut rng = trial_rng(seed, 0);
        let forms: Vec<HomoPoly> =
            (0..=n).map(|_| random_form(&field, n + 1, rng.gen_range(1..=2), &mut rng)).collect();
        let base = forms_empty(&forms).unwrap().empty;

        let c = field.elem(rng.gen_range(1..q)).unwrap();
        let i = rng.gen_range(0..forms.len());
        let mut scaled = forms.clone();
        scaled[i] = scaled[i].scale(c);
        prop_assert_eq!(forms_empty(&scaled).unwrap().empty, base);

        let mut permuted = forms.clone();
        permuted.rotate_left(1);
        prop_assert_eq!(forms_empty(&permuted).unwrap().empty, base);

        let a = random_invertible(&field, n + 1, &mut rng);
        let moved: Vec<HomoPoly> = forms.iter().map(|f| f.substitute_linear(&a).unwrap()).collect();
        prop_assert_eq!(forms_empty(&moved).unwrap().empty, base);
    }

    #[test]
    fn row_operations_keep_emptiness(n in 1usize..=2, q in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let mut rng = trial_rng(seed, 1);
        let e = rng.gen_range(1..=2);
        let forms: Vec<HomoPoly> = (0..=n).map(|_| random_form(&field, n + 1, e, &mut rng)).collect();
        if forms_empty(&forms).unwrap().empty {
            let c = field.elem(rng.gen_range(0..q)).unwrap();
            let mut changed = forms.clone();
            changed[0] = forms[0].add(&forms[1].scale(c)).unwrap();
            prop_assert!(forms_empty(&changed).unwrap().empty);
        }
    }

    #[test]
    fn chow_ring_is_commutative_and_associative(seed in any::<u64>(), n in 1usize..=4, s in 1usize..=3) {
        let mut rng = trial_rng(seed, 2);
        let mut lin = || {
            let coeffs: Vec<BigInt> = (0..=s).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
            ChowClass::linear(n, s, &coeffs)
        };
        let (a, b, c) = (lin().mul(&lin()), lin(), lin().pow(2));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn per_form_bounds_below_concise(p in pattern_strategy()) {
        for cert in Certificate::ALL {
            let Ok(b) = degree_bounds(&p, cert) else { continue };
            for e in &b.per_form {
                prop_assert!(e >= &1u32.into());
                prop_assert!(e <= &b.concise);
            }
        }
    }

    #[test]
    fn probability_bounds_ordered_and_monotone(p in pattern_strategy(), k in 0usize..12) {
        let qs = [2u64, 3, 5, 7, 11, 13, 101, 103, 1009, 4096, 65537, 1 << 20];
        for cert in Certificate::ALL {
            let Ok(b) = probability_lower_bound(&p, qs[k], cert) else { continue };
            let one = num_rational::BigRational::from_integer(1.into());
            prop_assert!(b.concise <= one);
            if b.product_guard == Guard::Met {
                prop_assert!(b.product <= one);
            }
            if b.guard == Guard::Met && b.product_guard == Guard::Met {
                prop_assert!(b.product >= b.concise);
            }
            if k + 1 < qs.len() {
                let next = probability_lower_bound(&p, qs[k + 1], cert).unwrap();
                prop_assert!(next.concise >= b.concise);
                if b.product_guard == Guard::Met {
                    prop_assert!(next.product >= b.product);
                }
            }
        }
    }

    #[test]
    fn g_dominates_convexity_bound(b in 2u64..200, n in 2usize..8) {
        let g = g_of_b(b, n);
        if let Some(lower) = &g.convexity_lower {
            if !cicert_core::field::is_prime(b) {
                prop_assert!(&g.g >= lower);
            }
        }
        if !cicert_core::field::is_prime(b) {
            prop_assert!(g.g >= BigInt::from(1));
        }
    }

    #[test]
    fn sampling_reproducible(p in pattern_strategy(), q in small_q(), seed in any::<u64>()) {
        let field = field_for_q(q).unwrap();
        let a = sample_system_with(&p, &field, &mut trial_rng(seed, 5));
        let b = sample_system_with(&p, &field, &mut trial_rng(seed, 5));
        prop_assert_eq!(a.canonical(), b.canonical());
    }
}
