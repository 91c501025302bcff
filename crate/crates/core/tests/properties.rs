//! Property tests for the algebraic invariants: decomposition
//! round-trips, evaluation monotonicity, printer/parser inverses, the
//! pairing length law and interpreter determinism.

use num_bigint::BigUint;
use proptest::prelude::*;
use typetwo::otm::{phi_machine, run_clocked, run_machine, DEFAULT_FUEL};
use typetwo::regfn::{pair_regfns, pair_words, prime_inverse, prime_transform, unpair_words, RegFn, Word};
use typetwo::sopoly::{
    decompose, degree_of, eval_sop, parse_monfn, parse_sop, MonFn, SOPoly, TableMon, TypeTag,
    UniPoly,
};

fn arb_sop() -> impl Strategy<Value = SOPoly> {
    let leaf = prop_oneof![
        Just(SOPoly::VarN),
        (1u64..=9).prop_map(SOPoly::constant_u64),
    ];
    leaf.prop_recursive(4, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(SOPoly::apply),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SOPoly::sum(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| SOPoly::prod(a, b)),
        ]
    })
}

fn arb_monfn() -> impl Strategy<Value = MonFn> {
    prop_oneof![
        // polynomial forms with small coefficients
        (proptest::collection::vec(0u64..4, 1..4), 1u64..4).prop_map(|(mut lower, lead)| {
            lower.push(lead);
            MonFn::poly(UniPoly::from_coeffs(lower))
        }),
        // strictly increasing tables
        (proptest::collection::vec(1u64..6, 1..5), 0u64..3).prop_map(|(increments, base)| {
            let mut vals = Vec::new();
            let mut v = base;
            for inc in increments {
                vals.push(BigUint::from(v));
                v += inc;
            }
            MonFn::table(TableMon::from_prefix(&vals).unwrap())
        }),
    ]
}

/// Polynomials that are certainly type m with positive degree: a product
/// of two applications, optionally combined with a degree-0 term or a
/// further application.
fn arb_type_m() -> impl Strategy<Value = SOPoly> {
    (arb_sop(), arb_sop(), arb_sop(), 0u8..5).prop_map(|(a, b, c, shape)| {
        let base = SOPoly::prod(SOPoly::apply(a), SOPoly::apply(b));
        match shape {
            0 => base,
            1 => SOPoly::sum(base, SOPoly::constant_u64(3)),
            2 => SOPoly::prod(base, SOPoly::VarN),
            3 => SOPoly::prod(base, SOPoly::apply(c)),
            _ => SOPoly::sum(base, SOPoly::VarN),
        }
    })
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..=2, 0..max_len)
        .prop_map(|syms| Word::from_symbols(syms).unwrap())
}

/// Oracles tame enough that two iterated applications stay far below
/// the word-length cap.
fn tame_monfn() -> impl Strategy<Value = MonFn> {
    prop_oneof![
        (proptest::collection::vec(0u64..3, 1..3), 1u64..3).prop_map(|(mut lower, lead)| {
            lower.push(lead);
            MonFn::poly(UniPoly::from_coeffs(lower))
        }),
        (proptest::collection::vec(1u64..4, 1..4), 0u64..3).prop_map(|(increments, base)| {
            let mut vals = Vec::new();
            let mut v = base;
            for inc in increments {
                vals.push(BigUint::from(v));
                v += inc;
            }
            MonFn::table(TableMon::from_prefix(&vals).unwrap())
        }),
    ]
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 96,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn decompose_recompose_identity(q in arb_type_m()) {
        let info = degree_of(&q);
        prop_assert_eq!(info.type_tag, TypeTag::M);
        prop_assert!(info.degree > 0);
        let d = decompose(&q).unwrap();
        let max_part = d.parts.iter().map(|p| degree_of(p).degree).max().unwrap();
        prop_assert_eq!(max_part + 2, info.degree);
        let r = d.recompose();
        for s in 0u64..3 {
            let p = MonFn::poly(UniPoly::from_coeffs(vec![s, s + 1]));
            for k in 0u64..10 {
                let kb = BigUint::from(k);
                prop_assert_eq!(eval_sop(&q, &p, &kb), eval_sop(&r, &p, &kb));
            }
        }
    }

    #[test]
    fn eval_monotone_in_oracle_and_argument(q in arb_sop(), p in arb_monfn()) {
        let bigger = MonFn::sum(p.clone(), MonFn::identity());
        let mut prev: Option<BigUint> = None;
        for k in 0u64..8 {
            let kb = BigUint::from(k);
            let lo = eval_sop(&q, &p, &kb);
            let hi = eval_sop(&q, &bigger, &kb);
            prop_assert!(lo <= hi);
            if let Some(prev) = prev {
                prop_assert!(prev <= lo);
            }
            prev = Some(lo);
        }
    }

    #[test]
    fn print_parse_is_identity(q in arb_sop()) {
        let printed = q.to_string();
        prop_assert_eq!(parse_sop(&printed).unwrap(), q);
    }

    #[test]
    fn monfn_print_parse_agrees(p in arb_monfn()) {
        let printed = p.to_string();
        let again = parse_monfn(&printed).unwrap();
        for i in 0u64..12 {
            prop_assert_eq!(p.apply_u64(i), again.apply_u64(i));
        }
    }

    #[test]
    fn monfn_closure_is_strictly_monotone(a in arb_monfn(), b in arb_monfn(), m in 0u32..3) {
        for f in [
            MonFn::sum(a.clone(), b.clone()),
            MonFn::product(a.clone(), b.clone()),
            MonFn::compose(a.clone(), b.clone()),
            MonFn::iterate(a, m),
        ] {
            let mut prev: Option<BigUint> = None;
            for i in 0u64..16 {
                let v = f.apply_u64(i);
                if let Some(prev) = &prev {
                    prop_assert!(&v > prev, "{} at {}", f, i);
                }
                prev = Some(v);
            }
        }
    }

    #[test]
    fn pairing_roundtrip_and_length_law(u in arb_word(9), v in arb_word(9)) {
        let p = pair_words(&u, &v);
        prop_assert_eq!(p.len(), (u.len() + 2) * (v.len() + 2));
        let (u2, v2) = unpair_words(&p).unwrap();
        prop_assert_eq!(u2, u);
        prop_assert_eq!(v2, v);
    }

    #[test]
    fn prime_inverse_is_identity(g in arb_monfn(), v in arb_word(8)) {
        let phi = RegFn::pad(g);
        let round = prime_inverse(prime_transform(phi.clone()));
        prop_assert_eq!(round.apply(&v).unwrap(), phi.apply(&v).unwrap());
    }

    #[test]
    fn paired_size_law(g in arb_monfn(), h in arb_monfn(), i in 0u64..9) {
        let a = RegFn::pad(g);
        let b = RegFn::pad(h);
        let p = pair_regfns(a.clone(), b.clone());
        let ib = BigUint::from(i);
        let expected = (a.size_at(&ib).unwrap() + 2u32) * (b.size_at(&ib).unwrap() + 2u32);
        prop_assert_eq!(p.size_at(&ib).unwrap(), expected);
        // size probing agrees with materialized application
        prop_assert_eq!(
            p.size_at(&ib).unwrap(),
            BigUint::from(p.apply(&Word::zeros(i as usize)).unwrap().len())
        );
    }

    #[test]
    fn interpreter_is_deterministic(g in tame_monfn(), w in arb_word(6), n in 0u32..3) {
        let phi = RegFn::pad(g);
        let a = run_machine(&phi_machine(n), &phi, &w, DEFAULT_FUEL).unwrap();
        let b = run_machine(&phi_machine(n), &phi, &w, DEFAULT_FUEL).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clock_soundness(g in tame_monfn(), w in arb_word(6), q in arb_sop()) {
        // a non-aborted clocked run never exceeds its budget
        let phi = RegFn::pad(g);
        let r = run_clocked(&phi_machine(1), &q, &phi, &w).unwrap();
        if !r.aborted {
            let mut probes = 0;
            let budget = typetwo::otm::eval_budget(&q, &phi, &BigUint::from(w.len()), &mut probes).unwrap();
            prop_assert!(BigUint::from(r.steps) <= budget);
        }
    }
}
