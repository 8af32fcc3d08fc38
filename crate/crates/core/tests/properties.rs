use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use radolab_core::linear::rado_condition;
use radolab_core::search::{
    asymptotic_profile, enumerate_solutions, profile_census_with, standard_head, ColoringSpec,
};
use radolab_core::{analyze, columns_condition, parse, pretty, Equation, Polynomial, QMatrix};

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn term() -> impl Strategy<Value = (i64, Vec<(usize, u32)>)> {
    (
        -9i64..=9,
        prop::collection::vec((0usize..4, 1u32..=3), 0..=3),
    )
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term(), 1..=5).prop_map(|ts| build(&ts, &NAMES))
}

fn build(ts: &[(i64, Vec<(usize, u32)>)], names: &[&str]) -> Polynomial {
    Polynomial::from_named_terms(ts.iter().map(|(c, fs)| {
        (
            BigInt::from(*c),
            fs.iter().map(|&(v, e)| (names[v].to_string(), e)).collect(),
        )
    }))
}

fn assignment() -> impl Strategy<Value = BTreeMap<String, BigInt>> {
    prop::collection::vec(-20i64..=20, 4).prop_map(|vs| {
        NAMES
            .iter()
            .zip(vs)
            .map(|(n, v)| (n.to_string(), BigInt::from(v)))
            .collect()
    })
}

fn linear_coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![-6i64..=-1, 1i64..=6], n)
}

fn linear_text(coeffs: &[i64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(NAMES)
        .map(|(c, v)| format!("{c}*{v}"))
        .collect();
    format!("{} = 0", terms.join(" + ").replace("+ -", "- "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_idempotent(p in poly()) {
        let once = Equation::new(p.clone());
        let twice = Equation::new(once.poly().clone());
        prop_assert_eq!(&once, &twice);
        let rebuilt = Polynomial::from_named_terms(p.named_terms());
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), a in assignment()) {
        let at = |r: &Polynomial| r.evaluate(&a).unwrap();
        prop_assert_eq!(at(&(&p + &q)), at(&p) + at(&q));
        prop_assert_eq!(at(&(&p - &q)), at(&p) - at(&q));
        prop_assert_eq!(at(&(&p * &q)), at(&p) * at(&q));
    }

    #[test]
    fn pretty_round_trips(p in poly(), q in poly()) {
        let e = Equation::from_sides(&p, &q);
        prop_assert_eq!(parse(&pretty(&e)).unwrap(), e);
    }

    #[test]
    fn whitespace_does_not_matter(p in poly(), spaces in prop::collection::vec(0usize..3, 64)) {
        let text = pretty(&Equation::new(p));
        let mut spaced = String::new();
        for (i, ch) in text.chars().enumerate() {
            if ch != ' ' {
                spaced.push(ch);
                if "+-*^=".contains(ch) {
                    spaced.push_str(&" ".repeat(spaces[i % spaces.len()]));
                }
            }
        }
        let compact_ok = parse(&text.replace(' ', ""));
        prop_assert_eq!(parse(&spaced).unwrap(), parse(&text).unwrap());
        prop_assert_eq!(compact_ok.unwrap(), parse(&text).unwrap());
    }

    #[test]
    fn columns_condition_invariant_under_scaling_and_permutation(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=2),
        scale in prop_oneof![-4i64..=-1, 1i64..=4],
        shift in 0usize..4,
    ) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = QMatrix::from_i64_rows(&refs).unwrap();
        let scaled: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|a| a * scale).collect()).collect();
        let rotated: Vec<Vec<i64>> = rows.iter().map(|r| { let mut r = r.clone(); r.rotate_left(shift); r }).collect();
        let base = columns_condition(&m).unwrap();
        if let Some(c) = &base {
            prop_assert!(c.verify(&m));
        }
        for other in [scaled, rotated] {
            let refs: Vec<&[i64]> = other.iter().map(Vec::as_slice).collect();
            let m2 = QMatrix::from_i64_rows(&refs).unwrap();
            let c2 = columns_condition(&m2).unwrap();
            prop_assert_eq!(base.is_some(), c2.is_some());
            if let Some(c) = &c2 {
                prop_assert!(c.verify(&m2));
            }
        }
    }

    #[test]
    fn rado_condition_invariant_under_scaling_and_permutation(
        coeffs in linear_coeffs(5), scale in 1i64..=5, shift in 0usize..5,
    ) {
        let big = |v: &[i64]| v.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        let base = rado_condition(&big(&coeffs)).unwrap();
        if let Some(s) = &base {
            prop_assert!(s.iter().map(|&i| coeffs[i]).sum::<i64>() == 0);
        }
        let scaled: Vec<i64> = coeffs.iter().map(|a| -a * scale).collect();
        let mut rotated = coeffs.clone();
        rotated.rotate_left(shift);
        prop_assert_eq!(rado_condition(&big(&scaled)).unwrap().is_some(), base.is_some());
        prop_assert_eq!(rado_condition(&big(&rotated)).unwrap().is_some(), base.is_some());
    }

    #[test]
    fn single_row_columns_condition_is_rado(coeffs in linear_coeffs(6)) {
        let m = QMatrix::from_i64_rows(&[&coeffs[..]]).unwrap();
        let big: Vec<BigInt> = coeffs.iter().map(|&a| BigInt::from(a)).collect();
        prop_assert_eq!(columns_condition(&m).unwrap().is_some(), rado_condition(&big).unwrap().is_some());
    }

    #[test]
    fn filters_do_not_depend_on_variable_names(ts in prop::collection::vec(term(), 1..=4)) {
        let a = Equation::new(build(&ts, &["x", "y", "z", "w"]));
        let b = Equation::new(build(&ts, &["w", "z9", "a", "y"]));
        prop_assume!(!a.poly().is_zero() && a.poly().num_vars() <= 4);
        let (va, vb) = (analyze(&a).unwrap().verdict, analyze(&b).unwrap().verdict);
        prop_assert_eq!(va.status(), vb.status());
        prop_assert_eq!(va.reasons(), vb.reasons());
    }

    #[test]
    fn standard_heads_lie_in_range(x in 1u64..=1_000_000_000, p in 2u64..=16, k in 0u32..=4) {
        let h = standard_head(x, p);
        let q = |v: u64| BigRational::from_integer(v.into());
        prop_assert!(h >= q(1) && h < q(p));
        if let Some(shifted) = p.checked_pow(k).and_then(|s| x.checked_mul(s)) {
            prop_assert_eq!(standard_head(shifted, p), h);
        }
    }

    #[test]
    fn valid_profiles_meet_both_conditions(values in prop::collection::vec(1u64..=1_000_000, 1..=6), n in 2u64..=12) {
        let p = asymptotic_profile(&values, n);
        let classes = p.partition.classes();
        prop_assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), values.len());
        if p.valid {
            for (ci, class) in classes.iter().enumerate() {
                for &i in class {
                    for &j in class {
                        prop_assert!(n * values[i].abs_diff(values[j]) < values[j]);
                    }
                    for later in &classes[ci + 1..] {
                        for &j in later {
                            prop_assert!(n * values[j] < values[i]);
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_matches_grid(coeffs in linear_coeffs(3), constant in -6i64..=6, square in any::<bool>()) {
        let mut text = linear_text(&coeffs);
        if square {
            text = text.replacen("*x", "*x^2", 1);
        }
        let text = text.replace("= 0", &format!("= {constant}"));
        let eq = parse(&text).unwrap();
        prop_assume!(!eq.poly().is_zero());
        let b = 14u64;
        let got = enumerate_solutions(eq.poly(), b).unwrap();
        let n = eq.poly().num_vars();
        let mut want = Vec::new();
        let total = b.pow(n as u32);
        for idx in 0..total {
            let v: Vec<u64> = (0..n).map(|i| idx / b.pow((n - 1 - i) as u32) % b + 1).collect();
            if eq.poly().evaluate_u64(&v).is_zero() {
                want.push(v);
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn census_counts_every_valid_monochromatic_solution(
        coeffs in linear_coeffs(3), seed in any::<u64>(), colors in 2u64..=4, n in 2u64..=6,
    ) {
        let eq = parse(&linear_text(&coeffs)).unwrap();
        let spec = ColoringSpec::random(seed, colors).unwrap();
        let b = 120;
        let pruned = profile_census_with(eq.poly(), &spec, b, n, true).unwrap();
        let full = profile_census_with(eq.poly(), &spec, b, n, false).unwrap();
        prop_assert_eq!(&pruned.entries, &full.entries);
        let recount = enumerate_solutions(eq.poly(), b)
            .unwrap()
            .into_iter()
            .filter(|s| s.iter().all(|&x| spec.color(x) == spec.color(s[0])))
            .filter(|s| asymptotic_profile(s, n).valid)
            .count() as u64;
        prop_assert_eq!(pruned.valid_solutions, recount);
        prop_assert_eq!(pruned.entries.iter().map(|e| e.count).sum::<u64>(), recount);
    }
}
