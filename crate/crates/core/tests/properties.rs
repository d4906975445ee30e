mod common;

use askey_core::arith::{
    binomial, parse_rational, powi, q_binomial, q_pochhammer, ratio, rising_factorial, to_fraction_string,
};
use askey_core::darboux::casoratian;
use askey_core::diophantine::apply_difference;
use askey_core::poly::EtaPolynomial;
use askey_core::{Error, FamilyParams, Lambda, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

type BoxedFn<'a> = Box<dyn Fn(i64) -> Result<Rational, Error> + 'a>;

fn small_ratio() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

fn unit_ratio() -> impl Strategy<Value = Rational> {
    (2i64..=8).prop_flat_map(|d| (1..d, Just(d))).prop_map(|(n, d)| ratio(n, d))
}

/// Krawtchouk, Hahn, q-Krawtchouk and q-Hahn at random admissible parameters.
fn valid_params() -> impl Strategy<Value = FamilyParams> {
    let k = (unit_ratio(), 1u32..=5).prop_map(|(p, n)| FamilyParams::new(Lambda::K { p }, n, None).unwrap());
    let h = (1i64..=9, 1i64..=9, 1i64..=4, 1u32..=5)
        .prop_map(|(a, b, d, n)| FamilyParams::new(Lambda::H { a: ratio(a, d), b: ratio(b, d) }, n, None).unwrap());
    let qk = (1i64..=9, 1i64..=4, unit_ratio(), 1u32..=4)
        .prop_map(|(p, d, q, n)| FamilyParams::new(Lambda::QK { p: ratio(p, d) }, n, Some(q)).unwrap());
    let qh = (unit_ratio(), unit_ratio(), unit_ratio(), 1u32..=4)
        .prop_map(|(a, b, q, n)| FamilyParams::new(Lambda::QH { a, b }, n, Some(q)).unwrap());
    prop_oneof![k, h, qk, qh]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pochhammer_recurrences(a in small_ratio(), q in unit_ratio(), n in 0usize..8) {
        prop_assert_eq!(rising_factorial(&a, n + 1), rising_factorial(&a, n) * (&a + Rational::from_integer(n.into())));
        prop_assert_eq!(
            q_pochhammer(&a, &q, n + 1),
            q_pochhammer(&a, &q, n) * (Rational::one() - &a * powi(&q, n as i64))
        );
    }

    #[test]
    fn pascal_rules(m in 0u64..14, j in -1i64..16, q in unit_ratio()) {
        prop_assert_eq!(binomial(m + 1, j), binomial(m, j) + binomial(m, j - 1));
        prop_assert_eq!(q_binomial(m + 1, j, &q), q_binomial(m, j - 1, &q) + powi(&q, j.max(0)) * q_binomial(m, j, &q));
    }

    #[test]
    fn rational_strings_round_trip(r in small_ratio()) {
        prop_assert_eq!(parse_rational(&to_fraction_string(&r)).unwrap(), r);
    }

    #[test]
    fn casoratian_pulls_out_a_common_factor(
        cs in proptest::collection::vec(proptest::collection::vec(small_ratio(), 1..4), 1..4),
        g in proptest::collection::vec(small_ratio(), 3),
        x in -3i64..4,
    ) {
        let polys: Vec<EtaPolynomial> = cs.into_iter().map(EtaPolynomial::new).collect();
        let gp = EtaPolynomial::new(g);
        let at = |p: &EtaPolynomial, y: i64| p.eval(&Rational::from_integer(y.into()));
        let plain: Vec<BoxedFn> =
            polys.iter().map(|p| Box::new(move |y| Ok(at(p, y))) as BoxedFn).collect();
        let scaled: Vec<BoxedFn> = polys
            .iter()
            .map(|p| {
                let gp = &gp;
                Box::new(move |y| Ok(at(gp, y) * at(p, y))) as BoxedFn
            })
            .collect();
        let plain_refs: Vec<&dyn Fn(i64) -> Result<Rational, Error>> = plain.iter().map(|b| b.as_ref()).collect();
        let scaled_refs: Vec<&dyn Fn(i64) -> Result<Rational, Error>> = scaled.iter().map(|b| b.as_ref()).collect();
        let factor = (0..polys.len() as i64).fold(Rational::one(), |acc, k| acc * at(&gp, x + k));
        prop_assert_eq!(casoratian(&scaled_refs, x).unwrap(), factor * casoratian(&plain_refs, x).unwrap());
    }

    #[test]
    fn difference_equation_and_boundary_zeros(params in valid_params(), seed in 0u64..100) {
        let nn = params.size() as i64;
        prop_assert!(params.is_valid(), "{:?}", params.validate());
        prop_assert!(params.b_coeff(nn).unwrap().is_zero());
        prop_assert!(params.d_coeff(0).unwrap().is_zero());
        for x in 0..nn {
            prop_assert!(params.b_coeff(x).unwrap().is_positive());
            prop_assert!(params.d_coeff(x + 1).unwrap().is_positive());
        }
        let n = seed % (params.size() as u64 + 1);
        let f = |y: i64| params.eval_p(n, y);
        for x in 0..=nn {
            prop_assert_eq!(apply_difference(&params, f, x).unwrap(), params.energy(n) * f(x).unwrap());
        }
    }

    #[test]
    fn values_interpolate_in_eta(params in valid_params(), seed in 0u64..100) {
        let nn = params.size() as i64;
        let n = seed % (params.size() as u64 + 1);
        let nodes: Vec<Rational> = (0..=n as i64).map(|x| params.eta(x)).collect();
        let values: Vec<Rational> = (0..=n as i64).map(|x| params.eval_p(n, x).unwrap()).collect();
        let p = EtaPolynomial::interpolate(&nodes, &values).unwrap();
        for x in n as i64 + 1..=nn {
            prop_assert_eq!(p.eval(&params.eta(x)), params.eval_p(n, x).unwrap());
        }
    }
}

#[test]
fn boundary_coefficients_vanish_for_every_family() {
    for n in 1..=4 {
        for p in common::members(n) {
            let nn = p.size() as i64;
            assert!(p.b_coeff(nn).unwrap().is_zero(), "{:?}", p.family());
            assert!(p.d_coeff(0).unwrap().is_zero(), "{:?}", p.family());
            assert!(p.b_at(&p.coord(nn), nn).unwrap().is_zero(), "{:?}", p.family());
            assert!(p.d_at(&p.coord(0), 0).unwrap().is_zero(), "{:?}", p.family());
        }
    }
}

#[test]
fn racah_at_d_one_keeps_its_boundary_zero() {
    let p = FamilyParams::new(Lambda::R { b: ratio(10, 1), c: ratio(3, 2), d: ratio(1, 1) }, 3, None).unwrap();
    assert!(p.d_at(&p.coord(0), 0).is_err());
    assert!(p.d_coeff(0).unwrap().is_zero());
    assert!(p.is_valid());
}
