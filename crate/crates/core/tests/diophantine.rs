mod common;

use askey_core::diophantine::{closed_form_q, leading_coeff, to_eta_poly, zero_norm_data};
use num_traits::Zero;

#[test]
fn parameter_sets_are_valid() {
    for n in 1..=6 {
        for f in common::members(n) {
            assert!(f.validate().is_empty(), "{} N={n}: {:?}", f.family(), f.validate());
        }
    }
}

#[test]
fn leading_coefficients_match() {
    for f in common::small_members() {
        for n in 0..=f.size() as u64 {
            let p = to_eta_poly(&f, n).unwrap();
            assert_eq!(p.leading(), leading_coeff(&f, n), "{} N={} n={n}", f.family(), f.size());
        }
    }
}

#[test]
fn quotients_match_closed_forms() {
    for f in common::small_members() {
        let data = zero_norm_data(&f, 3).unwrap();
        for (m, q) in data.quotients.iter().enumerate() {
            for x in 0..=(f.size() as i64 + 2 * m as i64 + 2) {
                assert_eq!(
                    q.eval(&f.eta(x)),
                    closed_form_q(&f, m as u64, x),
                    "{} N={} m={m} x={x}",
                    f.family(),
                    f.size()
                );
            }
            for x in 0..=f.size() as i64 {
                assert!(data.monic[m].eval(&f.eta(x)).is_zero());
            }
        }
    }
}
