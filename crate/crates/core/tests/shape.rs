mod common;

use askey_core::arith::int;
use askey_core::darboux::{build_darboux, IndexSet};
use askey_core::diophantine::{to_eta_poly, zero_norm_data};
use askey_core::shape::*;
use askey_core::{CoordClass, FamilyId};
use num_traits::Zero;

#[test]
fn summation_identity() {
    for n in 1..=4u32 {
        for params in common::members(n) {
            for m in 1..=3u32 {
                for x in -(m as i64)..=n as i64 + 1 {
                    for deg in 0..=n as u64 {
                        let (l, r) = xshift_sum_sides(&params, m, deg, x).unwrap();
                        assert_eq!(l, r, "{} N={n} M={m} n={deg} x={x}", params.family());
                    }
                }
            }
        }
    }
}

#[test]
fn summation_identity_at_minus_m_keeps_only_the_last_term() {
    for params in common::members(3) {
        for m in 1..=3u32 {
            let terms = xshift_sum_terms(&params, m, -(m as i64));
            assert!(terms[..m as usize].iter().all(Zero::is_zero), "{}", params.family());
            assert!(!terms[m as usize].is_zero());
        }
    }
}

#[test]
fn closed_casoratians_match_determinants() {
    for n in 1..=3u32 {
        for params in common::members(n) {
            let zn = zero_norm_data(&params, 2).unwrap();
            for m in 1..=3u32 {
                let mut kinds =
                    vec![CasoratianKind::Vandermonde, CasoratianKind::LambdaLeft, CasoratianKind::LambdaRight];
                kinds.extend((0..=n as u64).map(CasoratianKind::Eigen));
                let mut compared = 0;
                for x in -(m as i64)..=n as i64 + 2 {
                    for &kind in &kinds {
                        if let Ok(c) = closed_casoratian(&params, m, kind, x) {
                            let d = casoratian_by_determinant(&params, &zn, m, kind, x).unwrap();
                            assert_eq!(c, d, "{} N={n} M={m} {kind:?} x={x}", params.family());
                            compared += 1;
                        }
                    }
                }
                assert!(compared > kinds.len() * 2);
            }
        }
    }
}

#[test]
fn krawtchouk_vandermonde_constant() {
    let params = common::members(4).remove(0);
    for x in -3..8 {
        assert_eq!(closed_casoratian(&params, 3, CasoratianKind::Vandermonde, x).unwrap(), int(2));
    }
}

#[test]
fn ordered_products_expand_to_printed_sums() {
    for n in 1..=4u32 {
        for params in common::members(n) {
            for m in 1..=3u32 {
                assert!(verify_ordered_product(&params, m).unwrap().is_empty(), "{} N={n} M={m}", params.family());
            }
        }
    }
}

#[test]
fn single_step_matches_forward_operator() {
    for params in common::members(3) {
        for x in 0..5 {
            let (a0, a1) = forward_xshift(&params).coefficients(x).unwrap();
            assert_eq!(ordered_product_expand(&params, 1, x).unwrap(), vec![a0.clone(), a1.clone()]);
            assert_eq!(a0 + a1, int(1));
        }
    }
}

#[test]
fn shift_actions() {
    for n in 1..=4u32 {
        for params in common::members(n) {
            for deg in 0..=n as u64 {
                for x in 0..=n as i64 {
                    assert!(
                        forward_action_defect(&params, deg, x).unwrap().is_zero(),
                        "{} n={deg} x={x}",
                        params.family()
                    );
                    assert!(
                        backward_action_defect(&params, deg, x).unwrap().is_zero(),
                        "{} n={deg} x={x}",
                        params.family()
                    );
                }
            }
        }
    }
}

#[test]
fn first_zero_norm_direction_is_annihilated() {
    for params in common::members(3) {
        let top = zero_norm_data(&params, 0).unwrap().monic.remove(0);
        let f = |y: i64| Ok(top.eval(&params.eta(y)));
        let fwd = forward_xshift(&params);
        let bwd = backward_xshift(&params);
        for x in 0..=3 {
            assert!(bwd.apply(|y| fwd.apply(f, y), x).unwrap().is_zero(), "{} x={x}", params.family());
        }
    }
}

#[test]
fn difference_operator_factorises_through_x_shifts() {
    for n in 1..=5u32 {
        for params in common::members(n) {
            assert_eq!(xshift_factorisation_defect(&params, n + 2).unwrap(), None, "{}", params.family());
        }
    }
}

#[test]
fn racah_degree_shift_factorisation() {
    for n in 1..=5u32 {
        let params = common::members(n).remove(2);
        assert_eq!(params.family(), FamilyId::R);
        assert_eq!(racah_bf_defect(&params).unwrap(), None);
        let (fwd, _) = racah_bf(&params).unwrap();
        let p0 = to_eta_poly(&params, 0).unwrap();
        for x in 0..=n as i64 {
            assert!(fwd.apply(|y| Ok(p0.eval(&params.eta(y))), x).unwrap().is_zero());
        }
    }
    assert!(racah_bf(&common::members(2).remove(0)).is_err());
}

#[test]
fn pascal_identities() {
    for q in [int(2), askey_core::arith::ratio(1, 3), askey_core::arith::ratio(-5, 7)] {
        assert!(pascal_defects(12, &q).is_empty());
    }
}

#[test]
fn darboux_matches_closed_coefficients() {
    for n in 1..=3u32 {
        for params in common::members(n) {
            for m in 1..=3u32 {
                let sys = build_darboux(&params, IndexSet::contiguous(m).unwrap()).unwrap();
                for (x, b) in &sys.bbar {
                    if let Ok(c) = closed_bbar(&params, m, *x) {
                        assert_eq!(b.as_ref(), Some(&c), "{} N={n} M={m} x={x}", params.family());
                    }
                }
                for (x, d) in &sys.dbar {
                    if let Ok(c) = closed_dbar(&params, m, *x) {
                        assert_eq!(d.as_ref(), Some(&c), "{} N={n} M={m} x={x}", params.family());
                    }
                }
            }
        }
    }
}

#[test]
fn positivity_transport_for_parameter_free_coordinates() {
    for n in 1..=5u32 {
        for params in common::members(n) {
            for m in 1..=3u32 {
                let report = positivity_transport(&params, m);
                if !matches!(params.class(), CoordClass::I | CoordClass::IV) {
                    assert!(!report.guaranteed);
                    continue;
                }
                assert!(report.guaranteed);
                if let askey_core::Lambda::QqK { p } = params.lambda() {
                    // The admissible range p > q^-N moves with N.
                    let bound = askey_core::arith::powi(params.q().unwrap(), -((n + m) as i64));
                    assert_eq!(report.violations.is_empty(), p > &bound, "N={n} M={m}");
                } else {
                    assert!(report.violations.is_empty(), "{} N={n} M={m}", params.family());
                }
            }
        }
    }
}
