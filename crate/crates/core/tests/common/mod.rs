#![allow(dead_code)]

use askey_core::arith::ratio;
use askey_core::{FamilyParams, Lambda, Rational};

fn r(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// One valid parameter set per family, each usable for every `N <= 6`.
pub fn members(n: u32) -> Vec<FamilyParams> {
    let half = Some(r(1, 2));
    let two_thirds = Some(r(2, 3));
    vec![
        FamilyParams::new(Lambda::K { p: r(1, 3) }, n, None),
        FamilyParams::new(Lambda::H { a: r(1, 2), b: r(3, 2) }, n, None),
        FamilyParams::new(Lambda::R { b: r(15, 1), c: r(1, 2), d: r(5, 2) }, n, None),
        FamilyParams::new(Lambda::DH { a: r(3, 2), b: r(1, 3) }, n, None),
        FamilyParams::new(Lambda::DqqK { p: r(12, 1) }, n, two_thirds.clone()),
        FamilyParams::new(Lambda::QH { a: r(1, 3), b: r(1, 4) }, n, half.clone()),
        FamilyParams::new(Lambda::QK { p: r(3, 2) }, n, Some(r(1, 3))),
        FamilyParams::new(Lambda::QqK { p: r(65, 1) }, n, half.clone()),
        FamilyParams::new(Lambda::AqK { p: r(1, 2) }, n, two_thirds.clone()),
        FamilyParams::new(Lambda::QR { b: r(1, 20), c: r(3, 5), d: r(3, 4) }, n, two_thirds),
        FamilyParams::new(Lambda::DqH { a: r(1, 3), b: r(1, 4) }, n, half.clone()),
        FamilyParams::new(Lambda::DqK { p: r(1, 1) }, n, half),
    ]
    .into_iter()
    .map(Result::unwrap)
    .collect()
}

/// Members for a few lattice sizes, small enough for the heavier checks.
pub fn small_members() -> Vec<FamilyParams> {
    [1u32, 2, 3].iter().flat_map(|&n| members(n)).collect()
}
