//! The twelve finite families: parameters, sinusoidal coordinates, lattice coefficients
//! `B(x)`, `D(x)`, eigenvalues and the terminating (q-)hypergeometric series.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{int, pow, powi, rising_factorial, Rational};
use crate::error::Error;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Krawtchouk.
    K,
    /// Hahn.
    H,
    /// Racah.
    R,
    /// dual Hahn.
    DH,
    /// dual quantum q-Krawtchouk.
    DqqK,
    /// q-Hahn.
    QH,
    /// q-Krawtchouk.
    QK,
    /// quantum q-Krawtchouk.
    QqK,
    /// affine q-Krawtchouk.
    AqK,
    /// q-Racah.
    QR,
    /// dual q-Hahn.
    DqH,
    /// dual q-Krawtchouk.
    DqK,
}

/// The five shapes of the sinusoidal coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordClass {
    /// `eta = x`
    I,
    /// `eta = x(x+d)`
    II,
    /// `eta = 1 - q^x`
    III,
    /// `eta = q^-x - 1`
    IV,
    /// `eta = (q^-x - 1)(1 - d q^x)`
    V,
}

impl CoordClass {
    pub fn label(self) -> &'static str {
        match self {
            CoordClass::I => "(i)",
            CoordClass::II => "(ii)",
            CoordClass::III => "(iii)",
            CoordClass::IV => "(iv)",
            CoordClass::V => "(v)",
        }
    }

    pub fn is_q(self) -> bool {
        !matches!(self, CoordClass::I | CoordClass::II)
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 12] = [
        FamilyId::K,
        FamilyId::H,
        FamilyId::R,
        FamilyId::DH,
        FamilyId::DqqK,
        FamilyId::QH,
        FamilyId::QK,
        FamilyId::QqK,
        FamilyId::AqK,
        FamilyId::QR,
        FamilyId::DqH,
        FamilyId::DqK,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FamilyId::K => "K",
            FamilyId::H => "H",
            FamilyId::R => "R",
            FamilyId::DH => "dH",
            FamilyId::DqqK => "dqqK",
            FamilyId::QH => "qH",
            FamilyId::QK => "qK",
            FamilyId::QqK => "qqK",
            FamilyId::AqK => "aqK",
            FamilyId::QR => "qR",
            FamilyId::DqH => "dqH",
            FamilyId::DqK => "dqK",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::K => "Krawtchouk",
            FamilyId::H => "Hahn",
            FamilyId::R => "Racah",
            FamilyId::DH => "dual Hahn",
            FamilyId::DqqK => "dual quantum q-Krawtchouk",
            FamilyId::QH => "q-Hahn",
            FamilyId::QK => "q-Krawtchouk",
            FamilyId::QqK => "quantum q-Krawtchouk",
            FamilyId::AqK => "affine q-Krawtchouk",
            FamilyId::QR => "q-Racah",
            FamilyId::DqH => "dual q-Hahn",
            FamilyId::DqK => "dual q-Krawtchouk",
        }
    }

    pub fn parse(code: &str) -> Option<FamilyId> {
        FamilyId::ALL.into_iter().find(|f| f.code().eq_ignore_ascii_case(code.trim()))
    }

    pub fn class(self) -> CoordClass {
        match self {
            FamilyId::K | FamilyId::H => CoordClass::I,
            FamilyId::R | FamilyId::DH => CoordClass::II,
            FamilyId::DqqK => CoordClass::III,
            FamilyId::QH | FamilyId::QK | FamilyId::QqK | FamilyId::AqK => CoordClass::IV,
            FamilyId::QR | FamilyId::DqH | FamilyId::DqK => CoordClass::V,
        }
    }

    pub fn is_q(self) -> bool {
        self.class().is_q()
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyId::H | FamilyId::DH | FamilyId::QH | FamilyId::DqH => &["a", "b"],
            FamilyId::R | FamilyId::QR => &["b", "c", "d"],
            _ => &["p"],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Family tag together with the family's own parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    K { p: Rational },
    H { a: Rational, b: Rational },
    R { b: Rational, c: Rational, d: Rational },
    DH { a: Rational, b: Rational },
    DqqK { p: Rational },
    QH { a: Rational, b: Rational },
    QK { p: Rational },
    QqK { p: Rational },
    AqK { p: Rational },
    QR { b: Rational, c: Rational, d: Rational },
    DqH { a: Rational, b: Rational },
    DqK { p: Rational },
}

impl Lambda {
    pub fn family(&self) -> FamilyId {
        match self {
            Lambda::K { .. } => FamilyId::K,
            Lambda::H { .. } => FamilyId::H,
            Lambda::R { .. } => FamilyId::R,
            Lambda::DH { .. } => FamilyId::DH,
            Lambda::DqqK { .. } => FamilyId::DqqK,
            Lambda::QH { .. } => FamilyId::QH,
            Lambda::QK { .. } => FamilyId::QK,
            Lambda::QqK { .. } => FamilyId::QqK,
            Lambda::AqK { .. } => FamilyId::AqK,
            Lambda::QR { .. } => FamilyId::QR,
            Lambda::DqH { .. } => FamilyId::DqH,
            Lambda::DqK { .. } => FamilyId::DqK,
        }
    }

    /// Parameter values in the order of [`FamilyId::param_names`].
    pub fn values(&self) -> Vec<Rational> {
        match self {
            Lambda::K { p }
            | Lambda::DqqK { p }
            | Lambda::QK { p }
            | Lambda::QqK { p }
            | Lambda::AqK { p }
            | Lambda::DqK { p } => vec![p.clone()],
            Lambda::H { a, b } | Lambda::DH { a, b } | Lambda::QH { a, b } | Lambda::DqH { a, b } => {
                vec![a.clone(), b.clone()]
            }
            Lambda::R { b, c, d } | Lambda::QR { b, c, d } => vec![b.clone(), c.clone(), d.clone()],
        }
    }

    pub fn from_values(family: FamilyId, values: &[Rational]) -> Option<Lambda> {
        let v = |i: usize| values.get(i).cloned();
        if values.len() != family.param_names().len() {
            return None;
        }
        Some(match family {
            FamilyId::K => Lambda::K { p: v(0)? },
            FamilyId::H => Lambda::H { a: v(0)?, b: v(1)? },
            FamilyId::R => Lambda::R { b: v(0)?, c: v(1)?, d: v(2)? },
            FamilyId::DH => Lambda::DH { a: v(0)?, b: v(1)? },
            FamilyId::DqqK => Lambda::DqqK { p: v(0)? },
            FamilyId::QH => Lambda::QH { a: v(0)?, b: v(1)? },
            FamilyId::QK => Lambda::QK { p: v(0)? },
            FamilyId::QqK => Lambda::QqK { p: v(0)? },
            FamilyId::AqK => Lambda::AqK { p: v(0)? },
            FamilyId::QR => Lambda::QR { b: v(0)?, c: v(1)?, d: v(2)? },
            FamilyId::DqH => Lambda::DqH { a: v(0)?, b: v(1)? },
            FamilyId::DqK => Lambda::DqK { p: v(0)? },
        })
    }
}

/// A fully specified member: lattice size `N`, the base `q` (q-families only) and the
/// family parameters. Derived quantities (`d~`, the composite `d`) are computed on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    size: u32,
    q: Option<Rational>,
    lambda: Lambda,
}

/// Terminating series data: upper and lower parameters and the argument.
/// For q-families the parameters are the bases `a` of `(a;q)_k`.
#[derive(Clone, Debug)]
struct SeriesData {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
    z: Rational,
}

/// A violated parameter-range predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub predicate: String,
}

impl FamilyParams {
    pub fn new(lambda: Lambda, size: u32, q: Option<Rational>) -> Result<Self, Error> {
        if size == 0 {
            return Err(Error::EmptyLattice);
        }
        Self::formal(lambda, size, q)
    }

    /// Like [`FamilyParams::new`] but accepts `N = 0`; used for the degree-lowering shifts.
    pub fn formal(lambda: Lambda, size: u32, q: Option<Rational>) -> Result<Self, Error> {
        let family = lambda.family();
        match (&q, family.is_q()) {
            (None, true) => return Err(Error::MissingQ(family)),
            (Some(_), false) => return Err(Error::UnexpectedQ(family)),
            _ => {}
        }
        Ok(Self { size, q, lambda })
    }

    /// Builds from named values, e.g. `[("p", 1/3)]`.
    pub fn from_named(
        family: FamilyId,
        size: u32,
        q: Option<Rational>,
        named: &[(String, Rational)],
    ) -> Result<Self, Error> {
        for (name, _) in named {
            if !family.param_names().contains(&name.as_str()) {
                return Err(Error::UnknownParameter { family, name: name.clone() });
            }
        }
        let mut values = Vec::new();
        for want in family.param_names() {
            let found = named
                .iter()
                .find(|(n, _)| n == want)
                .ok_or_else(|| Error::MissingParameter { family, name: String::from(*want) })?;
            values.push(found.1.clone());
        }
        let lambda = Lambda::from_values(family, &values).expect("arity checked");
        Self::new(lambda, size, q)
    }

    pub fn family(&self) -> FamilyId {
        self.lambda.family()
    }

    pub fn class(&self) -> CoordClass {
        self.family().class()
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    fn n(&self) -> i64 {
        self.size as i64
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn q(&self) -> Option<&Rational> {
        self.q.as_ref()
    }

    fn qq(&self) -> &Rational {
        self.q.as_ref().expect("q-family carries q")
    }

    fn qpow(&self, e: i64) -> Rational {
        powi(self.qq(), e)
    }

    pub fn named_values(&self) -> Vec<(&'static str, Rational)> {
        self.family().param_names().iter().copied().zip(self.lambda.values()).collect()
    }

    pub fn with_size(&self, size: u32) -> Self {
        Self { size, q: self.q.clone(), lambda: self.lambda.clone() }
    }

    pub fn with_lambda(&self, lambda: Lambda) -> Self {
        debug_assert_eq!(lambda.family(), self.family());
        Self { size: self.size, q: self.q.clone(), lambda }
    }

    /// `d~` for Racah and q-Racah.
    pub fn d_tilde(&self) -> Option<Rational> {
        match &self.lambda {
            Lambda::R { b, c, d } => Some(b + c - d - int(self.n() + 1)),
            Lambda::QR { b, c, d } => Some(b * c / d * self.qpow(-self.n() - 1)),
            _ => None,
        }
    }

    /// The parameter `d` entering the coordinate of classes (ii) and (v).
    pub fn coord_d(&self) -> Option<Rational> {
        match &self.lambda {
            Lambda::R { d, .. } | Lambda::QR { d, .. } => Some(d.clone()),
            Lambda::DH { a, b } => Some(a + b - int(1)),
            Lambda::DqH { a, b } => Some(a * b / self.qq()),
            Lambda::DqK { p } => Some(-p.clone()),
            _ => None,
        }
    }

    /// Lattice coordinate `s(x)`: `x` for the non-q families, `q^x` otherwise.
    pub fn coord(&self, x: i64) -> Rational {
        if self.class().is_q() {
            self.qpow(x)
        } else {
            int(x)
        }
    }

    /// `s(x + k)` given `s(x)`.
    pub fn coord_shift<T: Scalar>(&self, s: &T, k: i64) -> T {
        if self.class().is_q() {
            s.clone().scale(&self.qpow(k))
        } else {
            s.clone() + T::from_int(k)
        }
    }

    /// Sinusoidal coordinate as a function of `s`.
    pub fn eta_at<T: Scalar>(&self, s: &T) -> T {
        let one = || T::constant(Rational::one());
        let c = |r: Rational| T::constant(r);
        let inv = |s: &T| one().try_div(s.clone()).expect("q^x never vanishes");
        match self.class() {
            CoordClass::I => s.clone(),
            CoordClass::II => s.clone() * (s.clone() + c(self.coord_d().unwrap())),
            CoordClass::III => one() - s.clone(),
            CoordClass::IV => inv(s) - one(),
            CoordClass::V => (inv(s) - one()) * (one() - s.clone().scale(&self.coord_d().unwrap())),
        }
    }

    pub fn eta(&self, x: i64) -> Rational {
        self.eta_at(&self.coord(x))
    }

    /// `B` as a function of `s`; `x` only labels pole errors.
    pub fn b_at<T: Scalar>(&self, s: &T, x: i64) -> Result<T, Error> {
        self.lattice_coeff(s, x, true)
    }

    /// `D` as a function of `s`; `x` only labels pole errors.
    pub fn d_at<T: Scalar>(&self, s: &T, x: i64) -> Result<T, Error> {
        self.lattice_coeff(s, x, false)
    }

    /// `B(N) = 0` exactly: every family carries the factor `N - x` (or `q^(x-N) - 1`), even
    /// at parameters where the rational formula's denominator also vanishes there.
    pub fn b_coeff(&self, x: i64) -> Result<Rational, Error> {
        if x == self.n() {
            return Ok(Rational::zero());
        }
        self.b_at(&self.coord(x), x)
    }

    /// `D(0) = 0` exactly, for the same reason as `B(N)`.
    pub fn d_coeff(&self, x: i64) -> Result<Rational, Error> {
        if x == 0 {
            return Ok(Rational::zero());
        }
        self.d_at(&self.coord(x), x)
    }

    fn lattice_coeff<T: Scalar>(&self, s: &T, x: i64, upper: bool) -> Result<T, Error> {
        let one = || T::constant(Rational::one());
        let c = |r: Rational| T::constant(r);
        let lin = |a: Rational, b: Rational| c(a) + s.clone().scale(&b); // a + b s
        let what = if upper { "B" } else { "D" };
        let div = |num: T, den: T| num.try_div(den).ok_or(Error::Pole { what, x });
        let n = self.n();
        let nn = || int(n);
        let r1 = Rational::one();
        match (&self.lambda, upper) {
            (Lambda::K { p }, true) => Ok(lin(nn(), -r1.clone()).scale(p)),
            (Lambda::K { p }, false) => Ok(s.clone().scale(&(int(1) - p))),
            (Lambda::H { a, .. }, true) => Ok(lin(a.clone(), r1.clone()) * lin(nn(), -r1)),
            (Lambda::H { b, .. }, false) => Ok(s.clone() * lin(b + nn(), -r1)),
            (Lambda::R { b, c: cc, d }, true) => div(
                lin(b.clone(), r1.clone()) * lin(cc.clone(), r1.clone()) * lin(d.clone(), r1.clone()) * lin(nn(), -r1),
                lin(d.clone(), int(2)) * lin(d + int(1), int(2)),
            ),
            (Lambda::R { b, c: cc, d }, false) => div(
                lin(b - d, -r1.clone()) * lin(d - cc, r1.clone()) * s.clone() * lin(d + nn(), r1),
                lin(d - int(1), int(2)) * lin(d.clone(), int(2)),
            ),
            (Lambda::DH { a, b }, true) => {
                let ab = a + b;
                div(
                    lin(a.clone(), r1.clone()) * lin(&ab - int(1), r1.clone()) * lin(nn(), -r1),
                    lin(&ab - int(1), int(2)) * lin(ab, int(2)),
                )
            }
            (Lambda::DH { a, b }, false) => {
                let ab = a + b;
                div(
                    s.clone() * lin(b - int(1), r1.clone()) * lin(&ab + nn() - int(1), r1),
                    lin(&ab - int(2), int(2)) * lin(ab - int(1), int(2)),
                )
            }
            (Lambda::DqqK { p }, true) => {
                // p^-1 q^{-x-N-1} (1 - q^{N-x})
                let sinv = div(one(), s.clone())?;
                let pref = r1.clone() / p * self.qpow(-n - 1);
                Ok(sinv.clone().scale(&pref) * (one() - sinv.scale(&self.qpow(n))))
            }
            (Lambda::DqqK { p }, false) => {
                let sinv = div(one(), s.clone())?;
                Ok((sinv.clone() - one()) * (one() - sinv.scale(&(r1 / p))))
            }
            (Lambda::QH { a, .. }, true) => Ok(lin(r1.clone(), -a.clone()) * lin(-r1, self.qpow(-n))),
            (Lambda::QH { a, b }, false) => {
                let pref = a / self.qq();
                Ok(lin(r1.clone(), -r1).scale(&pref) * lin(-b.clone(), self.qpow(-n)))
            }
            (Lambda::QK { .. }, true) => Ok(lin(-r1, self.qpow(-n))),
            (Lambda::QK { p }, false) => Ok(lin(r1.clone(), -r1).scale(p)),
            (Lambda::QqK { p }, true) => Ok(s.clone().scale(&(r1.clone() / p)) * lin(-r1, self.qpow(-n))),
            (Lambda::QqK { p }, false) => {
                let k = self.qpow(-n - 1) / p;
                Ok(lin(r1.clone(), -r1.clone()) * lin(r1, -k))
            }
            (Lambda::AqK { p }, true) => Ok(lin(-r1.clone(), self.qpow(-n)) * lin(r1, -(p * self.qq()))),
            (Lambda::AqK { p }, false) => Ok(s.clone().scale(&(p * self.qpow(-n))) * lin(r1.clone(), -r1)),
            (Lambda::QR { b, c: cc, d }, true) => {
                let s2 = s.clone() * s.clone();
                div(
                    lin(r1.clone(), -b.clone())
                        * lin(r1.clone(), -cc.clone())
                        * lin(r1.clone(), -d.clone())
                        * lin(-r1.clone(), self.qpow(-n)),
                    (one() - s2.clone().scale(d)) * (one() - s2.scale(&(d * self.qq()))),
                )
            }
            (Lambda::QR { b, c: cc, d }, false) => {
                let s2 = s.clone() * s.clone();
                let dt = self.d_tilde().unwrap();
                div(
                    lin(-r1.clone(), d / b)
                        * lin(r1.clone(), -(d / cc))
                        * lin(r1.clone(), -r1.clone())
                        * lin(r1, -(d * self.qpow(n))),
                    (one() - s2.clone().scale(&(d / self.qq()))) * (one() - s2.scale(d)),
                )
                .map(|v| v.scale(&dt))
            }
            (Lambda::DqH { a, b }, true) => {
                let s2 = s.clone() * s.clone();
                let ab = a * b;
                div(
                    lin(r1.clone(), -a.clone()) * lin(r1.clone(), -(&ab / self.qq())) * lin(-r1, self.qpow(-n)),
                    (one() - s2.clone().scale(&(&ab / self.qq()))) * (one() - s2.scale(&ab)),
                )
            }
            (Lambda::DqH { a, b }, false) => {
                let s2 = s.clone() * s.clone();
                let ab = a * b;
                let pref = a * self.qpow(-n - 1);
                div(
                    s.clone().scale(&pref)
                        * lin(r1.clone(), -r1.clone())
                        * lin(r1.clone(), -(b / self.qq()))
                        * lin(r1, -(&ab * self.qpow(n - 1))),
                    (one() - s2.clone().scale(&(&ab * self.qpow(-2)))) * (one() - s2.scale(&(&ab / self.qq()))),
                )
            }
            (Lambda::DqK { p }, true) => {
                let s2 = s.clone() * s.clone();
                div(
                    lin(-r1.clone(), self.qpow(-n)) * lin(r1, p.clone()),
                    (one() + s2.clone().scale(p)) * (one() + s2.scale(&(p * self.qq()))),
                )
            }
            (Lambda::DqK { p }, false) => {
                let s2 = s.clone() * s.clone();
                let pref = p * self.qpow(-n - 1);
                div(
                    s2.clone().scale(&pref) * lin(r1.clone(), -r1.clone()) * lin(r1, p * self.qpow(n)),
                    (one() + s2.clone().scale(&(p / self.qq()))) * (one() + s2.scale(p)),
                )
            }
        }
    }

    /// Eigenvalue `E(n)`; defined for every `n >= 0`.
    pub fn energy(&self, n: u64) -> Rational {
        let n_r = int(n as i64);
        match &self.lambda {
            Lambda::K { .. } | Lambda::DH { .. } => n_r,
            Lambda::H { a, b } => &n_r * (&n_r + a + b - int(1)),
            Lambda::R { .. } => &n_r * (&n_r + self.d_tilde().unwrap()),
            Lambda::DqqK { .. } | Lambda::AqK { .. } | Lambda::DqH { .. } | Lambda::DqK { .. } => {
                self.qpow(-(n as i64)) - int(1)
            }
            Lambda::QH { a, b } => (self.qpow(-(n as i64)) - int(1)) * (int(1) - a * b * self.qpow(n as i64 - 1)),
            Lambda::QK { p } => (self.qpow(-(n as i64)) - int(1)) * (int(1) + p * self.qpow(n as i64)),
            Lambda::QqK { .. } => int(1) - self.qpow(n as i64),
            Lambda::QR { .. } => {
                (self.qpow(-(n as i64)) - int(1)) * (int(1) - self.d_tilde().unwrap() * self.qpow(n as i64))
            }
        }
    }

    fn series_data(&self, n: u64, x: i64) -> SeriesData {
        let nn = self.n();
        let n_i = n as i64;
        let r = |v: i64| int(v);
        match &self.lambda {
            Lambda::K { p } => SeriesData { upper: vec![r(-n_i), r(-x)], lower: vec![r(-nn)], z: int(1) / p },
            Lambda::H { a, b } => SeriesData {
                upper: vec![r(-n_i), r(n_i) + a + b - r(1), r(-x)],
                lower: vec![a.clone(), r(-nn)],
                z: int(1),
            },
            Lambda::R { b, c, d } => SeriesData {
                upper: vec![r(-n_i), r(n_i) + self.d_tilde().unwrap(), r(-x), r(x) + d],
                lower: vec![b.clone(), c.clone(), r(-nn)],
                z: int(1),
            },
            Lambda::DH { a, b } => SeriesData {
                upper: vec![r(-n_i), r(x) + a + b - r(1), r(-x)],
                lower: vec![a.clone(), r(-nn)],
                z: int(1),
            },
            Lambda::DqqK { p } => SeriesData {
                upper: vec![self.qpow(-n_i), self.qpow(-x)],
                lower: vec![self.qpow(-nn)],
                z: p * self.qpow(x + 1),
            },
            Lambda::QH { a, b } => SeriesData {
                upper: vec![self.qpow(-n_i), a * b * self.qpow(n_i - 1), self.qpow(-x)],
                lower: vec![a.clone(), self.qpow(-nn)],
                z: self.qq().clone(),
            },
            Lambda::QK { p } => SeriesData {
                upper: vec![self.qpow(-n_i), self.qpow(-x), -(p * self.qpow(n_i))],
                lower: vec![self.qpow(-nn), Rational::zero()],
                z: self.qq().clone(),
            },
            Lambda::QqK { p } => SeriesData {
                upper: vec![self.qpow(-n_i), self.qpow(-x)],
                lower: vec![self.qpow(-nn)],
                z: p * self.qpow(n_i + 1),
            },
            Lambda::AqK { p } => SeriesData {
                upper: vec![self.qpow(-n_i), self.qpow(-x), Rational::zero()],
                lower: vec![p * self.qq(), self.qpow(-nn)],
                z: self.qq().clone(),
            },
            Lambda::QR { b, c, d } => SeriesData {
                upper: vec![self.qpow(-n_i), self.d_tilde().unwrap() * self.qpow(n_i), self.qpow(-x), d * self.qpow(x)],
                lower: vec![b.clone(), c.clone(), self.qpow(-nn)],
                z: self.qq().clone(),
            },
            Lambda::DqH { a, b } => SeriesData {
                upper: vec![self.qpow(-n_i), a * b * self.qpow(x - 1), self.qpow(-x)],
                lower: vec![a.clone(), self.qpow(-nn)],
                z: self.qq().clone(),
            },
            Lambda::DqK { p } => SeriesData {
                upper: vec![self.qpow(-n_i), self.qpow(-x), -(p * self.qpow(x))],
                lower: vec![self.qpow(-nn), Rational::zero()],
                z: self.qq().clone(),
            },
        }
    }

    /// `P_n(x)` from its terminating series, normalised so that `P_n(0) = 1`.
    /// Any integer `x` is accepted; the degree must satisfy `n <= N`.
    pub fn eval_p(&self, n: u64, x: i64) -> Result<Rational, Error> {
        if n > self.size as u64 {
            return Err(Error::DegreeOutOfRange { n, max: self.size as u64 });
        }
        let data = self.series_data(n, x);
        let mut sum = Rational::one();
        let mut term = Rational::one();
        match &self.q {
            None => {
                for k in 0..n as i64 {
                    let kk = int(k);
                    let mut num = data.z.clone();
                    for a in &data.upper {
                        num *= a + &kk;
                    }
                    if num.is_zero() {
                        break;
                    }
                    let mut den = int(k + 1);
                    for b in &data.lower {
                        den *= b + &kk;
                    }
                    if den.is_zero() {
                        return Err(Error::Pole { what: "series", x });
                    }
                    term = term * num / den;
                    sum += &term;
                }
            }
            Some(q) => {
                let mut upper = data.upper.clone();
                let mut lower = data.lower.clone();
                let mut qk1 = q.clone();
                for _ in 0..n {
                    let mut num = data.z.clone();
                    for a in &upper {
                        num *= int(1) - a;
                    }
                    if num.is_zero() {
                        break;
                    }
                    let mut den = int(1) - &qk1;
                    for b in &lower {
                        den *= int(1) - b;
                    }
                    if den.is_zero() {
                        return Err(Error::Pole { what: "series", x });
                    }
                    term = term * num / den;
                    sum += &term;
                    for a in upper.iter_mut() {
                        *a *= q;
                    }
                    for b in lower.iter_mut() {
                        *b *= q;
                    }
                    qk1 *= q;
                }
            }
        }
        Ok(sum)
    }

    /// Every violated range predicate, plus positivity of `B` and `D` on the lattice.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut need = |ok: bool, text: String| {
            if !ok {
                out.push(Violation { predicate: text });
            }
        };
        let zero = Rational::zero();
        let one = Rational::one();
        need(self.size >= 1, String::from("N>=1"));
        if let Some(q) = &self.q {
            need(q > &zero && q < &one, String::from("0<q<1"));
            if !(q > &zero && q < &one) {
                return out;
            }
        }
        let n = self.n();
        match &self.lambda {
            Lambda::K { p } => need(p > &zero && p < &one, String::from("0<p<1")),
            Lambda::H { a, b } | Lambda::DH { a, b } => {
                need(a > &zero, String::from("a>0"));
                need(b > &zero, String::from("b>0"));
            }
            Lambda::R { b, c, d } => {
                need(d > &zero && d < &(b - int(n)), String::from("0<d<b-N"));
                need(c > &zero && c < &(d + int(1)), String::from("0<c<1+d"));
            }
            Lambda::DqqK { p } | Lambda::QqK { p } => need(p > &self.qpow(-n), String::from("p>q^-N")),
            Lambda::QH { a, b } | Lambda::DqH { a, b } => {
                need(a > &zero && a < &one, String::from("0<a<1"));
                need(b > &zero && b < &one, String::from("0<b<1"));
            }
            Lambda::QK { p } | Lambda::DqK { p } => need(p > &zero, String::from("p>0")),
            Lambda::AqK { p } => need(p > &zero && p < &self.qpow(-1), String::from("0<p<q^-1")),
            Lambda::QR { b, c, d } => {
                let bqn = b * self.qpow(-n);
                need(bqn > zero && &bqn < d && d < &one, String::from("0<bq^-N<d<1"));
                need(&(self.qq() * d) < c && c < &one, String::from("qd<c<1"));
            }
        }
        for x in 0..n {
            match self.b_coeff(x) {
                Ok(v) if v.is_positive() => {}
                _ => need(false, format!("B({x})>0")),
            }
        }
        for x in 1..=n {
            match self.d_coeff(x) {
                Ok(v) if v.is_positive() => {}
                _ => need(false, format!("D({x})>0")),
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Parameters after `M` forward x-shifts: `N -> N + M` with `d -> d - M` (class ii),
    /// `p -> p q^-M` (class iii), `d -> d q^-M` (class v); classes (i) and (iv) keep `lambda`.
    pub fn xshifted(&self, m: u32) -> FamilyParams {
        let mi = m as i64;
        let lambda = match &self.lambda {
            Lambda::R { b, c, d } => Lambda::R { b: b.clone(), c: c.clone(), d: d - int(mi) },
            Lambda::DH { a, b } => Lambda::DH { a: a.clone(), b: b - int(mi) },
            Lambda::DqqK { p } => Lambda::DqqK { p: p * self.qpow(-mi) },
            Lambda::QR { b, c, d } => Lambda::QR { b: b.clone(), c: c.clone(), d: d * self.qpow(-mi) },
            Lambda::DqH { a, b } => Lambda::DqH { a: a.clone(), b: b * self.qpow(-mi) },
            Lambda::DqK { p } => Lambda::DqK { p: p * self.qpow(-mi) },
            other => other.clone(),
        };
        FamilyParams { size: self.size + m, q: self.q.clone(), lambda }
    }

    /// Checks the mirror symmetry `P_n(N - x)` against the family's reflected partner for
    /// all `x` in the lattice. Defined for Krawtchouk and Hahn only.
    pub fn mirror_check(&self, n: u64) -> Result<bool, Error> {
        let n_i = n as i64;
        let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
        let (factor, partner) = match &self.lambda {
            Lambda::K { p } => {
                let f = sign * pow(&(int(1) / p - int(1)), n_i)?;
                (f, self.with_lambda(Lambda::K { p: int(1) - p }))
            }
            Lambda::H { a, b } => {
                let f = sign * rising_factorial(b, n as usize) / rising_factorial(a, n as usize);
                (f, self.with_lambda(Lambda::H { a: b.clone(), b: a.clone() }))
            }
            _ => return Err(Error::UnsupportedFamily { family: self.family(), op: "mirror symmetry" }),
        };
        for x in 0..=self.n() {
            let lhs = self.eval_p(n, self.n() - x)?;
            let rhs = &factor * partner.eval_p(n, x)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
