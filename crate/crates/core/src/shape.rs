//! The contiguous seed set `{0, ..., M-1}`: closed-form Casoratians, the summation identities
//! for `P_n(x + M; N + M, ...)`, forward and backward x-shift operators and the two operator
//! factorisations.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{binomial, int, powi, q_binomial, q_pochhammer, rising_factorial, Rational};
use crate::darboux::{lattice_limit, Neighbourhood};
use crate::diophantine::{apply_difference, to_eta_poly, ZeroNormData};
use crate::error::Error;
use crate::family::{CoordClass, FamilyId, FamilyParams, Lambda, Violation};
use crate::linalg::determinant;
use crate::poly::EtaPolynomial;
use crate::scalar::{Scalar, Series};

fn nonzero(v: Rational, what: &'static str, x: i64) -> Result<Rational, Error> {
    if v.is_zero() {
        Err(Error::Pole { what, x })
    } else {
        Ok(v)
    }
}

fn sign(k: i64) -> Rational {
    if k % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn q_of(params: &FamilyParams) -> Rational {
    params.q().cloned().unwrap_or_else(Rational::one)
}

/// `c(M) = prod_{k=1}^{M-1} k!`.
pub fn c_const(m: u32) -> Rational {
    (1..m as usize).fold(int(1), |acc, k| acc * rising_factorial(&int(1), k))
}

/// `c(N, M) = (-1)^M (N+1)_M c(M)`.
pub fn c_const_n(n: u32, m: u32) -> Rational {
    sign(m as i64) * rising_factorial(&int(n as i64 + 1), m as usize) * c_const(m)
}

/// `c_q(M) = q^{-M(M-1)(2M-1)/6} prod_{k=1}^{M-1} (q;q)_k`.
pub fn cq_const(q: &Rational, m: u32) -> Rational {
    let mi = m as i64;
    (1..m as usize).fold(powi(q, -mi * (mi - 1) * (2 * mi - 1) / 6), |acc, k| acc * q_pochhammer(q, q, k))
}

/// `c_q(N, M) = (-1)^M q^{-M(M-1)/2} (q^{N+1};q)_M c_q(M)`.
pub fn cq_const_n(q: &Rational, n: u32, m: u32) -> Rational {
    let mi = m as i64;
    sign(mi) * powi(q, -mi * (mi - 1) / 2) * q_pochhammer(&powi(q, n as i64 + 1), q, m as usize) * cq_const(q, m)
}

/// The four Casoratians that determine the contiguous Darboux transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasoratianKind {
    /// `W[1, eta, ..., eta^{M-1}](x)`.
    Vandermonde,
    /// `Lambda(x) W[1, ..., eta^{M-1}, 1/Lambda](x)`.
    LambdaLeft,
    /// `Lambda(x+M) W[1, ..., eta^{M-1}, 1/Lambda](x)`.
    LambdaRight,
    /// `Lambda(x) W[1, ..., eta^{M-1}, P_n/Lambda](x)`.
    Eigen(u64),
}

fn poch(a: Rational, n: usize) -> Rational {
    rising_factorial(&a, n)
}

fn qpoch(a: Rational, q: &Rational, n: usize) -> Rational {
    q_pochhammer(&a, q, n)
}

/// `T(x, M, j, d)` with the `j = 0` and `j = M` branches taken literally, dropping the
/// factor whose length would be `-1`.
pub fn t_factor(x: i64, m: u32, j: u32, d: &Rational) -> Rational {
    let (mi, ji) = (m as usize, j as usize);
    let two_x = int(2 * x);
    if j == 0 {
        poch(&two_x + int(m as i64 + 1) + d, mi - 1)
    } else if j == m {
        poch(&two_x + int(1) + d, mi - 1)
    } else {
        poch(&two_x + int((m + j) as i64 + 1) + d, mi - ji - 1)
            * poch(&two_x + int(1) + d, ji - 1)
            * (&two_x + int(2 * j as i64) + d)
    }
}

/// `T_q(x, M, j, d)`, same branch convention.
pub fn tq_factor(q: &Rational, x: i64, m: u32, j: u32, d: &Rational) -> Rational {
    let (mi, ji) = (m as usize, j as usize);
    let dq = |k: i64| d * powi(q, 2 * x + k);
    if j == 0 {
        qpoch(dq(m as i64 + 1), q, mi - 1)
    } else if j == m {
        qpoch(dq(1), q, mi - 1)
    } else {
        qpoch(dq((m + j) as i64 + 1), q, mi - ji - 1) * qpoch(dq(1), q, ji - 1) * (int(1) - dq(2 * j as i64))
    }
}

/// Coefficients of `P_n(x + j)`, `j = 0..=M`, in the summation identity.
pub fn xshift_sum_terms(params: &FamilyParams, m: u32, x: i64) -> Vec<Rational> {
    let nn = params.size() as i64;
    let mu = m as usize;
    let q = q_of(params);
    let qp = |k: i64| powi(&q, k);
    (0..=m)
        .map(|j| {
            let ji = j as i64;
            let ju = j as usize;
            let s = sign(ji);
            match params.class() {
                CoordClass::I => s * binomial(m as u64, ji) * poch(int(x + 1 + ji), mu - ju) * poch(int(x - nn), ju),
                CoordClass::II => {
                    let d = params.coord_d().unwrap();
                    s * binomial(m as u64, ji)
                        * t_factor(x, m, j, &d)
                        * poch(int(x + 1 + ji), mu - ju)
                        * poch(int(x + 1 + ji + nn) + &d, mu - ju)
                        * poch(int(x - nn), ju)
                        * poch(int(x) + &d, ju)
                }
                CoordClass::III => {
                    s * q_binomial(m as u64, ji, &q)
                        * qp(ji * (ji + 1) / 2 + m as i64 * (nn - ji))
                        * qpoch(qp(x + 1 + ji), &q, mu - ju)
                        * qpoch(qp(x - nn), &q, ju)
                }
                CoordClass::IV => {
                    s * q_binomial(m as u64, ji, &q)
                        * qp(ji * (ji + 1) / 2 + nn * ji)
                        * qpoch(qp(x + 1 + ji), &q, mu - ju)
                        * qpoch(qp(x - nn), &q, ju)
                }
                CoordClass::V => {
                    let d = params.coord_d().unwrap();
                    s * q_binomial(m as u64, ji, &q)
                        * qp(ji * (ji + 1) / 2 + nn * ji)
                        * tq_factor(&q, x, m, j, &d)
                        * qpoch(qp(x + 1 + ji), &q, mu - ju)
                        * qpoch(&d * qp(x + 1 + ji + nn), &q, mu - ju)
                        * qpoch(qp(x - nn), &q, ju)
                        * qpoch(&d * qp(x), &q, ju)
                }
            }
        })
        .collect()
}

/// Factor multiplying `P_n(x + M; N + M, ...)` on the right of the summation identity.
pub fn xshift_sum_factor(params: &FamilyParams, m: u32, x: i64) -> Rational {
    let nn = params.size() as i64;
    let mu = m as usize;
    let q = q_of(params);
    match params.class() {
        CoordClass::I => poch(int(nn + 1), mu),
        CoordClass::II => {
            let d = params.coord_d().unwrap();
            poch(int(nn + 1), mu) * poch(int(2 * x + 1) + d, 2 * mu - 1)
        }
        CoordClass::III => qpoch(powi(&q, nn + 1), &q, mu) * powi(&q, m as i64 * x),
        CoordClass::IV => qpoch(powi(&q, nn + 1), &q, mu),
        CoordClass::V => {
            let d = params.coord_d().unwrap();
            qpoch(powi(&q, nn + 1), &q, mu) * qpoch(d * powi(&q, 2 * x + 1), &q, 2 * mu - 1)
        }
    }
}

/// Both sides of the summation identity for degree `n` at `x`.
pub fn xshift_sum_sides(params: &FamilyParams, m: u32, n: u64, x: i64) -> Result<(Rational, Rational), Error> {
    let p = to_eta_poly(params, n)?;
    let lhs = xshift_sum_terms(params, m, x)
        .into_iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (j, c)| acc + c * p.eval(&params.eta(x + j as i64)));
    let shifted = params.xshifted(m);
    let rhs = xshift_sum_factor(params, m, x) * to_eta_poly(&shifted, n)?.eval(&shifted.eta(x + m as i64));
    Ok((lhs, rhs))
}

pub fn xshift_sum_check(params: &FamilyParams, m: u32, n: u64, x: i64) -> Result<bool, Error> {
    let (lhs, rhs) = xshift_sum_sides(params, m, n, x)?;
    Ok(lhs == rhs)
}

/// Closed form of one of the four Casoratians.
pub fn closed_casoratian(params: &FamilyParams, m: u32, kind: CasoratianKind, x: i64) -> Result<Rational, Error> {
    let nn = params.size();
    let ni = nn as i64;
    let mi = m as i64;
    let mu = m as usize;
    let q = q_of(params);
    let qp = |k: i64| powi(&q, k);
    let what = "closed-form Casoratian";
    let eigen_sum = |n: u64| -> Result<Rational, Error> {
        let p = to_eta_poly(params, n)?;
        Ok(xshift_sum_terms(params, m, x)
            .into_iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * p.eval(&params.eta(x + j as i64))))
    };
    let value = match params.class() {
        CoordClass::I => match kind {
            CasoratianKind::Vandermonde => c_const(m),
            CasoratianKind::LambdaLeft => c_const_n(nn, m) / nonzero(poch(int(x + 1), mu), what, x)?,
            CasoratianKind::LambdaRight => c_const_n(nn, m) / nonzero(poch(int(x - ni), mu), what, x)?,
            CasoratianKind::Eigen(n) => sign(mi) * c_const(m) / nonzero(poch(int(x + 1), mu), what, x)? * eigen_sum(n)?,
        },
        CoordClass::II => {
            let d = params.coord_d().unwrap();
            let prod = |upto: u32, shift: i64| {
                (1..=upto as i64).fold(int(1), |acc, k| acc * poch(int(2 * x + k + shift) + &d, k as usize))
            };
            match kind {
                CasoratianKind::Vandermonde => c_const(m) * prod(m.saturating_sub(1), 0),
                CasoratianKind::LambdaLeft => {
                    let den = poch(int(x + 1), mu) * poch(int(x + ni + 1) + &d, mu);
                    c_const_n(nn, m) * prod(m, 0) / nonzero(den, what, x)?
                }
                CasoratianKind::LambdaRight => {
                    let den = poch(int(x - ni), mu) * poch(int(x) + &d, mu);
                    c_const_n(nn, m) * prod(m, 0) / nonzero(den, what, x)?
                }
                CasoratianKind::Eigen(n) => {
                    let den = poch(int(x + 1), mu) * poch(int(x + ni + 1) + &d, mu);
                    sign(mi) * c_const(m) * prod(m.saturating_sub(2), 2) / nonzero(den, what, x)? * eigen_sum(n)?
                }
            }
        }
        CoordClass::III => match kind {
            CasoratianKind::Vandermonde => {
                cq_const(&q, m) * qp(mi * (mi - 1) * x / 2) * qp(mi * (mi - 1) * (mi - 1) / 2)
            }
            CasoratianKind::LambdaLeft | CasoratianKind::LambdaRight => {
                let num = cq_const_n(&q, nn, m) * qp(mi * (mi + 1) * x / 2) * qp(mi * (mi * mi - 2 * ni - 1) / 2);
                let base = if kind == CasoratianKind::LambdaLeft { qp(x + 1) } else { qp(x - ni) };
                num / nonzero(qpoch(base, &q, mu), what, x)?
            }
            CasoratianKind::Eigen(n) => {
                sign(mi) * cq_const(&q, m) * qp(mi * (mi - 1) * x / 2) * qp(mi * mi * (mi - 1) / 2 - mi * ni)
                    / nonzero(qpoch(qp(x + 1), &q, mu), what, x)?
                    * eigen_sum(n)?
            }
        },
        CoordClass::IV => match kind {
            CasoratianKind::Vandermonde => cq_const(&q, m) * qp(-mi * (mi - 1) * x / 2),
            CasoratianKind::LambdaLeft => {
                cq_const_n(&q, nn, m) * qp(-mi * (mi - 1) * x / 2) / nonzero(qpoch(qp(x + 1), &q, mu), what, x)?
            }
            CasoratianKind::LambdaRight => {
                cq_const_n(&q, nn, m) * qp(-mi * (mi - 1) * x / 2)
                    / nonzero(qp(mi * (ni + 1)) * qpoch(qp(x - ni), &q, mu), what, x)?
            }
            CasoratianKind::Eigen(n) => {
                sign(mi) * cq_const(&q, m) * qp(-mi * (mi - 1) * x / 2) * qp(-mi * (mi - 1) / 2)
                    / nonzero(qpoch(qp(x + 1), &q, mu), what, x)?
                    * eigen_sum(n)?
            }
        },
        CoordClass::V => {
            let d = params.coord_d().unwrap();
            let prod = |upto: u32, shift: i64| {
                (1..=upto as i64).fold(int(1), |acc, k| acc * qpoch(&d * qp(2 * x + k + shift), &q, k as usize))
            };
            match kind {
                CasoratianKind::Vandermonde => {
                    cq_const(&q, m) * qp(-mi * (mi - 1) * x / 2) * prod(m.saturating_sub(1), 0)
                }
                CasoratianKind::LambdaLeft => {
                    let den = qpoch(qp(x + 1), &q, mu) * qpoch(&d * qp(x + 1 + ni), &q, mu);
                    cq_const_n(&q, nn, m) * qp(-mi * (mi - 1) * x / 2) * prod(m, 0) / nonzero(den, what, x)?
                }
                CasoratianKind::LambdaRight => {
                    let den = qp(mi * (ni + 1)) * qpoch(qp(x - ni), &q, mu) * qpoch(&d * qp(x), &q, mu);
                    cq_const_n(&q, nn, m) * qp(-mi * (mi - 1) * x / 2) * prod(m, 0) / nonzero(den, what, x)?
                }
                CasoratianKind::Eigen(n) => {
                    let den = qpoch(qp(x + 1), &q, mu) * qpoch(&d * qp(x + ni + 1), &q, mu);
                    sign(mi)
                        * cq_const(&q, m)
                        * qp(-mi * (mi - 1) * x / 2)
                        * qp(-mi * (mi - 1) / 2)
                        * prod(m.saturating_sub(2), 2)
                        / nonzero(den, what, x)?
                        * eigen_sum(n)?
                }
            }
        }
    };
    Ok(value)
}

/// The same Casoratian as a determinant of the seed quotients `Q_0, ..., Q_{M-1}`, with the
/// lattice singularities resolved by series expansion.
pub fn casoratian_by_determinant(
    params: &FamilyParams,
    zero_norm: &ZeroNormData,
    m: u32,
    kind: CasoratianKind,
    x: i64,
) -> Result<Rational, Error> {
    let mi = m as i64;
    let seeds: Vec<&EtaPolynomial> = zero_norm.quotients.iter().take(m as usize).collect();
    let lambda = &zero_norm.lambda;
    if kind == CasoratianKind::Vandermonde {
        let columns: Vec<Vec<Rational>> =
            seeds.iter().map(|p| (0..mi).map(|j| p.eval(&params.eta(x + j))).collect()).collect();
        let rows = (0..m as usize).map(|j| columns.iter().map(|c| c[j].clone()).collect()).collect();
        return Ok(determinant(rows).unwrap_or_else(Rational::zero));
    }
    let eigen = match kind {
        CasoratianKind::Eigen(n) => Some(to_eta_poly(params, n)?),
        _ => None,
    };
    lattice_limit(params, x, "Casoratian", |s| {
        let nb = Neighbourhood::new(params, s, 0, mi + 1);
        let extra = |j: i64| {
            let num = match &eigen {
                Some(p) => nb.poly(p, j),
                None => Series::exact(int(1)),
            };
            num.try_div(nb.poly(lambda, j))
        };
        let w = nb.wronskian(&seeds, Some(&extra), 0)?;
        let outer = if kind == CasoratianKind::LambdaRight { mi } else { 0 };
        Some(nb.poly(lambda, outer) * w)
    })
}

fn class_d<T: Scalar>(params: &FamilyParams) -> T {
    T::constant(params.coord_d().unwrap_or_else(Rational::zero))
}

/// `B-bar(x)` for the contiguous seed set in closed form, evaluated with
/// removable singularities resolved.
pub fn closed_bbar(params: &FamilyParams, m: u32, x: i64) -> Result<Rational, Error> {
    let mi = m as i64;
    let nn = params.size() as i64;
    lattice_limit(params, x, "closed B-bar", |s| {
        let one = || Series::exact(int(1));
        let c = |k: i64| Series::exact(int(k));
        let b = params.b_at(&params.coord_shift(s, mi), x + mi).ok()?;
        let ratio = match params.class() {
            CoordClass::I => (c(nn) - s.clone()).try_div(c(nn - mi) - s.clone())?,
            CoordClass::II => {
                let d: Series = class_d(params);
                let two_x = s.clone() * c(2);
                let num = (c(nn) - s.clone())
                    * (s.clone() + d.clone())
                    * (two_x.clone() + c(2 * mi) + d.clone())
                    * (two_x.clone() + c(2 * mi + 1) + d.clone());
                let den = (c(nn - mi) - s.clone())
                    * (s.clone() + d.clone() + c(mi))
                    * (two_x.clone() + c(mi) + d.clone())
                    * (two_x + c(mi + 1) + d);
                num.try_div(den)?
            }
            CoordClass::III | CoordClass::IV => {
                let q = q_of(params);
                let num = one() - s.clone().scale(&powi(&q, -nn));
                let den = one() - s.clone().scale(&powi(&q, mi - nn));
                let r = num.try_div(den)?;
                if params.class() == CoordClass::III {
                    r.scale(&powi(&q, mi))
                } else {
                    r
                }
            }
            CoordClass::V => {
                let q = q_of(params);
                let d = params.coord_d().unwrap();
                let s2 = s.clone() * s.clone();
                let dq2 = |k: i64| one() - s2.clone().scale(&(&d * powi(&q, k)));
                let num = (one() - s.clone().scale(&powi(&q, -nn)))
                    * (one() - s.clone().scale(&d))
                    * dq2(2 * mi)
                    * dq2(2 * mi + 1);
                let den = (one() - s.clone().scale(&powi(&q, mi - nn)))
                    * (one() - s.clone().scale(&(&d * powi(&q, mi))))
                    * dq2(mi)
                    * dq2(mi + 1);
                num.try_div(den)?
            }
        };
        Some(b * ratio)
    })
}

/// `D-bar(x)` for the contiguous seed set in closed form.
pub fn closed_dbar(params: &FamilyParams, m: u32, x: i64) -> Result<Rational, Error> {
    let mi = m as i64;
    let nn = params.size() as i64;
    lattice_limit(params, x, "closed D-bar", |s| {
        let one = || Series::exact(int(1));
        let c = |k: i64| Series::exact(int(k));
        let dcoef = params.d_at(s, x).ok()?;
        let ratio = match params.class() {
            CoordClass::I => (s.clone() + c(mi)).try_div(s.clone())?,
            CoordClass::II => {
                let d: Series = class_d(params);
                let two_x = s.clone() * c(2);
                let num = (s.clone() + c(mi))
                    * (s.clone() + c(nn + mi) + d.clone())
                    * (two_x.clone() + c(-1) + d.clone())
                    * (two_x.clone() + d.clone());
                let den = s.clone()
                    * (s.clone() + c(nn) + d.clone())
                    * (two_x.clone() + c(mi - 1) + d.clone())
                    * (two_x + c(mi) + d);
                num.try_div(den)?
            }
            CoordClass::III | CoordClass::IV => {
                let q = q_of(params);
                let r = (one() - s.clone().scale(&powi(&q, mi))).try_div(one() - s.clone())?;
                if params.class() == CoordClass::III {
                    r.scale(&powi(&q, -mi))
                } else {
                    r
                }
            }
            CoordClass::V => {
                let q = q_of(params);
                let d = params.coord_d().unwrap();
                let s2 = s.clone() * s.clone();
                let dq2 = |k: i64| one() - s2.clone().scale(&(&d * powi(&q, k)));
                let num = (one() - s.clone().scale(&powi(&q, mi)))
                    * (one() - s.clone().scale(&(&d * powi(&q, mi + nn))))
                    * dq2(-1)
                    * dq2(0);
                let den = (one() - s.clone()) * (one() - s.clone().scale(&(&d * powi(&q, nn)))) * dq2(mi - 1) * dq2(mi);
                num.try_div(den)?
            }
        };
        Some(dcoef * ratio)
    })
}

/// Direction and role of a two-term shift operator `a0(x) + a1(x) e^{+-d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftKind {
    ForwardX,
    BackwardX,
    ForwardN,
    BackwardN,
}

#[derive(Clone, Debug)]
pub struct ShiftOperator {
    pub kind: ShiftKind,
    pub params: FamilyParams,
}

pub fn forward_xshift(params: &FamilyParams) -> ShiftOperator {
    ShiftOperator { kind: ShiftKind::ForwardX, params: params.clone() }
}

pub fn backward_xshift(params: &FamilyParams) -> ShiftOperator {
    ShiftOperator { kind: ShiftKind::BackwardX, params: params.clone() }
}

/// Racah forward and backward degree-shift operators. Other families are not covered.
pub fn racah_bf(params: &FamilyParams) -> Result<(ShiftOperator, ShiftOperator), Error> {
    if params.family() != FamilyId::R {
        return Err(Error::UnsupportedFamily { family: params.family(), op: "degree-shift factorisation" });
    }
    Ok((
        ShiftOperator { kind: ShiftKind::ForwardN, params: params.clone() },
        ShiftOperator { kind: ShiftKind::BackwardN, params: params.clone() },
    ))
}

impl ShiftOperator {
    /// `+1` for operators built on `e^d`, `-1` for `e^{-d}`.
    pub fn step(&self) -> i64 {
        match self.kind {
            ShiftKind::ForwardX | ShiftKind::ForwardN => 1,
            ShiftKind::BackwardX | ShiftKind::BackwardN => -1,
        }
    }

    /// `(a0(x), a1(x))`.
    pub fn coefficients(&self, x: i64) -> Result<(Rational, Rational), Error> {
        match self.kind {
            ShiftKind::ForwardX => forward_coefficients(&self.params, x),
            ShiftKind::BackwardX => backward_coefficients(&self.params, x),
            ShiftKind::ForwardN | ShiftKind::BackwardN => racah_coefficients(&self.params, self.kind, x),
        }
    }

    pub fn apply<F>(&self, f: F, x: i64) -> Result<Rational, Error>
    where
        F: Fn(i64) -> Result<Rational, Error>,
    {
        let (a0, a1) = self.coefficients(x)?;
        let mut out = Rational::zero();
        if !a0.is_zero() {
            out += a0 * f(x)?;
        }
        if !a1.is_zero() {
            out += a1 * f(x + self.step())?;
        }
        Ok(out)
    }
}

fn forward_coefficients(params: &FamilyParams, x: i64) -> Result<(Rational, Rational), Error> {
    let nn = params.size() as i64;
    let q = q_of(params);
    let qp = |k: i64| powi(&q, k);
    let what = "forward x-shift";
    Ok(match params.class() {
        CoordClass::I => {
            let k = int(nn + 1);
            (int(x + 1) / &k, int(nn - x) / k)
        }
        CoordClass::II => {
            let d = params.coord_d().unwrap();
            let den = nonzero(int(nn + 1) * (int(2 * x + 1) + &d), what, x)?;
            ((int(x + 1) * (int(x + 1 + nn) + &d)) / &den, (int(nn - x) * (int(x) + &d)) / den)
        }
        CoordClass::III => {
            let pre = qp(nn - x) / (int(1) - qp(nn + 1));
            (&pre * (int(1) - qp(x + 1)), pre * (qp(x - nn) - int(1)))
        }
        CoordClass::IV => {
            let den = int(1) - qp(nn + 1);
            ((int(1) - qp(x + 1)) / &den, qp(nn + 1) * (qp(x - nn) - int(1)) / den)
        }
        CoordClass::V => {
            let d = params.coord_d().unwrap();
            let den = nonzero((int(1) - qp(nn + 1)) * (int(1) - &d * qp(2 * x + 1)), what, x)?;
            (
                (int(1) - qp(x + 1)) * (int(1) - &d * qp(x + 1 + nn)) / &den,
                qp(nn + 1) * (qp(x - nn) - int(1)) * (int(1) - &d * qp(x)) / den,
            )
        }
    })
}

fn backward_coefficients(params: &FamilyParams, x: i64) -> Result<(Rational, Rational), Error> {
    let nn = params.size() as i64;
    let q = q_of(params);
    let qp = |k: i64| powi(&q, k);
    let one = || int(1);
    let what = "backward x-shift";
    let k = int(nn + 1);
    let kq = one() - qp(nn + 1);
    let (a0, a1) = match params.lambda() {
        Lambda::K { p } => (&k * p, &k * (one() - p)),
        Lambda::H { a, b } => (&k * (int(x) + a), &k * (b + int(nn - x))),
        Lambda::R { b, c, d } => {
            let den = nonzero(int(2 * x) + d, what, x)?;
            (&k * (int(x) + b) * (int(x) + c) / &den, &k * (b - d - int(x)) * (int(x) + d - c) / den)
        }
        Lambda::DH { a, b } => {
            let den = nonzero(int(2 * x - 1) + a + b, what, x)?;
            (&k * (int(x) + a) / &den, &k * (int(x) + b - one()) / den)
        }
        Lambda::DqqK { p } => (&kq / p * qp(-x - nn - 1), &kq * qp(-nn - 1) * (one() - qp(-x) / p)),
        Lambda::QH { a, b } => (&kq * qp(-nn - 1) * (one() - a * qp(x)), &kq * a / &q * (qp(x - nn) - b)),
        Lambda::QK { p } => (&kq * qp(-nn - 1), &kq * p),
        Lambda::QqK { p } => (&kq / p * qp(x - nn - 1), &kq * (one() - qp(x - nn - 1) / p)),
        Lambda::AqK { p } => (&kq * qp(-nn - 1) * (one() - p * qp(x + 1)), &kq * p * qp(x - nn)),
        Lambda::QR { b, c, d } => {
            let dt = params.d_tilde().unwrap();
            let den = nonzero(one() - d * qp(2 * x), what, x)?;
            (
                &kq * qp(-nn - 1) * (one() - b * qp(x)) * (one() - c * qp(x)) / &den,
                &kq * dt * (d / b * qp(x) - one()) * (one() - d / c * qp(x)) / den,
            )
        }
        Lambda::DqH { a, b } => {
            let den = nonzero(one() - a * b * qp(2 * x - 1), what, x)?;
            (&kq * qp(-nn - 1) * (one() - a * qp(x)) / &den, &kq * a * qp(x - nn - 1) * (one() - b * qp(x - 1)) / den)
        }
        Lambda::DqK { p } => {
            let den = nonzero(one() + p * qp(2 * x), what, x)?;
            (&kq * qp(-nn - 1) / &den, &kq * p * qp(2 * x - nn - 1) / den)
        }
    };
    Ok((a0, a1))
}

fn racah_coefficients(params: &FamilyParams, kind: ShiftKind, x: i64) -> Result<(Rational, Rational), Error> {
    let Lambda::R { b, c, d } = params.lambda() else {
        return Err(Error::UnsupportedFamily { family: params.family(), op: "degree-shift factorisation" });
    };
    let nbc = int(params.size() as i64) * b * c;
    let what = "degree-shift operator";
    if kind == ShiftKind::ForwardN {
        let a = nbc / nonzero(int(2 * x + 1) + d, what, x)?;
        Ok((a.clone(), -a))
    } else {
        Ok((params.b_coeff(x)? * (int(2 * x + 1) + d) / &nbc, -params.d_coeff(x)? * (int(2 * x - 1) + d) / nbc))
    }
}

/// Expansion coefficients `t_j(x)` of the ordered product of `M` forward x-shifts, so that
/// the product acts as `sum_j t_j(x) f(x + j)`.
pub fn ordered_product_expand(params: &FamilyParams, m: u32, x: i64) -> Result<Vec<Rational>, Error> {
    let mu = m as usize;
    // t[y][j] for the product so far, tabulated at points x..=x+M.
    let mut t: Vec<Vec<Rational>> = (0..=mu).map(|_| vec![int(1)]).collect();
    for k in 0..mu {
        let step = params.xshifted(k as u32);
        let width = mu - k;
        let mut next = Vec::with_capacity(width);
        for y in 0..width {
            let (a0, a1) = forward_coefficients(&step, x + y as i64 + k as i64)?;
            let mut row = vec![Rational::zero(); k + 2];
            for (j, v) in t[y].iter().enumerate() {
                row[j] += &a0 * v;
            }
            for (j, v) in t[y + 1].iter().enumerate() {
                row[j + 1] += &a1 * v;
            }
            next.push(row);
        }
        t = next;
    }
    Ok(t.swap_remove(0))
}

/// Closed-form coefficients of the ordered product: the summation terms divided by the factor.
pub fn ordered_product_closed(params: &FamilyParams, m: u32, x: i64) -> Result<Vec<Rational>, Error> {
    let f = nonzero(xshift_sum_factor(params, m, x), "ordered-product normalisation", x)?;
    Ok(xshift_sum_terms(params, m, x).into_iter().map(|c| c / &f).collect())
}

/// Sample points with no pole in either form; fails if fewer than `count` exist in a window.
pub fn ordered_product_samples(params: &FamilyParams, m: u32, count: usize) -> Vec<i64> {
    let reach = params.size() as i64 + 4 * count as i64 + 8;
    (0..reach)
        .filter(|&x| ordered_product_expand(params, m, x).is_ok() && ordered_product_closed(params, m, x).is_ok())
        .take(count)
        .collect()
}

/// `x` values where the expanded product and the closed-form coefficients differ.
pub fn verify_ordered_product(params: &FamilyParams, m: u32) -> Result<Vec<i64>, Error> {
    let xs = ordered_product_samples(params, m, 2 * m as usize + 3);
    if xs.len() < 2 * m as usize + 3 {
        return Err(Error::NoSampleWindow);
    }
    let mut bad = Vec::new();
    for x in xs {
        if ordered_product_expand(params, m, x)? != ordered_product_closed(params, m, x)? {
            bad.push(x);
        }
    }
    Ok(bad)
}

/// `F~ P_n(x; N) - P_n(x + 1; N + 1, shifted)`.
pub fn forward_action_defect(params: &FamilyParams, n: u64, x: i64) -> Result<Rational, Error> {
    let p = to_eta_poly(params, n)?;
    let shifted = params.xshifted(1);
    let ps = to_eta_poly(&shifted, n)?;
    let lhs = forward_xshift(params).apply(|y| Ok(p.eval(&params.eta(y))), x)?;
    Ok(lhs - ps.eval(&shifted.eta(x + 1)))
}

/// `B~ P_n(x + 1; N + 1, shifted) - (E(N+1) - E(n)) P_n(x; N)`.
pub fn backward_action_defect(params: &FamilyParams, n: u64, x: i64) -> Result<Rational, Error> {
    let p = to_eta_poly(params, n)?;
    let shifted = params.xshifted(1);
    let ps = to_eta_poly(&shifted, n)?;
    let lhs = backward_xshift(params).apply(|y| Ok(ps.eval(&shifted.eta(y + 1))), x)?;
    let gap = params.energy(params.size() as u64 + 1) - params.energy(n);
    Ok(lhs - gap * p.eval(&params.eta(x)))
}

/// Integer points used for operator identities: `-3..` upwards, skipping poles of the shift
/// coefficients and of `B`, `D`.
fn operator_samples(params: &FamilyParams, count: usize) -> Vec<i64> {
    let fwd = forward_xshift(params);
    let bwd = backward_xshift(params);
    (-3..params.size() as i64 + 4 * count as i64 + 8)
        .filter(|&x| {
            bwd.coefficients(x).is_ok()
                && fwd.coefficients(x).is_ok()
                && fwd.coefficients(x - 1).is_ok()
                && params.b_coeff(x).is_ok()
                && params.d_coeff(x).is_ok()
        })
        .take(count)
        .collect()
}

/// First `(k, x, lhs, rhs)` where `(H~ - E(N+1)) eta^k != -B~ F~ eta^k`, for `k = 0..=max_deg`.
pub fn xshift_factorisation_defect(
    params: &FamilyParams,
    max_deg: u32,
) -> Result<Option<(u32, i64, Rational, Rational)>, Error> {
    let top = params.energy(params.size() as u64 + 1);
    let fwd = forward_xshift(params);
    let bwd = backward_xshift(params);
    let xs = operator_samples(params, 2 * max_deg as usize + 8);
    for k in 0..=max_deg {
        let f = |y: i64| Ok(num_traits::Pow::pow(&params.eta(y), k));
        for &x in &xs {
            let lhs = apply_difference(params, f, x)? - &top * f(x)?;
            let rhs = -bwd.apply(|y| fwd.apply(f, y), x)?;
            if lhs != rhs {
                return Ok(Some((k, x, lhs, rhs)));
            }
        }
    }
    Ok(None)
}

pub fn verify_xshift_factorisation(params: &FamilyParams, test_degree: u32) -> Result<bool, Error> {
    Ok(xshift_factorisation_defect(params, test_degree)?.is_none())
}

/// Racah parameters `(N - 1, b + 1, c + 1, d + 1)`.
pub fn racah_lowered(params: &FamilyParams) -> Result<FamilyParams, Error> {
    let Lambda::R { b, c, d } = params.lambda() else {
        return Err(Error::UnsupportedFamily { family: params.family(), op: "degree-shift factorisation" });
    };
    FamilyParams::formal(Lambda::R { b: b + int(1), c: c + int(1), d: d + int(1) }, params.size() - 1, None)
}

/// `(label, n or k, x, lhs, rhs)`.
pub type BfDefect = (&'static str, u64, i64, Rational, Rational);

/// First failing item of the Racah degree-shift factorisation.
pub fn racah_bf_defect(params: &FamilyParams) -> Result<Option<BfDefect>, Error> {
    let (fwd, bwd) = racah_bf(params)?;
    let lowered = racah_lowered(params)?;
    let nn = params.size() as i64;
    for k in 0..=params.size() {
        let f = |y: i64| Ok(num_traits::Pow::pow(&params.eta(y), k));
        for x in 0..=nn {
            let lhs = apply_difference(params, f, x)?;
            let rhs = bwd.apply(|y| fwd.apply(f, y), x)?;
            if lhs != rhs {
                return Ok(Some(("H~ = B F", k as u64, x, lhs, rhs)));
            }
        }
    }
    for n in 0..=params.size() as u64 {
        let p = to_eta_poly(params, n)?;
        let below = if n == 0 { EtaPolynomial::zero() } else { to_eta_poly(&lowered, n - 1)? };
        for x in 0..=nn {
            let lhs = fwd.apply(|y| Ok(p.eval(&params.eta(y))), x)?;
            let rhs = params.energy(n) * below.eval(&lowered.eta(x));
            if lhs != rhs {
                return Ok(Some(("F P_n = E(n) P_{n-1}", n, x, lhs, rhs)));
            }
            if n > 0 {
                let lhs = bwd.apply(|y| Ok(below.eval(&lowered.eta(y))), x)?;
                let rhs = p.eval(&params.eta(x));
                if lhs != rhs {
                    return Ok(Some(("B P_{n-1} = P_n", n, x, lhs, rhs)));
                }
            }
        }
    }
    Ok(None)
}

pub fn verify_bf_factorisation_racah(params: &FamilyParams) -> Result<bool, Error> {
    Ok(racah_bf_defect(params)?.is_none())
}

/// Failing `(M, j)` pairs of the five Pascal-type identities used in the induction, for
/// `M <= m_max`.
pub fn pascal_defects(m_max: u32, q: &Rational) -> Vec<(&'static str, u32, i64)> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        let mu = m as u64;
        for j in 0..=m as i64 + 1 {
            let qj = powi(q, j);
            if binomial(mu, j) + binomial(mu, j - 1) != binomial(mu + 1, j) {
                out.push(("binomial", m, j));
            }
            if q_binomial(mu, j, q) * &qj + q_binomial(mu, j - 1, q) != q_binomial(mu + 1, j, q) {
                out.push(("q-binomial, left", m, j));
            }
            if q_binomial(mu, j, q) + q_binomial(mu, j - 1, q) * powi(q, m as i64 + 1 - j) != q_binomial(mu + 1, j, q) {
                out.push(("q-binomial, right", m, j));
            }
            if int(j) * binomial(mu, j) != int(m as i64 + 1 - j) * binomial(mu, j - 1) {
                out.push(("binomial ratio", m, j));
            }
            if (int(1) - &qj) * q_binomial(mu, j, q) != (int(1) - powi(q, m as i64 + 1 - j)) * q_binomial(mu, j - 1, q)
            {
                out.push(("q-binomial ratio", m, j));
            }
        }
    }
    out
}

/// Whether the shifted parameters stay in range, and whether the family guarantees it.
#[derive(Clone, Debug)]
pub struct TransportReport {
    pub shifted: FamilyParams,
    pub violations: Vec<Violation>,
    /// Classes (i) and (iv) keep `lambda`, so positivity must survive.
    pub guaranteed: bool,
}

pub fn positivity_transport(params: &FamilyParams, m: u32) -> TransportReport {
    let shifted = params.xshifted(m);
    let violations = shifted.validate();
    let guaranteed = matches!(params.class(), CoordClass::I | CoordClass::IV);
    TransportReport { shifted, violations, guaranteed }
}
