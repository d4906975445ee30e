//! Monic polynomials beyond the lattice degree and their factorisation through `Lambda`.
//!
//! The monic eigenpolynomial of any degree is obtained from the operator alone: `H~` maps
//! `eta^k` to a polynomial of degree `k` in `eta`, so its matrix in the power basis is upper
//! triangular and the eigenvector for `E(n)` follows by back substitution. The
//! closed forms for the quotients are then compared against this independent construction.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{int, powi, q_pochhammer, q_pochhammer_multi, rising_factorial, rising_multi, Rational};
use crate::error::Error;
use crate::family::{FamilyParams, Lambda};
use crate::poly::EtaPolynomial;

/// `P_n` for `n <= N` as a polynomial in `eta`, by interpolation through `x = 0..=n`.
pub fn to_eta_poly(params: &FamilyParams, n: u64) -> Result<EtaPolynomial, Error> {
    if n > params.size() as u64 {
        return Err(Error::DegreeOutOfRange { n, max: params.size() as u64 });
    }
    let nodes: Vec<Rational> = (0..=n as i64).map(|x| params.eta(x)).collect();
    let values: Vec<Rational> = (0..=n as i64).map(|x| params.eval_p(n, x)).collect::<Result<_, _>>()?;
    EtaPolynomial::interpolate(&nodes, &values)
}

/// Leading `eta`-coefficient `c_n` of `P_n`, closed form.
pub fn leading_coeff(params: &FamilyParams, n: u64) -> Rational {
    let nn = params.size() as i64;
    let k = n as usize;
    let ni = n as i64;
    let neg_n = int(-nn);
    let one = Rational::one();
    match params.lambda() {
        Lambda::K { p } => one / (rising_factorial(&neg_n, k) * powi(p, ni)),
        Lambda::H { a, b } => rising_factorial(&(int(ni) + a + b - int(1)), k) / rising_multi(&[a.clone(), neg_n], k),
        Lambda::R { b, c, .. } => {
            let dt = params.d_tilde().unwrap();
            rising_factorial(&(dt + int(ni)), k) / rising_multi(&[b.clone(), c.clone(), neg_n], k)
        }
        Lambda::DH { a, .. } => one / rising_multi(&[a.clone(), neg_n], k),
        _ => {
            let q = params.q().unwrap().clone();
            let qn = powi(&q, -nn);
            match params.lambda() {
                Lambda::DqqK { p } => powi(p, ni) * powi(&q, -(ni * (ni - 1)) / 2) / q_pochhammer(&qn, &q, k),
                Lambda::QH { a, b } => {
                    q_pochhammer(&(a * b * powi(&q, ni - 1)), &q, k) / q_pochhammer_multi(&[a.clone(), qn], &q, k)
                }
                Lambda::QK { p } => q_pochhammer(&(-(p * powi(&q, ni))), &q, k) / q_pochhammer(&qn, &q, k),
                Lambda::QqK { p } => powi(p, ni) * powi(&q, ni * ni) / q_pochhammer(&qn, &q, k),
                Lambda::AqK { p } => one / q_pochhammer_multi(&[p * &q, qn], &q, k),
                Lambda::QR { b, c, .. } => {
                    let dt = params.d_tilde().unwrap();
                    q_pochhammer(&(dt * powi(&q, ni)), &q, k) / q_pochhammer_multi(&[b.clone(), c.clone(), qn], &q, k)
                }
                Lambda::DqH { a, .. } => one / q_pochhammer_multi(&[a.clone(), qn], &q, k),
                Lambda::DqK { .. } => one / q_pochhammer(&qn, &q, k),
                _ => unreachable!(),
            }
        }
    }
}

/// Integer points where `eta`, `B`, `D` and the neighbouring `eta` values are all finite and
/// the `eta` values are pairwise distinct.
fn sample_points(params: &FamilyParams, count: usize) -> Result<Vec<i64>, Error> {
    let reach = 4 * count as i64 + 2 * params.size() as i64 + 16;
    let candidates = (0..=reach).chain((1..=reach).map(|k| -k));
    let mut out: Vec<i64> = Vec::with_capacity(count);
    let mut etas: Vec<Rational> = Vec::with_capacity(count);
    for x in candidates {
        if out.len() == count {
            break;
        }
        if params.b_coeff(x).is_err() || params.d_coeff(x).is_err() {
            continue;
        }
        let e = params.eta(x);
        if etas.contains(&e) {
            continue;
        }
        etas.push(e);
        out.push(x);
    }
    if out.len() < count {
        return Err(Error::NoSampleWindow);
    }
    Ok(out)
}

/// `(H~ f)(x)` for `f` given as a function of `x`.
pub fn apply_difference<F>(params: &FamilyParams, f: F, x: i64) -> Result<Rational, Error>
where
    F: Fn(i64) -> Result<Rational, Error>,
{
    let fx = f(x)?;
    let b = params.b_coeff(x)?;
    let d = params.d_coeff(x)?;
    let mut out = Rational::zero();
    if !b.is_zero() {
        out += b * (&fx - f(x + 1)?);
    }
    if !d.is_zero() {
        out += d * (&fx - f(x - 1)?);
    }
    Ok(out)
}

/// Images `H~ eta^k` for `k = 0..=max_deg`, each as a polynomial in `eta`.
pub fn eta_operator(params: &FamilyParams, max_deg: u64) -> Result<Vec<EtaPolynomial>, Error> {
    // One extra point beyond what interpolation needs, so a raised degree would show up.
    let xs = sample_points(params, max_deg as usize + 2)?;
    let nodes: Vec<Rational> = xs.iter().map(|&x| params.eta(x)).collect();
    let mut out = Vec::with_capacity(max_deg as usize + 1);
    for k in 0..=max_deg {
        let f = |y: i64| Ok(num_traits::Pow::pow(&params.eta(y), k as u32));
        let values: Vec<Rational> = xs.iter().map(|&x| apply_difference(params, f, x)).collect::<Result<_, _>>()?;
        let poly = EtaPolynomial::interpolate(&nodes, &values)?;
        if poly.degree().is_some_and(|d| d as u64 > k) {
            return Err(Error::DegreeRaised(k));
        }
        out.push(poly);
    }
    Ok(out)
}

/// Monic degree-`n` eigenpolynomial from precomputed images `H~ eta^k`, `k <= n`.
pub fn monic_from_operator(params: &FamilyParams, images: &[EtaPolynomial], n: u64) -> Result<EtaPolynomial, Error> {
    let en = params.energy(n);
    for k in 0..n {
        if params.energy(k) == en {
            return Err(Error::EigenvalueCollision { n, k });
        }
    }
    let n = n as usize;
    let h = |j: usize, k: usize| images[k].coeffs().get(j).cloned().unwrap_or_else(Rational::zero);
    let mut a = vec![Rational::zero(); n + 1];
    a[n] = Rational::one();
    for j in (0..n).rev() {
        let mut rhs = Rational::zero();
        for (k, ak) in a.iter().enumerate().skip(j + 1) {
            rhs -= h(j, k) * ak;
        }
        let diag = h(j, j) - &en;
        if diag.is_zero() {
            return Err(Error::EigenvalueCollision { n: n as u64, k: j as u64 });
        }
        a[j] = rhs / diag;
    }
    Ok(EtaPolynomial::new(a))
}

pub fn monic_eigenpoly(params: &FamilyParams, n: u64) -> Result<EtaPolynomial, Error> {
    let images = eta_operator(params, n)?;
    monic_from_operator(params, &images, n)
}

/// `Lambda = prod_{k=0}^{N} (eta - eta(k))`.
pub fn lambda_poly(params: &FamilyParams) -> Result<EtaPolynomial, Error> {
    let roots: Vec<Rational> = (0..=params.size() as i64).map(|x| params.eta(x)).collect();
    for i in 0..roots.len() {
        if roots[..i].contains(&roots[i]) {
            return Err(Error::NodeCollision(i as i64));
        }
    }
    Ok(EtaPolynomial::from_roots(roots.iter()))
}

/// `Lambda`, the monic polynomials `P^monic_{N+1+m}` and the quotients `Q_m` for
/// `m = 0..=m_max`.
#[derive(Clone, Debug)]
pub struct ZeroNormData {
    pub lambda: EtaPolynomial,
    pub monic: Vec<EtaPolynomial>,
    pub quotients: Vec<EtaPolynomial>,
}

pub fn zero_norm_data(params: &FamilyParams, m_max: u64) -> Result<ZeroNormData, Error> {
    let lambda = lambda_poly(params)?;
    let top = params.size() as u64 + 1 + m_max;
    let images = eta_operator(params, top)?;
    let mut monic = Vec::new();
    let mut quotients = Vec::new();
    for m in 0..=m_max {
        let p = monic_from_operator(params, &images, params.size() as u64 + 1 + m)?;
        let (q, r) = p.div_rem(&lambda);
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder(m));
        }
        if !(q.is_monic() && q.degree() == Some(m as usize)) {
            return Err(Error::NonzeroRemainder(m));
        }
        monic.push(p);
        quotients.push(q);
    }
    Ok(ZeroNormData { lambda, monic, quotients })
}

/// The quotient `Q_m` of `P^monic_{N+1+m}` by `Lambda`.
pub fn factorise(params: &FamilyParams, m: u64) -> Result<EtaPolynomial, Error> {
    let lambda = lambda_poly(params)?;
    let p = monic_eigenpoly(params, params.size() as u64 + 1 + m)?;
    let (q, r) = p.div_rem(&lambda);
    if !r.is_zero() || q.degree() != Some(m as usize) || !q.is_monic() {
        return Err(Error::NonzeroRemainder(m));
    }
    Ok(q)
}

/// `Q_m(x)` from the shifted-parameter monic series, including the `q`-power prefactor.
pub fn closed_form_q(params: &FamilyParams, m: u64, x: i64) -> Rational {
    let nn = params.size() as i64;
    let mi = m as i64;
    let mu = m as usize;
    let mut sum = Rational::zero();
    if !params.family().is_q() {
        let neg_m = int(-mi);
        let xr = int(-x + nn + 1);
        for k in 0..=mu {
            let ki = k as i64;
            let rest = mu - k;
            let base = int(nn + 2 + ki);
            let common = rising_multi(&[neg_m.clone(), xr.clone()], k);
            let kf = rising_factorial(&Rational::one(), k);
            let term = match params.lambda() {
                Lambda::K { p } => rising_factorial(&base, rest) * common / kf * powi(p, mi - ki),
                Lambda::H { a, b } => {
                    rising_multi(&[a + int(nn + 1 + ki), base], rest)
                        / rising_factorial(&(int(mi + 2 * nn + 1 + ki) + a + b), rest)
                        * common
                        / kf
                }
                Lambda::R { b, c, d } => {
                    let dt = params.d_tilde().unwrap();
                    rising_multi(&[b + int(nn + 1 + ki), c + int(nn + 1 + ki), base], rest)
                        / rising_factorial(&(dt + int(2 * nn + 2 + mi + ki)), rest)
                        * common
                        * rising_factorial(&(int(x + nn + 1) + d), k)
                        / kf
                }
                Lambda::DH { a, b } => {
                    rising_multi(&[a + int(nn + 1 + ki), base], rest)
                        * common
                        * rising_factorial(&(int(x + nn) + a + b), k)
                        / kf
                }
                _ => unreachable!(),
            };
            sum += term;
        }
        return sum;
    }
    let q = params.q().unwrap().clone();
    let qp = |e: i64| powi(&q, e);
    let qpoch = |a: Rational, n: usize| q_pochhammer(&a, &q, n);
    for k in 0..=mu {
        let ki = k as i64;
        let rest = mu - k;
        let common = q_pochhammer_multi(&[qp(-mi), qp(-x + nn + 1)], &q, k) / qpoch(q.clone(), k);
        let base = qpoch(qp(nn + 2 + ki), rest);
        let term = match params.lambda() {
            Lambda::DqqK { p } => {
                base * common * powi(p, ki - mi) * qp(ki * x + ki + mi * (mi - 1) / 2 - mi * (nn + 1))
            }
            Lambda::QH { a, b } => {
                q_pochhammer_multi(&[a * qp(nn + 1 + ki), qp(nn + 2 + ki)], &q, rest)
                    / qpoch(a * b * qp(mi + 2 * nn + 1 + ki), rest)
                    * common
                    * qp(ki)
            }
            Lambda::QK { p } => base / qpoch(-(p * qp(2 * (nn + 1) + mi + ki)), rest) * common * qp(ki),
            Lambda::QqK { p } => base * common * powi(p, ki - mi) * qp((nn + mi + 2) * ki - mi * (mi + nn + 1)),
            Lambda::AqK { p } => {
                q_pochhammer_multi(&[p * qp(nn + 2 + ki), qp(nn + 2 + ki)], &q, rest) * common * qp(ki)
            }
            Lambda::QR { b, c, d } => {
                let dt = params.d_tilde().unwrap();
                q_pochhammer_multi(&[b * qp(nn + 1 + ki), c * qp(nn + 1 + ki), qp(nn + 2 + ki)], &q, rest)
                    / qpoch(dt * qp(2 * (nn + 1) + mi + ki), rest)
                    * common
                    * qpoch(d * qp(x + nn + 1), k)
                    * qp(ki)
            }
            Lambda::DqH { a, b } => {
                q_pochhammer_multi(&[a * qp(nn + 1 + ki), qp(nn + 2 + ki)], &q, rest)
                    * common
                    * qpoch(a * b * qp(x + nn), k)
                    * qp(ki)
            }
            Lambda::DqK { p } => base * common * qpoch(-(p * qp(x + nn + 1)), k) * qp(ki),
            _ => unreachable!(),
        };
        sum += term;
    }
    let prefactor = match params.lambda() {
        Lambda::DqqK { .. } => qp((nn + 1) * mi),
        _ => qp(-(nn + 1) * mi),
    };
    prefactor * sum
}

/// `(-1)^{N+1} q^{-N(N+1)/2} (q^-x, d q^x; q)_{N+1}`, the product form of `Lambda` for q-Racah.
pub fn q_racah_lambda_product(params: &FamilyParams, x: i64) -> Result<Rational, Error> {
    let Lambda::QR { d, .. } = params.lambda() else {
        return Err(Error::UnsupportedFamily { family: params.family(), op: "Lambda product form" });
    };
    let q = params.q().unwrap();
    let nn = params.size() as i64;
    let sign = if (nn + 1) % 2 == 0 { int(1) } else { int(-1) };
    Ok(sign * powi(q, -(nn * (nn + 1)) / 2) * q_pochhammer_multi(&[powi(q, -x), d * powi(q, x)], q, nn as usize + 1))
}
