//! Casoratians and the multiple Darboux transformation seeded by zero-norm solutions.
//!
//! The seeds vanish on the lattice, so the transformed coefficients are limits of rational
//! functions of `x`. They are evaluated by expanding every factor as a Laurent series in a
//! perturbation of the coordinate (`s = x + eps`, or `s = q^x (1 + eps)`) and reading off the
//! constant term. A negative valuation is a genuine pole.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::diophantine::{to_eta_poly, zero_norm_data, ZeroNormData};
use crate::error::Error;
use crate::family::FamilyParams;
use crate::linalg::determinant;
use crate::poly::EtaPolynomial;
use crate::scalar::{Limit, Scalar, Series};
use crate::spectral::{ground_state_squared, NormTable};

const START_CAP: usize = 8;
const MAX_CAP: usize = 128;

/// Strictly increasing, non-empty list of seed degrees `m_1 < ... < m_M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<u64>);

impl IndexSet {
    pub fn new(ms: Vec<u64>) -> Result<Self, Error> {
        if ms.is_empty() || ms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet);
        }
        Ok(Self(ms))
    }

    /// `{0, 1, ..., m - 1}`.
    pub fn contiguous(m: u32) -> Result<Self, Error> {
        Self::new((0..m as u64).collect())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> u64 {
        *self.0.last().unwrap()
    }

    pub fn is_contiguous(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| m == i as u64)
    }
}

impl core::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Determinant of `(f_k(x + j))_{j,k}` given `columns[k][j] = f_k(x + j)`.
pub fn casoratian_of_values<T: Scalar>(columns: &[Vec<T>]) -> Option<T> {
    let n = columns.len();
    let rows: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|k| columns[k][j].clone()).collect()).collect();
    determinant(rows)
}

pub type LatticeFn<'a> = &'a dyn Fn(i64) -> Result<Rational, Error>;

/// `W_C[f_1, ..., f_n](x) = det(f_k(x + j - 1))`.
pub fn casoratian(fs: &[LatticeFn<'_>], x: i64) -> Result<Rational, Error> {
    let n = fs.len();
    let mut columns = Vec::with_capacity(n);
    for f in fs {
        columns.push((0..n as i64).map(|j| f(x + j)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(casoratian_of_values(&columns).unwrap_or_else(Rational::zero))
}

/// Perturbed coordinate at lattice point `x`.
pub(crate) fn perturbed(params: &FamilyParams, x: i64, cap: usize) -> Series {
    let s = params.coord(x);
    if params.family().is_q() {
        Series::linear(s.clone(), s, cap)
    } else {
        Series::linear(s, Rational::one(), cap)
    }
}

/// Runs `f` on the perturbed coordinate with growing precision until the constant term is
/// known. Inner evaluation failures are read as precision shortfalls.
pub(crate) fn lattice_limit<F>(params: &FamilyParams, x: i64, what: &'static str, f: F) -> Result<Rational, Error>
where
    F: Fn(&Series) -> Option<Series>,
{
    let mut cap = START_CAP;
    while cap <= MAX_CAP {
        if let Some(v) = f(&perturbed(params, x, cap)) {
            match v.limit() {
                Limit::Finite(r) => return Ok(r),
                Limit::Pole => return Err(Error::Pole { what, x }),
                Limit::Unknown => {}
            }
        }
        cap *= 2;
    }
    Err(Error::PrecisionExhausted(x))
}

/// Series values needed around one point: `eta(x + j)` for `j` in `lo..=hi`.
pub(crate) struct Neighbourhood<'a> {
    params: &'a FamilyParams,
    s: Series,
    lo: i64,
    etas: Vec<Series>,
}

impl<'a> Neighbourhood<'a> {
    pub(crate) fn new(params: &'a FamilyParams, s: &Series, lo: i64, hi: i64) -> Self {
        let etas = (lo..=hi).map(|j| params.eta_at(&params.coord_shift(s, j))).collect();
        Self { params, s: s.clone(), lo, etas }
    }

    pub(crate) fn eta(&self, j: i64) -> &Series {
        &self.etas[(j - self.lo) as usize]
    }

    pub(crate) fn coord(&self, j: i64) -> Series {
        self.params.coord_shift(&self.s, j)
    }

    pub(crate) fn b(&self, j: i64, x: i64) -> Option<Series> {
        self.params.b_at(&self.coord(j), x + j).ok()
    }

    pub(crate) fn d(&self, j: i64, x: i64) -> Option<Series> {
        self.params.d_at(&self.coord(j), x + j).ok()
    }

    pub(crate) fn poly(&self, p: &EtaPolynomial, j: i64) -> Series {
        p.eval_scalar(self.eta(j))
    }

    /// `W_C[p_1, ..., p_k, g](x + a)`; `g` is appended only when given.
    pub(crate) fn wronskian(
        &self,
        polys: &[&EtaPolynomial],
        extra: Option<&dyn Fn(i64) -> Option<Series>>,
        a: i64,
    ) -> Option<Series> {
        let size = polys.len() + extra.is_some() as usize;
        let mut columns: Vec<Vec<Series>> =
            polys.iter().map(|p| (0..size as i64).map(|j| self.poly(p, a + j)).collect()).collect();
        if let Some(g) = extra {
            columns.push((0..size as i64).map(|j| g(a + j)).collect::<Option<Vec<_>>>()?);
        }
        casoratian_of_values(&columns)
    }
}

/// A multiple Darboux transformation with seeds `P^monic_{N+1+m}`, `m` in the index set.
#[derive(Clone, Debug)]
pub struct DarbouxSystem {
    params: FamilyParams,
    dset: IndexSet,
    zero_norm: ZeroNormData,
    eigen: Vec<EtaPolynomial>,
    /// `(x, B-bar(x))` on the window; `None` marks a pole.
    pub bbar: Vec<(i64, Option<Rational>)>,
    /// `(x, D-bar(x))` on the window; `None` marks a pole.
    pub dbar: Vec<(i64, Option<Rational>)>,
}

impl DarbouxSystem {
    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn dset(&self) -> &IndexSet {
        &self.dset
    }

    pub fn quotient(&self, m: u64) -> &EtaPolynomial {
        &self.zero_norm.quotients[m as usize]
    }

    pub fn lambda(&self) -> &EtaPolynomial {
        &self.zero_norm.lambda
    }

    fn seeds(&self) -> Vec<&EtaPolynomial> {
        self.dset.as_slice().iter().map(|&m| self.quotient(m)).collect()
    }

    fn inv_lambda<'b>(&'b self, nb: &'b Neighbourhood<'b>) -> impl Fn(i64) -> Option<Series> + 'b {
        move |j| Series::exact(Rational::one()).try_div(nb.poly(self.lambda(), j))
    }

    /// `W_C[Q_{m_1}, ..., Q_{m_M}](x)`, exact.
    pub fn seed_casoratian(&self, x: i64) -> Rational {
        let columns: Vec<Vec<Rational>> = self
            .seeds()
            .iter()
            .map(|q| (0..self.dset.len() as i64).map(|j| q.eval(&self.params.eta(x + j))).collect())
            .collect();
        casoratian_of_values(&columns).unwrap_or_else(Rational::zero)
    }

    /// Transformed upper coefficient at any integer `x`.
    pub fn bbar_at(&self, x: i64) -> Result<Rational, Error> {
        let m = self.dset.len() as i64;
        let seeds = self.seeds();
        lattice_limit(&self.params, x, "B-bar", |s| {
            let nb = Neighbourhood::new(&self.params, s, -1, m + 1);
            let inv = self.inv_lambda(&nb);
            let lam = |j| nb.poly(self.lambda(), j);
            let w0 = nb.wronskian(&seeds, None, 0)?;
            let w1 = nb.wronskian(&seeds, None, 1)?;
            let wl0 = nb.wronskian(&seeds, Some(&inv), 0)?;
            let wl1 = nb.wronskian(&seeds, Some(&inv), 1)?;
            let num = nb.b(m, x)? * lam(m + 1) * w0 * wl1;
            num.try_div(lam(m) * w1 * wl0)
        })
    }

    /// Transformed lower coefficient at any integer `x`.
    pub fn dbar_at(&self, x: i64) -> Result<Rational, Error> {
        let m = self.dset.len() as i64;
        let seeds = self.seeds();
        lattice_limit(&self.params, x, "D-bar", |s| {
            let nb = Neighbourhood::new(&self.params, s, -1, m + 1);
            let inv = self.inv_lambda(&nb);
            let lam = |j| nb.poly(self.lambda(), j);
            let w0 = nb.wronskian(&seeds, None, 0)?;
            let w1 = nb.wronskian(&seeds, None, 1)?;
            let wl0 = nb.wronskian(&seeds, Some(&inv), 0)?;
            let wlm = nb.wronskian(&seeds, Some(&inv), -1)?;
            let num = nb.d(0, x)? * lam(-1) * w1 * wlm;
            num.try_div(lam(0) * w0 * wl0)
        })
    }

    /// `phi-bar_n(x) phi-bar_l(x)` for all `n, l` in the lattice at one lattice point `x`.
    pub fn pair_products_at(&self, x: i64) -> Result<Vec<Vec<Rational>>, Error> {
        let w = ground_state_squared(&self.params)?;
        let wx =
            w.get(x.max(0) as usize).cloned().ok_or(Error::IndexOutOfRange { index: x as usize, bound: w.len() })?;
        let m = self.dset.len() as i64;
        let seeds = self.seeds();
        let size = self.eigen.len();
        let mut cap = START_CAP;
        'grow: while cap <= MAX_CAP {
            let s = perturbed(&self.params, x, cap);
            let nb = Neighbourhood::new(&self.params, &s, 0, (m + 1).max(-x));
            let Some(common) = self.pair_common(&nb, &seeds, x) else {
                cap *= 2;
                continue;
            };
            let mut vs = Vec::with_capacity(size);
            for p in &self.eigen {
                let g = |j: i64| nb.poly(p, j).try_div(nb.poly(self.lambda(), j));
                match nb.wronskian(&seeds, Some(&g), 0) {
                    Some(v) => vs.push(v),
                    None => {
                        cap *= 2;
                        continue 'grow;
                    }
                }
            }
            let mut out = alloc::vec![alloc::vec![Rational::zero(); size]; size];
            for n in 0..size {
                for l in n..size {
                    let v = common.clone() * vs[n].clone() * vs[l].clone();
                    match v.limit() {
                        Limit::Finite(r) => {
                            let r = &wx * r;
                            out[n][l] = r.clone();
                            out[l][n] = r;
                        }
                        Limit::Pole => return Err(Error::Pole { what: "deformed pair product", x }),
                        Limit::Unknown => {
                            cap *= 2;
                            continue 'grow;
                        }
                    }
                }
            }
            return Ok(out);
        }
        Err(Error::PrecisionExhausted(x))
    }

    fn pair_common(&self, nb: &Neighbourhood<'_>, seeds: &[&EtaPolynomial], x: i64) -> Option<Series> {
        let m = self.dset.len() as i64;
        let mut acc = nb.poly(self.lambda(), 0) * nb.poly(self.lambda(), m);
        // phi_0^2 continued below the lattice through w(y) B(y) = w(y+1) D(y+1).
        for j in 0..-x {
            acc = acc * nb.d(j + 1, x)?.try_div(nb.b(j, x)?)?;
        }
        for k in 1..=m {
            acc = acc * nb.b(k - 1, x)?;
        }
        let den = nb.wronskian(seeds, None, 0)? * nb.wronskian(seeds, None, 1)?;
        acc.try_div(den)
    }

    /// `phi-bar_n(x) phi-bar_l(x)` at one point.
    pub fn deformed_pair_product(&self, n: usize, l: usize, x: i64) -> Result<Rational, Error> {
        Ok(self.pair_products_at(x)?[n][l].clone())
    }

    /// `sum_x phi-bar_n(x) phi-bar_l(x)` over the lattice.
    pub fn pair_norm_matrix(&self) -> Result<Vec<Vec<Rational>>, Error> {
        let size = self.eigen.len();
        let mut acc = alloc::vec![alloc::vec![Rational::zero(); size]; size];
        for x in -(self.dset.len() as i64)..=self.params.size() as i64 {
            let at = self.pair_products_at(x)?;
            for n in 0..size {
                for l in 0..size {
                    acc[n][l] += &at[n][l];
                }
            }
        }
        Ok(acc)
    }

    /// Expected value of the deformed inner product `(n, l)`.
    pub fn expected_pair_norm(&self, norms: &NormTable, n: usize, l: usize) -> Rational {
        if n != l {
            return Rational::zero();
        }
        let en = self.params.energy(n as u64);
        let top = self.params.size() as u64 + 1;
        self.dset
            .as_slice()
            .iter()
            .fold(norms.inv_norm_sq[n].clone(), |acc, &m| acc * (&en - self.params.energy(top + m)))
    }

    /// Every `(n, l, lhs, rhs)` with `lhs != rhs`.
    pub fn verify_norm_relation(&self, norms: &NormTable) -> Result<Vec<(usize, usize, Rational, Rational)>, Error> {
        let sums = self.pair_norm_matrix()?;
        let mut failures = Vec::new();
        for (n, row) in sums.into_iter().enumerate() {
            for (l, lhs) in row.into_iter().enumerate() {
                let rhs = self.expected_pair_norm(norms, n, l);
                if lhs != rhs {
                    failures.push((n, l, lhs, rhs));
                }
            }
        }
        Ok(failures)
    }

    /// Lattice points `x` in `0..N` where `B-bar(x) D-bar(x+1) < 0` or is undefined.
    pub fn positivity_violations(&self) -> Vec<i64> {
        let lookup =
            |v: &[(i64, Option<Rational>)], x: i64| v.iter().find(|(y, _)| *y == x).and_then(|(_, r)| r.clone());
        (0..self.params.size() as i64)
            .filter(|&x| match (lookup(&self.bbar, x), lookup(&self.dbar, x + 1)) {
                (Some(b), Some(d)) => (b * d).is_negative(),
                _ => true,
            })
            .collect()
    }
}

/// Builds the system and tabulates `B-bar`, `D-bar` on `x = -1..=N+1`.
/// Fails if the seed Casoratian vanishes at some `x` in `0..=N+1`.
pub fn build_darboux(params: &FamilyParams, dset: IndexSet) -> Result<DarbouxSystem, Error> {
    let zero_norm = zero_norm_data(params, dset.largest())?;
    let eigen = (0..=params.size() as u64).map(|n| to_eta_poly(params, n)).collect::<Result<_, _>>()?;
    let mut sys = DarbouxSystem { params: params.clone(), dset, zero_norm, eigen, bbar: Vec::new(), dbar: Vec::new() };
    for x in 0..=params.size() as i64 + 1 {
        if sys.seed_casoratian(x).is_zero() {
            return Err(Error::DegenerateCasoratian(x));
        }
    }
    for x in -1..=params.size() as i64 + 1 {
        sys.bbar.push((x, sys.bbar_at(x).ok()));
        sys.dbar.push((x, sys.dbar_at(x).ok()));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::family::Lambda;
    use crate::spectral::norms;

    #[test]
    fn index_sets() {
        assert!(IndexSet::new(alloc::vec![]).is_err());
        assert!(IndexSet::new(alloc::vec![1, 1]).is_err());
        assert!(IndexSet::new(alloc::vec![2, 1]).is_err());
        assert!(IndexSet::contiguous(3).unwrap().is_contiguous());
        assert!(!IndexSet::new(alloc::vec![0, 2]).unwrap().is_contiguous());
    }

    #[test]
    fn small_casoratians() {
        let f = |x: i64| Ok(int(x * x));
        let one = |_: i64| Ok(int(1));
        assert_eq!(casoratian(&[&f], 3).unwrap(), int(9));
        assert_eq!(casoratian(&[&one, &f], 3).unwrap(), int(16 - 9));
    }

    #[test]
    fn krawtchouk_single_seed() {
        let f = FamilyParams::new(Lambda::K { p: ratio(1, 3) }, 3, None).unwrap();
        let sys = build_darboux(&f, IndexSet::new(alloc::vec![0]).unwrap()).unwrap();
        assert!(sys.verify_norm_relation(&norms(&f).unwrap()).unwrap().is_empty());
        let shifted = f.xshifted(1);
        for x in 0..=3 {
            assert_eq!(sys.bbar_at(x).unwrap(), shifted.b_coeff(x + 1).unwrap());
            assert_eq!(sys.dbar_at(x).unwrap(), shifted.d_coeff(x + 1).unwrap());
        }
    }
}
