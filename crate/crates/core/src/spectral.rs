//! The tri-diagonal operator `H~`, squared ground state, norms and completeness.
//!
//! Everything here is rational: the symmetric matrix `H` only ever appears through
//! products of its off-diagonal entries, so no square roots are taken.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{ArithError, Error};
use crate::family::FamilyParams;
use crate::linalg::determinant;

/// `(N+1) x (N+1)` tri-diagonal matrix stored by diagonals.
/// `upper[x] = H~[x][x+1] = -B(x)`, `lower[x] = H~[x][x-1] = -D(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriDiagOperator {
    pub diag: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
}

impl TriDiagOperator {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, x: usize, y: usize) -> Rational {
        if x == y {
            self.diag[x].clone()
        } else if y == x + 1 {
            self.upper[x].clone()
        } else if x == y + 1 {
            self.lower[x].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn apply(&self, f: &[Rational]) -> Result<Vec<Rational>, Error> {
        let n = self.size();
        if f.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: f.len() });
        }
        Ok((0..n)
            .map(|x| {
                let mut acc = &self.diag[x] * &f[x];
                if x + 1 < n {
                    acc += &self.upper[x] * &f[x + 1];
                }
                if x > 0 {
                    acc += &self.lower[x] * &f[x - 1];
                }
                acc
            })
            .collect())
    }

    /// `H~[x][x+1] * H~[x+1][x] = B(x) D(x+1)`, the square of the symmetric off-diagonal entry.
    pub fn symmetric_entry_squared(&self, x: usize) -> Result<Rational, Error> {
        if x + 1 >= self.size() {
            return Err(Error::IndexOutOfRange { index: x, bound: self.size().saturating_sub(1) });
        }
        Ok(&self.upper[x] * &self.lower[x + 1])
    }
}

pub fn build_operator(params: &FamilyParams) -> Result<TriDiagOperator, Error> {
    let n = params.size() as i64;
    let mut diag = Vec::with_capacity(n as usize + 1);
    let mut upper = Vec::with_capacity(n as usize + 1);
    let mut lower = Vec::with_capacity(n as usize + 1);
    for x in 0..=n {
        let b = params.b_coeff(x)?;
        let d = params.d_coeff(x)?;
        diag.push(&b + &d);
        upper.push(-b);
        lower.push(-d);
    }
    Ok(TriDiagOperator { diag, upper, lower })
}

/// `w[x] = phi_0(x)^2 = prod_{y<x} B(y)/D(y+1)`.
pub fn ground_state_squared(params: &FamilyParams) -> Result<Vec<Rational>, Error> {
    let n = params.size() as i64;
    let mut w = vec![Rational::one()];
    for y in 0..n {
        let den = params.d_coeff(y + 1)?;
        if den.is_zero() {
            return Err(ArithError::DivisionByZero.into());
        }
        let next = w[y as usize].clone() * params.b_coeff(y)? / den;
        w.push(next);
    }
    Ok(w)
}

/// `P_n(x)` for `x` in the lattice.
pub fn lattice_values(params: &FamilyParams, n: u64) -> Result<Vec<Rational>, Error> {
    (0..=params.size() as i64).map(|x| params.eval_p(n, x)).collect()
}

/// `inv_norm_sq[n] = 1/d_n^2 = sum_x w(x) P_n(x)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormTable {
    pub inv_norm_sq: Vec<Rational>,
}

/// Norms by direct summation. Every off-diagonal sum is checked to vanish.
pub fn norms(params: &FamilyParams) -> Result<NormTable, Error> {
    let w = ground_state_squared(params)?;
    let vals: Vec<Vec<Rational>> =
        (0..=params.size() as u64).map(|n| lattice_values(params, n)).collect::<Result<_, _>>()?;
    let inner = |a: &[Rational], b: &[Rational]| {
        w.iter().zip(a).zip(b).fold(Rational::zero(), |acc, ((w, a), b)| acc + w * a * b)
    };
    let mut inv_norm_sq = Vec::with_capacity(vals.len());
    for m in 0..vals.len() {
        for n in 0..m {
            if !inner(&vals[m], &vals[n]).is_zero() {
                return Err(Error::OrthogonalityViolation { m, n });
            }
        }
        inv_norm_sq.push(inner(&vals[m], &vals[m]));
    }
    Ok(NormTable { inv_norm_sq })
}

/// Determinant of the matrix `(P_n(x))_{n,x}`.
pub fn completeness_determinant(params: &FamilyParams) -> Result<Rational, Error> {
    let rows: Vec<Vec<Rational>> =
        (0..=params.size() as u64).map(|n| lattice_values(params, n)).collect::<Result<_, _>>()?;
    Ok(determinant(rows).unwrap_or_else(Rational::zero))
}

/// Fails with the first colliding pair among `E(0..=N)`.
pub fn check_simple_spectrum(params: &FamilyParams) -> Result<(), Error> {
    let es: Vec<Rational> = (0..=params.size() as u64).map(|n| params.energy(n)).collect();
    for n in 0..es.len() {
        for k in 0..n {
            if es[n] == es[k] {
                return Err(Error::EigenvalueCollision { n: n as u64, k: k as u64 });
            }
        }
    }
    Ok(())
}
