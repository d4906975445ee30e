//! Dense polynomials in the sinusoidal coordinate, with exact rational coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::Error;
use crate::scalar::Scalar;

/// `coeffs[k]` multiplies `eta^k`. Trailing zero coefficients are never stored, so the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EtaPolynomial {
    coeffs: Vec<Rational>,
}

impl EtaPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        Self { coeffs }
    }

    /// `prod_r (eta - r)`.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots.into_iter().fold(Self::one(), |acc, r| acc * Self::new(vec![-r.clone(), Rational::one()]))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, eta: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * eta + c)
    }

    /// Horner evaluation over any scalar, e.g. a series in the lattice perturbation.
    pub fn eval_scalar<T: Scalar>(&self, eta: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::constant(Rational::zero()), |acc, c| acc * eta.clone() + T::constant(c.clone()))
    }

    /// Euclidean division: `(quotient, remainder)` with `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = Rational::one() / divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Interpolating polynomial of degree `< nodes.len()` through `(nodes[i], values[i])`,
    /// via Newton divided differences.
    pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Result<Self, Error> {
        assert_eq!(nodes.len(), values.len());
        let n = nodes.len();
        let mut table = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let gap = &nodes[i] - &nodes[i - level];
                if gap.is_zero() {
                    return Err(Error::NodeCollision(i as i64));
                }
                table[i] = (&table[i] - &table[i - 1]) / gap;
            }
        }
        // Expand the Newton form from the innermost bracket outwards.
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            let shift = Self::new(vec![-nodes[i].clone(), Rational::one()]);
            acc = acc * shift + Self::constant(table[i].clone());
        }
        Ok(acc)
    }
}

impl Add for EtaPolynomial {
    type Output = EtaPolynomial;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) =
            if self.coeffs.len() >= rhs.coeffs.len() { (self.coeffs, rhs.coeffs) } else { (rhs.coeffs, self.coeffs) };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Self::new(long)
    }
}

impl Sub for EtaPolynomial {
    type Output = EtaPolynomial;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(&-Rational::one())
    }
}

impl Mul for EtaPolynomial {
    type Output = EtaPolynomial;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}
