//! Scalar abstraction shared by the lattice formulas.
//!
//! Every family formula is a rational function of a single coordinate `s` (`s = x` for the
//! non-q families, `s = q^x` otherwise). Evaluating it over [`Rational`] gives the value at an
//! integer point; evaluating it over [`Series`] at `s(x) + O(eps)` gives the Laurent expansion
//! around that point, whose constant term is the removable-singularity value of expressions
//! such as `Lambda(x) / Lambda(x + M)` on the lattice.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::Rational;

pub trait Scalar:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(r: Rational) -> Self;

    /// `None` when the divisor is zero (or indistinguishable from zero at the working precision).
    fn try_div(self, rhs: Self) -> Option<Self>;

    fn is_zero_value(&self) -> bool;

    /// Pivot preference for elimination: lower is a better pivot.
    fn order(&self) -> i64;

    fn from_int(n: i64) -> Self {
        Self::constant(crate::arith::int(n))
    }

    fn scale(self, r: &Rational) -> Self {
        self * Self::constant(r.clone())
    }

    fn powu(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn constant(r: Rational) -> Self {
        r
    }

    fn try_div(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn order(&self) -> i64 {
        0
    }

    fn scale(self, r: &Rational) -> Self {
        self * r
    }
}

/// Truncated Laurent series in a formal perturbation `eps`.
///
/// `coeffs[i]` is the coefficient of `eps^(val + i)`. `prec` is the absolute order of the
/// first unknown term (`None` for exactly known values). Exact products are truncated to
/// `cap` terms, which turns them into approximate series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    val: i64,
    coeffs: Vec<Rational>,
    prec: Option<i64>,
    cap: usize,
}

/// Outcome of reading off the value of a series at `eps = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    Pole,
    Unknown,
}

impl Series {
    pub fn exact(r: Rational) -> Self {
        Self { val: 0, coeffs: vec![r], prec: None, cap: 0 }.normalized()
    }

    /// `c0 + c1 * eps`, exact, carrying the truncation budget for later products.
    pub fn linear(c0: Rational, c1: Rational, cap: usize) -> Self {
        Self { val: 0, coeffs: vec![c0, c1], prec: None, cap }.normalized()
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn coefficient(&self, k: i64) -> Option<Rational> {
        if let Some(p) = self.prec {
            if k >= p {
                return None;
            }
        }
        if k < self.val {
            return Some(Rational::zero());
        }
        Some(self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(Rational::zero))
    }

    /// Value at `eps = 0`.
    pub fn limit(&self) -> Limit {
        match self.valuation() {
            Some(v) if v < 0 => Limit::Pole,
            _ => match self.coefficient(0) {
                Some(c) => Limit::Finite(c),
                None => Limit::Unknown,
            },
        }
    }

    fn normalized(mut self) -> Self {
        if let Some(p) = self.prec {
            let keep = (p - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec.unwrap_or(0);
        }
        if self.prec.is_none() && self.cap > 0 && self.coeffs.len() > self.cap {
            self.coeffs.truncate(self.cap);
            self.prec = Some(self.val + self.cap as i64);
        }
        self
    }

    fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Multiplicative inverse; `None` for a series with no known nonzero coefficient.
    pub fn inverse(&self) -> Option<Self> {
        let v = self.valuation()?;
        let rel = match self.prec {
            Some(p) => (p - v) as usize,
            None if self.coeffs.len() == 1 => {
                let c = Rational::one() / &self.coeffs[0];
                return Some(Self { val: -v, coeffs: vec![c], prec: None, cap: self.cap });
            }
            None => self.cap.max(self.coeffs.len()),
        };
        let a0_inv = Rational::one() / &self.coeffs[0];
        let mut out: Vec<Rational> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                out.push(a0_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out.push(-acc * &a0_inv);
        }
        Some(Self { val: -v, coeffs: out, prec: Some(-v + rel as i64), cap: self.cap }.normalized())
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        let prec = Series::min_prec(self.prec, rhs.prec);
        let cap = self.cap.max(rhs.cap);
        if self.coeffs.is_empty() && rhs.coeffs.is_empty() {
            return Series { val: prec.unwrap_or(0), coeffs: Vec::new(), prec, cap };
        }
        let lo = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        let hi = (self.val + self.coeffs.len() as i64).max(rhs.val + rhs.coeffs.len() as i64);
        let hi = match prec {
            Some(p) => hi.min(p),
            None => hi,
        };
        let mut coeffs = Vec::new();
        let mut k = lo;
        while k < hi {
            let a = if k >= self.val && ((k - self.val) as usize) < self.coeffs.len() {
                self.coeffs[(k - self.val) as usize].clone()
            } else {
                Rational::zero()
            };
            let b = if k >= rhs.val && ((k - rhs.val) as usize) < rhs.coeffs.len() {
                rhs.coeffs[(k - rhs.val) as usize].clone()
            } else {
                Rational::zero()
            };
            coeffs.push(a + b);
            k += 1;
        }
        Series { val: lo, coeffs, prec, cap }.normalized()
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(mut self) -> Series {
        for c in self.coeffs.iter_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self + (-rhs)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let cap = self.cap.max(rhs.cap);
        let exact_zero = |t: &Series| t.coeffs.is_empty() && t.prec.is_none();
        if exact_zero(&self) || exact_zero(&rhs) {
            return Series { val: 0, coeffs: Vec::new(), prec: None, cap };
        }
        let prec = match (self.valuation(), rhs.valuation()) {
            (Some(va), Some(vb)) => Series::min_prec(self.prec.map(|p| p + vb), rhs.prec.map(|p| p + va)),
            // A zero-to-precision factor: the product is known to vanish up to the
            // sum of the known orders.
            (None, Some(vb)) => self.prec.map(|p| p + vb),
            (Some(va), None) => rhs.prec.map(|p| p + va),
            (None, None) => match (self.prec, rhs.prec) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        };
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Series { val: prec.unwrap_or(0), coeffs: Vec::new(), prec, cap }.normalized();
        }
        let val = self.val + rhs.val;
        let limit = match prec {
            Some(p) => ((p - val).max(0) as usize).min(self.coeffs.len() + rhs.coeffs.len() - 1),
            None => self.coeffs.len() + rhs.coeffs.len() - 1,
        };
        let mut coeffs = vec![Rational::zero(); limit];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= limit {
                break;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= limit {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Series { val, coeffs, prec, cap }.normalized()
    }
}

impl Scalar for Series {
    fn constant(r: Rational) -> Self {
        Series::exact(r)
    }

    fn try_div(self, rhs: Self) -> Option<Self> {
        let inv = rhs.inverse()?;
        Some(self * inv)
    }

    fn is_zero_value(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn order(&self) -> i64 {
        self.valuation().unwrap_or(i64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};

    fn eps(cap: usize) -> Series {
        Series::linear(int(0), int(1), cap)
    }

    #[test]
    fn removable_singularity_of_a_quotient() {
        // (x^2 - 1)/(x - 1) at x = 1 + eps is 2 + eps.
        let x = Series::linear(int(1), int(1), 6);
        let num = x.clone() * x.clone() - Series::exact(int(1));
        let den = x - Series::exact(int(1));
        let q = num.try_div(den).unwrap();
        assert_eq!(q.limit(), Limit::Finite(int(2)));
        assert_eq!(q.coefficient(1), Some(int(1)));
    }

    #[test]
    fn pole_is_detected() {
        let e = eps(4);
        let r = Series::exact(int(3)).try_div(e).unwrap();
        assert_eq!(r.limit(), Limit::Pole);
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1 - eps) = 1 + eps + eps^2 + ...
        let s = Series::exact(int(1)) - eps(5);
        let inv = s.inverse().unwrap();
        for k in 0..5 {
            assert_eq!(inv.coefficient(k), Some(int(1)));
        }
        assert_eq!(inv.coefficient(5), None);
    }

    #[test]
    fn cancellation_reduces_known_order() {
        let s = Series::exact(int(1)) - eps(3);
        let inv = s.inverse().unwrap(); // 1 + eps + eps^2 + O(eps^3)
        let d = inv - Series::exact(int(1)) - eps(3) - eps(3) * eps(3);
        assert!(d.is_zero_value());
        assert_eq!(d.precision(), Some(3));
        assert_eq!(d.limit(), Limit::Finite(int(0)));
        assert!(Series::exact(int(1)).try_div(d.clone()).is_none());
        let d2 = d * Series::exact(ratio(1, 2));
        assert_eq!(d2.precision(), Some(3));
    }
}
