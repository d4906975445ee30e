//! Exact rational scalars and the (q-)Pochhammer / binomial kernel.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/1` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a [`Rational`]. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power with a signed exponent. Zero raised to a negative power is an error.
pub fn pow(base: &Rational, exp: i64) -> Result<Rational, ArithError> {
    if exp < 0 && base.is_zero() {
        return Err(ArithError::ZeroToNegativePower);
    }
    let e = i32::try_from(exp).map_err(|_| ArithError::ExponentOverflow(exp))?;
    Ok(Pow::pow(base, e))
}

/// `base^exp` for callers that already know `base != 0`.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    pow(base, exp).expect("nonzero base")
}

/// Converts a signed length to a Pochhammer length, rejecting negative values.
pub fn length(n: i64) -> Result<usize, ArithError> {
    usize::try_from(n).map_err(|_| ArithError::NegativeLength(n))
}

/// Rising factorial `(a)_n = a(a+1)...(a+n-1)`.
pub fn rising_factorial(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// q-shifted factorial `(a;q)_n = prod_{k<n} (1 - a q^k)`.
pub fn q_pochhammer(a: &Rational, q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut aqk = a.clone();
    for _ in 0..n {
        let factor = Rational::one() - &aqk;
        if factor.is_zero() {
            return Rational::zero();
        }
        acc *= factor;
        aqk *= q;
    }
    acc
}

/// Product of single-base Pochhammer symbols of a common length, `(a_1, a_2, ...)_n`
/// or `(a_1, a_2, ...; q)_n` when a base `q` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPochhammer {
    pub bases: Vec<Rational>,
    pub length: usize,
    pub q: Option<Rational>,
}

impl MultiPochhammer {
    pub fn rising(bases: Vec<Rational>, length: usize) -> Self {
        Self { bases, length, q: None }
    }

    pub fn q_shifted(bases: Vec<Rational>, q: Rational, length: usize) -> Self {
        Self { bases, length, q: Some(q) }
    }

    pub fn eval(&self) -> Rational {
        self.bases
            .iter()
            .map(|a| match &self.q {
                Some(q) => q_pochhammer(a, q, self.length),
                None => rising_factorial(a, self.length),
            })
            .product()
    }
}

/// `(a_1,...,a_r)_n`.
pub fn rising_multi(bases: &[Rational], n: usize) -> Rational {
    bases.iter().map(|a| rising_factorial(a, n)).product()
}

/// `(a_1,...,a_r;q)_n`.
pub fn q_pochhammer_multi(bases: &[Rational], q: &Rational, n: usize) -> Rational {
    bases.iter().map(|a| q_pochhammer(a, q, n)).product()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient; zero when `j` lies outside `0..=m`.
pub fn binomial(m: u64, j: i64) -> Rational {
    if j < 0 || j as u64 > m {
        return Rational::zero();
    }
    let j = j as u64;
    let num = factorial(m);
    let den = factorial(j) * factorial(m - j);
    Rational::from_integer(num.div_floor(&den))
}

/// Gaussian binomial `(q;q)_m / ((q;q)_j (q;q)_{m-j})`; zero when `j` lies outside `0..=m`.
pub fn q_binomial(m: u64, j: i64, q: &Rational) -> Rational {
    if j < 0 || j as u64 > m {
        return Rational::zero();
    }
    let j = j as usize;
    let m = m as usize;
    q_pochhammer(q, q, m) / (q_pochhammer(q, q, j) * q_pochhammer(q, q, m - j))
}

/// `"num/den"` (or `"num"` for integers), the lossless string form used in reports.
pub fn to_fraction_string(r: &Rational) -> alloc::string::String {
    use alloc::string::ToString;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"num/den"`, `"num"` or a finite decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, ArithError> {
    let t = text.trim();
    let bad = || ArithError::Parse(alloc::string::String::from(text));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole: BigInt =
            if whole.is_empty() || whole == "-" { BigInt::zero() } else { whole.parse().map_err(|_| bad())? };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = Pow::pow(BigInt::from(10), frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::from_integer(whole.abs()) + Rational::new(frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// Used only for human-facing approximation columns.
pub fn to_decimal_string(r: &Rational, digits: usize) -> alloc::string::String {
    use alloc::string::ToString;
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let mut num = r.numer().abs();
    let den = r.denom().clone();
    // Find exponent e with 10^e <= |r| < 10^(e+1).
    let ten = BigInt::from(10);
    let mut exp10: i64 = 0;
    let (mut n_scaled, mut d_scaled) = (num.clone(), den.clone());
    while n_scaled >= &d_scaled * &ten {
        d_scaled *= &ten;
        exp10 += 1;
    }
    while n_scaled < d_scaled {
        n_scaled *= &ten;
        exp10 -= 1;
    }
    let shift = digits as i64 - 1 - exp10;
    if shift >= 0 {
        num *= Pow::pow(&ten, shift as u32);
    }
    let mut mantissa = if shift >= 0 { num / &den } else { num / (den * Pow::pow(&ten, (-shift) as u32)) };
    let mut s = mantissa.to_string();
    while s.len() > digits {
        mantissa /= &ten;
        s = mantissa.to_string();
    }
    let body = if (-6..21).contains(&exp10) {
        let point = exp10 + 1;
        let digits_str = s.trim_end_matches('0');
        let digits_str = if digits_str.is_empty() { "0" } else { digits_str };
        if point <= 0 {
            let mut out = alloc::string::String::from("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(digits_str);
            out
        } else if point as usize >= digits_str.len() {
            let mut out = alloc::string::String::from(digits_str);
            for _ in digits_str.len()..point as usize {
                out.push('0');
            }
            out
        } else {
            let (a, b) = digits_str.split_at(point as usize);
            alloc::format!("{a}.{b}")
        }
    } else {
        let digits_str = s.trim_end_matches('0');
        let (a, b) = digits_str.split_at(1);
        if b.is_empty() {
            alloc::format!("{a}e{exp10}")
        } else {
            alloc::format!("{a}.{b}e{exp10}")
        }
    };
    if negative {
        alloc::format!("-{body}")
    } else {
        body
    }
}

/// Lossy conversion for diagnostics.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
