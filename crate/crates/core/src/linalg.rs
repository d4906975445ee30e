use alloc::vec::Vec;

use num_traits::One;

use crate::arith::Rational;
use crate::scalar::Scalar;

/// Determinant by Gaussian elimination, choosing at each step the pivot of lowest
/// [`Scalar::order`]. Returns `None` if a pivot division fails, which for series means the
/// working precision is exhausted.
#[allow(clippy::needless_range_loop)]
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    let mut det = T::constant(Rational::one());
    for col in 0..n {
        let pivot = (col..n).filter(|&r| !m[r][col].is_zero_value()).min_by_key(|&r| m[r][col].order());
        let Some(p) = pivot else {
            // The whole column is zero (to the working precision); the determinant is zero
            // with whatever precision the column carries.
            return Some(m[col][col].clone() * det);
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero_value() {
                continue;
            }
            let factor = m[r][col].clone().try_div(pivot.clone())?;
            for c in col + 1..n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    Some(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use alloc::vec;

    #[test]
    fn small_determinants() {
        let m = vec![vec![int(2), int(1)], vec![int(5), int(3)]];
        assert_eq!(determinant(m), Some(int(1)));
        let m = vec![vec![int(0), int(1), int(2)], vec![int(1), int(0), int(3)], vec![int(4), int(-3), int(8)]];
        assert_eq!(determinant(m), Some(int(-2)));
        let singular = vec![vec![ratio(1, 2), int(1)], vec![int(1), int(2)]];
        assert_eq!(determinant(singular), Some(int(0)));
    }

    #[test]
    fn vandermonde() {
        let nodes = [int(0), ratio(1, 3), int(2), int(-1)];
        let m: Vec<Vec<Rational>> =
            nodes.iter().map(|t| (0..4).map(|k| num_traits::Pow::pow(t, k as u32)).collect()).collect();
        let mut expected = int(1);
        for i in 0..4 {
            for j in i + 1..4 {
                expected *= &nodes[j] - &nodes[i];
            }
        }
        assert_eq!(determinant(m), Some(expected));
    }
}
