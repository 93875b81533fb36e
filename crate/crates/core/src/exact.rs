//! Determinants: partial-pivot LU for floats, fraction-free (Bareiss)
//! elimination for rationals.
//!
//! Rational matrices are first scaled row-by-row to integer matrices; the
//! integer Bareiss pass runs in `i128` with overflow checks and restarts in
//! `BigInt` when a checked operation fails.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::Matrix;
use crate::scalar::Rational;

pub fn det_f64(m: &Matrix<f64>) -> f64 {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .expect("non-empty range");
        if a[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        let pk = a[k][k];
        det *= pk;
        for i in k + 1..n {
            let factor = a[i][k] / pk;
            if factor != 0.0 {
                for j in k + 1..n {
                    a[i][j] -= factor * a[k][j];
                }
            }
        }
    }
    det
}

/// Bareiss elimination in `i128`; `None` on overflow.
fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_bigint(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of an integer matrix given as rows.
pub fn det_integer(rows: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> =
        rows.iter().map(|r| r.iter().map(ToPrimitive::to_i128).collect()).collect();
    if let Some(d) = small.and_then(bareiss_i128) {
        return BigInt::from(d);
    }
    bareiss_bigint(rows.to_vec())
}

/// Exact determinant by fraction-free elimination.
pub fn det_rational(m: &Matrix<Rational>) -> Rational {
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect::<Vec<_>>());
        scale *= l;
    }
    Rational::new(det_integer(&rows), scale)
}

/// Rational vectors rescaled by a common denominator so that determinants of
/// any selection can be taken over the integers.
#[derive(Debug, Clone)]
pub struct IntegerVectors {
    dim: usize,
    small: Option<Vec<Vec<i128>>>,
    big: Vec<Vec<BigInt>>,
    denominator: BigInt,
}

impl IntegerVectors {
    pub fn new(dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let denominator = vectors
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let big: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| x.numer() * (&denominator / x.denom())).collect())
            .collect();
        // Leave headroom so that an n×n Bareiss pass rarely overflows.
        let bound = BigInt::from(1u64 << 20);
        let small = if big.iter().flatten().all(|x| x.abs() < bound) {
            big.iter().map(|v| v.iter().map(|x| x.to_i128().expect("bounded")).collect()).collect::<Vec<_>>().into()
        } else {
            None
        };
        IntegerVectors { dim, small, big, denominator }
    }

    pub fn len(&self) -> usize {
        self.big.len()
    }

    pub fn is_empty(&self) -> bool {
        self.big.is_empty()
    }

    /// Common denominator `L`: each stored vector is `L` times the original.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// |det| of the integer vectors at `indices`, taken as columns.
    pub fn abs_det(&self, indices: &[usize]) -> BigInt {
        debug_assert_eq!(indices.len(), self.dim);
        if let Some(small) = &self.small {
            let rows: Vec<Vec<i128>> = indices.iter().map(|&k| small[k].clone()).collect();
            if let Some(d) = bareiss_i128(rows) {
                return BigInt::from(d.unsigned_abs());
            }
        }
        let rows: Vec<Vec<BigInt>> = indices.iter().map(|&k| self.big[k].clone()).collect();
        bareiss_bigint(rows).abs()
    }

    /// Stored vector `k` (scaled by the common denominator).
    pub fn vector(&self, k: usize) -> &[BigInt] {
        &self.big[k]
    }
}

/// |det| of columns drawn from several independently scaled families.
pub fn abs_det_mixed(families: &[&IntegerVectors], picks: &[usize]) -> BigInt {
    let rows: Vec<Vec<BigInt>> =
        families.iter().zip(picks).map(|(f, &k)| f.vector(k).to_vec()).collect();
    det_integer(&rows).abs()
}
