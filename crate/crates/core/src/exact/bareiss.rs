//! Fraction-free (Bareiss) elimination on integer matrices.
//!
//! Every routine runs first on checked `i128` and falls back to `BigInt` when
//! an intermediate overflows. Divisions are exact: after step `k` each entry is
//! a `(k+1)`-minor of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait Entry: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `(a*b - c*d) / div`, `None` on overflow.
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Entry for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self> {
        let num = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(num % div, 0, "inexact Bareiss division");
        Some(num / div)
    }
    fn checked_neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self> {
        let num = a * b - c * d;
        debug_assert!(num.is_multiple_of(div), "inexact Bareiss division");
        Some(num / div)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

pub(crate) fn det_generic<T: Entry>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Some(T::zero());
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = T::cross(&m[i][j], &m[k][k], &m[i][k], &m[k][j], &prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.checked_neg()
    } else {
        Some(d)
    }
}

pub(crate) fn rank_generic<T: Entry>(mut m: Vec<Vec<T>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = T::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = T::cross(&m[r][c], &m[i][j], &m[i][c], &m[r][j], &prev)?;
            }
            m[i][c] = T::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    Some(r)
}

pub(crate) fn to_i128(m: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    m.iter()
        .map(|row| row.iter().map(ToPrimitive::to_i128).collect())
        .collect()
}

/// Exact determinant of an integer matrix.
pub(crate) fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    if let Some(small) = to_i128(m) {
        if let Some(d) = det_generic(small) {
            return d.into_big();
        }
    }
    det_generic(m.to_vec()).expect("BigInt elimination cannot overflow")
}

/// Exact rank of an integer matrix.
pub(crate) fn int_rank(m: &[Vec<BigInt>]) -> usize {
    if let Some(small) = to_i128(m) {
        if let Some(r) = rank_generic(small) {
            return r;
        }
    }
    rank_generic(m.to_vec()).expect("BigInt elimination cannot overflow")
}
