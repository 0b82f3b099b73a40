//! Exact rational linear algebra: rank, determinant, characteristic
//! polynomials, polynomial gcd and squarefree multiplicity profiles.
//!
//! No floating point is used anywhere in this module.

pub(crate) mod bareiss;
mod matrix;
mod poly;

pub use matrix::ExactMatrix;
pub use poly::{
    multiplicity_profile, parse_ratio, poly_gcd, ratio_string, MultiplicityProfile, UniPoly,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{adjacency, Graph};
use crate::limits::Limits;

/// Rank over the rationals.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (rows, _) = m.to_integer_rows();
    bareiss::int_rank(&rows)
}

/// Determinant of a square matrix.
pub fn det_exact(m: &ExactMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::Argument(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let (rows, scale) = m.to_integer_rows();
    Ok(BigRational::new(bareiss::int_det(&rows), scale))
}

/// `det(x·I - m)` for an integer matrix given as rows, by evaluation at
/// `0..=n` and interpolation.
pub(crate) fn int_char_poly(m: &[Vec<BigInt>]) -> UniPoly {
    let n = m.len();
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for x in 0..=n {
        let shifted: Vec<Vec<BigInt>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        if i == j {
                            BigInt::from(x) - v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        xs.push(BigRational::from_integer(x.into()));
        ys.push(BigRational::from_integer(bareiss::int_det(&shifted)));
    }
    UniPoly::interpolate(&xs, &ys)
}

/// Monic `det(x·I - m)` with the default dimension cap.
pub fn char_poly(m: &ExactMatrix) -> Result<UniPoly> {
    char_poly_with_limit(m, Limits::default().char_poly_n)
}

pub fn char_poly_with_limit(m: &ExactMatrix, cap: usize) -> Result<UniPoly> {
    if !m.is_square() {
        return Err(Error::Argument(format!(
            "characteristic polynomial of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > cap {
        return Err(Error::Capability(format!(
            "characteristic polynomial capped at dimension {cap}, got {n}"
        )));
    }
    // det(xI - M) = L^{-n} det((Lx)I - LM)
    let (ints, l) = m.to_integer_scaled();
    let q = int_char_poly(&ints);
    if l.is_one() {
        return Ok(q);
    }
    let l_inv = BigRational::new(BigInt::one(), l);
    let coeffs = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * pow_rational(&l_inv, n - k))
        .collect();
    Ok(UniPoly::from_coeffs(coeffs))
}

fn pow_rational(base: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

/// `M(G)`: largest eigenvalue multiplicity of the adjacency matrix.
pub fn max_multiplicity(g: &Graph, limits: &Limits) -> Result<usize> {
    let p = char_poly_with_limit(&adjacency(g), limits.char_poly_n)?;
    Ok(multiplicity_profile(&p)?.max_multiplicity())
}

/// Is `r` a root of `p`?
pub fn is_root(p: &UniPoly, r: &BigRational) -> bool {
    p.eval(r).is_zero()
}
