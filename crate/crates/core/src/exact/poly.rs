use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Univariate polynomial over the rationals, lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> UniPoly {
        UniPoly::from_i64(&[0, 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> UniPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => UniPoly {
                coeffs: self.coeffs.iter().map(|c| c / lc).collect(),
            },
        }
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(c·x)`.
    pub fn substitute_scaled(&self, c: &BigRational) -> UniPoly {
        let mut power = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        UniPoly::from_coeffs(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Exact quotient; the remainder must vanish.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        (0..e).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    /// Newton interpolation through `(xs[i], ys[i])`; nodes must be distinct.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut table = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut poly = UniPoly::zero();
        for i in (0..n).rev() {
            let shift = UniPoly::from_coeffs(vec![-xs[i].clone(), BigRational::one()]);
            poly = &(&poly * &shift) + &UniPoly::constant(table[i].clone());
        }
        poly
    }

    /// Coefficients as strings `p/q`, lowest degree first.
    pub fn to_ratio_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ratio_string).collect()
    }
}

/// Render a rational as `p/q` with positive `q`, `q = 1` included.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Argument(format!("not a rational number: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        UniPoly::from_coeffs(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

/// Primitive integer polynomial with positive leading coefficient.
fn primitive_part(p: &UniPoly) -> Vec<BigInt> {
    let denom_lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    primitive_int(ints)
}

fn primitive_int(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return a;
    }
    let sign = if a.last().unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let scale = content * sign;
    a.iter().map(|c| c / &scale).collect()
}

/// Pseudo-remainder of `a` by `b` over the integers (`b` nonzero).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn from_ints(a: &[BigInt]) -> UniPoly {
    UniPoly::from_coeffs(a.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Monic gcd over the rationals via a primitive polynomial remainder sequence.
/// `gcd(0, q) = monic(q)` and `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &UniPoly, q: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let mut a = primitive_part(p);
    let mut b = primitive_part(q);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return UniPoly::one();
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return from_ints(&b).monic();
        }
        a = b;
        b = primitive_int(r);
    }
}

/// `p = leading · ∏ factors[i].0 ^ factors[i].1` with monic, squarefree,
/// pairwise coprime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub leading: BigRational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl MultiplicityProfile {
    pub fn max_multiplicity(&self) -> usize {
        self.factors.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }

    pub fn reassemble(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.leading.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }

    /// Sum of `degree · multiplicity`, i.e. the number of roots with multiplicity.
    pub fn root_count(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * m)
            .sum()
    }
}

/// Squarefree decomposition (Yun's algorithm).
pub fn multiplicity_profile(p: &UniPoly) -> Result<MultiplicityProfile> {
    let leading = p
        .leading()
        .cloned()
        .ok_or_else(|| Error::Argument("multiplicity profile of the zero polynomial".into()))?;
    let mut factors = Vec::new();
    if p.degree() == Some(0) {
        return Ok(MultiplicityProfile { leading, factors });
    }
    let dp = p.derivative();
    let a0 = poly_gcd(p, &dp);
    let mut b = p.exact_div(&a0);
    let c = dp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut mult = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = poly_gcd(&b, &d);
        b = b.exact_div(&a);
        let c = d.exact_div(&a);
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            factors.push((a, mult));
        }
        mult += 1;
    }
    Ok(MultiplicityProfile { leading, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), UniPoly::one());
        // spectra {±5} and {0, ±5}
        assert_eq!(
            poly_gcd(&p(&[-25, 0, 1]), &p(&[0, -25, 0, 1])),
            p(&[-25, 0, 1])
        );
        assert_eq!(poly_gcd(&UniPoly::zero(), &p(&[4, 2])), p(&[2, 1]));
        assert!(poly_gcd(&UniPoly::zero(), &UniPoly::zero()).is_zero());
    }

    #[test]
    fn gcd_with_rational_coefficients() {
        let half = BigRational::new(1.into(), 2.into());
        let a = &p(&[-1, 1]) * &UniPoly::from_coeffs(vec![half.clone(), BigRational::one()]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(poly_gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn profile_examples() {
        let prof = multiplicity_profile(&p(&[-2, -3, 0, 1])).unwrap();
        assert_eq!(prof.factors, vec![(p(&[-2, 1]), 1), (p(&[1, 1]), 2)]);
        let prof = multiplicity_profile(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(prof.factors, vec![(p(&[-2, 0, 1]), 1)]);
        assert!(multiplicity_profile(&UniPoly::zero()).is_err());
        let prof = multiplicity_profile(&p(&[7])).unwrap();
        assert!(prof.factors.is_empty());
    }

    #[test]
    fn profile_reassembles_with_leading_coefficient() {
        // 3 (x - 1)^3 (x + 2)^2 x
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[0, 3]);
        let prof = multiplicity_profile(&f).unwrap();
        assert_eq!(prof.reassemble(), f);
        assert_eq!(prof.max_multiplicity(), 3);
        assert_eq!(prof.root_count(), 6);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[5, -3, 0, 2]);
        let xs: Vec<BigRational> = (0..4).map(|k| BigRational::from_integer(k.into())).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn display_and_ratio_strings() {
        assert_eq!(p(&[-2, -3, 0, 1]).to_string(), "x^3 - 3x - 2");
        assert_eq!(p(&[0, 1]).to_string(), "x");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(p(&[-25, 0, 1]).to_ratio_strings(), vec!["-25/1", "0/1", "1/1"]);
        assert_eq!(parse_ratio("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_ratio("4").unwrap(), BigRational::from_integer(4.into()));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn substitute_scaled() {
        // p(x) = x^2 - 1, p(2x) = 4x^2 - 1
        let two = BigRational::from_integer(2.into());
        assert_eq!(p(&[-1, 0, 1]).substitute_scaled(&two), p(&[-1, 0, 4]));
    }
}
