//! Exact driver-set decisions and minimum driver-set enumeration.
//!
//! Two exact routes decide controllability of `(X, B_S)`:
//! the Kalman rank of `[B AB … A^{n-1}B]`, and the polynomial pencil test,
//! which asks whether the maximal minors of `(X - λI)` with the rows in `S`
//! deleted share a common root.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::bareiss::{det_generic, int_det, int_rank, to_i128};
use crate::exact::{int_char_poly, max_multiplicity, poly_gcd, ExactMatrix, UniPoly};
use crate::graph::{adjacency, distance, subset_orbits_or_trivial, Graph};
use crate::limits::Limits;

/// `n × |s|` matrix whose columns are the unit vectors `e_i`, `i ∈ s`.
pub fn input_matrix(s: &[usize], n: usize) -> Result<ExactMatrix> {
    if s.is_empty() {
        return Err(Error::Argument("input set must be nonempty".into()));
    }
    if s.iter().any(|&v| v == 0 || v > n) || s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "input set {s:?} must be strictly increasing within 1..={n}"
        )));
    }
    let mut b = ExactMatrix::zeros(n, s.len());
    for (col, &v) in s.iter().enumerate() {
        b.set(v - 1, col, BigRational::one());
    }
    Ok(b)
}

/// Kalman rank test: `rank [B AB … A^{n-1}B] = n`.
pub fn kalman_controllable(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::Argument(format!(
            "Kalman test needs A square and B with matching rows, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(true);
    }
    // Scaling A by a nonzero constant and B column-wise leaves the Krylov span unchanged.
    let (a_int, _) = a.to_integer_scaled();
    let (bt_int, _) = b.transpose().to_integer_rows();
    let k = b.cols();

    let mut krylov: Vec<Vec<BigInt>> = vec![Vec::with_capacity(n * k); n];
    let mut block: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..k).map(|j| bt_int[j][i].clone()).collect())
        .collect();
    for step in 0..n {
        for (row, block_row) in krylov.iter_mut().zip(&block) {
            row.extend(block_row.iter().cloned());
        }
        if step + 1 < n {
            block = (0..n)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            (0..n)
                                .filter(|&t| !a_int[i][t].is_zero())
                                .map(|t| &a_int[i][t] * &block[t][j])
                                .sum()
                        })
                        .collect()
                })
                .collect();
        }
    }
    Ok(int_rank(&krylov) == n)
}

/// Determinant of `(N - μI)[rows, cols]` for an integer matrix `N`.
fn shifted_minor(
    big: &[Vec<BigInt>],
    small: Option<&[Vec<i128>]>,
    rows: &[usize],
    cols: &[usize],
    mu: i64,
) -> BigInt {
    if let Some(small) = small {
        let m: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| small[r][c] - if r == c { i128::from(mu) } else { 0 })
                    .collect()
            })
            .collect();
        if let Some(d) = det_generic(m) {
            return BigInt::from(d);
        }
    }
    let m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .map(|&c| {
                    if r == c {
                        &big[r][c] - mu
                    } else {
                        big[r][c].clone()
                    }
                })
                .collect()
        })
        .collect();
    int_det(&m)
}

/// Monic gcd, as a polynomial in `λ`, of all maximal minors of `(X - λI)`
/// with the rows in `s` deleted. A constant gcd means `(X, B_S)` is controllable.
pub fn pencil_gcd(x: &ExactMatrix, s: &[usize]) -> Result<UniPoly> {
    if !x.is_square() {
        return Err(Error::Argument("pencil test needs a square matrix".into()));
    }
    let n = x.rows();
    if s.iter().any(|&v| v == 0 || v > n) || s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "vertex subset {s:?} must be strictly increasing within 1..={n}"
        )));
    }
    let rows: Vec<usize> = (0..n).filter(|r| !s.contains(&(r + 1))).collect();
    if rows.is_empty() {
        return Ok(UniPoly::one());
    }

    // Work with N = L·X; minors in μ = Lλ.
    let (big, l) = x.to_integer_scaled();
    let small = to_i128(&big);
    let small = small.as_deref();

    // Laplace expansion along the deleted rows writes det(X - λI) as a
    // combination of these minors, so it is a multiple of their gcd.
    let mut acc = int_char_poly(&big);

    let principal = std::iter::once(rows.clone());
    let others = (0..n)
        .combinations(rows.len())
        .filter(|cols| *cols != rows);
    for cols in principal.chain(others) {
        let degree = cols.iter().filter(|c| rows.contains(c)).count();
        let xs: Vec<BigRational> = (0..=degree as i64)
            .map(|mu| BigRational::from_integer(mu.into()))
            .collect();
        let ys: Vec<BigRational> = (0..=degree as i64)
            .map(|mu| BigRational::from_integer(shifted_minor(&big, small, &rows, &cols, mu)))
            .collect();
        if ys.iter().all(Zero::is_zero) {
            continue;
        }
        let minor = UniPoly::interpolate(&xs, &ys);
        acc = poly_gcd(&acc, &minor);
        if acc.is_unit() {
            return Ok(UniPoly::one());
        }
    }
    Ok(acc
        .substitute_scaled(&BigRational::from_integer(l))
        .monic())
}

/// Pencil form of the PBH rank test.
pub fn pencil_controllable(x: &ExactMatrix, s: &[usize]) -> Result<bool> {
    Ok(pencil_gcd(x, s)?.is_unit())
}

/// Is `(A(G), B_S)` controllable?
pub fn is_driver_set(g: &Graph, s: &[usize]) -> Result<bool> {
    g.check_subset(s)?;
    let a = adjacency(g);
    let verdict = kalman_controllable(&a, &input_matrix(s, g.n())?)?;
    debug_assert_eq!(
        verdict,
        pencil_controllable(&a, s)?,
        "Kalman and pencil tests disagree on {s:?}"
    );
    Ok(verdict)
}

/// Verdict for one orbit of candidate driver sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    pub representative: Vec<usize>,
    pub size: usize,
    pub is_driver: bool,
}

/// All minimum driver sets of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverEnumeration {
    /// `D(G)`.
    pub d: usize,
    /// `N_D(G)`.
    pub n_d: usize,
    /// `M(G)`, where the search started.
    pub lower_bound: usize,
    /// Minimum driver sets, sorted lexicographically.
    pub sets: Vec<Vec<usize>>,
    /// Every orbit of `d`-subsets with its verdict.
    pub orbits: Vec<OrbitVerdict>,
}

/// Enumerate all minimum driver sets, testing one representative per orbit of
/// `Aut(G)` and searching upward from `max(1, M(G))`.
pub fn enumerate_min_driver_sets(g: &Graph, limits: &Limits) -> Result<DriverEnumeration> {
    let n = g.n();
    if n > limits.enumeration_n {
        return Err(Error::Capability(format!(
            "driver-set enumeration capped at n = {}, graph has n = {n}",
            limits.enumeration_n
        )));
    }
    let lower_bound = max_multiplicity(g, limits)?;
    for k in lower_bound.max(1)..=n {
        if k > limits.enumeration_k {
            return Err(Error::Capability(format!(
                "driver-set enumeration capped at subsets of size {}, search reached {k}",
                limits.enumeration_k
            )));
        }
        let orbits = subset_orbits_or_trivial(g, k, limits)?;
        let verdicts = orbits
            .par_iter()
            .map(|o| is_driver_set(g, &o.representative))
            .collect::<Result<Vec<bool>>>()?;
        if !verdicts.contains(&true) {
            continue;
        }
        let mut sets: Vec<Vec<usize>> = orbits
            .iter()
            .zip(&verdicts)
            .filter(|(_, &ok)| ok)
            .flat_map(|(o, _)| o.members.iter().cloned())
            .collect();
        sets.sort();
        let orbits = orbits
            .iter()
            .zip(verdicts)
            .map(|(o, is_driver)| OrbitVerdict {
                representative: o.representative.clone(),
                size: o.size(),
                is_driver,
            })
            .collect();
        return Ok(DriverEnumeration {
            d: k,
            n_d: sets.len(),
            lower_bound,
            sets,
            orbits,
        });
    }
    unreachable!("the full vertex set is always a driver set")
}

/// `{i}` drives `P_n` iff `gcd(i, n + 1) = 1`.
pub fn path_driver_predicate(n: usize, i: usize) -> Result<bool> {
    if n < 1 || i < 1 || i > n {
        return Err(Error::Argument(format!("vertex {i} outside 1..={n}")));
    }
    Ok(i.gcd(&(n + 1)) == 1)
}

/// `{i, j}` drives `C_n` iff `gcd(2·d(i, j), n) ∈ {1, 2}`.
pub fn cycle_driver_predicate(n: usize, i: usize, j: usize) -> Result<bool> {
    if n < 3 || i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::Argument(format!(
            "pair {{{i},{j}}} is not two distinct vertices of C_{n}"
        )));
    }
    let g = Graph::cycle(n)?;
    let d = distance(&g, i, j).expect("cycles are connected");
    Ok((2 * d).gcd(&n) <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_graph;
    use proptest::prelude::*;

    fn kalman_on(g: &Graph, s: &[usize]) -> bool {
        kalman_controllable(&adjacency(g), &input_matrix(s, g.n()).unwrap()).unwrap()
    }

    #[test]
    fn input_matrix_shape() {
        let b = input_matrix(&[1], 3).unwrap();
        assert_eq!(b, ExactMatrix::from_i64(&[&[1], &[0], &[0]]));
        let b = input_matrix(&[1, 3], 3).unwrap();
        assert_eq!(b, ExactMatrix::from_i64(&[&[1, 0], &[0, 0], &[0, 1]]));
        assert_eq!(&b.transpose() * &b, ExactMatrix::identity(2));
        assert!(matches!(input_matrix(&[], 3), Err(Error::Argument(_))));
        assert!(input_matrix(&[4], 3).is_err());
    }

    #[test]
    fn kalman_examples() {
        assert!(kalman_on(&Graph::path(5).unwrap(), &[1]));
        assert!(!kalman_on(&Graph::cycle(6).unwrap(), &[1, 4]));
        let zero = ExactMatrix::zeros(2, 2);
        assert!(!kalman_controllable(&zero, &input_matrix(&[1], 2).unwrap()).unwrap());
        assert!(kalman_controllable(&zero, &ExactMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn pencil_examples() {
        let p3 = adjacency(&Graph::path(3).unwrap());
        assert!(!pencil_controllable(&p3, &[2]).unwrap());
        // eigenvector (1, 0, -1) for λ = 0 vanishes at vertex 2
        assert_eq!(pencil_gcd(&p3, &[2]).unwrap(), UniPoly::x());
        assert!(pencil_controllable(&p3, &[1]).unwrap());
        assert!(pencil_controllable(&p3, &[1, 2, 3]).unwrap());
        for s in [[2], [1]] {
            assert_eq!(
                pencil_controllable(&p3, &s).unwrap(),
                kalman_controllable(&p3, &input_matrix(&s, 3).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn pencil_certificate_scales_back() {
        // X = 1/2 · A(C_6); inputs {1,4} miss the eigenvalues ±1/2
        let half = BigRational::new(1.into(), 2.into());
        let x = adjacency(&Graph::cycle(6).unwrap()).scale(&half);
        let g = pencil_gcd(&x, &[1, 4]).unwrap();
        assert_eq!(g, UniPoly::from_coeffs(vec![-(&half * &half), BigRational::zero(), BigRational::one()]));
    }

    #[test]
    fn driver_set_examples() {
        let c6 = Graph::cycle(6).unwrap();
        assert!(is_driver_set(&c6, &[1, 2]).unwrap());
        assert!(!is_driver_set(&c6, &[1, 4]).unwrap());
        assert!(!is_driver_set(&Graph::hypercube(3).unwrap(), &[1, 2, 7]).unwrap());
        assert!(is_driver_set(&c6, &[]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let limits = Limits::default();
        let p5 = enumerate_min_driver_sets(&Graph::path(5).unwrap(), &limits).unwrap();
        assert_eq!((p5.d, p5.n_d), (1, 2));
        assert_eq!(p5.sets, vec![vec![1], vec![5]]);

        let c6 = Graph::cycle(6).unwrap();
        let e = enumerate_min_driver_sets(&c6, &limits).unwrap();
        assert_eq!((e.d, e.n_d), (2, 12));
        assert!(e
            .sets
            .iter()
            .all(|s| matches!(distance(&c6, s[0], s[1]), Some(1 | 2))));

        let q3 = enumerate_min_driver_sets(&Graph::hypercube(3).unwrap(), &limits).unwrap();
        assert_eq!((q3.d, q3.n_d, q3.lower_bound), (3, 32, 3));
        let driver_sizes: Vec<usize> = q3.orbits.iter().filter(|o| o.is_driver).map(|o| o.size).collect();
        assert_eq!(driver_sizes, vec![24, 8]);
    }

    #[test]
    fn enumeration_caps() {
        let limits = Limits::default();
        assert!(matches!(
            enumerate_min_driver_sets(&Graph::path(15).unwrap(), &limits),
            Err(Error::Capability(_))
        ));
        // empty graph on 6 vertices needs all 6 inputs
        let empty = Graph::from_edges(6, &[]).unwrap();
        assert!(matches!(
            enumerate_min_driver_sets(&empty, &limits),
            Err(Error::Capability(_))
        ));
        let e = enumerate_min_driver_sets(&empty, &Limits { enumeration_k: 6, ..limits }).unwrap();
        assert_eq!((e.d, e.n_d), (6, 1));
    }

    #[test]
    fn path_predicate_examples() {
        assert!(path_driver_predicate(5, 1).unwrap());
        assert!(!path_driver_predicate(5, 3).unwrap());
        assert!(path_driver_predicate(6, 2).unwrap());
        assert!(!path_driver_predicate(7, 2).unwrap());
        assert!(kalman_on(&Graph::path(6).unwrap(), &[2]));
        assert!(!kalman_on(&Graph::path(7).unwrap(), &[2]));
        assert!(path_driver_predicate(5, 6).is_err());
    }

    #[test]
    fn cycle_predicate_examples() {
        assert!(cycle_driver_predicate(6, 1, 3).unwrap());
        assert!(!cycle_driver_predicate(6, 1, 4).unwrap());
        assert!(!cycle_driver_predicate(8, 1, 3).unwrap());
        assert!(!cycle_driver_predicate(9, 1, 4).unwrap());
        assert!(!kalman_on(&Graph::cycle(8).unwrap(), &[1, 3]));
        assert!(!kalman_on(&Graph::cycle(9).unwrap(), &[1, 4]));
        assert!(cycle_driver_predicate(6, 2, 2).is_err());
        assert!(cycle_driver_predicate(2, 1, 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kalman_agrees_with_pencil(seed in 0u64..10_000, n in 1usize..=7, p in 0.2f64..0.8) {
            let g = random_graph(n, p, seed);
            let a = adjacency(&g);
            for k in 1..=n.min(2) {
                for s in (1..=n).combinations(k) {
                    let kal = kalman_controllable(&a, &input_matrix(&s, n).unwrap()).unwrap();
                    prop_assert_eq!(kal, pencil_controllable(&a, &s).unwrap(), "set {:?}", s);
                }
            }
        }

        #[test]
        fn driver_sets_are_automorphism_invariant(seed in 0u64..10_000, n in 2usize..=7) {
            let g = random_graph(n, 0.5, seed);
            let group = crate::graph::automorphism_group(&g, &Limits::default()).unwrap();
            for s in (1..=n).combinations(2.min(n)) {
                let base = is_driver_set(&g, &s).unwrap();
                for p in &group {
                    prop_assert_eq!(base, is_driver_set(&g, &p.apply_set(&s)).unwrap());
                }
            }
        }
    }
}
