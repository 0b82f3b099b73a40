//! Floating-point eigenspaces of symmetric matrices and their Plücker
//! coordinates. Used only to cross-check the exact engine; verdicts from this
//! module are advisory.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::graph::{adjacency, Graph};

/// Default gap below which eigenvalues are merged into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Default zero threshold for singular values and Plücker minors.
pub const DEFAULT_ZERO_TOL: f64 = 1e-7;

/// One eigenvalue cluster with an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    /// `n × multiplicity`, orthonormal columns.
    pub basis: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Sorted by ascending eigenvalue.
    pub clusters: Vec<EigenCluster>,
    pub tolerance: f64,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> Vec<(f64, usize)> {
        self.clusters
            .iter()
            .map(|c| (c.value, c.multiplicity))
            .collect()
    }
}

pub fn to_dmatrix(m: &ExactMatrix) -> DMatrix<f64> {
    let rows = m.to_f64_rows();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rows[i][j])
}

/// Symmetric eigendecomposition with eigenvalues merged greedily within `tol`.
pub fn eigen_sym(m: &ExactMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !m.is_symmetric() {
        return Err(Error::Argument("eigen_sym needs a symmetric matrix".into()));
    }
    let SymmetricEigen {
        eigenvalues: values,
        eigenvectors: vectors,
    } = SymmetricEigen::new(to_dmatrix(m));
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut clusters = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let first = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - first < tol {
            end += 1;
        }
        let members = &order[start..end];
        let value = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
        let basis = DMatrix::from_fn(m.rows(), members.len(), |r, c| vectors[(r, members[c])]);
        clusters.push(EigenCluster {
            value,
            multiplicity: members.len(),
            basis,
        });
        start = end;
    }
    Ok(EigenDecomposition {
        clusters,
        tolerance: tol,
    })
}

/// Maximal minor of `basis` on the rows `s` (1-based), `|s|` = number of columns.
pub fn plucker(basis: &DMatrix<f64>, s: &[usize]) -> Result<f64> {
    let m = basis.ncols();
    if s.len() != m || m > basis.nrows() {
        return Err(Error::Argument(format!(
            "Plücker coordinate needs {m} rows, got {}",
            s.len()
        )));
    }
    if s.iter().any(|&v| v == 0 || v > basis.nrows()) {
        return Err(Error::Argument(format!("row index out of range in {s:?}")));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| basis[(s[i] - 1, j)]).determinant())
}

/// Plücker minor compared against `tol` scaled by the basis Frobenius norm.
pub fn plucker_is_zero(basis: &DMatrix<f64>, s: &[usize], tol: f64) -> Result<bool> {
    Ok(plucker(basis, s)?.abs() <= tol * basis.norm().max(1.0))
}

/// Numerical rank of `basis` restricted to rows `s`.
fn restricted_rank(basis: &DMatrix<f64>, s: &[usize], tol: f64) -> usize {
    let sub = DMatrix::from_fn(s.len(), basis.ncols(), |i, j| basis[(s[i] - 1, j)]);
    sub.singular_values().iter().filter(|&&sv| sv > tol).count()
}

/// PBH eigenspace test on a precomputed decomposition: every eigenspace must
/// meet the null space of `B_Sᵀ` trivially.
pub fn pbh_check_decomposition(eig: &EigenDecomposition, s: &[usize], tol: f64) -> bool {
    eig.clusters
        .iter()
        .all(|c| c.multiplicity <= s.len() && restricted_rank(&c.basis, s, tol) == c.multiplicity)
}

/// PBH eigenspace test for the adjacency system of `g` with inputs at `s`.
pub fn pbh_eigenspace_check(g: &Graph, s: &[usize], tol: f64) -> bool {
    let eig = eigen_sym(&adjacency(g), DEFAULT_CLUSTER_TOL).expect("adjacency is symmetric");
    pbh_check_decomposition(&eig, s, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn adj(g: Graph) -> ExactMatrix {
        adjacency(&g)
    }

    fn assert_values(eig: &EigenDecomposition, expected: &[(f64, usize)]) {
        let got = eig.eigenvalues();
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for ((v, m), (ev, em)) in got.iter().zip(expected) {
            assert!((v - ev).abs() < 1e-10, "{got:?}");
            assert_eq!(m, em);
        }
    }

    fn check_decomposition(m: &ExactMatrix, eig: &EigenDecomposition) {
        let a = to_dmatrix(m);
        let n = m.rows();
        let mut q = DMatrix::<f64>::zeros(n, n);
        let mut lambda = DMatrix::<f64>::zeros(n, n);
        let mut col = 0;
        for c in &eig.clusters {
            let gram = c.basis.transpose() * &c.basis;
            assert!((gram - DMatrix::identity(c.multiplicity, c.multiplicity)).amax() < 1e-10);
            for k in 0..c.multiplicity {
                let v = c.basis.column(k);
                assert!((&a * v - v * c.value).amax() < 1e-8);
                q.set_column(col, &v);
                lambda[(col, col)] = c.value;
                col += 1;
            }
        }
        assert_eq!(col, n);
        assert!((&q * lambda * q.transpose() - a).amax() < 1e-9);
    }

    #[test]
    fn path_five_spectrum() {
        let m = adj(Graph::path(5).unwrap());
        let eig = eigen_sym(&m, DEFAULT_CLUSTER_TOL).unwrap();
        let r3 = 3f64.sqrt();
        assert_values(&eig, &[(-r3, 1), (-1.0, 1), (0.0, 1), (1.0, 1), (r3, 1)]);
        check_decomposition(&m, &eig);
    }

    #[test]
    fn cycle_six_spectrum() {
        let m = adj(Graph::cycle(6).unwrap());
        let eig = eigen_sym(&m, DEFAULT_CLUSTER_TOL).unwrap();
        assert_values(&eig, &[(-2.0, 1), (-1.0, 2), (1.0, 2), (2.0, 1)]);
        check_decomposition(&m, &eig);
    }

    #[test]
    fn identity_single_cluster() {
        let eig = eigen_sym(&ExactMatrix::identity(4), DEFAULT_CLUSTER_TOL).unwrap();
        assert_values(&eig, &[(1.0, 4)]);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(matches!(eigen_sym(&m, 1e-6), Err(Error::Argument(_))));
    }

    #[test]
    fn cycle_six_plucker_pattern() {
        let c6 = Graph::cycle(6).unwrap();
        let eig = eigen_sym(&adjacency(&c6), DEFAULT_CLUSTER_TOL).unwrap();
        for cluster in eig.clusters.iter().filter(|c| c.multiplicity == 2) {
            for i in 1..=6usize {
                for j in i + 1..=6 {
                    let d = crate::graph::distance(&c6, i, j).unwrap();
                    let zero = plucker_is_zero(&cluster.basis, &[i, j], DEFAULT_ZERO_TOL).unwrap();
                    assert_eq!(zero, d == 3, "pair {{{i},{j}}} at eigenvalue {}", cluster.value);
                }
            }
        }
        // the explicit E_1 basis M4 from the worked example
        let m4 = DMatrix::from_row_slice(6, 2, &[1., -1., 0., -1., -1., 0., -1., 1., 0., 1., 1., 0.]);
        assert_eq!(plucker(&m4, &[1, 4]).unwrap(), 0.0);
    }

    #[test]
    fn plucker_identity_block_and_errors() {
        let basis = DMatrix::from_row_slice(4, 2, &[1., 0., 3., 7., 0., 1., -2., 5.]);
        assert_eq!(plucker(&basis, &[1, 3]).unwrap(), 1.0);
        assert!(plucker(&basis, &[1]).is_err());
        assert!(plucker(&basis, &[1, 9]).is_err());
    }

    #[test]
    fn pbh_examples() {
        let p5 = Graph::path(5).unwrap();
        assert!(pbh_eigenspace_check(&p5, &[1], DEFAULT_ZERO_TOL));
        assert!(!pbh_eigenspace_check(&p5, &[3], DEFAULT_ZERO_TOL));
        let c6 = Graph::cycle(6).unwrap();
        assert!(!pbh_eigenspace_check(&c6, &[1, 4], DEFAULT_ZERO_TOL));
        assert!(pbh_eigenspace_check(&c6, &[1, 3], DEFAULT_ZERO_TOL));
    }

    proptest! {
        #[test]
        fn plucker_scales_by_change_of_basis(
            seed in 0u64..500,
            t in proptest::collection::vec(-3.0f64..3.0, 4),
        ) {
            let g = crate::graph::random_graph(7, 0.5, seed);
            let eig = eigen_sym(&adjacency(&g), DEFAULT_CLUSTER_TOL).unwrap();
            let tm = DMatrix::from_row_slice(2, 2, &t);
            let det_t = tm.determinant();
            prop_assume!(det_t.abs() > 0.1);
            for c in eig.clusters.iter().filter(|c| c.multiplicity == 2) {
                let moved = &c.basis * &tm;
                for i in 1..=7usize {
                    for j in i + 1..=7 {
                        let before = plucker(&c.basis, &[i, j]).unwrap();
                        let after = plucker(&moved, &[i, j]).unwrap();
                        prop_assert!((after - det_t * before).abs() < 1e-9);
                        prop_assert_eq!(before.abs() < 1e-7, after.abs() < 1e-7 * det_t.abs());
                    }
                }
            }
        }

        #[test]
        fn residuals_on_random_graphs(seed in 0u64..1000, n in 1usize..=12) {
            let g = crate::graph::random_graph(n, 0.4, seed);
            let m = adjacency(&g);
            let eig = eigen_sym(&m, DEFAULT_CLUSTER_TOL).unwrap();
            check_decomposition(&m, &eig);
        }

        #[test]
        fn rational_symmetric_reconstruction(vals in proptest::collection::vec((-9i64..=9, 1i64..=4), 36)) {
            let mut m = ExactMatrix::zeros(6, 6);
            for i in 0..6 {
                for j in i..6 {
                    let (p, q) = vals[i * 6 + j];
                    let v = BigRational::new(p.into(), q.into());
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            let eig = eigen_sym(&m, DEFAULT_CLUSTER_TOL).unwrap();
            check_decomposition(&m, &eig);
        }
    }
}
