//! Strong structural controllability over `Sym(G)` and `Sym₀(G)`.
//!
//! Paths and cycles are decided by block splitting: deleting the input rows of
//! `X - λI` leaves two tridiagonal blocks `Y`, `Z` joined by bridge weights,
//! and the rank drops exactly when `Y` and `Z` share an eigenvalue.

use std::collections::BTreeMap;
use std::convert::TryFrom;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controllability::{is_driver_set, pencil_gcd};
use crate::error::{Error, Result};
use crate::exact::{char_poly_with_limit, parse_ratio, poly_gcd, ratio_string, ExactMatrix, UniPoly};
use crate::graph::{distance, Graph, Permutation};
use crate::zero_forcing::{forcing_closure, ForcingTrace};

/// Common eigenvalue planted in witness blocks.
pub const WITNESS_EIGENVALUE: i64 = 5;
/// Candidate budget for blocks of size five and up.
pub const WITNESS_BUDGET: usize = 10_000;
/// Sym₀ samples tried before a set on a general graph is left undetermined.
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Free diagonal.
    Sym,
    /// Zero diagonal.
    Sym0,
}

/// A member of `Sym(G)` or `Sym₀(G)`: nonzero weights on exactly the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSystem {
    graph: Graph,
    weights: BTreeMap<(usize, usize), BigRational>,
    diagonal: BTreeMap<usize, BigRational>,
    mode: Mode,
}

impl WeightedSystem {
    /// Zero diagonal entries are dropped; edge keys may be given in either order.
    pub fn new(
        graph: Graph,
        weights: BTreeMap<(usize, usize), BigRational>,
        diagonal: BTreeMap<usize, BigRational>,
        mode: Mode,
    ) -> Result<WeightedSystem> {
        let weights: BTreeMap<(usize, usize), BigRational> = weights
            .into_iter()
            .map(|((i, j), w)| ((i.min(j), i.max(j)), w))
            .collect();
        if weights.len() != graph.edge_count()
            || weights.keys().any(|&(i, j)| !graph.has_edge(i, j))
        {
            return Err(Error::Argument(
                "weights must be given on exactly the edges of the graph".into(),
            ));
        }
        if let Some(((i, j), _)) = weights.iter().find(|(_, w)| w.is_zero()) {
            return Err(Error::Argument(format!("edge {{{i},{j}}} has zero weight")));
        }
        let diagonal: BTreeMap<usize, BigRational> =
            diagonal.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if diagonal.keys().any(|&v| v == 0 || v > graph.n()) {
            return Err(Error::Argument("diagonal entry outside the vertex set".into()));
        }
        if mode == Mode::Sym0 && !diagonal.is_empty() {
            return Err(Error::Argument("Sym0 systems have zero diagonal".into()));
        }
        Ok(WeightedSystem {
            graph,
            weights,
            diagonal,
            mode,
        })
    }

    /// All weights 1, zero diagonal: the adjacency matrix.
    pub fn unit(graph: &Graph) -> WeightedSystem {
        let weights = graph.edges().map(|e| (e, BigRational::one())).collect();
        WeightedSystem::new(graph.clone(), weights, BTreeMap::new(), Mode::Sym0)
            .expect("unit weights are valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.weights
    }

    /// Nonzero diagonal entries only.
    pub fn diagonal(&self) -> &BTreeMap<usize, BigRational> {
        &self.diagonal
    }

    /// `x_ij`, zero off the edge set.
    pub fn weight(&self, i: usize, j: usize) -> BigRational {
        self.weights
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.n(), self.n());
        for (&(i, j), w) in &self.weights {
            m.set(i - 1, j - 1, w.clone());
            m.set(j - 1, i - 1, w.clone());
        }
        for (&v, d) in &self.diagonal {
            m.set(v - 1, v - 1, d.clone());
        }
        m
    }

    pub fn scale(&self, c: &BigRational) -> Result<WeightedSystem> {
        if c.is_zero() {
            return Err(Error::Argument("scaling factor must be nonzero".into()));
        }
        Ok(WeightedSystem {
            graph: self.graph.clone(),
            weights: self.weights.iter().map(|(&e, w)| (e, w * c)).collect(),
            diagonal: self.diagonal.iter().map(|(&v, d)| (v, d * c)).collect(),
            mode: self.mode,
        })
    }

    /// Move vertex `v` to `perm(v)`; the result must live on `target`.
    pub fn relabel_onto(&self, perm: &Permutation, target: &Graph) -> Result<WeightedSystem> {
        if perm.n() != self.n() || target.n() != self.n() {
            return Err(Error::Argument("relabeling size mismatch".into()));
        }
        let weights = self
            .weights
            .iter()
            .map(|(&(i, j), w)| ((perm.apply(i), perm.apply(j)), w.clone()))
            .collect();
        let diagonal = self
            .diagonal
            .iter()
            .map(|(&v, d)| (perm.apply(v), d.clone()))
            .collect();
        WeightedSystem::new(target.clone(), weights, diagonal, self.mode)
    }
}

fn random_nonzero_ratio(rng: &mut ChaCha8Rng) -> BigRational {
    let mut num = 0i64;
    while num == 0 {
        num = rng.gen_range(-9..=9);
    }
    BigRational::new(num.into(), rng.gen_range(1i64..=4).into())
}

/// Random weighted system, deterministic per seed.
///
/// Weights are nonzero integers in `[-9, 9]` over a denominator in `[1, 4]`;
/// in `Sym` mode diagonal entries are integers in `[-9, 9]`.
pub fn sample_weighted(g: &Graph, mode: Mode, seed: u64) -> WeightedSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = g
        .edges()
        .map(|e| (e, random_nonzero_ratio(&mut rng)))
        .collect();
    let diagonal = match mode {
        Mode::Sym0 => BTreeMap::new(),
        Mode::Sym => (1..=g.n())
            .map(|v| (v, BigRational::from_integer(rng.gen_range(-9i64..=9).into())))
            .collect(),
    };
    WeightedSystem::new(g.clone(), weights, diagonal, mode).expect("sampled weights are valid")
}

fn path_weights(x: &WeightedSystem) -> Vec<BigRational> {
    (1..x.n()).map(|k| x.weight(k, k + 1)).collect()
}

/// `det X` for `X ∈ Sym₀(P_n)`: zero for odd `n`, otherwise
/// `(-1)^{n/2} · x₁₂² · x₃₄² ⋯ x_{n-1,n}²`.
pub fn sym0_path_det_formula(x: &WeightedSystem) -> Result<BigRational> {
    if !x.graph.is_path_shaped() || x.mode != Mode::Sym0 {
        return Err(Error::Argument(
            "determinant formula needs a Sym0 system on a path".into(),
        ));
    }
    let n = x.n();
    if n % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let w = path_weights(x);
    let prod = w
        .iter()
        .step_by(2)
        .fold(BigRational::one(), |acc, v| acc * v * v);
    Ok(if (n / 2) % 2 == 1 { -prod } else { prod })
}

/// Weighted path on `len` vertices with the given consecutive weights and diagonal.
fn path_block(
    weights: Vec<BigRational>,
    diagonal: BTreeMap<usize, BigRational>,
    mode: Mode,
) -> WeightedSystem {
    let len = weights.len() + 1;
    let g = Graph::path(len).expect("block sizes are positive");
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(k, w)| ((k + 1, k + 2), w))
        .collect();
    WeightedSystem::new(g, weights, diagonal, mode).expect("block weights come from a valid system")
}

/// Restriction of a path-like system to the consecutive vertices `lo..=hi`.
fn segment(x: &WeightedSystem, lo: usize, hi: usize) -> WeightedSystem {
    let weights = (lo..hi).map(|k| x.weight(k, k + 1)).collect();
    let diagonal = x
        .diagonal
        .range(lo..=hi)
        .map(|(&v, d)| (v - lo + 1, d.clone()))
        .collect();
    path_block(weights, diagonal, x.mode)
}

/// Blocks `Y` on `1..i-1` and `Z` on `i+1..n` left when row and column `i` are
/// removed from a path system. Size-1 blocks are `1 × 1`.
pub fn split_path(x: &WeightedSystem, i: usize) -> Result<(WeightedSystem, WeightedSystem)> {
    let n = x.n();
    if !x.graph.is_path_shaped() {
        return Err(Error::Argument("split_path needs a path system".into()));
    }
    if n < 3 || i < 2 || i > n - 1 {
        return Err(Error::Argument(format!(
            "split vertex {i} must be interior to P_{n}"
        )));
    }
    Ok((segment(x, 1, i - 1), segment(x, i + 1, n)))
}

/// Blocks `Y` on `2..j-1` and `Z` on `j+1..n` for inputs `{1, j}` on a cycle.
///
/// Accepts `3 ≤ j ≤ ⌊n/2⌋ + 1`, which covers every distance `d = j - 1 ≥ 2`.
pub fn split_cycle(x: &WeightedSystem, j: usize) -> Result<(WeightedSystem, WeightedSystem)> {
    let n = x.n();
    if !x.graph.is_cycle_shaped() {
        return Err(Error::Argument("split_cycle needs a cycle system".into()));
    }
    if n < 4 || j < 3 || j > n / 2 + 1 {
        return Err(Error::Argument(format!(
            "pair {{1,{j}}} is outside the normalized range for C_{n}"
        )));
    }
    Ok((segment(x, 2, j - 1), segment(x, j + 1, n)))
}

/// Rotation of `C_n` carrying `{a, b}` to `{1, d + 1}`, `d = d(a, b)`.
/// Returns `(d + 1, rotation)`.
pub fn normalize_cycle_pair(n: usize, a: usize, b: usize) -> Result<(usize, Permutation)> {
    let g = Graph::cycle(n)?;
    g.check_subset(&[a.min(b), a.max(b)])?;
    if a == b {
        return Err(Error::Argument("pair needs two distinct vertices".into()));
    }
    let (a, b) = (a.min(b), a.max(b));
    let d = distance(&g, a, b).expect("cycles are connected");
    let start = if b - a == d { a } else { b };
    let images = (1..=n).map(|v| (v + n - start) % n + 1).collect();
    Ok((d + 1, Permutation::from_images(images)?))
}

fn block_char_poly(x: &WeightedSystem) -> UniPoly {
    char_poly_with_limit(&x.matrix(), usize::MAX).expect("blocks are square")
}

/// Do `Y` and `Z` have a common eigenvalue? The certificate is the monic gcd
/// of their characteristic polynomials.
pub fn blocks_share_eigenvalue(y: &WeightedSystem, z: &WeightedSystem) -> (bool, UniPoly) {
    let g = poly_gcd(&block_char_poly(y), &block_char_poly(z));
    (!g.is_unit(), g)
}

/// `p_m(t)` for the zero-diagonal tridiagonal matrix with the given weights.
fn continuant(weights: &[BigRational], t: &BigRational) -> BigRational {
    let mut prev = BigRational::one();
    let mut cur = t.clone();
    for w in weights {
        let next = t * &cur - w * w * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Nonzero weights of a zero-diagonal path block on `m ≥ 2` vertices with
/// eigenvalue `t`.
///
/// For `m ≥ 5` the first `m - 3` weights are chosen, then `(u, s)` for the
/// last two must satisfy `s² + c·u² = t²` with `c = t·p_{m-3}(t)/p_{m-2}(t)`.
/// The conic has the rational point `(t, 0)`, and the line of slope `k`
/// through it meets the conic again at `u = 2tk/(k² + c)`, `s = t(c - k²)/(k² + c)`.
pub fn prescribed_block(m: usize, t: i64, seed: u64) -> Result<Vec<BigRational>> {
    let tr = int(t);
    let fixed: Option<Vec<i64>> = match m {
        2 => Some(vec![t]),
        3 => Some(vec![3 * t / 5, 4 * t / 5]),
        4 => Some(vec![3 * t, 8 * t, 3 * t]),
        _ => None,
    };
    if m < 2 || t == 0 {
        return Err(Error::Argument(format!(
            "no zero-diagonal block of size {m} has eigenvalue {t}"
        )));
    }
    if let Some(w) = fixed.filter(|_| t % 5 == 0) {
        return Ok(w.into_iter().map(int).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for attempt in 0..WITNESS_BUDGET {
        let mut weights: Vec<BigRational> = if attempt == 0 {
            vec![BigRational::one(); m.saturating_sub(3)]
        } else {
            (0..m.saturating_sub(3))
                .map(|_| random_nonzero_ratio(&mut rng))
                .collect()
        };
        let k = if attempt == 0 {
            BigRational::one()
        } else {
            random_nonzero_ratio(&mut rng)
        };
        let (a, b) = match weights.len() {
            0 => (tr.clone(), BigRational::one()),
            len => (continuant(&weights, &tr), continuant(&weights[..len - 1], &tr)),
        };
        last = weights.clone();
        if a.is_zero() {
            continue;
        }
        let c = &tr * b / &a;
        let denom = &k * &k + &c;
        if denom.is_zero() {
            continue;
        }
        let u = int(2) * &tr * &k / &denom;
        let s = &tr * (&c - &k * &k) / &denom;
        if u.is_zero() || s.is_zero() {
            continue;
        }
        weights.push(u);
        weights.push(s.abs());
        if continuant(&weights, &tr).is_zero() {
            return Ok(weights);
        }
    }
    let mut approximate: Vec<(usize, usize, f64)> = last
        .iter()
        .enumerate()
        .map(|(k, w)| (k + 1, k + 2, w.to_f64().unwrap_or(f64::NAN)))
        .collect();
    let tail = (t as f64).abs().sqrt();
    approximate.push((m - 2, m - 1, tail));
    approximate.push((m - 1, m, tail));
    Err(Error::WitnessSearch {
        attempts: WITNESS_BUDGET,
        approximate,
    })
}

/// A system on which the input set fails, with the pencil gcd as certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "WitnessRecord", try_from = "WitnessRecord")]
pub struct Witness {
    pub system: WeightedSystem,
    /// Monic gcd of the maximal minors of `(X - λI)_{V∖S}`.
    pub certificate: UniPoly,
}

/// Serialized form of a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: usize,
    pub mode: Mode,
    pub weights: Vec<(usize, usize, String)>,
    pub diagonal: Vec<(usize, String)>,
    pub certificate_gcd: Vec<String>,
}

impl From<Witness> for WitnessRecord {
    fn from(w: Witness) -> WitnessRecord {
        WitnessRecord {
            n: w.system.n(),
            mode: w.system.mode,
            weights: w
                .system
                .weights
                .iter()
                .map(|(&(i, j), v)| (i, j, ratio_string(v)))
                .collect(),
            diagonal: w
                .system
                .diagonal
                .iter()
                .map(|(&v, d)| (v, ratio_string(d)))
                .collect(),
            certificate_gcd: w.certificate.to_ratio_strings(),
        }
    }
}

impl TryFrom<WitnessRecord> for Witness {
    type Error = Error;

    fn try_from(r: WitnessRecord) -> Result<Witness> {
        let pairs: Vec<(usize, usize)> = r.weights.iter().map(|&(i, j, _)| (i, j)).collect();
        let graph = Graph::from_edges(r.n, &pairs)?;
        let weights = r
            .weights
            .iter()
            .map(|(i, j, v)| Ok(((*i, *j), parse_ratio(v)?)))
            .collect::<Result<_>>()?;
        let diagonal = r
            .diagonal
            .iter()
            .map(|(v, d)| Ok((*v, parse_ratio(d)?)))
            .collect::<Result<_>>()?;
        let coeffs = r
            .certificate_gcd
            .iter()
            .map(|c| parse_ratio(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Witness {
            system: WeightedSystem::new(graph, weights, diagonal, r.mode)?,
            certificate: UniPoly::from_coeffs(coeffs),
        })
    }
}


/// Which construction applies to a path or cycle input set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Case {
    /// `{2}` or `{n-1}` on an even path: Sym₀ can never fail, a diagonal entry can.
    PathEnd,
    /// `{i}`, `3 ≤ i ≤ n-2`.
    PathInterior,
    /// Distance-2 pair on an odd cycle.
    CycleTwoOdd,
    /// Distance-2 pair on a cycle with `n ≡ 2 (mod 4)`: `Y = [0]`, `Z` odd, singular.
    CycleTwoEven,
    /// Distance `d ≥ 3`.
    CycleFar,
}

impl Case {
    fn tag(self) -> &'static str {
        match self {
            Case::PathEnd => "path-vertex-next-to-end",
            Case::PathInterior => "path-interior-vertex",
            Case::CycleTwoOdd => "cycle-distance-two-odd-n",
            Case::CycleTwoEven => "cycle-distance-two-even-n",
            Case::CycleFar => "cycle-distance-at-least-three",
        }
    }

    fn verdict(self) -> Verdict {
        match self {
            Case::PathEnd | Case::CycleTwoOdd => Verdict::TypeII,
            _ => Verdict::NotStrongSym0,
        }
    }
}

fn path_or_cycle_case(g: &Graph, s: &[usize]) -> Option<Case> {
    let n = g.n();
    if g.is_path_shaped() && s.len() == 1 && n >= 4 {
        let i = s[0];
        if n % 2 == 0 && (i == 2 || i == n - 1) {
            return Some(Case::PathEnd);
        }
        if (3..=n - 2).contains(&i) {
            return Some(Case::PathInterior);
        }
    }
    if g.is_cycle_shaped() && s.len() == 2 && n >= 5 {
        return match distance(g, s[0], s[1]) {
            Some(2) if n % 2 == 1 => Some(Case::CycleTwoOdd),
            Some(2) => Some(Case::CycleTwoEven),
            Some(d) if d >= 3 => Some(Case::CycleFar),
            _ => None,
        };
    }
    None
}

/// Weights of a block of size `m` carrying eigenvalue `t`, plus a diagonal
/// for the `1 × 1` case in Sym mode.
fn planted_block(m: usize, mode: Mode, seed: u64) -> Result<(Vec<BigRational>, Option<BigRational>)> {
    let t = WITNESS_EIGENVALUE;
    match (m, mode) {
        (1, Mode::Sym) => Ok((Vec::new(), Some(int(t)))),
        (1, Mode::Sym0) => Err(Error::Argument("a 1 x 1 Sym0 block is [0]".into())),
        _ => Ok((prescribed_block(m, t, seed)?, None)),
    }
}

fn build_on_path(n: usize, i: usize, mode: Mode, seed: u64) -> Result<WeightedSystem> {
    let (y, y_diag) = planted_block(i - 1, mode, seed)?;
    let (z, z_diag) = planted_block(n - i, mode, seed.wrapping_add(1))?;
    let mut weights = y;
    weights.push(BigRational::one());
    weights.push(BigRational::one());
    weights.extend(z);
    let mut diagonal = BTreeMap::new();
    if let Some(d) = y_diag {
        diagonal.insert(1, d);
    }
    if let Some(d) = z_diag {
        diagonal.insert(n, d);
    }
    Ok(path_block(weights, diagonal, mode))
}

/// Eigenvector of a path block for `lambda`, scaled so its first entry is 1.
fn path_eigenvector(block: &WeightedSystem, lambda: &BigRational) -> Option<Vec<BigRational>> {
    let m = block.n();
    let shift = |k: usize| lambda - block.diagonal.get(&k).cloned().unwrap_or_else(BigRational::zero);
    let mut v = vec![BigRational::one()];
    for k in 1..m {
        let back = if k > 1 {
            block.weight(k - 1, k) * &v[k - 2]
        } else {
            BigRational::zero()
        };
        let next = (shift(k) * &v[k - 1] - back) / block.weight(k, k + 1);
        v.push(next);
    }
    let back = if m > 1 {
        block.weight(m - 1, m) * &v[m - 2]
    } else {
        BigRational::zero()
    };
    (shift(m) * &v[m - 1] - back).is_zero().then_some(v)
}

/// Cycle system with inputs `{1, j}`, `j = |Y| + 2`: `Y` on `2..j-1`, `Z` on
/// `j+1..n`, bridges 1 except `x_1n`.
///
/// Deleting rows 1 and `j` leaves two coupling equations between the
/// eigenvectors `u` of `Y` and `w` of `Z` at `lambda`, so a shared eigenvalue
/// alone is not enough. `x_1n = u_1 w_1 / (u_last w_last)` makes them consistent.
fn cycle_from_blocks(
    y: &WeightedSystem,
    z: &WeightedSystem,
    lambda: &BigRational,
    mode: Mode,
) -> Result<WeightedSystem> {
    let j = y.n() + 2;
    let n = j + z.n();
    let (u, w) = match (path_eigenvector(y, lambda), path_eigenvector(z, lambda)) {
        (Some(u), Some(w)) => (u, w),
        _ => return Err(Error::Argument(format!("blocks do not share eigenvalue {lambda}"))),
    };
    let chord = &u[0] * &w[0] / (&u[u.len() - 1] * &w[w.len() - 1]);
    let mut weights = BTreeMap::new();
    for k in 1..n {
        let x = if (2..=j - 2).contains(&k) {
            y.weight(k - 1, k)
        } else if k > j {
            z.weight(k - j, k - j + 1)
        } else {
            BigRational::one()
        };
        weights.insert((k, k + 1), x);
    }
    weights.insert((1, n), chord);
    let diagonal = y
        .diagonal
        .iter()
        .map(|(&v, d)| (v + 1, d.clone()))
        .chain(z.diagonal.iter().map(|(&v, d)| (v + j, d.clone())))
        .collect();
    WeightedSystem::new(Graph::cycle(n)?, weights, diagonal, mode)
}

fn planted_system(m: usize, mode: Mode, seed: u64) -> Result<WeightedSystem> {
    let (weights, diag) = planted_block(m, mode, seed)?;
    Ok(path_block(weights, diag.into_iter().map(|d| (1, d)).collect(), mode))
}

fn construct(g: &Graph, s: &[usize], case: Case, seed: u64) -> Result<WeightedSystem> {
    let n = g.n();
    let t = int(WITNESS_EIGENVALUE);
    match case {
        Case::PathEnd => build_on_path(n, s[0], Mode::Sym, seed),
        Case::PathInterior => build_on_path(n, s[0], Mode::Sym0, seed),
        Case::CycleTwoOdd | Case::CycleTwoEven | Case::CycleFar => {
            let (j, rot) = normalize_cycle_pair(n, s[0], s[1])?;
            let x = match case {
                Case::CycleTwoOdd => cycle_from_blocks(
                    &planted_system(1, Mode::Sym, seed)?,
                    &planted_system(n - j, Mode::Sym, seed)?,
                    &t,
                    Mode::Sym,
                )?,
                Case::CycleTwoEven => cycle_from_blocks(
                    &WeightedSystem::unit(&Graph::path(1)?),
                    &WeightedSystem::unit(&Graph::path(n - 3)?),
                    &BigRational::zero(),
                    Mode::Sym0,
                )?,
                _ => cycle_from_blocks(
                    &planted_system(j - 2, Mode::Sym0, seed)?,
                    &planted_system(n - j, Mode::Sym0, seed.wrapping_add(1))?,
                    &t,
                    Mode::Sym0,
                )?,
            };
            x.relabel_onto(&rot.inverse(), g)
        }
    }
}

/// Exact counterexample for a path or cycle driver set that is not of type I.
///
/// Type II sets get a `Sym` witness (nonzero diagonal); the others get a
/// `Sym₀` witness. The pencil test is rerun exactly before returning.
pub fn witness_not_strong(g: &Graph, s: &[usize]) -> Result<Witness> {
    if !is_driver_set(g, s)? {
        return Err(Error::Argument(format!("{s:?} is not a driver set")));
    }
    let case = path_or_cycle_case(g, s).ok_or_else(|| {
        Error::Argument(format!(
            "no counterexample construction for {s:?} on this graph"
        ))
    })?;
    let system = construct(g, s, case, 0)?;
    let certificate = pencil_gcd(&system.matrix(), s)?;
    if certificate.is_unit() {
        return Err(Error::Capability(format!(
            "constructed system for {s:?} failed exact verification"
        )));
    }
    Ok(Witness {
        system,
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Strongly controllable over all of `Sym(G)`.
    TypeI,
    /// Strongly controllable over `Sym₀(G)` but not over `Sym(G)`.
    TypeII,
    NotStrongSym0,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The input set colors the whole graph.
    ZeroForcing { trace: ForcingTrace },
    /// Decided by the path or cycle results; the witness fails controllability.
    Theorem { tag: String, witness: Witness },
    /// A random `Sym₀` sample on which the pencil test failed.
    Sample { seed: u64, witness: Witness },
    /// No sample failed.
    Sampling { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl Classification {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.evidence {
            Evidence::Theorem { witness, .. } | Evidence::Sample { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

fn sample_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn classify(g: &Graph, s: &[usize]) -> Result<Classification> {
    classify_with(g, s, DEFAULT_SAMPLES, 0)
}

/// Classify a driver set, falling back to `samples` seeded `Sym₀` systems off
/// the path and cycle cases.
pub fn classify_with(g: &Graph, s: &[usize], samples: usize, seed: u64) -> Result<Classification> {
    if !is_driver_set(g, s)? {
        return Err(Error::Argument(format!("{s:?} is not a driver set")));
    }
    let trace = forcing_closure(g, s)?;
    if trace.is_complete(g.n()) {
        return Ok(Classification {
            verdict: Verdict::TypeI,
            evidence: Evidence::ZeroForcing { trace },
        });
    }
    if let Some(case) = path_or_cycle_case(g, s) {
        return Ok(Classification {
            verdict: case.verdict(),
            evidence: Evidence::Theorem {
                tag: case.tag().to_string(),
                witness: witness_not_strong(g, s)?,
            },
        });
    }
    for k in 0..samples {
        let sample = sample_seed(seed, k);
        let system = sample_weighted(g, Mode::Sym0, sample);
        let certificate = pencil_gcd(&system.matrix(), s)?;
        if !certificate.is_unit() {
            return Ok(Classification {
                verdict: Verdict::NotStrongSym0,
                evidence: Evidence::Sample {
                    seed: sample,
                    witness: Witness {
                        system,
                        certificate,
                    },
                },
            });
        }
    }
    Ok(Classification {
        verdict: Verdict::Undetermined,
        evidence: Evidence::Sampling { samples },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllability::{input_matrix, kalman_controllable, pencil_controllable};
    use crate::exact::det_exact;
    use crate::graph::{adjacency, random_graph};
    use crate::zero_forcing::is_zero_forcing_set;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn sym0_path(w: &[i64]) -> WeightedSystem {
        path_block(ints(w), BTreeMap::new(), Mode::Sym0)
    }

    #[test]
    fn system_validation() {
        let p3 = Graph::path(3).unwrap();
        let mut w = BTreeMap::new();
        w.insert((1, 2), int(2));
        assert!(WeightedSystem::new(p3.clone(), w.clone(), BTreeMap::new(), Mode::Sym0).is_err());
        w.insert((3, 2), int(0));
        assert!(WeightedSystem::new(p3.clone(), w.clone(), BTreeMap::new(), Mode::Sym0).is_err());
        w.insert((3, 2), int(-1));
        let x = WeightedSystem::new(p3.clone(), w.clone(), BTreeMap::new(), Mode::Sym0).unwrap();
        assert_eq!(x.weight(3, 2), int(-1));
        let mut d = BTreeMap::new();
        d.insert(2, int(4));
        assert!(WeightedSystem::new(p3.clone(), w.clone(), d.clone(), Mode::Sym0).is_err());
        let x = WeightedSystem::new(p3, w, d, Mode::Sym).unwrap();
        assert!(x.matrix().is_symmetric());
        assert_eq!(x.matrix().get(1, 1), &int(4));
    }

    #[test]
    fn sampling_contract() {
        let g = Graph::hypercube(3).unwrap();
        let a = sample_weighted(&g, Mode::Sym0, 7);
        assert!(a.diagonal().is_empty());
        assert_eq!(a, sample_weighted(&g, Mode::Sym0, 7));
        assert_ne!(a, sample_weighted(&g, Mode::Sym0, 8));
        for w in a.weights().values() {
            assert!(!w.is_zero());
            assert!(w.numer().abs() <= 9.into() && *w.denom() <= 4.into());
        }
        assert_eq!(WeightedSystem::unit(&g).matrix(), adjacency(&g));
        let s = sample_weighted(&g, Mode::Sym, 7);
        assert!(s.diagonal().values().all(|d| d.abs() <= int(9)));
    }

    #[test]
    fn determinant_formula_examples() {
        assert_eq!(sym0_path_det_formula(&sym0_path(&[3])).unwrap(), int(-9));
        assert_eq!(sym0_path_det_formula(&sym0_path(&[2, 7])).unwrap(), int(0));
        let x = sym0_path(&[1, 7, 2]);
        assert_eq!(sym0_path_det_formula(&x).unwrap(), int(4));
        assert_eq!(det_exact(&x.matrix()).unwrap(), int(4));
        let c = WeightedSystem::unit(&Graph::cycle(4).unwrap());
        assert!(sym0_path_det_formula(&c).is_err());
    }

    #[test]
    fn path_split_examples() {
        let x = sym0_path(&[1, 2, 3, 4, 5]);
        let (y, z) = split_path(&x, 3).unwrap();
        assert_eq!((y.n(), z.n()), (2, 3));
        assert_eq!(y.weight(1, 2), int(1));
        assert_eq!((z.weight(1, 2), z.weight(2, 3)), (int(4), int(5)));

        let (y, z) = split_path(&WeightedSystem::unit(&Graph::path(4).unwrap()), 2).unwrap();
        assert_eq!(y.matrix(), ExactMatrix::zeros(1, 1));
        assert_eq!(z.n(), 2);

        let (y, z) = split_path(&WeightedSystem::unit(&Graph::path(5).unwrap()), 3).unwrap();
        assert_eq!(y, WeightedSystem::unit(&Graph::path(2).unwrap()));
        assert_eq!(z, y);

        assert!(split_path(&x, 1).is_err());
        assert!(split_path(&x, 6).is_err());
    }

    #[test]
    fn cycle_split_examples() {
        let (y, z) = split_cycle(&WeightedSystem::unit(&Graph::cycle(7).unwrap()), 3).unwrap();
        assert_eq!((y.n(), z.n()), (1, 4));

        let (j, rot) = normalize_cycle_pair(8, 2, 5).unwrap();
        assert_eq!(j, 4);
        assert_eq!(rot.apply_set(&[2, 5]), vec![1, 4]);
        let (y, z) = split_cycle(&WeightedSystem::unit(&Graph::cycle(8).unwrap()), j).unwrap();
        assert_eq!((y.n(), z.n()), (2, 4));

        let (_, z) = split_cycle(&WeightedSystem::unit(&Graph::cycle(6).unwrap()), 3).unwrap();
        assert_eq!(z, WeightedSystem::unit(&Graph::path(3).unwrap()));

        let (j, rot) = normalize_cycle_pair(7, 1, 4).unwrap();
        assert_eq!((j, rot.apply_set(&[1, 4])), (4, vec![1, 4]));
        let (j, rot) = normalize_cycle_pair(9, 2, 8).unwrap();
        assert_eq!((j, rot.apply_set(&[2, 8])), (4, vec![1, 4]));
        let c7 = WeightedSystem::unit(&Graph::cycle(7).unwrap());
        assert!(split_cycle(&c7, 5).is_err());
        assert!(split_cycle(&c7, 2).is_err());
    }

    #[test]
    fn sharing_examples() {
        let zero = path_block(Vec::new(), BTreeMap::new(), Mode::Sym0);
        let (share, cert) = blocks_share_eigenvalue(&zero, &sym0_path(&[1, 1]));
        assert!(share);
        assert_eq!(cert, UniPoly::x());

        let (share, cert) = blocks_share_eigenvalue(&sym0_path(&[5]), &sym0_path(&[3, 4]));
        assert!(share);
        assert_eq!(cert, UniPoly::from_i64(&[-25, 0, 1]));

        assert!(!blocks_share_eigenvalue(&sym0_path(&[1]), &sym0_path(&[2])).0);
    }

    #[test]
    fn prescribed_blocks_have_the_eigenvalue() {
        let five = int(5);
        assert_eq!(
            block_char_poly(&sym0_path(&[15, 40, 15])),
            UniPoly::from_i64(&[50625, 0, -2050, 0, 1])
        );
        for m in 2..=16 {
            let w = prescribed_block(m, 5, 0).unwrap();
            assert_eq!(w.len(), m - 1);
            assert!(w.iter().all(|v| !v.is_zero()));
            let block = path_block(w, BTreeMap::new(), Mode::Sym0);
            assert!(block_char_poly(&block).eval(&five).is_zero(), "size {m}");
        }
        assert!(prescribed_block(1, 5, 0).is_err());
        for m in 5..=9 {
            let w = prescribed_block(m, 3, 11).unwrap();
            assert!(continuant(&w, &int(3)).is_zero());
        }
    }

    #[test]
    fn path_witness_example() {
        let g = Graph::path(6).unwrap();
        let w = witness_not_strong(&g, &[3]).unwrap();
        let x = &w.system;
        assert_eq!(x.mode(), Mode::Sym0);
        assert_eq!(x.weight(1, 2), int(5));
        assert_eq!((x.weight(2, 3), x.weight(3, 4)), (int(1), int(1)));
        assert_eq!((x.weight(4, 5), x.weight(5, 6)), (int(3), int(4)));
        let (y, z) = split_path(x, 3).unwrap();
        assert_eq!(blocks_share_eigenvalue(&y, &z).1, UniPoly::from_i64(&[-25, 0, 1]));
        assert!(!kalman_controllable(&x.matrix(), &input_matrix(&[3], 6).unwrap()).unwrap());
        assert!(w.certificate.eval(&int(5)).is_zero());

        assert!(matches!(
            witness_not_strong(&Graph::path(5).unwrap(), &[2]),
            Err(Error::Argument(_))
        ));
        assert!(witness_not_strong(&g, &[1]).is_err());
    }

    #[test]
    fn cycle_witness_example() {
        let g = Graph::cycle(7).unwrap();
        let w = witness_not_strong(&g, &[1, 4]).unwrap();
        let (y, z) = split_cycle(&w.system, 4).unwrap();
        assert_eq!(y.weight(1, 2), int(5));
        assert_eq!((z.weight(1, 2), z.weight(2, 3)), (int(3), int(4)));
        assert!(!pencil_controllable(&w.system.matrix(), &[1, 4]).unwrap());

        // a pair that needs rotating back
        let w = witness_not_strong(&g, &[3, 7]).unwrap();
        assert!(!pencil_controllable(&w.system.matrix(), &[3, 7]).unwrap());

        // Y = [0], Z = unit P_7; unit bridges would keep {1,3} controllable
        let c10 = Graph::cycle(10).unwrap();
        assert!(pencil_controllable(&adjacency(&c10), &[2, 4]).unwrap());
        let w = witness_not_strong(&c10, &[2, 4]).unwrap();
        assert_eq!(w.system.mode(), Mode::Sym0);
        assert!(w.certificate.eval(&int(0)).is_zero());
        assert_eq!(w.system.weights().values().filter(|v| **v == int(-1)).count(), 1);
    }

    #[test]
    fn shared_eigenvalue_alone_does_not_break_cycles() {
        // blocks of the C_7 {1,4} witness with every bridge set to 1
        let y = sym0_path(&[5]);
        let z = sym0_path(&[3, 4]);
        assert!(blocks_share_eigenvalue(&y, &z).0);
        let mut x = cycle_from_blocks(&y, &z, &int(5), Mode::Sym0).unwrap();
        assert_eq!(x.weight(1, 7), BigRational::new(3.into(), 4.into()));
        assert!(!pencil_controllable(&x.matrix(), &[1, 4]).unwrap());
        x.weights.insert((1, 7), int(1));
        assert!(pencil_controllable(&x.matrix(), &[1, 4]).unwrap());
    }

    #[test]
    fn classify_examples() {
        let p6 = Graph::path(6).unwrap();
        assert_eq!(classify(&p6, &[2]).unwrap().verdict, Verdict::TypeII);
        assert_eq!(classify(&p6, &[5]).unwrap().verdict, Verdict::TypeII);
        assert_eq!(classify(&p6, &[1]).unwrap().verdict, Verdict::TypeI);
        let c = classify(&p6, &[3]).unwrap();
        assert_eq!(c.verdict, Verdict::NotStrongSym0);
        assert_eq!(c.witness().unwrap().system.mode(), Mode::Sym0);

        let c9 = Graph::cycle(9).unwrap();
        let c = classify(&c9, &[1, 3]).unwrap();
        assert_eq!(c.verdict, Verdict::TypeII);
        let x = &c.witness().unwrap().system;
        assert_eq!(x.mode(), Mode::Sym);
        assert!(!x.diagonal().is_empty());
        assert!(!pencil_controllable(&x.matrix(), &[1, 3]).unwrap());
        assert_eq!(classify(&c9, &[1, 2]).unwrap().verdict, Verdict::TypeI);
        assert_eq!(classify(&c9, &[1, 5]).unwrap().verdict, Verdict::NotStrongSym0);
        assert_eq!(
            classify(&Graph::cycle(6).unwrap(), &[1, 3]).unwrap().verdict,
            Verdict::NotStrongSym0
        );
        assert!(classify(&Graph::path(5).unwrap(), &[2]).is_err());
    }

    #[test]
    fn classify_general_graph() {
        // star K_{1,3}: leaves 2,3,4 have identical neighbourhoods
        let star = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let c = classify(&star, &[2, 3]).unwrap();
        assert_eq!(c.verdict, Verdict::TypeI);
        let q3 = Graph::hypercube(3).unwrap();
        let c = classify(&q3, &[1, 2, 3]).unwrap();
        assert!(matches!(c.verdict, Verdict::NotStrongSym0 | Verdict::Undetermined));
        if let Some(w) = c.witness() {
            assert!(!pencil_controllable(&w.system.matrix(), &[1, 2, 3]).unwrap());
        }
    }

    #[test]
    fn witness_json_roundtrip() {
        let w = witness_not_strong(&Graph::cycle(9).unwrap(), &[1, 3]).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["n"], 9);
        assert_eq!(json["mode"], "Sym");
        assert_eq!(json["diagonal"], serde_json::json!([[2, "5/1"]]));
        assert!(json["weights"][0][2].as_str().unwrap().contains('/'));
        let back: Witness = serde_json::from_value(json).unwrap();
        assert_eq!(back.system.matrix(), w.system.matrix());
        assert_eq!(back.certificate, w.certificate);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn determinant_formula_matches(seed in any::<u64>(), n in 1usize..=10) {
            let x = sample_weighted(&Graph::path(n).unwrap(), Mode::Sym0, seed);
            prop_assert_eq!(sym0_path_det_formula(&x).unwrap(), det_exact(&x.matrix()).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn path_splitting_decides_rank(seed in any::<u64>(), n in 3usize..=9, i in 2usize..=8, plant in any::<bool>(), c in 1i64..=7) {
            prop_assume!(i < n);
            let mut x = sample_weighted(&Graph::path(n).unwrap(), Mode::Sym0, seed);
            if plant && i >= 3 && n - i >= 2 {
                x = build_on_path(n, i, Mode::Sym0, seed).unwrap().scale(&BigRational::new(c.into(), 3.into())).unwrap();
            }
            let (y, z) = split_path(&x, i).unwrap();
            let (share, _) = blocks_share_eigenvalue(&y, &z);
            prop_assert_eq!(share, !pencil_controllable(&x.matrix(), &[i]).unwrap());
            if plant && i >= 3 && n - i >= 2 {
                prop_assert!(share);
            }
        }

        #[test]
        fn cycle_splitting_decides_rank(seed in any::<u64>(), n in 5usize..=10, j in 3usize..=6, plant in any::<bool>()) {
            prop_assume!(j <= n / 2 + 1);
            let x = if plant && j >= 4 {
                construct(&Graph::cycle(n).unwrap(), &[1, j], Case::CycleFar, seed).unwrap()
            } else {
                sample_weighted(&Graph::cycle(n).unwrap(), Mode::Sym0, seed)
            };
            let (y, z) = split_cycle(&x, j).unwrap();
            let (share, _) = blocks_share_eigenvalue(&y, &z);
            let lost = !pencil_controllable(&x.matrix(), &[1, j]).unwrap();
            if lost {
                prop_assert!(share);
            }
            if plant && j >= 4 {
                prop_assert!(share && lost);
            }
        }

        #[test]
        fn sharing_is_scale_invariant(seed in any::<u64>(), a in 1usize..=5, b in 1usize..=5, num in -9i64..=9, den in 1i64..=5) {
            prop_assume!(num != 0);
            let c = BigRational::new(num.into(), den.into());
            let planted = seed % 2 == 0 && a >= 2 && b >= 2;
            let (y, z) = if planted {
                (path_block(prescribed_block(a, 5, seed).unwrap(), BTreeMap::new(), Mode::Sym0),
                 path_block(prescribed_block(b, 5, seed).unwrap(), BTreeMap::new(), Mode::Sym0))
            } else {
                (sample_weighted(&Graph::path(a).unwrap(), Mode::Sym0, seed),
                 sample_weighted(&Graph::path(b).unwrap(), Mode::Sym0, seed.wrapping_add(1)))
            };
            let base = blocks_share_eigenvalue(&y, &z).0;
            prop_assert_eq!(base, blocks_share_eigenvalue(&y.scale(&c).unwrap(), &z.scale(&c).unwrap()).0);
            if planted {
                prop_assert!(base);
            }
        }

        #[test]
        fn type_one_is_zero_forcing(seed in 0u64..5_000, n in 2usize..=6) {
            let g = random_graph(n, 0.5, seed);
            for s in crate::controllability::enumerate_min_driver_sets(&g, &crate::Limits { enumeration_k: n, ..Default::default() }).unwrap().sets {
                let c = classify_with(&g, &s, 8, seed).unwrap();
                if c.verdict == Verdict::TypeI {
                    prop_assert!(is_zero_forcing_set(&g, &s).unwrap());
                }
                if let Some(w) = c.witness() {
                    prop_assert!(!pencil_controllable(&w.system.matrix(), &s).unwrap());
                }
            }
        }
    }
}
