//! Simple undirected graphs on the vertex set `1..=n`, their automorphism
//! groups and the orbits those groups induce on vertex subsets.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::limits::Limits;

/// Provenance marker recorded on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Path,
    Cycle,
    /// Hypercube of the given dimension.
    Hypercube(u32),
    Custom,
}

/// Description of a graph to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Hypercube(u32),
    EdgeList { n: usize, pairs: Vec<(usize, usize)> },
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Hypercube(k) => write!(f, "hypercube:{k}"),
            GraphSpec::EdgeList { n, pairs } => write!(f, "edges:{n}:{}", pairs.len()),
        }
    }
}

/// Hypercubes above this dimension are refused (vertex sets are tracked in `u64` masks).
pub const MAX_HYPERCUBE_DIM: u32 = 6;

/// Simple undirected graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    family: Family,
}

impl Graph {
    fn from_checked_edges(n: usize, edges: BTreeSet<(usize, usize)>, family: Family) -> Graph {
        let mut neighbors = vec![Vec::new(); n + 1];
        for &(i, j) in &edges {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            neighbors,
            family,
        }
    }

    pub fn path(n: usize) -> Result<Graph> {
        build_graph(&GraphSpec::Path(n))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        build_graph(&GraphSpec::Cycle(n))
    }

    pub fn hypercube(k: u32) -> Result<Graph> {
        build_graph(&GraphSpec::Hypercube(k))
    }

    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        build_graph(&GraphSpec::EdgeList {
            n,
            pairs: pairs.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.contains(&(a, b))
    }

    /// Sorted neighbors of vertex `v` (1-based).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// True when the edge set is exactly `{k, k+1}` for `k < n`, whatever the tag.
    pub fn is_path_shaped(&self) -> bool {
        self.edges.len() + 1 == self.n && (1..self.n).all(|k| self.edges.contains(&(k, k + 1)))
    }

    /// True when the edge set is exactly that of the `n`-cycle, `n >= 3`.
    pub fn is_cycle_shaped(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n
            && (1..self.n).all(|k| self.edges.contains(&(k, k + 1)))
            && self.edges.contains(&(1, self.n))
    }

    /// Check that `s` is a nonempty strictly increasing list of vertices.
    pub fn check_subset(&self, s: &[usize]) -> Result<()> {
        if s.is_empty() {
            return Err(Error::Argument("vertex subset must be nonempty".into()));
        }
        if s.iter().any(|&v| v == 0 || v > self.n) {
            return Err(Error::Argument(format!(
                "vertex subset {s:?} leaves 1..={}",
                self.n
            )));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!(
                "vertex subset {s:?} must be strictly increasing"
            )));
        }
        Ok(())
    }
}

/// Build a graph from a descriptor, validating edge lists strictly.
pub fn build_graph(spec: &GraphSpec) -> Result<Graph> {
    match *spec {
        GraphSpec::Path(n) => {
            if n < 1 {
                return Err(Error::Descriptor("path needs n >= 1".into()));
            }
            let edges = (1..n).map(|k| (k, k + 1)).collect();
            Ok(Graph::from_checked_edges(n, edges, Family::Path))
        }
        GraphSpec::Cycle(n) => {
            if n < 3 {
                return Err(Error::Descriptor(format!("cycle needs n >= 3, got {n}")));
            }
            let mut edges: BTreeSet<_> = (1..n).map(|k| (k, k + 1)).collect();
            edges.insert((1, n));
            Ok(Graph::from_checked_edges(n, edges, Family::Cycle))
        }
        GraphSpec::Hypercube(k) => {
            if !(1..=MAX_HYPERCUBE_DIM).contains(&k) {
                return Err(Error::Descriptor(format!(
                    "hypercube dimension must be in 1..={MAX_HYPERCUBE_DIM}, got {k}"
                )));
            }
            // Vertex i is the binary word of i - 1; flipping the top bit is the
            // identity block of the recursive adjacency form.
            let n = 1usize << k;
            let mut edges = BTreeSet::new();
            for x in 0..n {
                for bit in 0..k {
                    let y = x ^ (1 << bit);
                    if x < y {
                        edges.insert((x + 1, y + 1));
                    }
                }
            }
            Ok(Graph::from_checked_edges(n, edges, Family::Hypercube(k)))
        }
        GraphSpec::EdgeList { n, ref pairs } => {
            if n < 1 {
                return Err(Error::Descriptor("edge list needs n >= 1".into()));
            }
            let mut edges = BTreeSet::new();
            for &(i, j) in pairs {
                if i == j {
                    return Err(Error::Descriptor(format!("self-loop at vertex {i}")));
                }
                if i < 1 || j < 1 || i > n || j > n {
                    return Err(Error::Descriptor(format!(
                        "edge {{{i},{j}}} leaves 1..={n}"
                    )));
                }
                if !edges.insert((i.min(j), i.max(j))) {
                    return Err(Error::Descriptor(format!("duplicate edge {{{i},{j}}}")));
                }
            }
            Ok(Graph::from_checked_edges(n, edges, Family::Custom))
        }
    }
}

/// Parse the edge-list text format: a header `n m`, then `m` lines `i j`.
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_pair = |no: usize, line: &str| -> Result<(usize, usize)> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Descriptor(format!(
                "line {no}: expected two integers, got {line:?}"
            )));
        }
        let a = fields[0]
            .parse()
            .map_err(|_| Error::Descriptor(format!("line {no}: bad integer {:?}", fields[0])))?;
        let b = fields[1]
            .parse()
            .map_err(|_| Error::Descriptor(format!("line {no}: bad integer {:?}", fields[1])))?;
        Ok((a, b))
    };

    let (no, header) = lines
        .next()
        .ok_or_else(|| Error::Descriptor("empty edge-list file".into()))?;
    let (n, m) = parse_pair(no, header)?;
    let pairs = lines
        .map(|(no, l)| parse_pair(no, l))
        .collect::<Result<Vec<_>>>()?;
    if pairs.len() != m {
        return Err(Error::Descriptor(format!(
            "header announces {m} edges, file lists {}",
            pairs.len()
        )));
    }
    build_graph(&GraphSpec::EdgeList { n, pairs })
}

/// 0/1 adjacency matrix.
pub fn adjacency(g: &Graph) -> ExactMatrix {
    let mut a = ExactMatrix::zeros(g.n, g.n);
    for (i, j) in g.edges() {
        a.set(i - 1, j - 1, BigRational::one());
        a.set(j - 1, i - 1, BigRational::one());
    }
    a
}

/// Breadth-first distance; `None` when `j` is unreachable from `i`.
pub fn distance(g: &Graph, i: usize, j: usize) -> Option<usize> {
    assert!(
        (1..=g.n).contains(&i) && (1..=g.n).contains(&j),
        "vertex out of range"
    );
    let mut dist = vec![usize::MAX; g.n + 1];
    dist[i] = 0;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        if v == j {
            return Some(dist[v]);
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Bijection of `1..=n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// `images[i - 1]` is the image of vertex `i`.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Argument(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v - 1]
    }

    /// Image of a vertex set, sorted.
    pub fn apply_set(&self, s: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = s.iter().map(|&v| self.apply(v)).collect();
        out.sort_unstable();
        out
    }

    fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << (self.images[bit] - 1);
        }
        out
    }

    /// `self` after `other`: `v ↦ self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        self.n() == g.n
            && g
                .edges()
                .all(|(i, j)| g.has_edge(self.apply(i), self.apply(j)))
    }
}

/// The full automorphism group, sorted by image list.
///
/// Paths, cycles and hypercubes use their known groups; custom graphs go
/// through a backtracking search capped at `limits.automorphism_n` vertices.
pub fn automorphism_group(g: &Graph, limits: &Limits) -> Result<Vec<Permutation>> {
    let n = g.n;
    let mut group = match g.family {
        Family::Path => {
            let mut group = vec![Permutation::identity(n)];
            if n >= 2 {
                group.push(Permutation {
                    images: (1..=n).rev().collect(),
                });
            }
            group
        }
        Family::Cycle => {
            let mut group = Vec::with_capacity(2 * n);
            for k in 0..n {
                group.push(Permutation {
                    images: (0..n).map(|i| (i + k) % n + 1).collect(),
                });
                group.push(Permutation {
                    images: (0..n).map(|i| (k + n - i) % n + 1).collect(),
                });
            }
            group
        }
        Family::Hypercube(k) => {
            let k = k as usize;
            let mut group = Vec::new();
            for coords in (0..k).permutations(k) {
                for flip in 0..n {
                    let images = (0..n)
                        .map(|x| {
                            let moved = coords
                                .iter()
                                .enumerate()
                                .fold(0usize, |acc, (src, &dst)| acc | (((x >> src) & 1) << dst));
                            (moved ^ flip) + 1
                        })
                        .collect();
                    group.push(Permutation { images });
                }
            }
            group
        }
        Family::Custom => {
            if n > limits.automorphism_n {
                return Err(Error::Capability(format!(
                    "automorphism search is capped at n = {}, graph has n = {n}",
                    limits.automorphism_n
                )));
            }
            backtrack_automorphisms(g, limits.max_group_order)?
        }
    };
    if group.len() > limits.max_group_order {
        return Err(Error::Capability(format!(
            "automorphism group has {} elements, cap is {}",
            group.len(),
            limits.max_group_order
        )));
    }
    group.sort();
    Ok(group)
}

fn backtrack_automorphisms(g: &Graph, max_order: usize) -> Result<Vec<Permutation>> {
    let n = g.n;
    // Vertex signature: degree plus sorted multiset of neighbor degrees.
    let signature: Vec<(usize, Vec<usize>)> = (0..=n)
        .map(|v| {
            if v == 0 {
                return (0, Vec::new());
            }
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();

    struct Search<'a> {
        g: &'a Graph,
        signature: &'a [(usize, Vec<usize>)],
        images: Vec<usize>,
        used: Vec<bool>,
        found: Vec<Permutation>,
        max_order: usize,
    }

    impl Search<'_> {
        fn extend(&mut self, v: usize) -> Result<()> {
            let n = self.g.n;
            if v > n {
                if self.found.len() >= self.max_order {
                    return Err(Error::Capability(format!(
                        "automorphism group exceeds {} elements",
                        self.max_order
                    )));
                }
                self.found.push(Permutation {
                    images: self.images[1..].to_vec(),
                });
                return Ok(());
            }
            for w in 1..=n {
                if self.used[w] || self.signature[w] != self.signature[v] {
                    continue;
                }
                // adjacency to every earlier vertex must be preserved
                let consistent =
                    (1..v).all(|u| self.g.has_edge(u, v) == self.g.has_edge(self.images[u], w));
                if !consistent {
                    continue;
                }
                self.images[v] = w;
                self.used[w] = true;
                self.extend(v + 1)?;
                self.used[w] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        g,
        signature: &signature,
        images: vec![0; n + 1],
        used: vec![false; n + 1],
        found: Vec::new(),
        max_order,
    };
    search.extend(1)?;
    Ok(search.found)
}

/// One orbit of `k`-subsets under a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: Vec<usize>,
    /// All members, sorted lexicographically.
    pub members: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub(crate) fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0u64, |m, &v| m | 1 << (v - 1))
}

/// Partition all `k`-subsets of `1..=n` into orbits of `group`, ordered by representative.
pub fn orbits_under(group: &[Permutation], n: usize, k: usize) -> Result<Vec<Orbit>> {
    if k > n {
        return Err(Error::Argument(format!("subset size {k} exceeds n = {n}")));
    }
    if n > 64 {
        return Err(Error::Capability(format!(
            "subset orbits support n <= 64, got {n}"
        )));
    }
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
    let index: HashMap<u64, usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (mask_of(s), i))
        .collect();
    let mut assigned = vec![false; subsets.len()];
    let mut orbits = Vec::new();
    for (i, s) in subsets.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mask = mask_of(s);
        let mut members: Vec<usize> = Vec::new();
        for p in group {
            let j = index[&p.apply_mask(mask)];
            if !assigned[j] {
                assigned[j] = true;
                members.push(j);
            }
        }
        if !assigned[i] {
            // empty group: every subset is its own orbit
            assigned[i] = true;
            members.push(i);
        }
        members.sort_unstable();
        orbits.push(Orbit {
            representative: s.clone(),
            members: members.into_iter().map(|j| subsets[j].clone()).collect(),
        });
    }
    Ok(orbits)
}

/// Orbits of `k`-subsets under `Aut(g)`.
pub fn subset_orbits(g: &Graph, k: usize, limits: &Limits) -> Result<Vec<Orbit>> {
    if k > g.n {
        return Err(Error::Argument(format!(
            "subset size {k} exceeds n = {}",
            g.n
        )));
    }
    let group = automorphism_group(g, limits)?;
    orbits_under(&group, g.n, k)
}

/// Like [`subset_orbits`], falling back to singleton orbits when the
/// automorphism search is over its cap.
pub fn subset_orbits_or_trivial(g: &Graph, k: usize, limits: &Limits) -> Result<Vec<Orbit>> {
    let group = match automorphism_group(g, limits) {
        Ok(group) => group,
        Err(e) if e.is_capability() => vec![Permutation::identity(g.n)],
        Err(e) => return Err(e),
    };
    orbits_under(&group, g.n, k)
}

/// Erdős–Rényi `G(n, p)` sample, deterministic per seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                edges.insert((i, j));
            }
        }
    }
    Graph::from_checked_edges(n, edges, Family::Custom)
}
