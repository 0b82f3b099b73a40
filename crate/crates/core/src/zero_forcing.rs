//! Zero forcing: a black vertex with exactly one white neighbour turns it black.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{subset_orbits_or_trivial, Graph};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcingTrace {
    pub initial: Vec<usize>,
    /// `(forcing, forced)` pairs in the order they fired.
    pub steps: Vec<(usize, usize)>,
    /// Final black set, sorted.
    pub closure: Vec<usize>,
}

impl ForcingTrace {
    pub fn is_complete(&self, n: usize) -> bool {
        self.closure.len() == n
    }
}

fn run_closure(g: &Graph, s: &[usize], reverse: bool) -> Result<ForcingTrace> {
    g.check_subset(s)?;
    let n = g.n();
    let mut black = vec![false; n + 1];
    for &v in s {
        black[v] = true;
    }
    let order: Vec<usize> = if reverse {
        (1..=n).rev().collect()
    } else {
        (1..=n).collect()
    };
    let mut steps = Vec::new();
    loop {
        let fired = order.iter().find_map(|&v| {
            if !black[v] {
                return None;
            }
            let mut white = g.neighbors(v).iter().filter(|&&w| !black[w]);
            match (white.next(), white.next()) {
                (Some(&w), None) => Some((v, w)),
                _ => None,
            }
        });
        match fired {
            Some((v, w)) => {
                black[w] = true;
                steps.push((v, w));
            }
            None => break,
        }
    }
    Ok(ForcingTrace {
        initial: s.to_vec(),
        steps,
        closure: (1..=n).filter(|&v| black[v]).collect(),
    })
}

/// Apply the forcing rule to a fixed point, lowest eligible forcing vertex first.
pub fn forcing_closure(g: &Graph, s: &[usize]) -> Result<ForcingTrace> {
    run_closure(g, s, false)
}

pub fn is_zero_forcing_set(g: &Graph, s: &[usize]) -> Result<bool> {
    Ok(forcing_closure(g, s)?.is_complete(g.n()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroForcing {
    /// `Z(G)`.
    pub z: usize,
    /// All minimum zero forcing sets, sorted lexicographically.
    pub sets: Vec<Vec<usize>>,
}

/// `Z(G)` and every minimum zero forcing set, searched over subset orbits.
pub fn zero_forcing_number(g: &Graph, limits: &Limits) -> Result<ZeroForcing> {
    let n = g.n();
    if n > limits.zero_forcing_n {
        return Err(Error::Capability(format!(
            "zero forcing search capped at n = {}, graph has n = {n}",
            limits.zero_forcing_n
        )));
    }
    for k in 1..=n {
        let orbits = subset_orbits_or_trivial(g, k, limits)?;
        let verdicts = orbits
            .par_iter()
            .map(|o| is_zero_forcing_set(g, &o.representative))
            .collect::<Result<Vec<bool>>>()?;
        if verdicts.contains(&true) {
            let mut sets: Vec<Vec<usize>> = orbits
                .iter()
                .zip(&verdicts)
                .filter(|(_, &ok)| ok)
                .flat_map(|(o, _)| o.members.iter().cloned())
                .collect();
            sets.sort();
            return Ok(ZeroForcing { z: k, sets });
        }
    }
    unreachable!("V is a zero forcing set")
}
