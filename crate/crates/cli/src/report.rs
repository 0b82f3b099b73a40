//! JSON and table reports.

use std::collections::BTreeMap;
use std::time::Instant;

use driverset::controllability::{enumerate_min_driver_sets, DriverEnumeration};
use driverset::exact::max_multiplicity;
use driverset::graph::{subset_orbits_or_trivial, Graph};
use driverset::spectral::{eigen_sym, pbh_check_decomposition, DEFAULT_CLUSTER_TOL};
use driverset::structural::{classify_with, Classification, Evidence, Verdict, Witness, DEFAULT_SAMPLES};
use driverset::zero_forcing::{forcing_closure, is_zero_forcing_set, zero_forcing_number, ForcingTrace};
use driverset::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::Options;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRow {
    pub representative: Vec<usize>,
    pub size: usize,
    pub driver: bool,
    pub zero_forcing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SetVerdict {
    pub set: Vec<usize>,
    pub verdict: Verdict,
    pub orbit: Vec<usize>,
}

/// Floating-point PBH test run on every orbit representative.
#[derive(Debug, Clone, Serialize)]
pub struct NumericCheck {
    pub tolerance: f64,
    pub disagreements: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriverReport {
    pub schema: u32,
    pub graph: String,
    pub n: usize,
    pub edges: usize,
    pub m: usize,
    pub d: usize,
    pub n_d: usize,
    pub z: usize,
    pub sets: Vec<Vec<usize>>,
    pub zero_forcing_sets: Vec<Vec<usize>>,
    pub orbits: Vec<OrbitRow>,
    pub classifications: Vec<SetVerdict>,
    pub numeric_check: NumericCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriversReport {
    pub schema: u32,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub n_d: usize,
    pub sets: Vec<Vec<usize>>,
    pub orbits: Vec<OrbitRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifications: Option<Vec<SetVerdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroForcingReport {
    pub schema: u32,
    pub graph: String,
    pub n: usize,
    pub z: usize,
    pub sets: Vec<Vec<usize>>,
    /// Forcing trace of the first minimum set.
    pub trace: ForcingTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub schema: u32,
    pub graph: String,
    pub set: Vec<usize>,
    pub verdict: Verdict,
    /// Construction tag, or `sample` for a randomized find.
    pub source: String,
    pub witness: Witness,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn elapsed(start: Instant, opts: &Options) -> Option<u128> {
    opts.timing.then(|| start.elapsed().as_millis())
}

/// Orbit table for the minimum driver-set size, with optional classification
/// of each driver orbit and a map from every minimum driver set to its orbit.
fn orbit_table(
    g: &Graph,
    e: &DriverEnumeration,
    classify: bool,
    opts: &Options,
) -> Result<(Vec<OrbitRow>, Option<Vec<SetVerdict>>)> {
    let rows = e
        .orbits
        .par_iter()
        .map(|o| {
            let classification = if classify && o.is_driver {
                Some(classify_with(g, &o.representative, DEFAULT_SAMPLES, opts.seed)?)
            } else {
                None
            };
            Ok(OrbitRow {
                representative: o.representative.clone(),
                size: o.size,
                driver: o.is_driver,
                zero_forcing: is_zero_forcing_set(g, &o.representative)?,
                classification,
            })
        })
        .collect::<Result<Vec<OrbitRow>>>()?;
    if !classify {
        return Ok((rows, None));
    }
    let verdicts: BTreeMap<&[usize], Verdict> = rows
        .iter()
        .filter_map(|r| Some((r.representative.as_slice(), r.classification.as_ref()?.verdict)))
        .collect();
    let mut per_set = Vec::new();
    for orbit in subset_orbits_or_trivial(g, e.d, &opts.limits)? {
        if let Some(&verdict) = verdicts.get(orbit.representative.as_slice()) {
            for set in &orbit.members {
                per_set.push(SetVerdict {
                    set: set.clone(),
                    verdict,
                    orbit: orbit.representative.clone(),
                });
            }
        }
    }
    per_set.sort_by(|a, b| a.set.cmp(&b.set));
    Ok((rows, Some(per_set)))
}

pub fn analyze(g: &Graph, descriptor: &str, opts: &Options) -> Result<DriverReport> {
    let start = Instant::now();
    let m = max_multiplicity(g, &opts.limits)?;
    let e = enumerate_min_driver_sets(g, &opts.limits)?;
    let zf = zero_forcing_number(g, &opts.limits)?;
    let (orbits, classifications) = orbit_table(g, &e, true, opts)?;

    let eig = eigen_sym(&driverset::graph::adjacency(g), DEFAULT_CLUSTER_TOL)?;
    let disagreements = orbits
        .iter()
        .filter(|r| pbh_check_decomposition(&eig, &r.representative, opts.tol) != r.driver)
        .map(|r| r.representative.clone())
        .collect();

    let report = DriverReport {
        schema: SCHEMA,
        graph: descriptor.to_string(),
        n: g.n(),
        edges: g.edge_count(),
        m,
        d: e.d,
        n_d: e.n_d,
        z: zf.z,
        sets: e.sets,
        zero_forcing_sets: zf.sets,
        orbits,
        classifications: classifications.unwrap_or_default(),
        numeric_check: NumericCheck {
            tolerance: opts.tol,
            disagreements,
        },
        timing_ms: elapsed(start, opts),
    };
    check_invariants(&report)?;
    Ok(report)
}

/// Internal consistency of a finished report.
fn check_invariants(r: &DriverReport) -> Result<()> {
    let driver_total: usize = r.orbits.iter().filter(|o| o.driver).map(|o| o.size).sum();
    let type_one_ok = r
        .classifications
        .iter()
        .filter(|c| c.verdict == Verdict::TypeI)
        .all(|c| r.zero_forcing_sets.contains(&c.set));
    let ok = r.m <= r.d && r.d <= r.z && driver_total == r.n_d && type_one_ok;
    if ok {
        Ok(())
    } else {
        Err(Error::Capability(format!(
            "report for {} violates M <= D <= Z or orbit totals",
            r.graph
        )))
    }
}

pub fn drivers(g: &Graph, descriptor: &str, classify: bool, opts: &Options) -> Result<DriversReport> {
    let start = Instant::now();
    let e = enumerate_min_driver_sets(g, &opts.limits)?;
    let (orbits, classifications) = orbit_table(g, &e, classify, opts)?;
    Ok(DriversReport {
        schema: SCHEMA,
        graph: descriptor.to_string(),
        n: g.n(),
        m: e.lower_bound,
        d: e.d,
        n_d: e.n_d,
        sets: e.sets,
        orbits,
        classifications,
        timing_ms: elapsed(start, opts),
    })
}

pub fn zero_forcing(g: &Graph, descriptor: &str, opts: &Options) -> Result<ZeroForcingReport> {
    let start = Instant::now();
    let zf = zero_forcing_number(g, &opts.limits)?;
    let trace = forcing_closure(g, &zf.sets[0])?;
    Ok(ZeroForcingReport {
        schema: SCHEMA,
        graph: descriptor.to_string(),
        n: g.n(),
        z: zf.z,
        sets: zf.sets,
        trace,
        timing_ms: elapsed(start, opts),
    })
}

pub fn witness(g: &Graph, descriptor: &str, s: &[usize], opts: &Options) -> Result<WitnessReport> {
    let c = classify_with(g, s, DEFAULT_SAMPLES, opts.seed)?;
    let (source, witness) = match c.evidence {
        Evidence::Theorem { tag, witness } => (tag, witness),
        Evidence::Sample { witness, .. } => ("sample".to_string(), witness),
        Evidence::ZeroForcing { .. } => {
            return Err(Error::Argument(format!(
                "{s:?} is a zero forcing set, so no weighted system defeats it"
            )))
        }
        Evidence::Sampling { samples } => {
            return Err(Error::Capability(format!(
                "no failing system among {samples} samples for {s:?}"
            )))
        }
    };
    Ok(WitnessReport {
        schema: SCHEMA,
        graph: descriptor.to_string(),
        set: s.to_vec(),
        verdict: c.verdict,
        source,
        witness,
    })
}

fn set_text(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Aligned plain-text rendering of a full report.
pub fn to_table(r: &DriverReport) -> String {
    let mut lines = vec![
        format!("graph   {}", r.graph),
        format!("n       {}", r.n),
        format!("edges   {}", r.edges),
        format!("M(G)    {}", r.m),
        format!("D(G)    {}", r.d),
        format!("N_D(G)  {}", r.n_d),
        format!("Z(G)    {}", r.z),
        String::new(),
    ];
    let header = ["orbit", "size", "driver", "zero-forcing", "class"];
    let rows: Vec<[String; 5]> = r
        .orbits
        .iter()
        .map(|o| {
            [
                set_text(&o.representative),
                o.size.to_string(),
                if o.driver { "yes" } else { "no" }.to_string(),
                if o.zero_forcing { "yes" } else { "no" }.to_string(),
                o.classification
                    .as_ref()
                    .map_or("-".to_string(), |c| format!("{:?}", c.verdict)),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let render = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    lines.push(render(&header.map(String::from)));
    lines.extend(rows.iter().map(|r| render(r)));
    if !r.numeric_check.disagreements.is_empty() {
        lines.push(String::new());
        lines.push(format!(
            "numeric PBH check disagrees on {} orbit(s) at tol {}",
            r.numeric_check.disagreements.len(),
            r.numeric_check.tolerance
        ));
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use driverset::graph::Graph;

    #[test]
    fn path_five_report() {
        let r = analyze(&Graph::path(5).unwrap(), "path:5", &Options::default()).unwrap();
        assert_eq!((r.m, r.d, r.n_d, r.z), (1, 1, 2, 1));
        assert_eq!(r.sets, vec![vec![1], vec![5]]);
        assert!(r.numeric_check.disagreements.is_empty());
        let json: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(json["schema"], 1);
        assert!(json.get("timing_ms").is_none());
    }

    #[test]
    fn cycle_six_report() {
        let r = analyze(&Graph::cycle(6).unwrap(), "cycle:6", &Options::default()).unwrap();
        assert_eq!((r.d, r.n_d), (2, 12));
        let verdicts: Vec<Verdict> = r
            .orbits
            .iter()
            .filter_map(|o| o.classification.as_ref().map(|c| c.verdict))
            .collect();
        assert_eq!(verdicts, vec![Verdict::TypeI, Verdict::NotStrongSym0]);
        assert_eq!(r.classifications.len(), 12);
        let table = to_table(&r);
        assert!(table.contains("N_D(G)  12"));
        assert!(table.contains("{1,3}  6     yes     no            NotStrongSym0"));
    }

    #[test]
    fn witness_report_sources() {
        let opts = Options::default();
        let w = witness(&Graph::cycle(7).unwrap(), "cycle:7", &[1, 4], &opts).unwrap();
        assert_eq!(w.source, "cycle-distance-at-least-three");
        assert!(witness(&Graph::cycle(7).unwrap(), "cycle:7", &[1, 2], &opts).is_err());
    }
}
