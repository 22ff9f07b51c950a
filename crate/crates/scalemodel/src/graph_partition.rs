//! Monte-Carlo estimation of the maximum per-worker edge count under
//! random balanced vertex assignment, with the duplicate-edge
//! correction E_i = E_i^rnd − E_dup.
//!
//! Per-trial randomness comes from a ChaCha8 stream seeded with
//! splitmix64(seed ⊕ splitmix64(trial_index)), so a given (seed, trial)
//! pair yields the same assignment no matter how trials are scheduled.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Per-vertex degrees of an undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
    num_edges: u64,
}

impl DegreeSequence {
    /// Builds from raw degrees; the sum must be even (each edge has two
    /// endpoints).
    pub fn from_degrees(degrees: Vec<u64>) -> Result<Self> {
        let sum: u64 = degrees.iter().sum();
        if sum % 2 != 0 {
            return Err(Error::OddDegreeSum(sum));
        }
        Ok(Self {
            degrees,
            num_edges: sum / 2,
        })
    }

    /// Synthetic sequence for a graph known only by (V, E): 2·E
    /// endpoints spread as evenly as possible over V vertices.
    pub fn uniform(num_vertices: u64, num_edges: u64) -> Result<Self> {
        if num_vertices < 1 {
            return Err(Error::EmptyDegreeSequence);
        }
        let endpoints = 2 * num_edges;
        let base = endpoints / num_vertices;
        let extra = endpoints % num_vertices;
        let degrees = (0..num_vertices)
            .map(|v| base + u64::from(v < extra))
            .collect();
        Ok(Self {
            degrees,
            num_edges,
        })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn num_vertices(&self) -> u64 {
        self.degrees.len() as u64
    }

    pub fn num_edges(&self) -> u64 {
        self.num_edges
    }
}

/// Degrees from an explicit edge list. Parallel edges count with
/// multiplicity; self-loops are rejected.
pub fn degrees_from_edge_list(edges: &[(u64, u64)]) -> Result<DegreeSequence> {
    let mut degrees: Vec<u64> = Vec::new();
    for &(u, v) in edges {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let need = (u.max(v) + 1) as usize;
        if degrees.len() < need {
            degrees.resize(need, 0);
        }
        degrees[u as usize] += 1;
        degrees[v as usize] += 1;
    }
    Ok(DegreeSequence {
        num_edges: edges.len() as u64,
        degrees,
    })
}

/// Parses the edge-list text format: one edge per line, two
/// whitespace-separated vertex ids, `#` lines ignored.
pub fn parse_edge_list(text: &str) -> Result<Vec<(u64, u64)>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or_else(|| Error::MalformedEdge {
                line: i + 1,
                msg: "expected two vertex ids".into(),
            })?
            .parse()
            .map_err(|e| Error::MalformedEdge {
                line: i + 1,
                msg: format!("{e}"),
            })
        };
        let u = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::MalformedEdge {
                line: i + 1,
                msg: "expected exactly two vertex ids".into(),
            });
        }
        edges.push((u, v));
    }
    Ok(edges)
}

/// Parses the degree-file format: one integer degree per line, `#`
/// lines ignored.
pub fn parse_degree_file(text: &str) -> Result<DegreeSequence> {
    let mut degrees = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        degrees.push(line.parse().map_err(|e| Error::Csv {
            line: i + 1,
            msg: format!("bad degree: {e}"),
        })?);
    }
    DegreeSequence::from_degrees(degrees)
}

/// Expected number of same-worker edges per worker when V/n vertices
/// land on each of n workers: ½·(V/n − 1)·(V/n)·E / (V·(V−1)/2).
pub fn expected_duplicates(num_vertices: u64, num_edges: u64, n: u32) -> Result<f64> {
    if num_vertices < 2 {
        return Err(Error::TooFewVertices(num_vertices));
    }
    let v = num_vertices as f64;
    let e = num_edges as f64;
    let per_worker = v / n as f64;
    Ok(0.5 * (per_worker - 1.0) * per_worker * e / (v * (v - 1.0) / 2.0))
}

/// Result of a Monte-Carlo partition simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionEstimate {
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub e_dup: f64,
    /// Mean over trials of max_i(E_i^rnd) − E_dup.
    pub mean_max_edges: f64,
    pub per_trial_max: Vec<f64>,
}

impl PartitionEstimate {
    pub fn min_max_edges(&self) -> f64 {
        self.per_trial_max.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_max_edges(&self) -> f64 {
        self.per_trial_max
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Deterministic per-trial stream.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial as u64)))
}

/// One trial: balanced random assignment of vertices to n workers
/// (worker sizes differ by at most one), returning each worker's degree
/// sum E_i^rnd. The sums always total 2·E.
pub fn worker_degree_sums(degs: &DegreeSequence, n: u32, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut order: Vec<usize> = (0..degs.degrees.len()).collect();
    order.shuffle(rng);
    let mut sums = vec![0u64; n as usize];
    for (slot, vertex) in order.into_iter().enumerate() {
        sums[slot % n as usize] += degs.degrees[vertex];
    }
    sums
}

/// Runs `trials` seeded assignment trials and reports per-trial maxima
/// corrected by E_dup, plus their mean. n = 1 collapses to exactly E
/// with zero variance.
pub fn estimate_partition(
    degs: &DegreeSequence,
    n: u32,
    trials: u32,
    seed: u64,
) -> Result<PartitionEstimate> {
    if degs.degrees.is_empty() {
        return Err(Error::EmptyDegreeSequence);
    }
    if n < 1 || trials < 1 {
        return Err(Error::InvalidWorkload(
            "worker count and trials must be >= 1".into(),
        ));
    }
    let e = degs.num_edges as f64;
    if n == 1 {
        // E^rnd = 2E and E^dup = E, so every trial gives exactly E.
        return Ok(PartitionEstimate {
            n,
            trials,
            seed,
            e_dup: e,
            mean_max_edges: e,
            per_trial_max: vec![e; trials as usize],
        });
    }
    let e_dup = expected_duplicates(degs.num_vertices(), degs.num_edges, n)?;
    let mut per_trial_max = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let sums = worker_degree_sums(degs, n, &mut rng);
        let max = *sums.iter().max().expect("n >= 1") as f64;
        per_trial_max.push(max - e_dup);
    }
    let mean_max_edges = per_trial_max.iter().sum::<f64>() / trials as f64;
    Ok(PartitionEstimate {
        n,
        trials,
        seed,
        e_dup,
        mean_max_edges,
        per_trial_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete_graph_edges(m: u64) -> Vec<(u64, u64)> {
        let mut edges = Vec::new();
        for u in 0..m {
            for v in (u + 1)..m {
                edges.push((u, v));
            }
        }
        edges
    }

    #[test]
    fn degrees_from_small_graphs() {
        let tri = degrees_from_edge_list(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.degrees(), &[2, 2, 2]);
        assert_eq!(tri.num_edges(), 3);

        let path = degrees_from_edge_list(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.degrees(), &[1, 2, 1]);
        assert_eq!(path.num_edges(), 2);
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(
            degrees_from_edge_list(&[(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let edges = parse_edge_list("# comment\n0 1\n\n1 2\n").unwrap();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
        assert!(parse_edge_list("0\n").is_err());
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("a b\n").is_err());
    }

    #[test]
    fn degree_file_parsing() {
        let degs = parse_degree_file("2\n2\n2\n").unwrap();
        assert_eq!(degs.num_edges(), 3);
        assert!(parse_degree_file("1\n2\n").is_err()); // odd sum
    }

    #[test]
    fn expected_duplicates_examples() {
        assert!((expected_duplicates(10, 20, 2).unwrap() - 200.0 / 45.0).abs() < 1e-12);
        assert_eq!(expected_duplicates(20, 190, 4).unwrap(), 10.0);
        assert_eq!(expected_duplicates(10, 20, 1).unwrap(), 20.0);
        assert!(expected_duplicates(1, 0, 2).is_err());
    }

    #[test]
    fn single_worker_is_exact() {
        let degs = degrees_from_edge_list(&complete_graph_edges(20)).unwrap();
        let est = estimate_partition(&degs, 1, 50, 42).unwrap();
        assert_eq!(est.mean_max_edges, 190.0);
        assert!(est.per_trial_max.iter().all(|&m| m == 190.0));
        assert_eq!(est.min_max_edges(), est.max_max_edges());
    }

    #[test]
    fn k20_four_workers() {
        let degs = degrees_from_edge_list(&complete_graph_edges(20)).unwrap();
        let est = estimate_partition(&degs, 4, 1000, 7).unwrap();
        assert_eq!(est.e_dup, 10.0);
        // every vertex of K20 has degree 19; balanced assignment puts 5
        // per worker, so each E_i^rnd is exactly 95 and the max is too
        assert!(est.per_trial_max.iter().all(|&m| m == 95.0 - 10.0));
    }

    #[test]
    fn determinism() {
        let degs = degrees_from_edge_list(&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap();
        let a = estimate_partition(&degs, 3, 64, 123).unwrap();
        let b = estimate_partition(&degs, 3, 64, 123).unwrap();
        assert_eq!(a, b);
        let c = estimate_partition(&degs, 3, 64, 124).unwrap();
        assert_ne!(a.per_trial_max, c.per_trial_max);
    }

    #[test]
    fn empty_degree_sequence_rejected() {
        let degs = DegreeSequence::from_degrees(vec![]).unwrap();
        assert!(matches!(
            estimate_partition(&degs, 2, 10, 0),
            Err(Error::EmptyDegreeSequence)
        ));
    }

    #[test]
    fn uniform_sequence_conserves_endpoints() {
        let degs = DegreeSequence::uniform(7, 11).unwrap();
        assert_eq!(degs.degrees().iter().sum::<u64>(), 22);
        assert_eq!(degs.num_edges(), 11);
    }

    #[test]
    fn intra_worker_edges_match_expected_duplicates() {
        // brute-force oracle: assign K20 vertices with the same balanced
        // scheme, count same-worker edges by pair scan, compare the
        // per-worker mean against the closed form
        let m = 20u64;
        let edges = complete_graph_edges(m);
        let degs = degrees_from_edge_list(&edges).unwrap();
        let n = 4u32;
        let trials = 10_000u32;
        let mut total_intra = 0u64;
        for trial in 0..trials {
            let mut rng = trial_rng(99, trial);
            let mut order: Vec<usize> = (0..degs.degrees().len()).collect();
            order.shuffle(&mut rng);
            let mut worker = vec![0u32; m as usize];
            for (slot, vertex) in order.into_iter().enumerate() {
                worker[vertex] = (slot % n as usize) as u32;
            }
            for &(u, v) in &edges {
                if worker[u as usize] == worker[v as usize] {
                    total_intra += 1;
                }
            }
        }
        let mean_per_worker = total_intra as f64 / trials as f64 / n as f64;
        let expected = expected_duplicates(m, edges.len() as u64, n).unwrap();
        assert!(
            (mean_per_worker - expected).abs() / expected < 0.05,
            "mean {mean_per_worker} vs expected {expected}"
        );
    }

    proptest! {
        #[test]
        fn degree_sums_are_conserved(degrees in prop::collection::vec(0u64..50, 1..80),
                                     n in 1u32..8, seed in any::<u64>()) {
            let mut degrees = degrees;
            let sum: u64 = degrees.iter().sum();
            if sum % 2 != 0 {
                degrees.push(1);
            }
            let degs = DegreeSequence::from_degrees(degrees).unwrap();
            let mut rng = trial_rng(seed, 0);
            let sums = worker_degree_sums(&degs, n, &mut rng);
            prop_assert_eq!(sums.iter().sum::<u64>(), 2 * degs.num_edges());
        }

        #[test]
        fn estimates_are_deterministic(n in 2u32..6, seed in any::<u64>()) {
            let degs = DegreeSequence::uniform(30, 60).unwrap();
            let a = estimate_partition(&degs, n, 16, seed).unwrap();
            let b = estimate_partition(&degs, n, 16, seed).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
