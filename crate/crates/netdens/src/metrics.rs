//! Comparison metrics over graphs and their ring decompositions.
//!
//! The headline quantity is `beta_rho_delta`: the Bhattacharyya overlap
//! between a graph's ring-size distribution and its degree distribution.
//! Alongside it live the usual structural measures (average local
//! clustering, average path length), the edge-bias report that contrasts
//! observed cross-ring edge fractions with their expected values, and a
//! brute-force densest-subgraph scan used as an oracle on small instances.

use num_rational::Ratio;
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::decompose::{decompose, DensityDecomposition};
use crate::graph::{Graph, NodeId};

/// A vector of nonnegative weights indexed from 0, with a flag recording
/// whether it has been scaled to total mass 1.
///
/// A degenerate distribution with no mass at all (counts taken over an
/// empty graph) may carry the flag while summing to zero; every formula
/// below treats it as a zero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
    normalized: bool,
}

impl Distribution {
    /// Wraps raw counts or weights. Panics on a negative entry.
    pub fn raw(values: Vec<f64>) -> Distribution {
        assert!(values.iter().all(|&x| x >= 0.0), "negative weight");
        Distribution { values, normalized: false }
    }

    /// Wraps weights that already sum to 1 (within 1e-12) or to exactly 0.
    pub fn normalized(values: Vec<f64>) -> Distribution {
        assert!(values.iter().all(|&x| x >= 0.0), "negative weight");
        let sum: f64 = values.iter().sum();
        assert!(
            sum == 0.0 || (sum - 1.0).abs() <= 1e-12,
            "weights sum to {sum}, not 1"
        );
        Distribution { values, normalized: true }
    }

    /// Scales to total mass 1. A zero-sum vector stays as it is but gains
    /// the flag (the degenerate empty case).
    pub fn normalize(mut self) -> Distribution {
        let sum: f64 = self.values.iter().sum();
        if sum > 0.0 {
            for x in &mut self.values {
                *x /= sum;
            }
        }
        self.normalized = true;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Ring-size profile of a decomposition: entry `i` is `|R_i|`, scaled by
/// the node count when `normalize` is set. Length is always `k + 1`.
pub fn density_distribution(d: &DensityDecomposition, normalize: bool) -> Distribution {
    let values: Vec<f64> = d.ring_sizes().iter().map(|&s| s as f64).collect();
    let dist = Distribution::raw(values);
    if normalize {
        dist.normalize()
    } else {
        dist
    }
}

/// Node counts by degree: entry `d` is the number (or fraction) of nodes
/// with exactly `d` neighbors. Length is the maximum degree plus one, or
/// zero for a graph with no nodes.
pub fn degree_distribution(g: &Graph, normalize: bool) -> Distribution {
    let mut counts = Vec::new();
    for v in 0..g.node_count() as NodeId {
        let d = g.degree(v);
        if d >= counts.len() {
            counts.resize(d + 1, 0.0);
        }
        counts[d] += 1.0;
    }
    let dist = Distribution::raw(counts);
    if normalize {
        dist.normalize()
    } else {
        dist
    }
}

/// Bhattacharyya coefficient `Σ_i sqrt(p_i q_i)` of two normalized
/// distributions. The shorter one is implicitly zero-padded, so trailing
/// zeros never change the result. Equals 1 exactly when the distributions
/// coincide and 0 when their supports are disjoint.
///
/// Panics if either argument is not flagged as normalized.
pub fn bhattacharyya(p: &Distribution, q: &Distribution) -> f64 {
    assert!(p.is_normalized(), "first distribution is not normalized");
    assert!(q.is_normalized(), "second distribution is not normalized");
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| {
            let a = p.values().get(i).copied().unwrap_or(0.0);
            let b = q.values().get(i).copied().unwrap_or(0.0);
            (a * b).sqrt()
        })
        .sum()
}

/// Overlap between the ring-size distribution and the degree distribution
/// of `g`, both normalized. High overlap means ranks mirror degrees;
/// structures whose rank profile decouples from the degree profile score
/// near 0. A graph with no nodes scores 0.
pub fn beta_rho_delta(g: &Graph) -> f64 {
    let d = decompose(g);
    bhattacharyya(
        &density_distribution(&d, true),
        &degree_distribution(g, true),
    )
}

/// How nodes with fewer than two neighbors enter the clustering average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusteringMode {
    /// They contribute 0, and the average runs over all nodes. Matches the
    /// convention of most network tooling.
    CountLowDegreeAsZero,
    /// They are left out, and the average runs over degree >= 2 nodes only.
    ExcludeLowDegree,
}

/// Number of triangles through each node, by sorted-adjacency merges on
/// every edge. Each triangle is seen once per edge and credits the third
/// node, so every corner ends up counted exactly once.
fn triangles_per_node(g: &Graph) -> Vec<u64> {
    let mut tri = vec![0u64; g.node_count()];
    for &(u, v) in g.edges() {
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                Ordering::Less => x += 1,
                Ordering::Greater => y += 1,
                Ordering::Equal => {
                    tri[a[x] as usize] += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    tri
}

/// Average local clustering coefficient with low-degree nodes counted as 0.
/// `None` when the graph has no nodes.
pub fn clustering_coefficient(g: &Graph) -> Option<f64> {
    clustering_coefficient_with(g, ClusteringMode::CountLowDegreeAsZero)
}

/// Average local clustering under the chosen low-degree convention. `None`
/// when no node qualifies for the average.
pub fn clustering_coefficient_with(g: &Graph, mode: ClusteringMode) -> Option<f64> {
    let tri = triangles_per_node(g);
    let mut total = 0.0;
    let mut counted = 0usize;
    for v in 0..g.node_count() as NodeId {
        let deg = g.degree(v) as u64;
        if deg < 2 {
            if mode == ClusteringMode::CountLowDegreeAsZero {
                counted += 1;
            }
            continue;
        }
        total += tri[v as usize] as f64 / (deg * (deg - 1) / 2) as f64;
        counted += 1;
    }
    if counted == 0 {
        None
    } else {
        Some(total / counted as f64)
    }
}

/// Source selection for [`average_path_length`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AplMode {
    /// Breadth-first search from every node.
    Exact,
    /// Breadth-first search from `sources` distinct nodes drawn uniformly
    /// with the given seed (capped at the node count).
    Sampled { sources: usize, seed: u64 },
}

/// Sum of distances and count of reached targets from one source.
fn bfs_distance_sums(g: &Graph, source: NodeId, dist: &mut [u32], queue: &mut VecDeque<NodeId>) -> (u64, u64) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source as usize] = 0;
    queue.push_back(source);
    let (mut sum, mut cnt) = (0u64, 0u64);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        for &y in g.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dx + 1;
                sum += (dx + 1) as u64;
                cnt += 1;
                queue.push_back(y);
            }
        }
    }
    (sum, cnt)
}

/// Mean shortest-path length over ordered pairs `(u, v)` with `v` reachable
/// from `u` and distinct from it. Unreachable pairs are excluded from the
/// average rather than treated as infinite. `None` when no such pair
/// exists.
///
/// Sampled mode averages over pairs whose source lies in the sample. The
/// searches run in parallel, but distance totals are exact integers, so the
/// result does not depend on how work was split across threads.
pub fn average_path_length(g: &Graph, mode: AplMode) -> Option<f64> {
    let n = g.node_count();
    let sources: Vec<NodeId> = match mode {
        AplMode::Exact => (0..n as NodeId).collect(),
        AplMode::Sampled { sources, seed } => {
            let mut all: Vec<NodeId> = (0..n as NodeId).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            all.shuffle(&mut rng);
            all.truncate(sources.min(n));
            all
        }
    };
    let (sum, cnt) = sources
        .par_iter()
        .map(|&s| {
            let mut dist = vec![u32::MAX; n];
            let mut queue = VecDeque::new();
            bfs_distance_sums(g, s, &mut dist, &mut queue)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if cnt == 0 {
        None
    } else {
        Some(sum as f64 / cnt as f64)
    }
}

/// Expected fraction of ring `i`'s edge budget landing in ring `j`, under
/// the null model where each ring-`i` node picks neighbors uniformly from
/// the other ring-`i` nodes and everything above.
///
/// With `s = |R_i|` and `a = Σ_{j' > i} |R_j'|`, the pool weight is
/// `(s-1)/2 + a`; the share is `|R_j|` over that for `j > i` and `(s-1)/2`
/// over it for `j = i`. The fractions over all `j >= i` sum to 1. Returns
/// `None` when the pool weight is zero (a singleton top ring has nobody to
/// connect to).
///
/// Panics when `j < i` or ring `i` is empty.
pub fn expected_edge_fraction(ring_sizes: &[usize], i: usize, j: usize) -> Option<f64> {
    assert!(j >= i, "expected fraction is defined for j >= i");
    assert!(ring_sizes[i] > 0, "ring {i} is empty");
    let s = ring_sizes[i] as f64;
    let above: f64 = ring_sizes[i + 1..].iter().map(|&x| x as f64).sum();
    let pool = (s - 1.0) / 2.0 + above;
    if pool == 0.0 {
        return None;
    }
    let share = if j == i { (s - 1.0) / 2.0 } else { ring_sizes[j] as f64 };
    Some(share / pool)
}

/// Observed versus expected edge fraction for one ring pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeBiasEntry {
    pub i: usize,
    pub j: usize,
    pub actual: f64,
    pub expected: f64,
    pub diff: f64,
}

/// Spread of `actual - expected` over all ring pairs at one rank gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapSummary {
    pub gap: usize,
    pub min: f64,
    pub avg: f64,
    pub max: f64,
}

/// Full comparison of observed cross-ring edge fractions against the null
/// expectation, plus per-gap summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeBiasReport {
    pub entries: Vec<EdgeBiasEntry>,
    pub summaries: Vec<GapSummary>,
}

/// Compares, for every ring pair `(i, j)` with `j >= i` and both rings
/// nonempty, the observed fraction of rank-`i`-anchored edges landing in
/// ring `j` against [`expected_edge_fraction`].
///
/// An edge is anchored at the lower of its endpoint ranks. Ranks `i` that
/// anchor no edge at all are skipped (their observed fractions would be
/// 0/0); ring 0 is always such a rank, since its members are isolated.
pub fn edge_bias_report(g: &Graph, d: &DensityDecomposition) -> EdgeBiasReport {
    let k = d.k();
    let mut pair_count = vec![vec![0u64; k + 1]; k + 1];
    let mut anchor_count = vec![0u64; k + 1];
    for &(u, v) in g.edges() {
        let (ru, rv) = (d.rank(u) as usize, d.rank(v) as usize);
        let (i, j) = (ru.min(rv), ru.max(rv));
        pair_count[i][j] += 1;
        anchor_count[i] += 1;
    }

    let mut entries = Vec::new();
    for i in 0..=k {
        if d.ring_sizes()[i] == 0 || anchor_count[i] == 0 {
            continue;
        }
        for j in i..=k {
            if d.ring_sizes()[j] == 0 {
                continue;
            }
            let actual = pair_count[i][j] as f64 / anchor_count[i] as f64;
            let expected = expected_edge_fraction(d.ring_sizes(), i, j)
                .expect("anchored edges imply a nonempty pool");
            entries.push(EdgeBiasEntry { i, j, actual, expected, diff: actual - expected });
        }
    }

    let mut summaries = Vec::new();
    for gap in 0..=k {
        let diffs: Vec<f64> = entries
            .iter()
            .filter(|e| e.j - e.i == gap)
            .map(|e| e.diff)
            .collect();
        if diffs.is_empty() {
            continue;
        }
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &x in &diffs {
            lo = lo.min(x);
            hi = hi.max(x);
            sum += x;
        }
        summaries.push(GapSummary { gap, min: lo, avg: sum / diffs.len() as f64, max: hi });
    }
    EdgeBiasReport { entries, summaries }
}

/// Why the densest-subgraph scan refused to run.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensestError {
    #[error("graph has {n} nodes, above the exhaustive-scan limit of {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("graph has no nodes")]
    Empty,
}

/// Exhaustive densest-subgraph scan: tries every nonempty node subset and
/// returns one maximizing induced edges over nodes, as an exact rational.
/// Ties go to the lexicographically smallest sorted node list. Refuses
/// graphs larger than `max_n` nodes (the scan is exponential; 16 is a
/// comfortable limit).
pub fn densest_subgraph_bruteforce(
    g: &Graph,
    max_n: usize,
) -> Result<(Vec<NodeId>, Ratio<u64>), DensestError> {
    let n = g.node_count();
    if n == 0 {
        return Err(DensestError::Empty);
    }
    // Masks live in a u64, so 63 nodes is a hard ceiling whatever the
    // caller allows (not that a 2^63 scan would ever finish).
    let max_n = max_n.min(63);
    if n > max_n {
        return Err(DensestError::TooLarge { n, max_n });
    }
    let adj: Vec<u64> = (0..n as NodeId)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();

    let members = |mask: u64| -> Vec<NodeId> {
        (0..n as NodeId).filter(|&v| mask & 1 << v != 0).collect()
    };
    let mut best_mask = 1u64;
    let mut best = Ratio::new(0, 1);
    for mask in 1..1u64 << n {
        let mut twice_edges = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            twice_edges += (adj[v] & mask).count_ones() as u64;
        }
        let density = Ratio::new(twice_edges / 2, mask.count_ones() as u64);
        if density > best
            || (density == best && members(mask) < members(best_mask))
        {
            best = density;
            best_mask = mask;
        }
    }
    Ok((members(best_mask), best))
}

/// Bundle of the standard metrics for one graph, shaped for JSON output.
/// `clustering` and `apl` are `null` when undefined (no nodes; no connected
/// pair).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub beta_rho_delta: f64,
    pub clustering: Option<f64>,
    pub apl: Option<f64>,
    pub density_distribution: Vec<f64>,
    pub degree_distribution: Vec<f64>,
}

impl MetricReport {
    /// Computes every metric in one pass, decomposing the graph once.
    pub fn compute(g: &Graph, apl: AplMode, clustering: ClusteringMode) -> MetricReport {
        let d = decompose(g);
        let rho = density_distribution(&d, true);
        let delta = degree_distribution(g, true);
        MetricReport {
            beta_rho_delta: bhattacharyya(&rho, &delta),
            clustering: clustering_coefficient_with(g, clustering),
            apl: average_path_length(g, apl),
            density_distribution: rho.values().to_vec(),
            degree_distribution: delta.values().to_vec(),
        }
    }
}
