//! Graph generators: the ring-profile model with pluggable neighbor
//! selection, plus classical baselines for comparison runs.
//!
//! The ring-profile model takes a target size and a density distribution
//! and builds a graph whose decomposition reproduces the floored ring sizes
//! exactly. Rings are laid down densest-first; every node of ring `i`
//! receives exactly `i` edges, with the targets chosen by a
//! [`NeighborSelector`]. Two selectors ship here: uniform selection over
//! everything present ([`RddSelector`]) and a rewired cyclic lattice with a
//! clustering knob ([`HswSelector`]).
//!
//! The baselines (`sw`, `pa`, `gnp`, `regular`, `ds`) match the standard
//! constructions and exist so model outputs can be contrasted against
//! well-understood graphs under the same metrics. All generators are
//! deterministic functions of their seed.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::decompose::{find_reversible_path, DensityDecomposition, Orientation};
use crate::graph::{Graph, NodeId};
use crate::metrics::Distribution;

/// Generation failures a caller can act on. Contract violations (negative
/// probabilities handed to the typed functions, selectors breaking their
/// promises) panic instead; [`generate_from_spec`] validates user input up
/// front and reports it through these variants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("model `{kind}` requires parameter `{name}`")]
    MissingParameter { kind: ModelKind, name: &'static str },
    #[error("infeasible specification: {0}")]
    Infeasible(String),
    #[error("degree sequence sums to an odd number")]
    OddDegreeSum,
    #[error("degree sequence is not graphical (violated at prefix length {index})")]
    NotGraphical { index: usize },
}

/// Which generator a [`ModelSpec`] drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rdd,
    Hsw,
    Sw,
    Pa,
    Gnp,
    Regular,
    Ds,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rdd => "rdd",
            ModelKind::Hsw => "hsw",
            ModelKind::Sw => "sw",
            ModelKind::Pa => "pa",
            ModelKind::Gnp => "gnp",
            ModelKind::Regular => "regular",
            ModelKind::Ds => "ds",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "rdd" => Ok(ModelKind::Rdd),
            "hsw" => Ok(ModelKind::Hsw),
            "sw" => Ok(ModelKind::Sw),
            "pa" => Ok(ModelKind::Pa),
            "gnp" => Ok(ModelKind::Gnp),
            "regular" => Ok(ModelKind::Regular),
            "ds" => Ok(ModelKind::Ds),
            other => Err(GenError::InvalidParameter(format!(
                "unknown model kind `{other}` (expected rdd, hsw, sw, pa, gnp, regular, or ds)"
            ))),
        }
    }
}

/// Declarative description of a generation run, shaped for JSON. Only the
/// parameters the chosen kind uses are consulted; the rest may stay unset.
///
/// `dist` accepts raw ring counts or normalized fractions; it is rescaled
/// by its sum either way.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_lattice: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_sequence: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connect: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A generated graph, with the construction's own decomposition for the
/// models that define one (`rdd`, `hsw`).
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub decomposition: Option<DensityDecomposition>,
}

fn require<T: Copy>(field: Option<T>, kind: ModelKind, name: &'static str) -> Result<T, GenError> {
    field.ok_or(GenError::MissingParameter { kind, name })
}

fn check_probability(p: f64, name: &str) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

/// Validates a [`ModelSpec`] and runs the generator it names. The seed must
/// be present; resolve it before calling (draw one and record it) so runs
/// stay reproducible.
pub fn generate_from_spec(spec: &ModelSpec) -> Result<Generated, GenError> {
    let kind = spec.kind;
    let seed = require(spec.seed, kind, "seed")?;
    match kind {
        ModelKind::Rdd | ModelKind::Hsw => {
            let n = require(spec.n, kind, "n")?;
            let values = spec
                .dist
                .as_ref()
                .ok_or(GenError::MissingParameter { kind, name: "dist" })?;
            if values.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(GenError::InvalidParameter(
                    "dist entries must be finite and nonnegative".into(),
                ));
            }
            if values.iter().sum::<f64>() <= 0.0 {
                return Err(GenError::InvalidParameter(
                    "dist must have positive total weight".into(),
                ));
            }
            let dist = Distribution::raw(values.clone()).normalize();
            let (graph, decomposition) = if kind == ModelKind::Rdd {
                abstract_generate(&dist, n, &RddSelector, seed)?
            } else {
                let p = require(spec.p, kind, "p")?;
                check_probability(p, "p")?;
                abstract_generate(&dist, n, &HswSelector::new(p), seed)?
            };
            Ok(Generated { graph, decomposition: Some(decomposition) })
        }
        ModelKind::Sw => {
            let n = require(spec.n, kind, "n")?;
            let k = require(spec.k_lattice, kind, "k_lattice")?;
            let p = require(spec.p, kind, "p")?;
            check_probability(p, "p")?;
            if k < 1 || n <= 2 * k {
                return Err(GenError::InvalidParameter(format!(
                    "sw needs 1 <= k_lattice and n > 2*k_lattice, got n = {n}, k_lattice = {k}"
                )));
            }
            Ok(Generated { graph: generate_sw(n, k, p, seed), decomposition: None })
        }
        ModelKind::Pa => {
            let n = require(spec.n, kind, "n")?;
            let c = require(spec.c, kind, "c")?;
            let n0 = spec.n0.unwrap_or(c);
            if c < 1 || n0 < c || n <= n0 {
                return Err(GenError::InvalidParameter(format!(
                    "pa needs 1 <= c <= n0 < n, got n = {n}, n0 = {n0}, c = {c}"
                )));
            }
            Ok(Generated { graph: generate_pa(n, n0, c, seed), decomposition: None })
        }
        ModelKind::Gnp => {
            let n = require(spec.n, kind, "n")?;
            let p = require(spec.p, kind, "p")?;
            check_probability(p, "p")?;
            Ok(Generated { graph: generate_gnp(n, p, seed), decomposition: None })
        }
        ModelKind::Regular => {
            let n = require(spec.n, kind, "n")?;
            let d = require(spec.d, kind, "d")?;
            if d >= n {
                return Err(GenError::InvalidParameter(format!(
                    "regular needs d < n, got n = {n}, d = {d}"
                )));
            }
            if n * d % 2 != 0 {
                return Err(GenError::InvalidParameter(format!(
                    "regular needs n*d even, got n = {n}, d = {d}"
                )));
            }
            Ok(Generated { graph: generate_regular(n, d, seed), decomposition: None })
        }
        ModelKind::Ds => {
            let seq = spec
                .degree_sequence
                .as_ref()
                .ok_or(GenError::MissingParameter { kind, name: "degree_sequence" })?;
            if let Some(n) = spec.n {
                if n != seq.len() {
                    return Err(GenError::InvalidParameter(format!(
                        "n = {n} disagrees with the degree sequence length {}",
                        seq.len()
                    )));
                }
            }
            let graph = generate_ds(seq, seed, spec.connect.unwrap_or(false))?;
            Ok(Generated { graph, decomposition: None })
        }
    }
}

/// Read-only view of the construction handed to a [`NeighborSelector`]:
/// the adjacency built so far, the ring being wired, and which ids exist.
/// Node ids run densest-ring-first, so everything present is the prefix
/// `0..present_end`, with `0..ring_start` strictly denser than the current
/// ring.
pub struct SelectionContext<'a> {
    adjacency: &'a [Vec<NodeId>],
    ring: usize,
    ring_start: NodeId,
    ring_size: usize,
    present_end: NodeId,
}

impl SelectionContext<'_> {
    /// Ring index being wired; also the number of edges each of its nodes
    /// receives.
    pub fn ring(&self) -> usize {
        self.ring
    }

    /// Ids of the current ring, in its cyclic order.
    pub fn ring_members(&self) -> std::ops::Range<NodeId> {
        self.ring_start..self.ring_start + self.ring_size as NodeId
    }

    /// Ids of all nodes in denser rings than the current one.
    pub fn denser_nodes(&self) -> std::ops::Range<NodeId> {
        0..self.ring_start
    }

    /// Every id that exists right now, current batch included.
    pub fn present_nodes(&self) -> std::ops::Range<NodeId> {
        0..self.present_end
    }

    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u as usize].contains(&v)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }
}

/// Strategy for choosing the neighbors of each newly wired node.
///
/// For a node `v` in ring `i`, `select` must return exactly `i` distinct
/// present nodes, none of them `v` itself or an existing neighbor of `v`.
/// Violations are construction bugs and panic in the caller. Shortage of
/// eligible targets is an input problem and surfaces as
/// [`GenError::Infeasible`].
pub trait NeighborSelector {
    fn select(
        &self,
        ctx: &SelectionContext<'_>,
        v: NodeId,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<NodeId>, GenError>;
}

/// Draws `count` distinct eligible nodes from `pool` uniformly and appends
/// them to `picked`. Rejection sampling with a budget of 100 consecutive
/// misses per slot; after that one uniform scan over the survivors settles
/// the rest (termination regardless of how crowded the pool is).
fn fill_uniform(
    ctx: &SelectionContext<'_>,
    rng: &mut dyn RngCore,
    v: NodeId,
    pool: std::ops::Range<NodeId>,
    count: usize,
    picked: &mut Vec<NodeId>,
) -> Result<(), GenError> {
    let eligible =
        |x: NodeId, picked: &[NodeId]| x != v && !picked.contains(&x) && !ctx.is_adjacent(v, x);
    let span = pool.end - pool.start;
    let mut remaining = count;
    let mut misses = 0;
    while remaining > 0 {
        if span == 0 || misses >= 100 {
            let mut survivors: Vec<NodeId> =
                pool.clone().filter(|&x| eligible(x, picked)).collect();
            if survivors.len() < remaining {
                return Err(GenError::Infeasible(format!(
                    "node {v} in ring {} needs {remaining} more neighbors but only {} nodes are eligible",
                    ctx.ring(),
                    survivors.len()
                )));
            }
            for _ in 0..remaining {
                let idx = rng.gen_range(0..survivors.len());
                picked.push(survivors.swap_remove(idx));
            }
            return Ok(());
        }
        let x = pool.start + rng.gen_range(0..span);
        if eligible(x, picked) {
            picked.push(x);
            remaining -= 1;
            misses = 0;
        } else {
            misses += 1;
        }
    }
    Ok(())
}

/// Uniform selection over every present node: each ring-`i` node draws `i`
/// targets without replacement from denser rings and its own batch alike.
pub struct RddSelector;

/// Convenience constructor mirroring [`hsw_selector`].
pub fn rdd_selector() -> RddSelector {
    RddSelector
}

impl NeighborSelector for RddSelector {
    fn select(
        &self,
        ctx: &SelectionContext<'_>,
        v: NodeId,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<NodeId>, GenError> {
        let mut picked = Vec::with_capacity(ctx.ring());
        fill_uniform(ctx, rng, v, ctx.present_nodes(), ctx.ring(), &mut picked)?;
        Ok(picked)
    }
}

/// Lattice-with-rewiring selection: ring `i` is ordered cyclically and each
/// node's `i` candidate edges go to its `i` cyclic predecessors. Every
/// candidate is independently rewired with probability `p`; rewired (or
/// conflicting, or missing) slots are filled uniformly from the denser
/// rings, or from the ring itself when it is the densest. Low `p` keeps the
/// triangle-rich lattice, high `p` approaches uniform selection upward.
pub struct HswSelector {
    p: f64,
}

impl HswSelector {
    pub fn new(p: f64) -> HswSelector {
        assert!((0.0..=1.0).contains(&p), "rewiring probability {p} outside [0, 1]");
        HswSelector { p }
    }
}

/// Convenience constructor for [`HswSelector`].
pub fn hsw_selector(p: f64) -> HswSelector {
    HswSelector::new(p)
}

impl NeighborSelector for HswSelector {
    fn select(
        &self,
        ctx: &SelectionContext<'_>,
        v: NodeId,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<NodeId>, GenError> {
        let i = ctx.ring();
        let s = ctx.ring_size;
        let t = (v - ctx.ring_start) as usize;
        // A ring smaller than i + 1 cannot supply i distinct predecessors;
        // the missing slots join the rewired ones.
        let span = i.min(s - 1);
        let mut picked = Vec::with_capacity(i);
        let mut open_slots = i - span;
        for j in 1..=span {
            let pred = ctx.ring_start + ((t + s - j) % s) as NodeId;
            // The coin is flipped for every candidate, kept or not, so the
            // draw sequence depends only on the seed and the layout.
            if rng.gen_bool(self.p) || ctx.is_adjacent(v, pred) {
                open_slots += 1;
            } else {
                picked.push(pred);
            }
        }
        let pool = if ctx.ring_start > 0 {
            ctx.denser_nodes()
        } else {
            ctx.ring_members()
        };
        fill_uniform(ctx, rng, v, pool, open_slots, &mut picked)?;
        Ok(picked)
    }
}

/// Ring sizes realized from a normalized distribution: `⌊ρ_i·n⌋` per ring,
/// with the flooring remainder assigned to ring 0 and trailing empty rings
/// trimmed. The result always sums to `n` and has at least one entry.
pub fn ring_sizes_from_distribution(dist: &Distribution, n: usize) -> Vec<usize> {
    assert!(dist.is_normalized(), "density distribution must be normalized");
    // The epsilon shields exact products like 0.2 * 10 from landing a hair
    // below their integer value.
    let mut sizes: Vec<usize> = dist
        .values()
        .iter()
        .map(|&f| (f * n as f64 + 1e-9).floor() as usize)
        .collect();
    if sizes.is_empty() {
        sizes.push(0);
    }
    let mut assigned: usize = sizes.iter().sum();
    // The epsilon can in principle round several entries up at once; shave
    // the overshoot back off the top.
    while assigned > n {
        let idx = sizes.iter().rposition(|&s| s > 0).unwrap();
        sizes[idx] -= 1;
        assigned -= 1;
    }
    sizes[0] += n - assigned;
    while sizes.len() > 1 && *sizes.last().unwrap() == 0 {
        sizes.pop();
    }
    sizes
}

/// Builds a graph with exactly the ring profile `⌊ρ_i·n⌋` (remainder in
/// ring 0), wiring neighbors through `selector`.
///
/// Rings are laid down densest-first in contiguous id blocks; every node of
/// ring `i` receives exactly `i` edges. Each edge therefore points at a
/// rank no higher than its source's, which makes the construction
/// orientation egalitarian and the built ring assignment the graph's true
/// decomposition; it is returned with that orientation as witness.
///
/// Fails when the densest nonempty ring `k` has `k` or fewer nodes (its
/// first members could never find `k` distinct targets), or when a selector
/// runs out of eligible nodes mid-build.
pub fn abstract_generate(
    dist: &Distribution,
    n: usize,
    selector: &dyn NeighborSelector,
    seed: u64,
) -> Result<(Graph, DensityDecomposition), GenError> {
    let sizes = ring_sizes_from_distribution(dist, n);
    let k = sizes.len() - 1;
    if k >= 1 && sizes[k] <= k {
        return Err(GenError::Infeasible(format!(
            "densest ring {k} has only {} nodes; within-ring wiring needs at least {}",
            sizes[k],
            k + 1
        )));
    }
    let mut starts = vec![0usize; k + 1];
    for i in (0..k).rev() {
        starts[i] = starts[i + 1] + sizes[i + 1];
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut receivers: Vec<NodeId> = Vec::new();
    for i in (1..=k).rev() {
        if sizes[i] == 0 {
            continue;
        }
        let start = starts[i] as NodeId;
        let end = start + sizes[i] as NodeId;
        for v in start..end {
            let ctx = SelectionContext {
                adjacency: &adjacency,
                ring: i,
                ring_start: start,
                ring_size: sizes[i],
                present_end: end,
            };
            let picks = selector.select(&ctx, v, &mut rng)?;
            assert_eq!(picks.len(), i, "selector returned {} nodes in ring {i}", picks.len());
            for (idx, &u) in picks.iter().enumerate() {
                assert!(u < end, "selector returned node {u}, which is not present");
                assert_ne!(u, v, "selector returned the node itself");
                assert!(!adjacency[v as usize].contains(&u), "selector returned an existing neighbor");
                assert!(!picks[..idx].contains(&u), "selector returned a duplicate");
                adjacency[v as usize].push(u);
                adjacency[u as usize].push(v);
                pairs.push((u, v));
                receivers.push(v);
            }
        }
    }

    let g = Graph::from_pairs(n, pairs.iter().copied());
    // Simplicity was enforced during wiring, so the graph keeps every pair;
    // only the order changed. Recover each edge's direction by key.
    let mut receiver_of: HashMap<(NodeId, NodeId), NodeId> = HashMap::with_capacity(pairs.len());
    for (&(a, b), &r) in pairs.iter().zip(&receivers) {
        receiver_of.insert((a.min(b), a.max(b)), r);
    }
    let toward_upper: Vec<bool> = g.edges().iter().map(|&(u, v)| receiver_of[&(u, v)] == v).collect();
    let witness = Orientation::from_directions(&g, toward_upper);
    debug_assert!(find_reversible_path(&g, &witness).is_none());

    let mut rank = vec![0u32; n];
    for i in 0..=k {
        for v in starts[i]..starts[i] + sizes[i] {
            rank[v] = i as u32;
        }
    }
    Ok((g, DensityDecomposition::from_parts(rank, sizes, k, witness)))
}

/// Cyclic lattice with random rewiring: each node is joined to its
/// `k_lattice` cyclic predecessors (degree `2·k_lattice`), then every
/// lattice edge is independently rewired with probability `p` by replacing
/// its predecessor endpoint with a uniform non-conflicting node. Requires
/// `n > 2·k_lattice` so the lattice itself is simple.
pub fn generate_sw(n: usize, k_lattice: usize, p: f64, seed: u64) -> Graph {
    assert!(k_lattice >= 1, "k_lattice must be at least 1");
    assert!(n > 2 * k_lattice, "lattice needs n > 2*k_lattice");
    assert!((0.0..=1.0).contains(&p), "rewiring probability {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for v in 0..n {
        for j in 1..=k_lattice {
            let u = ((v + n - j) % n) as NodeId;
            adjacency[v].push(u);
            adjacency[u as usize].push(v as NodeId);
        }
    }
    for v in 0..n as NodeId {
        for j in 1..=k_lattice {
            let u = ((v as usize + n - j) % n) as NodeId;
            if !rng.gen_bool(p) {
                continue;
            }
            // Replace (v, u) with (v, x). Keeping the old edge in place
            // during the draw also rules out x == u.
            let mut replacement = None;
            for _ in 0..100 {
                let x = rng.gen_range(0..n as NodeId);
                if x != v && !adjacency[v as usize].contains(&x) {
                    replacement = Some(x);
                    break;
                }
            }
            if replacement.is_none() {
                let survivors: Vec<NodeId> = (0..n as NodeId)
                    .filter(|&x| x != v && !adjacency[v as usize].contains(&x))
                    .collect();
                // A node adjacent to everything keeps its lattice edge.
                if survivors.is_empty() {
                    continue;
                }
                replacement = Some(survivors[rng.gen_range(0..survivors.len())]);
            }
            let x = replacement.unwrap();
            let pos = adjacency[v as usize].iter().position(|&y| y == u).unwrap();
            adjacency[v as usize].swap_remove(pos);
            let pos = adjacency[u as usize].iter().position(|&y| y == v).unwrap();
            adjacency[u as usize].swap_remove(pos);
            adjacency[v as usize].push(x);
            adjacency[x as usize].push(v);
        }
    }
    let mut pairs = Vec::with_capacity(n * k_lattice);
    for v in 0..n as NodeId {
        for &u in &adjacency[v as usize] {
            if v < u {
                pairs.push((v, u));
            }
        }
    }
    Graph::from_pairs(n, pairs)
}

/// Growth with degree-proportional attachment: `n0` seed nodes (a cycle
/// for `n0 >= 3`, a clique below that), then each new node attaches to `c`
/// distinct existing nodes, drawn with probability proportional to current
/// degree (repeat draws until distinct; isolated seeds fall back to a
/// uniform draw).
pub fn generate_pa(n: usize, n0: usize, c: usize, seed: u64) -> Graph {
    assert!(c >= 1 && n0 >= c && n > n0, "pa needs 1 <= c <= n0 < n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    // One entry per edge endpoint; indexing uniformly into it weights nodes
    // by degree.
    let mut endpoints: Vec<NodeId> = Vec::new();
    let push_edge = |pairs: &mut Vec<(NodeId, NodeId)>, endpoints: &mut Vec<NodeId>, a: NodeId, b: NodeId| {
        pairs.push((a, b));
        endpoints.push(a);
        endpoints.push(b);
    };
    if n0 >= 3 {
        for v in 0..n0 as NodeId {
            push_edge(&mut pairs, &mut endpoints, v, (v + 1) % n0 as NodeId);
        }
    } else if n0 == 2 {
        push_edge(&mut pairs, &mut endpoints, 0, 1);
    }
    for v in n0 as NodeId..n as NodeId {
        let mut targets: Vec<NodeId> = Vec::with_capacity(c);
        let mut misses = 0;
        while targets.len() < c {
            if misses >= 100 {
                // Pathological repeat streak: settle the remainder with a
                // uniform scan over the not-yet-chosen nodes.
                let mut survivors: Vec<NodeId> =
                    (0..v).filter(|x| !targets.contains(x)).collect();
                while targets.len() < c {
                    let idx = rng.gen_range(0..survivors.len());
                    targets.push(survivors.swap_remove(idx));
                }
                break;
            }
            let x = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if targets.contains(&x) {
                misses += 1;
            } else {
                targets.push(x);
            }
        }
        for x in targets {
            push_edge(&mut pairs, &mut endpoints, x, v);
        }
    }
    Graph::from_pairs(n, pairs)
}

/// Uniform random graph: every unordered pair is an edge independently with
/// probability `p`. Pairs are visited through geometric skips, so the cost
/// is proportional to the number of edges produced, not to `n²`.
pub fn generate_gnp(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability {p} outside [0, 1]");
    if n < 2 || p == 0.0 {
        return Graph::from_pairs(n, []);
    }
    let mut pairs = Vec::new();
    if p >= 1.0 {
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                pairs.push((u, v));
            }
        }
        return Graph::from_pairs(n, pairs);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_q = (1.0 - p).ln();
    let total = n as u64 * (n as u64 - 1) / 2;
    // Walk the row-major pair order (0,1), (0,2), ..., (1,2), ... keeping
    // (row, pairs before row) in step with the strictly increasing index.
    let mut row = 0u64;
    let mut before_row = 0u64;
    let mut idx = 0u64;
    loop {
        let u01 = 1.0 - rng.gen::<f64>();
        idx += (u01.ln() / ln_q) as u64;
        if idx >= total {
            break;
        }
        while idx - before_row >= n as u64 - 1 - row {
            before_row += n as u64 - 1 - row;
            row += 1;
        }
        let col = row + 1 + (idx - before_row);
        pairs.push((row as NodeId, col as NodeId));
        idx += 1;
    }
    Graph::from_pairs(n, pairs)
}

/// Uniform `d`-regular graph by stub matching: pair up `d` stubs per node
/// uniformly, restarting whenever a self-loop or duplicate edge appears.
/// Requires `n·d` even and `d < n`. Dense degrees make simple pairings
/// exponentially rare; this is intended for the sparse regime.
pub fn generate_regular(n: usize, d: usize, seed: u64) -> Graph {
    assert!(d < n, "regular graph needs d < n");
    assert!(n * d % 2 == 0, "regular graph needs n*d even");
    if d == 0 {
        return Graph::from_pairs(n, []);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<NodeId> = (0..n as NodeId).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut stubs = base.clone();
    let mut seen: HashSet<u64> = HashSet::with_capacity(n * d / 2);
    'attempt: for _ in 0..100_000 {
        stubs.copy_from_slice(&base);
        seen.clear();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(n * d / 2);
        let mut end = stubs.len();
        // Matching the last stub with a uniform other is a uniform perfect
        // matching; aborting at the first conflict just rejects early.
        while end > 0 {
            let a = stubs[end - 1];
            let j = rng.gen_range(0..end - 1);
            let b = stubs[j];
            if a == b {
                continue 'attempt;
            }
            if !seen.insert(((a.min(b) as u64) << 32) | a.max(b) as u64) {
                continue 'attempt;
            }
            stubs[j] = stubs[end - 2];
            end -= 2;
            pairs.push((a, b));
        }
        return Graph::from_pairs(n, pairs);
    }
    panic!("stub matching found no simple {d}-regular graph on {n} nodes in 100000 attempts");
}

/// Graph with a prescribed degree sequence: greedy realization
/// (highest remaining degree first), shuffled by `10·m` random
/// degree-preserving double-edge swaps, with optional connectivity repair
/// that merges components through further swaps.
///
/// Connectivity repair fails when the sequence admits no connected
/// realization (a zero degree alongside other nodes, or fewer than `n - 1`
/// edges overall).
pub fn generate_ds(degree_sequence: &[usize], seed: u64, connect: bool) -> Result<Graph, GenError> {
    let n = degree_sequence.len();
    let total: usize = degree_sequence.iter().sum();
    if total % 2 != 0 {
        return Err(GenError::OddDegreeSum);
    }
    let mut sorted = degree_sequence.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0usize;
    for k in 1..=n {
        prefix += sorted[k - 1];
        let slack: usize = sorted[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + slack {
            return Err(GenError::NotGraphical { index: k });
        }
    }

    // Greedy realization: exhaust the largest remaining degree against the
    // next-largest ones. For a graphical sequence this always succeeds and
    // never repeats an edge, since an exhausted node stays at zero.
    let mut remaining: Vec<(usize, NodeId)> = degree_sequence
        .iter()
        .enumerate()
        .map(|(v, &d)| (d, v as NodeId))
        .collect();
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(total / 2);
    loop {
        remaining.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (r, v) = remaining[0];
        if r == 0 {
            break;
        }
        remaining[0].0 = 0;
        for t in 1..=r {
            assert!(remaining[t].0 > 0, "graphical sequence ran dry");
            remaining[t].0 -= 1;
            pairs.push((v, remaining[t].1));
        }
    }

    let key = |a: NodeId, b: NodeId| ((a.min(b) as u64) << 32) | a.max(b) as u64;
    let mut edge_set: HashSet<u64> = pairs.iter().map(|&(a, b)| key(a, b)).collect();
    let m = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if m >= 2 {
        for _ in 0..10 * m {
            let e1 = rng.gen_range(0..m);
            let e2 = rng.gen_range(0..m);
            let (a, b) = pairs[e1];
            let (mut c, mut d) = pairs[e2];
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut c, &mut d);
            }
            // Candidate rewiring: (a,b), (c,d) -> (a,c), (b,d).
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if edge_set.contains(&key(a, c)) || edge_set.contains(&key(b, d)) {
                continue;
            }
            edge_set.remove(&key(a, b));
            edge_set.remove(&key(c, d));
            edge_set.insert(key(a, c));
            edge_set.insert(key(b, d));
            pairs[e1] = (a, c);
            pairs[e2] = (b, d);
        }
    }

    if connect {
        connect_components(n, &mut pairs)?;
    }
    Ok(Graph::from_pairs(n, pairs))
}

/// Merges the components of a degree-sequence realization through
/// double-edge swaps, preserving every degree.
///
/// Each round takes a cycle edge (one whose removal keeps its component
/// connected) and any edge of another component and crosses them; the cycle
/// side stays connected, so the component count strictly drops. If no cycle
/// edge exists the graph is a forest on several components, which has too
/// few edges to ever become connected.
fn connect_components(n: usize, pairs: &mut [(NodeId, NodeId)]) -> Result<(), GenError> {
    if n <= 1 {
        return Ok(());
    }
    let component_labels = |pairs: &[(NodeId, NodeId)]| -> (Vec<u32>, usize) {
        let mut label = vec![u32::MAX; n];
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(a, b) in pairs {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = count as u32;
            queue.push_back(start as NodeId);
            while let Some(x) = queue.pop_front() {
                for &y in &adjacency[x as usize] {
                    if label[y as usize] == u32::MAX {
                        label[y as usize] = count as u32;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    };

    loop {
        let (label, count) = component_labels(pairs);
        if count == 1 {
            return Ok(());
        }
        if pairs.len() < n - 1 {
            return Err(GenError::Infeasible(format!(
                "degree sequence admits no connected realization: {} edges cannot span {n} nodes",
                pairs.len()
            )));
        }
        // Find the first edge lying on a cycle: removing it keeps its
        // endpoints connected.
        let mut cycle_edge = None;
        'edges: for (e, &(a, b)) in pairs.iter().enumerate() {
            let mut reached = vec![false; n];
            let mut queue = VecDeque::new();
            reached[a as usize] = true;
            queue.push_back(a);
            while let Some(x) = queue.pop_front() {
                for (f, &(u, v)) in pairs.iter().enumerate() {
                    if f == e {
                        continue;
                    }
                    let other = if u == x {
                        v
                    } else if v == x {
                        u
                    } else {
                        continue;
                    };
                    if !reached[other as usize] {
                        if other == b {
                            cycle_edge = Some(e);
                            break 'edges;
                        }
                        reached[other as usize] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        let Some(e1) = cycle_edge else {
            return Err(GenError::Infeasible(
                "degree sequence admits no connected realization: every component is a tree".into(),
            ));
        };
        let comp1 = label[pairs[e1].0 as usize];
        // Components without edges are isolated nodes; no swap reaches them.
        let Some(e2) = pairs.iter().position(|&(a, _)| label[a as usize] != comp1) else {
            return Err(GenError::Infeasible(
                "degree sequence admits no connected realization: it contains an isolated node"
                    .into(),
            ));
        };
        let (a, b) = pairs[e1];
        let (c, d) = pairs[e2];
        // Cross-component, so neither replacement edge can exist already.
        pairs[e1] = (a, c);
        pairs[e2] = (b, d);
    }
}

/// The complete graph on `n` nodes with the cyclic balanced orientation:
/// the edge between positions `u < v` points into `u` exactly when
/// `v - u <= ⌊n/2⌋`. Every indegree is `⌊n/2⌋` or `⌊n/2⌋ - 1`, which makes
/// the orientation egalitarian outright; it serves as a closed-form
/// cross-check for the rebalancing search.
pub fn clique_orientation(n: usize) -> (Graph, Orientation) {
    assert!(n >= 1, "clique needs at least one node");
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            pairs.push((u, v));
        }
    }
    let g = Graph::from_pairs(n, pairs);
    let half = (n / 2) as u32;
    let toward_upper = g.edges().iter().map(|&(u, v)| v - u > half).collect();
    let o = Orientation::from_directions(&g, toward_upper);
    (g, o)
}
