//! Egalitarian orientations and the ring decomposition built on them.
//!
//! Orient every edge of a graph, then repeatedly pick a directed path that
//! starts at a node of low indegree and ends at a node whose indegree is at
//! least two higher, and reverse it. Each reversal shifts one unit of
//! indegree from the overloaded end to the underloaded start, so the process
//! terminates in an orientation where no such path remains. That orientation
//! is *egalitarian*: along any directed path, indegrees can rise by at most
//! one overall.
//!
//! Peeling an egalitarian orientation from the top produces the ring
//! decomposition. With `k` the maximum indegree, ring `R_k` is the set of
//! indegree-`k` nodes together with everything that can reach them; removing
//! those and repeating with `i = k-1, ..., 0` assigns every node a rank. The
//! rank function does not depend on the starting orientation, and the
//! subgraph witnessing rank `i` (identify everything above, delete
//! everything below) has density in `(i-1, i]`. [`verify_decomposition`]
//! checks those windows with exact rational arithmetic.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::fmt;

use crate::graph::{identify_and_delete, Graph, NodeId, RegionCounts};

/// An assignment of a direction to every edge of a specific [`Graph`].
///
/// An orientation is meaningful only together with the graph it was built
/// from; functions taking both check that the edge counts agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    /// For edge `(u, v)` with `u < v`: `true` when directed `u -> v`.
    toward_upper: Vec<bool>,
    indegree: Vec<u32>,
}

impl Orientation {
    /// Directs every edge from its lower id to its higher id. This is the
    /// deterministic default starting point for [`egalitarian_orient`].
    pub fn low_to_high(g: &Graph) -> Orientation {
        let mut indegree = vec![0u32; g.node_count()];
        for &(_, v) in g.edges() {
            indegree[v as usize] += 1;
        }
        Orientation { toward_upper: vec![true; g.edge_count()], indegree }
    }

    /// Builds an orientation from an explicit per-edge flag: entry `e` is
    /// `true` when edge `e` runs from its lower endpoint id to its higher.
    pub fn from_directions(g: &Graph, toward_upper: Vec<bool>) -> Orientation {
        assert_eq!(toward_upper.len(), g.edge_count(), "one direction per edge");
        let mut indegree = vec![0u32; g.node_count()];
        for (&(u, v), &up) in g.edges().iter().zip(&toward_upper) {
            indegree[if up { v } else { u } as usize] += 1;
        }
        Orientation { toward_upper, indegree }
    }

    /// Directs each edge by an independent coin flip from `seed`.
    pub fn random(g: &Graph, seed: u64) -> Orientation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut indegree = vec![0u32; g.node_count()];
        let toward_upper: Vec<bool> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let up = rng.gen::<bool>();
                indegree[if up { v } else { u } as usize] += 1;
                up
            })
            .collect();
        Orientation { toward_upper, indegree }
    }

    pub fn head(&self, g: &Graph, e: u32) -> NodeId {
        let (u, v) = g.endpoints(e);
        if self.toward_upper[e as usize] {
            v
        } else {
            u
        }
    }

    pub fn tail(&self, g: &Graph, e: u32) -> NodeId {
        let (u, v) = g.endpoints(e);
        if self.toward_upper[e as usize] {
            u
        } else {
            v
        }
    }

    pub fn indegree(&self, v: NodeId) -> u32 {
        self.indegree[v as usize]
    }

    pub fn indegrees(&self) -> &[u32] {
        &self.indegree
    }

    pub fn max_indegree(&self) -> u32 {
        self.indegree.iter().copied().max().unwrap_or(0)
    }

    /// Directed `(tail, head)` pairs in edge-id order.
    pub fn directed_edges<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = (NodeId, NodeId)> + 'a {
        debug_assert_eq!(self.toward_upper.len(), g.edge_count());
        g.edges().iter().zip(&self.toward_upper).map(
            |(&(u, v), &up)| {
                if up {
                    (u, v)
                } else {
                    (v, u)
                }
            },
        )
    }

    fn flip(&mut self, g: &Graph, e: u32) {
        let (u, v) = g.endpoints(e);
        let up = self.toward_upper[e as usize];
        let (old_head, new_head) = if up { (v, u) } else { (u, v) };
        self.indegree[old_head as usize] -= 1;
        self.indegree[new_head as usize] += 1;
        self.toward_upper[e as usize] = !up;
    }
}

/// Scratch space for repeated backward searches, stamped per generation so
/// the visited set never needs clearing.
struct SearchScratch {
    parent: Vec<NodeId>,
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<NodeId>,
}

impl SearchScratch {
    fn new(n: usize) -> Self {
        SearchScratch {
            parent: vec![0; n],
            stamp: vec![0; n],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    /// Breadth-first search backward along incoming edges from `sources`
    /// (all of indegree `d`). Returns the directed path from the first
    /// discovered node of indegree `<= d - 2` to its source, or `None`.
    ///
    /// Neighbor lists are sorted, so discovery order (and the returned
    /// path) is deterministic.
    fn backward_search(
        &mut self,
        g: &Graph,
        o: &Orientation,
        sources: &[NodeId],
        d: u32,
    ) -> Option<Vec<NodeId>> {
        self.generation += 1;
        let gen = self.generation;
        self.queue.clear();
        for &s in sources {
            self.stamp[s as usize] = gen;
            self.parent[s as usize] = s;
            self.queue.push_back(s);
        }
        while let Some(x) = self.queue.pop_front() {
            for (nbr, e) in g.incident(x) {
                if o.head(g, e) != x || self.stamp[nbr as usize] == gen {
                    continue;
                }
                self.stamp[nbr as usize] = gen;
                self.parent[nbr as usize] = x;
                if o.indegree(nbr) + 2 <= d {
                    let mut path = vec![nbr];
                    let mut cur = nbr;
                    while self.parent[cur as usize] != cur {
                        cur = self.parent[cur as usize];
                        path.push(cur);
                    }
                    return Some(path);
                }
                self.queue.push_back(nbr);
            }
        }
        None
    }
}

/// Nodes grouped by current indegree, with O(1) moves between groups.
struct IndegreeBuckets {
    bucket: Vec<Vec<NodeId>>,
    pos: Vec<u32>,
}

impl IndegreeBuckets {
    fn build(o: &Orientation, max_level: usize) -> Self {
        let mut bucket = vec![Vec::new(); max_level + 1];
        let mut pos = vec![0u32; o.indegree.len()];
        for (v, &d) in o.indegree.iter().enumerate() {
            pos[v] = bucket[d as usize].len() as u32;
            bucket[d as usize].push(v as NodeId);
        }
        IndegreeBuckets { bucket, pos }
    }

    fn shift(&mut self, v: NodeId, from: u32, to: u32) {
        let list = &mut self.bucket[from as usize];
        let idx = self.pos[v as usize] as usize;
        let last = list.len() - 1;
        list.swap(idx, last);
        self.pos[list[idx] as usize] = idx as u32;
        list.pop();
        self.pos[v as usize] = self.bucket[to as usize].len() as u32;
        self.bucket[to as usize].push(v);
    }
}

/// Returns a directed path `u -> ... -> v` with
/// `indegree(v) >= indegree(u) + 2`, or `None` if the orientation is
/// already egalitarian.
///
/// The search runs top-down over indegree levels, so on egalitarian input it
/// costs one backward sweep per populated level.
pub fn find_reversible_path(g: &Graph, o: &Orientation) -> Option<Vec<NodeId>> {
    debug_assert_eq!(o.toward_upper.len(), g.edge_count());
    let max = o.max_indegree();
    if max < 2 {
        return None;
    }
    let mut by_level = vec![Vec::new(); max as usize + 1];
    for (v, &d) in o.indegree.iter().enumerate() {
        by_level[d as usize].push(v as NodeId);
    }
    let mut scratch = SearchScratch::new(g.node_count());
    for d in (2..=max).rev() {
        let sources = &by_level[d as usize];
        if sources.is_empty() {
            continue;
        }
        if let Some(path) = scratch.backward_search(g, o, sources, d) {
            return Some(path);
        }
    }
    None
}

/// Reverses the direction of every edge along `path`, which must be a
/// directed path in `o`. The first node's indegree rises by one, the last
/// node's drops by one, interior indegrees are unchanged.
///
/// Panics if `path` is not a directed path of `g` under `o`.
pub fn reverse_path(g: &Graph, o: &mut Orientation, path: &[NodeId]) {
    assert!(path.len() >= 2, "path must contain at least one edge");
    for pair in path.windows(2) {
        let e = g
            .edge_between(pair[0], pair[1])
            .unwrap_or_else(|| panic!("no edge between {} and {}", pair[0], pair[1]));
        assert_eq!(
            o.head(g, e),
            pair[1],
            "edge {} -> {} not directed along the path",
            pair[0],
            pair[1]
        );
        o.flip(g, e);
    }
}

/// Rebalances `initial` (or a default orientation) until no reversible path
/// remains.
///
/// Starting point: `initial` if given, otherwise a seeded random orientation
/// when `seed` is set, otherwise low-id-to-high-id. The resulting indegree
/// sequence and ring structure are independent of the start; only the
/// witness directions may differ.
///
/// Levels are processed from the highest indegree down. At level `d` a
/// multi-source backward search runs from all current indegree-`d` nodes;
/// every hit reverses one path and removes one node from the level, so the
/// level drains in finitely many steps. Reversals at lower levels never
/// touch an edge entering the settled closure above (a path ending inside
/// it would have to start inside it), which is why a single downward sweep
/// suffices.
pub fn egalitarian_orient(g: &Graph, initial: Option<Orientation>, seed: Option<u64>) -> Orientation {
    let mut o = initial.unwrap_or_else(|| match seed {
        Some(s) => Orientation::random(g, s),
        None => Orientation::low_to_high(g),
    });
    assert_eq!(o.toward_upper.len(), g.edge_count(), "orientation built from a different graph");

    let top = o.max_indegree();
    if top < 2 {
        return o;
    }
    let mut buckets = IndegreeBuckets::build(&o, top as usize);
    let mut scratch = SearchScratch::new(g.node_count());
    for d in (2..=top).rev() {
        while !buckets.bucket[d as usize].is_empty() {
            let Some(path) = scratch.backward_search(g, &o, &buckets.bucket[d as usize], d) else {
                break;
            };
            let (first, last) = (path[0], *path.last().unwrap());
            let before_first = o.indegree(first);
            reverse_path(g, &mut o, &path);
            buckets.shift(first, before_first, before_first + 1);
            buckets.shift(last, d, d - 1);
        }
    }
    debug_assert!(find_reversible_path(g, &o).is_none());
    o
}

/// The ring decomposition of a graph: a rank per node, ring sizes, and the
/// egalitarian orientation that witnesses it.
#[derive(Debug, Clone)]
pub struct DensityDecomposition {
    rank: Vec<u32>,
    ring_sizes: Vec<usize>,
    k: usize,
    witness: Orientation,
}

impl DensityDecomposition {
    /// Assembles a decomposition from raw parts without recomputing it.
    /// Intended for verification workflows; the parts are only checked for
    /// shape, not correctness — that is [`verify_decomposition`]'s job.
    pub fn from_parts(
        rank: Vec<u32>,
        ring_sizes: Vec<usize>,
        k: usize,
        witness: Orientation,
    ) -> Self {
        assert_eq!(ring_sizes.len(), k + 1, "ring_sizes must have k + 1 entries");
        assert_eq!(
            ring_sizes.iter().sum::<usize>(),
            rank.len(),
            "ring sizes must sum to the node count"
        );
        assert!(rank.iter().all(|&r| (r as usize) <= k), "rank exceeds k");
        DensityDecomposition { rank, ring_sizes, k, witness }
    }

    pub fn rank(&self, v: NodeId) -> u32 {
        self.rank[v as usize]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    /// Ring sizes indexed by rank; entries may be zero for skipped ranks.
    pub fn ring_sizes(&self) -> &[usize] {
        &self.ring_sizes
    }

    /// Highest rank, equal to the maximum witness indegree.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn witness(&self) -> &Orientation {
        &self.witness
    }

    /// Members of ring `i` in ascending id order.
    pub fn ring(&self, i: usize) -> Vec<NodeId> {
        (0..self.rank.len() as NodeId)
            .filter(|&v| self.rank[v as usize] as usize == i)
            .collect()
    }
}

/// Extracts the rings of an egalitarian orientation, consuming it as the
/// witness.
///
/// Going down from `k` (the maximum indegree), ring `i` collects every
/// unassigned node of indegree `i` plus the unassigned nodes that reach one
/// through directed paths; the second group necessarily has indegree
/// `i - 1`. Whatever remains at the end is isolated and lands in ring 0.
///
/// Panics if the orientation still admits a reversible path.
pub fn rings_from_orientation(g: &Graph, witness: Orientation) -> DensityDecomposition {
    assert_eq!(witness.toward_upper.len(), g.edge_count());
    assert!(
        find_reversible_path(g, &witness).is_none(),
        "orientation is not egalitarian"
    );
    let n = g.node_count();
    let k = witness.max_indegree() as usize;
    const UNASSIGNED: u32 = u32::MAX;
    let mut rank = vec![UNASSIGNED; n];
    let mut queue = VecDeque::new();
    for i in (0..=k).rev() {
        for v in 0..n as NodeId {
            if rank[v as usize] == UNASSIGNED && witness.indegree(v) as usize == i {
                rank[v as usize] = i as u32;
                queue.push_back(v);
            }
        }
        // Backward closure: anything that reaches this ring belongs to it.
        while let Some(x) = queue.pop_front() {
            for (nbr, e) in g.incident(x) {
                if witness.head(g, e) == x && rank[nbr as usize] == UNASSIGNED {
                    rank[nbr as usize] = i as u32;
                    queue.push_back(nbr);
                }
            }
        }
    }
    debug_assert!(rank.iter().all(|&r| r != UNASSIGNED));

    let mut ring_sizes = vec![0usize; k + 1];
    for &r in &rank {
        ring_sizes[r as usize] += 1;
    }
    DensityDecomposition { rank, ring_sizes, k, witness }
}

/// Ring decomposition from the deterministic default orientation.
pub fn decompose(g: &Graph) -> DensityDecomposition {
    rings_from_orientation(g, egalitarian_orient(g, None, None))
}

/// Density window check for one ring; see [`verify_decomposition`].
#[derive(Debug, Clone)]
pub struct RingCheck {
    pub ring: usize,
    pub counts: RegionCounts,
    pub density: Ratio<u64>,
    pub lower_bound: Ratio<u64>,
    pub upper_bound: Ratio<u64>,
}

impl RingCheck {
    pub fn lower_ok(&self) -> bool {
        self.density >= self.lower_bound
    }

    pub fn upper_ok(&self) -> bool {
        self.density <= self.upper_bound
    }

    pub fn ok(&self) -> bool {
        self.lower_ok() && self.upper_ok()
    }
}

/// Outcome of checking a claimed decomposition against its graph.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub ring_checks: Vec<RingCheck>,
    pub reversible_path_free: bool,
    pub edge_directions_ok: bool,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.reversible_path_free
            && self.edge_directions_ok
            && self.ring_checks.iter().all(RingCheck::ok)
    }

    /// Human-readable descriptions of every violated check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.reversible_path_free {
            out.push("witness orientation admits a reversible path".to_owned());
        }
        if !self.edge_directions_ok {
            out.push("an edge between rings is directed from the lower rank".to_owned());
        }
        for c in &self.ring_checks {
            if !c.upper_ok() {
                out.push(format!(
                    "ring {}: density {} exceeds upper bound {}",
                    c.ring, c.density, c.upper_bound
                ));
            }
            if !c.lower_ok() {
                out.push(format!(
                    "ring {}: density {} below lower bound {}",
                    c.ring, c.density, c.lower_bound
                ));
            }
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            write!(f, "decomposition verified: {} ring checks passed", self.ring_checks.len())
        } else {
            write!(f, "decomposition invalid: {}", self.failures().join("; "))
        }
    }
}

/// Checks the claimed decomposition with exact rational arithmetic.
///
/// For every nonempty ring `i >= 1` the witnessing region is built by
/// identifying all higher rings into one node and deleting all lower rings
/// (parallel edges kept). Its density must lie in
/// `[((s-1)(i-1) + i) / (s+1), i]` where `s` is the ring size. The witness
/// orientation must be egalitarian and every cross-ring edge must point
/// toward the lower-ranked endpoint.
pub fn verify_decomposition(g: &Graph, d: &DensityDecomposition) -> VerificationReport {
    let k = d.k();
    let mut ring_checks = Vec::new();
    for i in 1..=k {
        let s = d.ring_sizes()[i];
        if s == 0 {
            continue;
        }
        let mut identify = Vec::new();
        let mut delete = Vec::new();
        for v in 0..g.node_count() as NodeId {
            let r = d.rank(v) as usize;
            if r > i {
                identify.push(v);
            } else if r < i {
                delete.push(v);
            }
        }
        let counts = identify_and_delete(g, &identify, &delete);
        let density = counts.density().expect("region contains the nonempty ring");
        let lower_bound = Ratio::new(((s - 1) * (i - 1) + i) as u64, (s + 1) as u64);
        let upper_bound = Ratio::from_integer(i as u64);
        ring_checks.push(RingCheck { ring: i, counts, density, lower_bound, upper_bound });
    }

    let edge_directions_ok = g.edges().iter().enumerate().all(|(e, &(u, v))| {
        let (ru, rv) = (d.rank(u), d.rank(v));
        if ru == rv {
            return true;
        }
        let lower = if ru < rv { u } else { v };
        d.witness().head(g, e as u32) == lower
    });

    VerificationReport {
        ring_checks,
        reversible_path_free: find_reversible_path(g, d.witness()).is_none(),
        edge_directions_ok,
    }
}

/// Core numbers of every node plus the degeneracy.
#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    core: Vec<u32>,
    max_core: u32,
}

impl CoreDecomposition {
    pub fn core(&self, v: NodeId) -> u32 {
        self.core[v as usize]
    }

    pub fn cores(&self) -> &[u32] {
        &self.core
    }

    /// The degeneracy: the largest `i` with a nonempty `i`-core.
    pub fn max_core(&self) -> u32 {
        self.max_core
    }
}

/// Linear-time core decomposition by bucket peeling: repeatedly remove a
/// node of minimum remaining degree; its core number is the largest minimum
/// seen up to its removal.
pub fn kcore_decompose(g: &Graph) -> CoreDecomposition {
    let n = g.node_count();
    if n == 0 {
        return CoreDecomposition { core: Vec::new(), max_core: 0 };
    }
    let mut degree: Vec<u32> = (0..n as NodeId).map(|v| g.degree(v) as u32).collect();
    let max_degree = degree.iter().copied().max().unwrap() as usize;

    // vert: nodes sorted by current degree; pos/bin index into it.
    let mut bin = vec![0u32; max_degree + 2];
    for &d in &degree {
        bin[d as usize + 1] += 1;
    }
    for i in 1..bin.len() {
        bin[i] += bin[i - 1];
    }
    let mut vert = vec![0 as NodeId; n];
    let mut pos = vec![0u32; n];
    {
        let mut next = bin.clone();
        for v in 0..n as NodeId {
            let d = degree[v as usize] as usize;
            pos[v as usize] = next[d];
            vert[next[d] as usize] = v;
            next[d] += 1;
        }
    }

    let mut core = vec![0u32; n];
    let mut peeled = vec![false; n];
    let mut current = 0u32;
    for idx in 0..n {
        let v = vert[idx];
        current = current.max(degree[v as usize]);
        core[v as usize] = current;
        peeled[v as usize] = true;
        for &u in g.neighbors(v) {
            if peeled[u as usize] || degree[u as usize] <= degree[v as usize] {
                continue;
            }
            // Move u one bucket down: swap it with the first node of its
            // current bucket, then shrink the bucket boundary.
            let du = degree[u as usize] as usize;
            let pu = pos[u as usize];
            let pw = bin[du];
            let w = vert[pw as usize];
            if u != w {
                vert.swap(pu as usize, pw as usize);
                pos[u as usize] = pw;
                pos[w as usize] = pu;
            }
            bin[du] += 1;
            degree[u as usize] -= 1;
        }
    }
    let max_core = core.iter().copied().max().unwrap_or(0);
    CoreDecomposition { core, max_core }
}

/// Density of the region witnessing core level `i`: nodes of core number
/// exactly `i`, with all higher-core nodes identified into one and all
/// lower-core nodes deleted. Returns `None` when no node has core number
/// `i`.
pub fn kcore_region_density(g: &Graph, cores: &CoreDecomposition, i: u32) -> Option<Ratio<u64>> {
    let mut shell_empty = true;
    let mut identify = Vec::new();
    let mut delete = Vec::new();
    for v in 0..g.node_count() as NodeId {
        let c = cores.core(v);
        if c == i {
            shell_empty = false;
        } else if c > i {
            identify.push(v);
        } else {
            delete.push(v);
        }
    }
    if shell_empty {
        return None;
    }
    identify_and_delete(g, &identify, &delete).density()
}
