//! Graph storage, label interning, and edge-list ingestion.
//!
//! Graphs here are simple and undirected: self-loops and parallel edges are
//! dropped at construction time. Nodes carry dense `u32` ids assigned in
//! first-appearance order; the original string labels live in a separate
//! [`LabelMap`] so the algorithms can work on plain index ranges.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use num_rational::Ratio;

/// Dense node identifier.
pub type NodeId = u32;

/// Two-way mapping between external string labels and dense node ids.
#[derive(Debug, Clone, Default)]
pub struct LabelMap {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
}

impl LabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Map with labels `"0"`, `"1"`, ... used for generated graphs.
    pub fn numeric(n: usize) -> Self {
        let mut map = Self::new();
        for v in 0..n {
            map.intern(&v.to_string());
        }
        map
    }

    /// Returns the id for `label`, interning it if unseen. Ids are handed
    /// out consecutively, so insertion order determines the numbering.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as NodeId;
        self.labels.push(label.to_owned());
        self.ids.insert(label.to_owned(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    /// Label of `id`. Panics if the id was never assigned.
    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in id order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }
}

/// Simple undirected graph with sorted adjacency.
///
/// Each edge is stored once as a pair `(u, v)` with `u < v`; the edge list is
/// sorted, and edge ids index into it. Adjacency lists are sorted by neighbor
/// id, so membership tests are binary searches and neighbor iteration is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<NodeId>>,
    /// Edge id of the edge to `neighbors[v][i]`, parallel to `neighbors`.
    incident_edges: Vec<Vec<u32>>,
    edges: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Builds a graph over nodes `0..n` from unnormalized pairs: self-loops
    /// are dropped, duplicates (in either order) collapse to one edge.
    ///
    /// Panics if a pair references a node id `>= n`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
        let mut edges: Vec<(NodeId, NodeId)> = pairs
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        if let Some(&(_, v)) = edges.last() {
            assert!((v as usize) < n, "edge endpoint {v} out of range for {n} nodes");
        }

        let mut neighbors = vec![Vec::new(); n];
        let mut incident_edges = vec![Vec::new(); n];
        // The edge list is sorted by (u, v), so each adjacency list ends up
        // sorted as well: a node's lower neighbors arrive (in order) before
        // its higher ones.
        for (e, &(u, v)) in edges.iter().enumerate() {
            neighbors[u as usize].push(v);
            incident_edges[u as usize].push(e as u32);
            neighbors[v as usize].push(u);
            incident_edges[v as usize].push(e as u32);
        }
        Graph { neighbors, incident_edges, edges }
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list; the position of a pair is its edge id.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: u32) -> (NodeId, NodeId) {
        self.edges[e as usize]
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors[v as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Edge id of `{u, v}` if present.
    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<u32> {
        let list = &self.neighbors[u as usize];
        list.binary_search(&v)
            .ok()
            .map(|idx| self.incident_edges[u as usize][idx])
    }

    /// Incident `(neighbor, edge id)` pairs of `v`, neighbors ascending.
    pub fn incident(&self, v: NodeId) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.neighbors[v as usize]
            .iter()
            .copied()
            .zip(self.incident_edges[v as usize].iter().copied())
    }

    /// Edge-to-node ratio `m / n`, or `None` for the empty graph.
    pub fn density(&self) -> Option<Ratio<u64>> {
        if self.node_count() == 0 {
            None
        } else {
            Some(Ratio::new(self.edge_count() as u64, self.node_count() as u64))
        }
    }
}

/// Builds a graph from labeled pairs, interning labels in first-appearance
/// order. Self-loops still intern their label (the node exists, isolated).
pub fn from_edges<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, S)>) -> (Graph, LabelMap) {
    let mut labels = LabelMap::new();
    let mut id_pairs = Vec::new();
    for (a, b) in pairs {
        let u = labels.intern(a.as_ref());
        let v = labels.intern(b.as_ref());
        id_pairs.push((u, v));
    }
    (Graph::from_pairs(labels.len(), id_pairs), labels)
}

/// Options for [`parse_edgelist`].
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Lines starting with this prefix (after trimming) are skipped.
    pub comment_prefix: String,
    /// Field separator; `None` splits on any run of whitespace, which
    /// accepts both tab- and space-separated files.
    pub separator: Option<char>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { comment_prefix: "#".to_owned(), separator: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected two fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

/// Reads a whitespace- or character-separated edge list.
///
/// Blank lines and comment lines are ignored; `\r\n` endings are accepted.
/// Directed inputs are symmetrized implicitly because duplicate pairs in
/// either order collapse to a single undirected edge.
pub fn parse_edgelist<R: BufRead>(
    reader: R,
    options: &ParseOptions,
) -> Result<(Graph, LabelMap), ParseError> {
    let mut labels = LabelMap::new();
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with(&options.comment_prefix) {
            continue;
        }
        let fields: Vec<&str> = match options.separator {
            None => body.split_whitespace().collect(),
            Some(c) => body.split(c).map(str::trim).filter(|f| !f.is_empty()).collect(),
        };
        if fields.len() != 2 {
            return Err(ParseError::FieldCount { line: idx + 1, found: fields.len() });
        }
        pairs.push((labels.intern(fields[0]), labels.intern(fields[1])));
    }
    Ok((Graph::from_pairs(labels.len(), pairs), labels))
}

/// Writes one `label_u label_v` line per edge, in edge-id order.
///
/// Isolated nodes have no representation in an edge list, so they do not
/// survive a write/parse round-trip; everything else does.
pub fn write_edgelist<W: Write>(g: &Graph, labels: &LabelMap, mut w: W) -> io::Result<()> {
    for &(u, v) in g.edges() {
        writeln!(w, "{} {}", labels.label(u), labels.label(v))?;
    }
    Ok(())
}

/// Node and edge counts of the multigraph obtained by merging one node set
/// and deleting another; see [`identify_and_delete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionCounts {
    pub nodes: usize,
    pub edges: usize,
}

impl RegionCounts {
    /// Edge-to-node ratio, or `None` for the empty region.
    pub fn density(&self) -> Option<Ratio<u64>> {
        if self.nodes == 0 {
            None
        } else {
            Some(Ratio::new(self.edges as u64, self.nodes as u64))
        }
    }
}

/// Collapses `identify` into a single node and removes `delete` (with all
/// incident edges), returning the size of the resulting multigraph.
///
/// Edges inside the merged set become self-loops and disappear; edges from
/// the merged set to the rest are kept even when they become parallel. The
/// exact density bounds on decomposition rings depend on those parallel
/// edges being counted.
///
/// Panics if the two sets overlap.
pub fn identify_and_delete(g: &Graph, identify: &[NodeId], delete: &[NodeId]) -> RegionCounts {
    #[derive(Clone, Copy, PartialEq)]
    enum Role {
        Keep,
        Merge,
        Drop,
    }
    let mut role = vec![Role::Keep; g.node_count()];
    for &v in identify {
        role[v as usize] = Role::Merge;
    }
    for &v in delete {
        assert!(
            role[v as usize] != Role::Merge,
            "identify and delete sets overlap at node {v}"
        );
        role[v as usize] = Role::Drop;
    }

    let merged = identify.iter().any(|&v| role[v as usize] == Role::Merge);
    let kept = role.iter().filter(|&&r| r == Role::Keep).count();
    let nodes = kept + usize::from(merged);

    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| {
            let (ru, rv) = (role[u as usize], role[v as usize]);
            if ru == Role::Drop || rv == Role::Drop {
                return false;
            }
            !(ru == Role::Merge && rv == Role::Merge)
        })
        .count();

    RegionCounts { nodes, edges }
}
