//! Density decompositions, ring-aware similarity metrics, and network
//! generators.
//!
//! The central object is the ring decomposition: every node of a simple
//! undirected graph receives an integer rank such that the region around
//! rank `i` (higher ranks identified into a single node, lower ranks
//! deleted) has density in the half-open window `(i-1, i]`. The
//! decomposition is computed through egalitarian edge orientations and is
//! unique regardless of the starting orientation.
//!
//! On top of it sit comparison metrics (density-distribution overlap,
//! clustering, path lengths) and generators that hit a prescribed ring-size
//! profile exactly, plus classical baselines for contrast.
//!
//! ```
//! use netdens::graph::from_edges;
//! use netdens::decompose::decompose;
//!
//! // A triangle with a pendant: the triangle sits strictly above the tail.
//! let (g, labels) = from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]);
//! let d = decompose(&g);
//! assert_eq!(d.rank(labels.id("a").unwrap()), 1);
//! assert_eq!(d.rank(labels.id("d").unwrap()), 1);
//! assert_eq!(d.k(), 1);
//! ```

pub mod decompose;
pub mod generate;
pub mod graph;
pub mod metrics;
