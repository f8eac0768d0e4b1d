//! Bar k-visibility layouts and the constructions that connect them to
//! nearly planar graph classes.
//!
//! The crate provides:
//!
//! - a small graph model with planarity testing, Kuratowski certificates,
//!   biconnectivity augmentation and digraph squares ([`graph`], [`planarity`]);
//! - bar layouts and the sweep that computes strong bar k-visibility graphs
//!   ([`barlayout`]);
//! - st-orientations, dual topological numberings and visibility layouts of
//!   planar st-digraphs, including the path-aligned variant ([`stplanar`]);
//! - the pipeline from a 1-planar embedding to a weak bar 1-visibility
//!   layout ([`oneplanar`]);
//! - quasi-planar polyline drawings built from bar layouts together with a
//!   mutual-crossing detector ([`quasiplanar`]);
//! - planar k-flow networks, st-augmentation, squares, and the rotated-grid
//!   counterexample generator ([`flownet`]);
//! - exhaustive brute-force searches over small DAG spaces and edge-bound
//!   audits ([`oracle`]).
//!
//! All visibility decisions use exact rational arithmetic.

pub mod barlayout;
pub mod flownet;
pub mod geom;
pub mod graph;
pub mod oneplanar;
pub mod oracle;
pub mod planarity;
pub mod quasiplanar;
pub mod stplanar;

/// Vertex identifier. Dummy and crossing vertices get fresh ids above the
/// input range.
pub type VertexId = u32;

/// Exact coordinate type for layouts and flow-network drawings.
pub type Rational = num_rational::Ratio<i64>;

/// Undirected edge, stored with endpoints in increasing order.
pub type Edge = (VertexId, VertexId);

/// Directed arc.
pub type Arc = (VertexId, VertexId);

/// Normalizes an undirected edge.
pub fn edge(u: VertexId, v: VertexId) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not biconnected (cut vertex {0})")]
    NotBiconnected(VertexId),
    #[error("vertex {0} is not on the outer face")]
    NotOnOuterFace(VertexId),
    #[error("vertex sets differ: {0}")]
    VertexSetMismatch(String),
    #[error("paths {0} and {1} intersect: {2}")]
    IntersectingPaths(usize, usize, String),
    #[error("target too large for mode: limit {limit}, got {actual}")]
    TargetTooLarge { limit: usize, actual: usize },
    #[error("not a {k}-flow network; violating vertices {violating:?}")]
    NotKFlow { k: u32, violating: Vec<VertexId> },
    #[error("drawing is not upward planar: {0}")]
    NotUpward(String),
    #[error("degenerate overlap between curves of {0:?} and {1:?}; re-perturb parameters")]
    DegenerateOverlap(Edge, Edge),
    #[error("unsupported embedding: {0}")]
    UnsupportedEmbedding(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
