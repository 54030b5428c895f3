//! Graph connectivity toolkit on a round-charged simulation of the MPC model.
//!
//! The crate provides bridge finding and biconnected-component coloring built
//! from a spanning forest, subtree labels, a DFS sequence, and batched range
//! minimum queries. Every bulk step runs against a [`mpc::RoundLedger`] that
//! charges canonical round costs and audits per-machine capacity, so round and
//! space behavior can be measured without per-message emulation.

pub mod conn2;
pub mod dfs;
pub mod forest;
pub mod graph;
pub mod mpc;
pub mod oracles;
pub mod rmq;
pub mod sf;
pub mod tree;

use thiserror::Error;

/// Vertex identifier. Vertices of an n-vertex graph are `1..=n`.
pub type Vertex = u32;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid machine parameter: {0}")]
    BadConfig(String),
    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("endpoint {0} out of range 1..={1}")]
    VertexRange(Vertex, usize),
    #[error("generator '{kind}' needs n >= {min}, got {n}")]
    TooSmall {
        kind: &'static str,
        min: usize,
        n: usize,
    },
    #[error("unknown generator kind '{0}'")]
    UnknownKind(String),
    #[error("sampling failed: |S|^2 = {squared} exceeds threshold s = {s}")]
    SamplingFail { squared: u64, s: u64 },
    #[error("lca query ({0}, {1}) has equal endpoints")]
    DegenerateQuery(Vertex, Vertex),
    #[error("{1} is not an ancestor of {0}")]
    NotAncestor(Vertex, Vertex),
    #[error("skeleton is not an alternating parent/child sequence at position {0}")]
    BadSkeleton(usize),
    #[error("empty sequence")]
    EmptySequence,
    #[error("rmq query ({l}, {r}) too narrow: requires l + {t} <= r; answer it by local computation instead")]
    NarrowRange { l: usize, r: usize, t: usize },
    #[error("rmq query ({0}, {1}) out of range 1..={2}")]
    RangeBounds(usize, usize, usize),
    #[error("parent map has {0} roots, expected exactly one")]
    NotSingleRoot(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
