//! Critical exponents of discrete groups acting on regular trees.
//!
//! A discrete group acting without inversion on the `(q+1)`-regular tree is
//! described, up to the choice of finite vertex groups, by its quotient
//! edge-indexed graph. This crate works directly with those graphs:
//!
//! - [`graph`]: edge-indexed graphs, their text format, and wedge merging.
//! - [`grouping`]: integral vertex orderings, i.e. whether a finite grouping exists.
//! - [`growth`]: orbit counting in the covering tree, critical exponents, and
//!   the ray construction realizing any exponent in `[0, ½ log q]`.
//! - [`zeta`]: Ihara zeta functions, non-backtracking spectra and prime cycles.
//! - [`series`]: truncated power series and generating functions of merged graphs.
//! - [`cli`]: the `critex` command-line front end.
//!
//! All counting is exact (big integers and rationals); floating point only
//! appears in reported logarithms and refined roots, each of which carries an
//! exact certificate.

pub mod cli;
pub mod error;
pub mod graph;
pub mod grouping;
pub mod growth;
pub mod poly;
pub mod series;
pub mod zeta;

pub use error::{Error, Result};
pub use graph::{merge, parse_graph, serialize_graph, EdgeId, EdgeIndexedGraph, GraphBuilder, VertexId};

/// Cap on enumeration work (search steps, constructed vertices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard(pub u64);

impl Guard {
    pub const DEFAULT: Guard = Guard(10_000_000);

    /// Reads `CRITEX_GUARD`, falling back to 10⁷.
    pub fn from_env() -> Self {
        std::env::var("CRITEX_GUARD")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Guard)
            .unwrap_or(Self::DEFAULT)
    }
}

impl Default for Guard {
    fn default() -> Self {
        Self::DEFAULT
    }
}
