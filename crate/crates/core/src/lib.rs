//! Generalized Turán problems for odd cycles.
//!
//! Exact cycle counting, blow-up analytics, good-sequence weight
//! certificates, stability extraction, weight optimization for blow-ups of
//! cycles, and exhaustive small-graph extremal search.

pub mod blowup;
pub mod certificate;
pub mod constructions;
pub mod cycles;
pub mod error;
pub mod graph;
pub mod repro;
pub mod search;
pub mod stability;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
