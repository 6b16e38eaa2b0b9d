//! Certified low-diameter strong orientations of 2-connected near
//! triangulations.
//!
//! The [`engine`] orients any 2-connected near triangulation on `n` vertices
//! so that every vertex reaches every other within `ceil(n/2)` hops, except
//! for seven small graphs where `ceil(n/2) + 1` is optimal. Every result is a
//! [`Certificate`] whose numbers are recomputed by breadth-first search.
//! The [`exact`] solver gives true oriented diameters of small graphs and
//! backs the [`census`] that rediscovers the exceptional graphs.

pub mod canon;
pub mod catalog;
pub mod census;
pub mod digraph;
pub mod engine;
pub mod exact;
pub mod formats;
pub mod generators;
pub mod outerplanar;
pub mod plane_graph;
pub mod structure;

pub use digraph::{ceil_half, Certificate, Distance, Orientation};
pub use engine::{orient, EngineConfig, EngineError};
pub use exact::{anchored_exact, oriented_diameter_exact, SearchBudget};
pub use plane_graph::{Edge, OuterSpec, PlaneGraph, Subgraph, VertexId};
