//! Landmark distance oracles on weighted graphs: farthest point sampling,
//! stretch analysis, exhaustive optimal placements and the vertex cover
//! reduction gadget.

pub mod analysis;
pub mod bench;
pub mod cli;
pub mod error;
pub mod exhaustive;
pub mod generate;
pub mod graph;
pub mod mesh;
pub mod oracle;
pub mod reduction;
pub mod sampling;
pub mod shortest_path;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeStats, Graph};
pub use mesh::Mesh;
pub use oracle::Oracle;
pub use sampling::{farthest_point_sampling, SourceSet, StartPolicy};
