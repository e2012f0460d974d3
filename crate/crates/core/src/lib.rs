//! Biased random walks on graphs: a walk engine where a controller chooses
//! each step with probability eps, controller strategies that emulate
//! weighted walks, exact reversible-chain solvers, randomized low-diameter
//! covers, and a recursive cover-exploration strategy, plus the generators
//! and corpora used to verify the bounds all of this satisfies.

pub mod bounds;
pub mod chain;
pub mod corpus;
pub mod cover;
pub mod explore;
pub mod generators;
pub mod graph;
pub mod rng;
pub mod strategies;
pub mod walk;
pub mod weights;

pub use graph::{Graph, GraphError, InducedRadius, VertexSet};
pub use strategies::{BiasStrategy, StepSource};
pub use walk::{EstimatorReport, SimOptions};
pub use weights::{weight_field, WeightedGraph};
