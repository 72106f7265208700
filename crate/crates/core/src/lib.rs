//! Density calculus, rooted-graph constructions and simulation of the online
//! F-avoidance game on random graph processes.

pub mod constructions;
pub mod density;
pub mod error;
pub mod estimator;
pub mod game;
pub mod graph;
pub mod rational;
pub mod regularity;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::canon::{canonical_form, rooted_canonical_form, CanonicalLabel};
pub use graph::count::{count_copies_through_edge, count_rooted_copies, count_subgraph_copies, EmbeddingCount};
pub use graph::enumerate::{enumerate_connected_graphs, enumerate_graphs};
pub use graph::{Edge, Graph, RootedGraph, VertexMap};
pub use rational::XRational;
