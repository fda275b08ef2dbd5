//! Exact polynomial-time solvers for kP3-free graphs.
//!
//! The pipeline has two stages. A family generator ([`family::gamma_k`] or
//! [`dist_family::lambda_k_d`]) produces polynomially many vertex sets, each
//! inducing a disjoint union of cliques, such that every maximal
//! (distance-d) independent set lies inside one of them. The solvers then
//! try every r-tuple of members and reduce each to a maximum-weight
//! bipartite matching ([`matching`]).
//!
//! Every solver has a brute-force counterpart in [`oracles`] for
//! cross-checking on small instances.

pub mod dist_family;
pub mod error;
pub mod family;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod matching;
pub mod oracles;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, InducedP3, Vertex, VertexSet};
pub use instance::{ColorList, Instance, Weight};
