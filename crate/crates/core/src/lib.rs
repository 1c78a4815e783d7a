//! Minimum vertex cover solving with GCN-guided initial construction and a
//! container/dc-edge aware swap local search.
//!
//! - [`graph`]: compressed undirected graph
//! - [`io`]: instance readers, result files
//! - [`gcn`]: node features, normalized adjacency, forward pass
//! - [`construct`]: initial covers
//! - [`search`]: incremental search state and the solver loop
//! - [`exact`]: branch-and-bound oracle for small graphs
//! - [`bench`]: multi-seed reports, parameter sweeps, training labels

pub mod bench;
pub mod construct;
pub mod dynset;
pub mod error;
pub mod exact;
pub mod gcn;
pub mod generate;
pub mod graph;
pub mod io;
pub mod search;

pub use construct::{gcn_construct, greedy_construct, InitialCover};
pub use error::{Error, Result};
pub use exact::{exact_mvc, ExactResult};
pub use gcn::{GcnModel, ProbabilitySource};
pub use graph::{EdgeId, Graph, Vertex};
pub use io::{load_instance, write_result, Instance, InstanceFormat};
pub use search::{solve, Budget, InitMethod, SearchState, SolveConfig, SolveResult};
