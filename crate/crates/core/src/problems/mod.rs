//! Max-Cut / Ising problem instances.

mod enumerate;
mod graph;
mod io;

pub use enumerate::{enumerate_connected_graphs, MAX_ENUMERATION_NODES};
pub use graph::{diagonal_energies, erdos_renyi, maxcut_cost, Graph, SpinAssignment};
pub use io::{parse_edge_list, to_edge_list};
