//! Graph C*-algebra presentations and the maps between them.

pub mod assignment;
pub mod checks;
pub mod formal;
pub mod graph;
pub mod maps;

pub use assignment::{Algebra, Element, GenAssignment, Generator};
pub use formal::{FormalPoly, Letter};
pub use graph::{graph_gamma, graph_sigma, Graph};
pub use maps::{build_map, gauge_map, MAP_NAMES};
