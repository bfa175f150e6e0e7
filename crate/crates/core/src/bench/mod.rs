//! Shortest paths as an application benchmark.

pub mod dijkstra;
pub mod dimacs;
pub mod report;

pub use dijkstra::{dijkstra, reference_dijkstra, DijkstraRun, OpBudget, INF};
pub use dimacs::{random_graph, DimacsError, Graph};
pub use report::{findmin_lines, RunReport, VariantRow, CSV_HEADER};
