//! Comparison solvers: k-shortest-paths with host selection, the exhaustive
//! simple-path optimum, and the LP model export.

pub mod exact;
pub mod hosts;
pub mod ksp;
pub mod lp;

pub use exact::{solve_exact, solve_exact_simple, DEFAULT_NODE_LIMIT};
pub use hosts::{select_hosts, HostSelection};
pub use ksp::{k_shortest_paths, solve_ksp, PathCandidate, YenPaths, DEFAULT_K};
pub use lp::export_lp;
