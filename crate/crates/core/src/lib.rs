//! Clique-tree automata networks that solve k-parity and k-synchronisation.
//!
//! - [`network`]: configurations, sum-mod-k rules and the parallel update.
//! - [`builder`]: clique-tree plans, synchroniser variants, projection.
//! - [`engine`]: trajectories, limit cycles, convergence times.
//! - [`analysis`]: interaction digraphs, diameters, exhaustive/sampled checks.
//! - [`render`]: space-time PGM images and Graphviz text.
//! - [`io`]: network, trajectory and manifest files.
//! - [`cli`]: the `cliquenet` command line.

pub mod analysis;
pub mod builder;
pub mod cli;
pub mod engine;
pub mod error;
pub mod io;
pub mod network;
pub mod render;

pub use builder::{build_ct, extend_even, make_plan, project, to_synchroniser, CliqueTreePlan, PlanShape};
pub use engine::{convergence_time, find_limit, reference_k_parity, simulate, Classification, ConvergenceResult, Trajectory};
pub use error::{Error, Result};
pub use network::{Configuration, Dynamics, LocalRule, NetworkSpec, Symbol, TruthTableNetwork};
