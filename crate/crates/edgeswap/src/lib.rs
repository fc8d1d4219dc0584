//! A two-stage genetic algorithm for the symmetric TSP built around an
//! edge-swapping crossover.
//!
//! The crossover merges the edge sets of two parent tours into a multigraph,
//! partitions it into rings that alternate between the parents' edges, swaps
//! a selected union of rings into the first parent, and reconnects the
//! resulting sub-loops into a single tour. Small ring selections (`Single`,
//! `Random`) keep offspring close to the first parent; large ones
//! (`KMultiple`, `Block`) explore further and drive the second search stage.
//!
//! The crate ships:
//!
//! - [`instance`]: TSPLIB parsing (`EUC_2D`/`CEIL_2D`), integer distances,
//!   k-nearest-neighbor candidate lists.
//! - [`tour`]: Hamiltonian-cycle values, lengths, validation, `.tour` files.
//! - [`local_search`]: greedy 2-opt over candidate lists with don't-look bits.
//! - [`crossover`]: the edge-swapping operator and its ring machinery.
//! - [`ga`]: population handling, the two-stage loop, and run reports.
//! - [`oracle`]: exact solvers and structural validators for testing.
//! - [`bench`]: seeded benchmark batches with CSV summaries.
//! - [`render`]: SVG drawings of tours and merged-ring overlays.
//!
//! Every capability has a runnable demo under `examples/`; the `edgeswap`
//! binary exposes `solve`, `bench`, and `render` subcommands on top of the
//! same APIs.

pub mod bench;
pub mod cli;
pub mod crossover;
pub mod ga;
pub mod instance;
pub mod local_search;
pub mod oracle;
pub mod render;
pub mod tour;

pub use crossover::{es_crossover, MergedGraph, MRing, RSet, Strategy};
pub use ga::{run, GaConfig, RunReport, StrategyKind};
pub use instance::{build_neighbor_lists, parse_tsplib, write_tsplib, EdgeWeightKind, Instance, NeighborLists};
pub use local_search::two_opt;
pub use tour::{EdgeSet, Tour};
