//! Exact combinatorics of limit roots of line bundles on nodal curves.
//!
//! The library works with the dual graph of a nodal curve: a connected
//! multigraph whose vertices carry geometric genera and optional marking
//! multiplicities, and whose edges are the nodes.  On top of that graph it
//! computes, in exact arithmetic:
//!
//! * the stratification of the fiber of the moduli space of limit r-th
//!   roots over a fixed curve — one stratum per admissible weighted
//!   subgraph, with point counts, scheme multiplicities and automorphism
//!   orders ([`limit_root_strata`]);
//! * balanced and stably balanced multidegrees on quasistable models,
//!   the numerical backbone of the compactified Picard scheme
//!   ([`balanced_degrees`]);
//! * twister degree inventories and dimension diagnostics for the fiber
//!   of the closure of the root locus inside the compactified Picard
//!   scheme ([`picard_fiber`]).
//!
//! All counts are exact (`num-bigint`); no floating point is used anywhere.
//! Enumerations are deterministic: identical inputs produce identical
//! output, byte for byte, in the JSON reports.

pub mod balanced_degrees;
pub mod curve_graph;
pub mod error;
pub mod limit_root_strata;
pub mod mod_r_homology;
pub mod picard_fiber;
pub mod report;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Hard cap on vertex counts for subset enumerations (2^|V| loops).
pub const MAX_SUBSET_VERTICES: usize = 16;

/// Hard cap on |V| + |Δ| for balanced/twister enumeration on a model.
pub const MAX_MODEL_VERTICES: usize = 16;
