//! Finite-scale workbench for structural Ramsey theory: copy enumeration,
//! partition-arrow checking, degree bounds, the product-coloring reduction,
//! branch search over coherent equivalence relations, and predicate-plus-
//! order expansions with their precompactness, lower-bound, expansion-
//! property, reasonability, and rigidity checks. Everything operates on
//! explicit finite relational structures; every verdict is fragment-relative
//! and deterministic.

pub mod arrows;
pub mod canon;
pub mod catalog;
pub mod cnf;
pub mod copies;
pub mod error;
pub mod exec;
pub mod expansions;
pub mod io;
pub mod koenig;
pub mod kriz;
pub mod partition;
pub mod structure;

pub use error::{Error, Result};
