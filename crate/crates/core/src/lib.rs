//! Exact combinatorics for Weyl groups of generalized Cartan matrices and
//! closure questions for contraction groups of Kac-Moody groups, together
//! with a finite-depth simulator for automorphisms of regular trees.

pub mod axis;
pub mod cartan;
pub mod config;
pub mod error;
pub mod lattice;
pub mod roots;
pub mod treesim;
pub mod weyl;

pub use cartan::{
    classify_type, coxeter_matrix, main_theorem_applicable, parse_gcm, GeneralizedCartanMatrix,
};
pub use error::{Error, Result};
pub use lattice::{Int, Sign};
pub use roots::{Root, WallRelation};
pub use weyl::{Isometry, Order, WeylElement, WeylGroup, Word};

/// Version string embedded in every certificate and report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
