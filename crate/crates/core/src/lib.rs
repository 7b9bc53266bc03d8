//! Exact enumeration of double-coverings (loopless degree-constrained
//! multigraphs up to isomorphism) and exact moments of Rademacher chaos sums.
//!
//! The crate is `no_std` with `alloc`: everything here is pure computation.
//! File formats, caching, parallel drivers and the command-line front end
//! live in the companion `chaos-census` crate.
//!
//! Module map:
//!
//! - [`covering`]: set-collections, multigraphs, covering predicates, `gamma`
//! - [`canon`]: canonical codes, isomorphism, automorphism and orbit counts
//! - [`enumerate`]: unlabeled and labeled counts `mu_{l,p}` under filters
//! - [`partitions`]: the partition function and its leading asymptotics
//! - [`transforms`]: even-to-double reduction, chains, extension, standardization
//! - [`chaos`]: exact chaos moments, bound checks and Khintchine references
//! - [`random`]: seeded generators for property suites
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod chaos;
pub mod covering;
pub mod enumerate;
mod error;
pub mod math;
pub mod partitions;
pub mod random;
pub mod transforms;

pub use canon::{AutomorphismCount, CanonicalCode};
pub use chaos::ChaosCoefficients;
pub use covering::{Element, Multigraph, SetCollection};
pub use enumerate::{DegreeMode, Filter, MuKey, MuTable};
pub use error::{Error, Result};
