//! Std companion to `census-core`: file formats, the μ cache, parallel
//! drivers, verification suites and experiment reports behind the
//! `chaos-census` binary.

pub mod cache;
pub mod dot;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod parallel;
pub mod provenance;
pub mod verify;

pub use error::{CensusError, Result};
