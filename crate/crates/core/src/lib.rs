//! Oblique decision tree induction by exhaustive search over low-order
//! hyperplanes, with the axis-aligned CART and Householder (HHCART)
//! baselines, repeated cross-validation, and the statistics used to compare
//! induction algorithms.
//!
//! The crate is `no_std` with `alloc`. Enable `std` for `std::error::Error`
//! integration and `parallel` to evaluate candidate splits and
//! cross-validation folds on a rayon pool. Results are bit-identical with or
//! without `parallel` and for any pool size.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod combinations;
pub mod complexity;
pub mod criteria;
pub mod data;
mod error;
pub mod evaluation;
pub mod geometry;
pub mod induction;
mod par;

pub use criteria::{CriterionKind, PartitionCounts};
pub use data::{ClassCounts, Dataset};
pub use error::{Error, Result};
pub use geometry::{Hyperplane, Side};
pub use induction::{Algorithm, InductionConfig, Node, SplitCandidate, Tree};
