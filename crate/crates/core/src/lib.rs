//! Sperner partition systems: exact bounds, explicit constructions, structured
//! integer programs and verification.
//!
//! A Sperner partition system is a family of partitions of an `n`-set into `k`
//! nonempty parts such that no part of one partition is a subset of a part of
//! another. Equivalently, reading part indices column by column gives a
//! (1,1̄)-detecting array.

pub mod bounds;
pub mod combinatorics;
pub mod construction;
pub mod detach;
mod error;
mod flow;
pub mod ip;
pub mod resolution;
pub mod system;
pub mod verify;

pub use combinatorics::ParamCtx;
pub use error::{Error, Result};
pub use system::PartitionSystem;
