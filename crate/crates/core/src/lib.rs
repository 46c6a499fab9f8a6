//! Crepant resolutions of Slodowy slices in nilpotent orbit closures of
//! `sl_N`: partition combinatorics, slice decompositions, chamber structure,
//! and exact checks on quiver varieties.

pub mod chambers;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod partitions;
pub mod quiverlab;
pub mod slices;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::Partition;
