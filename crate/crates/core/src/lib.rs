//! Sparse-dot image encoding for neutral-atom registers.
//!
//! The pipeline reduces a raster to a handful of edge dots, places them as
//! atoms on a device plane, evolves the resulting Rydberg Hamiltonian, and
//! ranks a dot-pattern database by Chamfer distance:
//!
//! ```text
//! imaging -> generalization -> embedding -> rydberg -> evolution -> matching
//! ```
//!
//! [`store`] persists every intermediate artifact and database manifests;
//! [`cli`] wires the stages behind the `sdr` binary.

pub mod cli;
pub mod embedding;
pub mod error;
pub mod evolution;
pub mod generalization;
pub mod geometry;
pub mod imaging;
pub mod matching;
pub mod pipeline;
pub mod rydberg;
pub mod store;
pub mod synth;

pub use error::{Result, SdrError};
