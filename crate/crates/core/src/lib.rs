//! Band braids, exceptional points and spectral winding numbers for
//! non-Hermitian one-dimensional Bloch Hamiltonians.
//!
//! The pipeline is: build a [`ModelSpec`], follow its complex bands around
//! the Brillouin zone with [`spectrum::track`], then read off a braid word
//! with [`braid::extract_braid_word`] and compare it with the winding number
//! from [`topology::winding_number`].

pub mod braid;
mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod matching;
pub mod models;
pub mod spectrum;
pub mod tolerance;
pub mod topology;

pub use braid::{BraidWord, Letter, Permutation, Sign};
pub use error::Error;
pub use exec::Execution;
pub use models::{DimerParams, ModelSpec, TrimerParams};
pub use spectrum::{BandTrajectory, SamplePath, TrackOptions};
