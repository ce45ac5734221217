//! Energy minimizers for p-frame and related kernels on spheres and projective spaces.

pub mod error;
pub mod exact;
pub mod interval;
pub mod polynomial;
pub mod jacobi;
pub mod kernels;
pub mod spaces;
pub mod configurations;
pub mod energy;
pub mod hermite;
pub mod certify;
pub mod lpbound;
pub mod minimize;
pub mod tables;
pub mod cli;

pub use error::{Error, Result};
