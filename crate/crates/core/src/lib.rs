pub mod cfunction;
pub mod cli;
pub mod crown;
pub mod error;
pub mod fock;
pub mod quadrature;
pub mod radon;
pub mod rootsystem;
pub mod special;
pub mod spherical;
pub mod transform;

pub use error::{Error, Result};
