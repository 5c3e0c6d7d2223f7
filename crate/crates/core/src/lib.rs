pub mod cli;
pub mod constraints;
pub mod depmodel;
mod error;
pub mod optim;
pub mod relation;
pub mod repair;
pub mod synth;

pub use error::{Error, Result};
