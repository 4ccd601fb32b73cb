pub mod classify;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod partition;
pub mod popmodel;
pub mod rng;

pub use error::{Error, Result};
