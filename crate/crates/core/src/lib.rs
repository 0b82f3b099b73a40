pub mod controllability;
pub mod error;
pub mod exact;
pub mod graph;
pub mod limits;
pub mod spectral;
pub mod structural;
pub mod zero_forcing;

pub use error::{Error, Result};
pub use limits::Limits;
