pub mod base;
pub mod casoratian;
pub mod error;
pub mod exact;
pub mod limits;
pub mod multi_indexed;
pub mod report;
pub mod virtual_states;

pub use error::{Error, Result};
