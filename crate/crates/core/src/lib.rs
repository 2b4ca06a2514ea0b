pub mod basis;
pub mod error;
pub mod liouvillian;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod propagator;
pub mod speed;
pub mod unravel;
pub mod verify;

pub use error::{Error, Result};
