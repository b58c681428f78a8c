pub mod error;
pub mod goldfield;
pub mod numctx;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
