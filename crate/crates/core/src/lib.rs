pub mod biderivation;
pub mod error;
pub mod ext;
pub mod field;
pub mod json;
pub mod parse;
pub mod random;
pub mod skew;
pub mod tmodule;
pub mod verify;

pub use error::{Error, Result};
