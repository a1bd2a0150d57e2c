pub mod error;
pub mod matrix;
pub mod gallery;
pub mod perron;
pub mod tolerances;
pub mod lab;
pub mod semigroup;
pub mod cli;

pub use error::{Error, Result};
pub use matrix::SquareMatrix;
