pub mod approximation;
pub mod circuits;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod math;
pub mod rectangles;
pub mod testsets;

pub use error::{Error, Result};
pub use math::Rational;
