// `!(x > 0.0)` style checks reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod perception;
pub mod planning;
pub mod sim;
pub mod state;
pub mod swarm;

pub use error::{Error, Result};
