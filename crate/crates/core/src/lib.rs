#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod episodes;
pub mod erf;
pub mod error;
pub mod experiment;
pub mod materials;
pub mod oracle;
pub mod thermal;

pub use error::{Error, Result};
