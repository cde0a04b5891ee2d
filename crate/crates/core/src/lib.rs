//! Decision analysis with belief functions, built around partially consonant
//! beliefs and the mixed decision rule. The usual alternative rules are
//! available for comparison.

pub mod acts;
pub mod belief;
pub mod cli;
pub mod error;
pub mod pcb;
pub mod problem;
pub mod rules;
pub mod utility;

pub use error::{Error, ErrorKind, Result};
