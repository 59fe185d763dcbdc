//! Command-line front end for `herglotz-core`: model and set grammars, JSON and
//! CSV formats, and one command per verification routine.

pub mod cli;
pub mod commands;
pub mod formats;
pub mod parse;

pub use parse::{parse_model, parse_set, UsageError};
