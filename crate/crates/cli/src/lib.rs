//! Library half of the sig3 command-line tool.
//!
//! The binary in `main.rs` is a thin clap wrapper over this crate: value
//! parsing lives in [`parse`], number and table formatting in [`output`],
//! the per-modulus verification suite in [`report`], and the subcommand
//! bodies in [`commands`].

pub mod commands;
pub mod output;
pub mod parse;
pub mod report;
