//! Command-line front end: the JSON exchange format, the command surface and
//! the `verify` runner over the shipped corpus.

pub mod commands;
pub mod format;
pub mod verify;
