//! File formats, image IO and the `linedraw` command-line tool built on
//! `linedraw-core`.

pub mod cli;
pub mod formats;
pub mod imageio;
pub mod manifest;
pub mod obj;
pub mod svg;
