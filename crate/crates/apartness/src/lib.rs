//! File formats, generators, the invariant battery and the command line
//! for `apartness-core`.

pub mod aut;
pub mod cli;
pub mod fixtures;
pub mod json;
pub mod minimize;
pub mod properties;
pub mod random;
pub mod selftest;
