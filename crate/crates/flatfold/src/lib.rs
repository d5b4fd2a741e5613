//! Std companion of `flatfold-core`: threaded and exact-rational
//! enumeration, seeded random weight draws, the small-torus verification
//! suite, CSV/JSON output and the command line.

pub mod cli;
pub mod draws;
pub mod enumeration;
pub mod output;
pub mod sweep;
pub mod verify;
