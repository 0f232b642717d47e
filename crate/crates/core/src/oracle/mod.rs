//! Brute-force ground truth for the engine. Everything here is exponential
//! or cubic and guarded by instance size.

pub mod layered;
pub mod matching;
pub mod paths;
pub mod verify;
