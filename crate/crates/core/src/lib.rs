//! Abductive model generation for ID-logic theories.

pub mod cli;
pub mod cstore;
pub mod engine;
pub mod formula;
pub mod program;
pub mod syntax;
pub mod term;
pub mod transform;
pub mod types;
pub mod verifier;
