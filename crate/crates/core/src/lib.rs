//! Exact numerical birational geometry of determinantal Calabi-Yau threefolds
//! with Picard number two: bundle pairs over Fano fourfolds, intersection
//! profiles, flops and involutions, and the chamber structure of the movable
//! cone.

pub mod birational;
pub mod chambers;
pub mod chern;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fano;
pub mod invariants;

pub use error::{Error, Result};
