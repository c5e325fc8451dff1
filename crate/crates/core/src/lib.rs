//! Quantum-graph constructions over exact Gaussian rationals: relation
//! graphs of quantum matrices, magic unitaries, Cuntz-Krieger families and
//! Hopf-axiom checks on finite models.

pub mod ck;
pub mod cli;
pub mod config;
pub mod error;
pub mod graph;
pub mod hopf;
pub mod linalg;
pub mod magic;

pub use error::{Error, Result};
