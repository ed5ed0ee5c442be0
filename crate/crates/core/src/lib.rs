//! Exact and Monte Carlo tools for the Erdős–Ko–Rado property of the random
//! k-uniform hypergraph `H_k(n, p)`.

pub mod analytics;
pub mod clique;
pub mod combin;
pub mod error;
pub mod hypergraph;
pub mod kset;
pub mod montecarlo;
pub mod rng;
pub mod verifier;
pub mod witnesses;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use kset::KSet;
