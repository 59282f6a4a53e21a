//! Rainbow ℓ-overlapping Hamilton cycles in randomly colored random
//! k-uniform hypergraphs: moment calculators, an exact and budgeted cycle
//! solver, random-model samplers and Monte Carlo threshold sweeps.

pub mod chg;
pub mod combinatorics;
pub mod cycle;
pub mod error;
pub mod exact;
pub mod lab;
pub mod models;
pub mod moments;
pub mod sdr;
pub mod solver;

pub use cycle::{
    validate_cycle, verify_certificate, ColoredEdge, ColoredHypergraph, CycleFailure, CycleSpec,
    Hamperm, RainbowCertificate,
};
pub use error::{Error, Result};
