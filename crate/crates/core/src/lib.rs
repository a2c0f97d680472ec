//! Samplers for lattice-model interfaces (percolation, loop-erased random
//! walk, harmonic explorer, FK-Ising, UST Peano), conversion between curves
//! and Loewner driving functions, and empirical crossing-condition tests on
//! annuli and topological quadrilaterals.
//!
//! The crate is organized around pure, seed-deterministic kernels:
//! identical inputs produce byte-identical outputs, so ensembles can be
//! fanned out over worker pools without losing reproducibility.

pub mod conditions;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lattice;
pub(crate) mod linalg;
pub mod loewner;
pub mod models;
pub mod rng;
pub mod runner;
pub mod sle;

pub use error::{Error, Result};
pub use geometry::{Annulus, CrossingCount, Curve, Point};
pub use lattice::{DiscreteDomain, EdgeConfig, HarmonicField, LatticeKind};
pub use loewner::{CapacityReport, DrivingFunction, GeodesicField};
pub use models::{ModelSpec, ModelTag};
pub use sle::SleSpec;
