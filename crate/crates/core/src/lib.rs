//! Random walks on groups acting on hyperbolic spaces.
//!
//! Two concrete actions are provided: the free group `F₂` on its Cayley tree
//! (a 0-hyperbolic testbed where every quantity is exact) and `SL(2,Z)` on
//! the Farey graph, the curve complex of the once-punctured torus. On top of
//! them sit a coarse-geometry layer ([`hypgeom`]), a seeded sampling engine
//! ([`walk`]), estimators for tail probabilities and exponential decay
//! ([`stats`]), invariant suites ([`suite`]) and a config-driven experiment
//! runner ([`cli`]).
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod cli;
pub mod hypgeom;
pub mod models;
pub mod rng;
pub mod stats;
pub mod suite;
pub mod walk;

pub use hypgeom::{gromov_product, in_shadow, Shadow, SpaceDescriptor};
pub use models::{
    Classification, FareyElement, FareyGroup, FreeGroup, FreeWord, Model, Slope,
};
