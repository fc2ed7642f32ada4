//! All-topology two-fluid model for compressible two-phase flows.
//!
//! The crate covers the stiffened-gas thermodynamics ([`eos`]), state and
//! interfacial closure algebra ([`state`]), the quasilinear eigenstructure and
//! symmetrizer ([`eigen`]), Riemann invariants and jump conditions
//! ([`waves`]), a 1D path-conservative finite-volume solver ([`solver`]),
//! relaxation source terms ([`relaxation`]) and the pointwise lift-force
//! algebra ([`lift`]). [`checks`] bundles the model invariants into a property
//! suite that can be run outside of `cargo test`.
//!
//! Everything is generic over [`Real`]; the aliases below fix the scalar to
//! `f64`, which is what the CLI uses.

pub mod checks;
pub mod eigen;
pub mod eos;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod num;
pub mod relaxation;
pub mod sample;
pub mod solver;
pub mod state;
pub mod waves;

pub use error::{Branch, Error, Result};
pub use num::Real;
pub use state::{Closure, Phase};

pub type Eos = eos::EosParams<f64>;
pub type Fluids = state::EosPair<f64>;
pub type Primitive = state::MixturePrimitive<f64>;
pub type PhasePrimitive = state::PhaseState<f64>;
pub type Conserved = state::ConservedState<f64>;
pub type Grid = solver::Grid1D<f64>;
pub type Config = solver::SolverConfig<f64>;
pub type Relaxation = relaxation::RelaxationParams<f64>;

pub type Eos32 = eos::EosParams<f32>;
pub type Primitive32 = state::MixturePrimitive<f32>;
