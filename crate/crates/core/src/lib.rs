//! Stochastic-geometry analysis of a millimeter-wave vehicle-to-infrastructure
//! highway link.
//!
//! Base stations line both sides of a straight road as a one-dimensional
//! Poisson process; each is LOS or NLOS with a distance-dependent
//! probability. A vehicle at the origin associates with the base station of
//! minimum path loss, beams are aligned at the start of every slot, and the
//! vehicle may drive out of the serving beam footprint before the slot ends.
//!
//! The crate evaluates the resulting metrics two independent ways:
//!
//! * [`analytic`]: closed-form densities and Laplace functionals evaluated
//!   with the adaptive quadrature in [`numerics`];
//! * [`simulator`]: a seeded Monte Carlo oracle that samples deployments,
//!   associates, draws fading and interferer beam gains and measures SINR.
//!
//! Everything here is `no_std` with `alloc`; file formats, CLI and the
//! parallel Monte Carlo driver live in the `mmv2x` crate.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod model;
pub mod numerics;
pub mod simulator;
pub mod units;

pub use analytic::{AnalyticError, AnalyticModel};

pub use model::{
    AntennaPattern, BeamPreset, Blockage, ConfigError, GainDistribution, LinkState, ModelError,
    PathLossModel, ScenarioConfig,
};
pub use numerics::QuadratureSpec;
