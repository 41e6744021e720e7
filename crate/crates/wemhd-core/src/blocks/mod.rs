//! Oscillatory building blocks.
//!
//! The correction added at each step is a superposition of concentrated
//! tube fields.  This module provides their ingredients:
//!
//! * periodic concentration profiles as truncated, exactly normalised
//!   Fourier series ([`Profile1d`], [`Profile2d`]),
//! * exact trigonometric time factors — the oscillation g, its compensator
//!   h with d/dt(σ⁻¹h) = g² − 1, and travelling phases ([`TrigPoly`],
//!   [`TemporalProfile`]),
//! * grid assembly of standing and travelling blocks with their potential
//!   and jet correctors, placed mode-exactly on the direction lattices
//!   ([`standing_block`], [`travelling_block`]),
//! * fine-grid measurements of the profile scaling laws
//!   ([`profile_scaling_fits`]).

pub mod assemble;
pub mod profile;
pub mod scaling;
pub mod time;

pub use assemble::{
    lattice_mode, standing_block, travelling_block, BlockSpec, HarmonicSum, StandingBlock,
    TravellingBlock,
};
pub use profile::{bump, torus_dist, Profile1d, Profile2d, ProfileMode2d};
pub use scaling::{profile_scaling_fits, scaling_rows, ScalingFit};
pub use time::{TemporalProfile, TrigPoly};
