//! Corrector-field assembly for one iteration step.
//!
//! The step adds to the magnetic potential a superposition of amplitude-
//! modulated oscillatory blocks plus two correctors (temporal and, for
//! travelling blocks, transport).  This module provides:
//!
//! * a separable space–time representation Σ_i T_i(t)·S_i(t,x) with exact
//!   trigonometric time factors and slow envelopes, together with its
//!   calculus and space–time norm engine ([`Separable`], [`Slow`]),
//! * the bundle assembly for both block regimes with its structural
//!   identity checks ([`assemble_case1`], [`assemble_case2`]),
//! * measurement of the bundle component norms against their predicted
//!   parameter powers ([`measure_bundle`]).

pub mod assemble;
pub mod separable;

pub use assemble::{
    assemble_case1, assemble_case2, diagnose, measure_bundle, squared_block_envelopes,
    transport_identity_residual, write_bundle_norms, AmplitudeTrack, BundleDiagnostics,
    BundleNormRow, JetBlocks, PerturbationBundle, TubeBlocks,
};
pub use separable::{realified_pair, Envelope, Separable, Slow, Stacked};
