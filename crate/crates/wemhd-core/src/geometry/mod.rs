//! Direction geometry and amplitude coefficients.
//!
//! The oscillatory correction is a sum of tube fields aligned with twelve
//! fixed rational unit directions.  This module provides
//!
//! * the direction set with exact orthonormal frames and placement shifts
//!   ([`DirectionSet`]),
//! * the affine dual coefficients c_k with Σ_k c_k(R) k⊗k = R and their
//!   positivity certificate near the identity ([`DualBasis`]),
//! * the smooth cutoff χ regularising the stress size ([`cutoff`]),
//! * the pointwise amplitudes a_k = √ρ · √c_k(Id − R̊/ρ) with the exact
//!   reconstruction Σ_k a_k² k⊗k = ρ·Id − R̊ ([`amplitude_bundle`]).

pub mod amplitude;
pub mod cutoff;
pub mod direction;
pub mod dual;
pub mod sym3;

pub use amplitude::{
    amplitude_bundle, deviation_scale, sup_frobenius, AmplitudeBundle, AmplitudeParams,
};
pub use cutoff::{chi_ratio_bound, smooth_chi, smoothstep5};
pub use direction::{Direction, DirectionSet, N_LATTICE};
pub use dual::{reconstruct, DualBasis};
