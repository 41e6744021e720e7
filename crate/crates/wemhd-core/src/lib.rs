//! Core library for a desk-scale convex-integration iteration for a relaxed
//! electron-MHD system on the 3-torus.
//!
//! The iteration advances a triple (A_q, B_q, R̊_q) — magnetic potential,
//! magnetic field B_q = ∇×A_q, and symmetric trace-free stress error — by
//! adding oscillatory perturbations built from concentrated pipe flows
//! ("tubes", Case I) and travelling concentrated jets (Case II), then
//! re-deriving the stress error of the corrected state.  Modules:
//!
//! * [`planner`]  — exact-rational exponent systems for the concentration
//!   parameters and the integrability thresholds they imply.
//! * [`spectral`] — periodic pseudospectral calculus: grids, fields, Fourier
//!   multipliers, alias-free products, norms, and binary/CSV reporting.
//! * [`geometry`] — rational direction set, operator-norm cutoffs, and the
//!   amplitude coefficients that cancel a given stress in mean.
//! * [`blocks`]   — profile library and the spatial/temporal oscillatory
//!   building blocks with their structural identities.
//! * [`perturbation`] — assembly of the corrector fields (principal,
//!   incompressibility, and temporal parts) for both cases.
//! * [`stress`]   — iteration state, stress re-assembly with per-term
//!   breakdown, residual and inductive checks.
//!
//! All shared types are re-exported at the crate root.

pub mod blocks;
pub mod geometry;
pub mod perturbation;
pub mod planner;
pub mod spectral;

pub use planner::{
    audit_family, build_system, check_point, heuristic_bounds, numeric_parameters, parse_rat, rat,
    rat_str, threshold, Assignment, CaseId, Constraint, DeskGrid, DeskParameters, ExponentSystem,
    HeuristicBounds, NormConstraint, Objective, Rat, ThresholdResult, Var, Violation,
};
