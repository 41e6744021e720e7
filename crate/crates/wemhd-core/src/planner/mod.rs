//! Exact-rational exponent bookkeeping for the iteration's concentration
//! parameters.
//!
//! Every concentration parameter is a power of the block frequency λ:
//! the tube radius r = λ^{n₁}, and per scheme variant either the temporal
//! concentration τ = λ^{n₂} (Case I) or the jet sheet width ℓ = λ^{n₂},
//! phase speed μ = λ^{n₃}, and temporal concentration τ = λ^{n₄} (Case II).
//! σ = λ^{2ε} is the slow temporal oscillation, λ_q^5 ≤ λ^{5/b} bounds the
//! inherited background size, and λ^{-bβ} is the per-step gain that drives
//! the stress ladder.  A variant closes iff a finite family of strict linear
//! inequalities among these exponents holds; the integrability thresholds of
//! the scheme (sup of γ for L^γ_t W^{1,∞}, sup of p for W^{1,p}) are suprema
//! over that polytope as the slack symbols tend to zero.
//!
//! Everything here is exact `BigRational` arithmetic — no floating point in
//! any feasibility or threshold path.  Floating point appears only in
//! [`numeric_parameters`], which rounds an abstract witness onto a concrete
//! grid and reports the rounding deltas.
//!
//! Threshold values are computed twice and must agree exactly:
//! once by the closed-form elimination that the inequality families admit
//! after the canonical substitutions, and once by a generic exact
//! Fourier–Motzkin elimination over the same zero-slack closure
//! ([`fm`]).  Disagreement is a bug and panics.

mod constraint;
mod families;
mod fm;
mod heuristic;
mod numeric;
mod threshold;

pub use constraint::{
    check_point, parse_rat, rat, rat_str, Assignment, Constraint, LinExpr, NormConstraint, Rat,
    Var, Violation,
};
pub use families::{audit_family, build_system};
pub use heuristic::{heuristic_bounds, HeuristicBounds};
pub use numeric::{numeric_parameters, DeskGrid, DeskParameters};
pub use threshold::{threshold, Objective, ThresholdResult};

/// Scheme variant selector.
///
/// Case I concentrates on straight tubes with purely temporal oscillation;
/// it targets L^γ_t W^{1,∞} and tolerates dissipation order α ∈ [1,2].
/// Case II adds travelling-jet concentration (sheet width ℓ, phase speed μ);
/// it targets L^∞_t W^{1,p} and tolerates α ∈ [1,3).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CaseId {
    CaseI,
    CaseII,
}

impl CaseId {
    /// Stable lowercase name used in reports and config files.
    pub fn name(self) -> &'static str {
        match self {
            CaseId::CaseI => "case1",
            CaseId::CaseII => "case2",
        }
    }
}

/// The full inequality system for one scheme variant at a fixed dissipation
/// order α.
///
/// `amplitude` are the stress-budget and window inequalities (affine in the
/// exponent variables); `norm` are the increment-size conditions, affine in
/// the exponents with coefficients affine in the reciprocals 1/γ and 1/p.
/// `audit` retains the un-reduced Case II family at general spatial
/// integrability weight η (here instantiated at η = 1) for cross-checking;
/// thresholds never read it.
#[derive(Clone, Debug)]
pub struct ExponentSystem {
    pub case_id: CaseId,
    /// Dissipation order; admissible range [1,2] (Case I) / [1,3) (Case II).
    pub alpha: Rat,
    /// When false the fractional-dissipation budget lines are omitted.
    pub dissipation_on: bool,
    pub amplitude: Vec<Constraint>,
    pub norm: Vec<NormConstraint>,
    pub audit: Vec<Constraint>,
}

impl ExponentSystem {
    /// Labels of every constraint in evaluation order (audit excluded).
    pub fn labels(&self) -> Vec<String> {
        self.amplitude
            .iter()
            .map(|c| c.label.clone())
            .chain(self.norm.iter().map(|c| c.label.clone()))
            .collect()
    }
}
