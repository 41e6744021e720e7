//! Coarse order-of-magnitude bounds on the attainable integrability.
//!
//! Independent of the full tables, a single block at frequency λ with
//! temporal exponent n (time oscillation λ^n) must satisfy two crude budget
//! constraints, with `derivative_budget` = D spatial derivatives' worth of
//! smallness reserved for the slowly varying factors:
//!
//! * absorption by the dissipation:  n ≥ 4α − 7 + D,
//! * subcritical time-derivative error:  n ≤ 7 − D.
//!
//! Within a nonempty window the norm bookkeeping caps the outer temporal
//! index at γ ≤ (7−D)/(6−D) and the spatial index at p < 2(3−D)/5 for
//! α < 7/4 and p < (3−D)/(2α−1) beyond.  These are sanity ceilings: the
//! exact thresholds from [`super::threshold`] must never exceed them.

use num::{Signed, Zero};

use super::constraint::{rat, Rat};

/// Output of [`heuristic_bounds`]; `None` fields mean the budget is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicBounds {
    pub alpha: Rat,
    pub derivative_budget: Rat,
    /// Admissible temporal-exponent window `[lo, hi]`, when nonempty.
    pub n_window: Option<(Rat, Rat)>,
    /// Ceiling for the outer temporal integrability index γ.
    pub gamma_bound: Option<Rat>,
    /// Ceiling for the spatial integrability index p.
    pub p_bound: Option<Rat>,
}

/// Evaluates the coarse budget at diffusion order `alpha` with
/// `derivative_budget` derivatives reserved for slow factors.
///
/// Requires `alpha ∈ [1, 4)` and `derivative_budget ∈ [0, 6)`.
pub fn heuristic_bounds(alpha: &Rat, derivative_budget: &Rat) -> HeuristicBounds {
    assert!(
        *alpha >= rat(1, 1) && *alpha < rat(4, 1),
        "diffusion order out of range"
    );
    assert!(
        !derivative_budget.is_negative() && *derivative_budget < rat(6, 1),
        "derivative budget out of range"
    );
    let d = derivative_budget;
    let lo_raw = rat(4, 1) * alpha - rat(7, 1) + d;
    let lo = if lo_raw.is_positive() { lo_raw } else { Rat::zero() };
    let hi = rat(7, 1) - d;
    let n_window = (lo <= hi).then(|| (lo, hi.clone()));

    let gamma_bound = n_window
        .is_some()
        .then(|| (rat(7, 1) - d) / (rat(6, 1) - d));
    let p_bound = if n_window.is_some() && *d < rat(3, 1) {
        let three_minus_d = rat(3, 1) - d;
        Some(if *alpha < rat(7, 4) {
            rat(2, 1) * &three_minus_d / rat(5, 1)
        } else {
            three_minus_d / (rat(2, 1) * alpha - rat(1, 1))
        })
    } else {
        None
    };
    HeuristicBounds {
        alpha: alpha.clone(),
        derivative_budget: d.clone(),
        n_window,
        gamma_bound,
        p_bound,
    }
}
