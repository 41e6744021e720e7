//! Smooth cutoffs used by the amplitude construction.
//!
//! `smooth_chi` regularises max(1, s): it equals 1 below 1, equals s above
//! 2, and interpolates with C² contact via the quintic smoothstep.  The
//! ratio s/χ(s) is then bounded (≈ 1.2474 at its interior maximum), which
//! is what keeps the normalised stress argument inside the positivity ball
//! of the dual coefficients.
//!
//! Switching the perturbation off at the initial time needs no extra ramp
//! here: the temporal pulse already vanishes on a window after t = 0.

/// Quintic smoothstep: 0 at 0, 1 at 1, with two vanishing derivatives at
/// both ends.
pub fn smoothstep5(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// C² regularisation of max(1, s) for s ≥ 0.
pub fn smooth_chi(s: f64) -> f64 {
    assert!(s >= 0.0, "chi argument must be nonnegative, got {s}");
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        s
    } else {
        let u = s - 1.0;
        1.0 + u * smoothstep5(u)
    }
}

/// Numerical bound for sup_{s ≥ 0} s / smooth_chi(s); the supremum sits in
/// the blending window (the tails give s/1 ≤ 2·... ≤ ratio and s/s = 1).
pub fn chi_ratio_bound() -> f64 {
    let mut worst = 1.0f64;
    let steps = 20_000;
    for i in 0..=steps {
        let s = 1.0 + i as f64 / steps as f64;
        worst = worst.max(s / smooth_chi(s));
    }
    worst
}
