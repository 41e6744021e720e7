//! Exact trigonometric calculus in time.
//!
//! Every temporal factor in the construction — the oscillation pulse g,
//! its square, the compensator h, and the travelling phases e^{2πiMt} —
//! is a finite trigonometric polynomial with integer frequencies.  Keeping
//! them symbolic makes time derivatives, products, and period averages
//! exact: there is no time-grid aliasing anywhere in the structured terms,
//! and the slice grid is only a place where the polynomials get evaluated.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use std::f64::consts::PI;

/// Finite sum Σ_f c_f e^{2πi f t} with integer frequencies f (cycles per
/// unit time).  Real-valued polynomials satisfy c_{−f} = conj c_f.
#[derive(Clone, Debug, Default)]
pub struct TrigPoly {
    pub coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, Complex64::new(c, 0.0));
        TrigPoly { coeffs }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// A single complex harmonic c · e^{2πi f t}.
    pub fn harmonic(f: i64, c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(f, c);
        TrigPoly { coeffs }
    }

    /// amp · cos(2π f t) (a real pair of harmonics).
    pub fn cosine(f: i64, amp: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        let half = Complex64::new(amp / 2.0, 0.0);
        coeffs.insert(f, half);
        coeffs.insert(-f, half);
        normalize(TrigPoly { coeffs })
    }

    /// amp · sin(2π f t).
    pub fn sine(f: i64, amp: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(f, Complex64::new(0.0, -amp / 2.0));
        coeffs.insert(-f, Complex64::new(0.0, amp / 2.0));
        normalize(TrigPoly { coeffs })
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (f, c) in &other.coeffs {
            *out.coeffs.entry(*f).or_default() += c;
        }
        normalize(out)
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        normalize(out)
    }

    /// Exact product (frequency-domain convolution).
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (f1, c1) in &self.coeffs {
            for (f2, c2) in &other.coeffs {
                *out.coeffs.entry(f1 + f2).or_default() += c1 * c2;
            }
        }
        normalize(out)
    }

    /// Exact time derivative: multiply each harmonic by 2πi f.
    pub fn derivative(&self) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (f, c) in &self.coeffs {
            if *f != 0 {
                out.coeffs
                    .insert(*f, c * Complex64::new(0.0, 2.0 * PI * *f as f64));
            }
        }
        out
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::default();
        for (f, c) in &self.coeffs {
            let phase = 2.0 * PI * *f as f64 * t;
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc
    }

    /// Evaluation of a real polynomial; panics if the imaginary residue is
    /// not rounding-level (which would mean broken conjugate symmetry).
    pub fn eval_real(&self, t: f64) -> f64 {
        let v = self.eval(t);
        let scale = self.coeffs.values().map(|c| c.norm()).sum::<f64>();
        assert!(
            v.im.abs() <= 1e-12 * scale.max(1.0),
            "imaginary residue {} in a supposedly real polynomial",
            v.im
        );
        v.re
    }

    /// Values of a real polynomial at the n uniform nodes t_j = j/n, computed
    /// with one inverse FFT.  This is the workhorse for fine time quadrature;
    /// n must exceed twice the top frequency so nothing aliases.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        assert!(
            (n as i64) > 2 * self.max_abs_freq(),
            "time quadrature grid of {} nodes aliases harmonics up to {}",
            n,
            self.max_abs_freq()
        );
        let mut data = vec![Complex64::default(); n];
        for (f, c) in &self.coeffs {
            data[f.rem_euclid(n as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut data);
        let scale = self
            .coeffs
            .values()
            .map(|c| c.norm())
            .sum::<f64>()
            .max(1.0);
        let worst_im = data.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
        assert!(
            worst_im <= 1e-10 * scale,
            "imaginary residue {} on the quadrature grid of a supposedly real polynomial",
            worst_im
        );
        data.into_iter().map(|v| v.re).collect()
    }

    /// Time average over the unit period (the f = 0 coefficient).
    pub fn mean(&self) -> Complex64 {
        self.coeffs.get(&0).copied().unwrap_or_default()
    }

    /// Period average ∮ p(t) conj(q(t)) dt = Σ_f p_f conj(q_f) (Parseval).
    pub fn inner(&self, other: &TrigPoly) -> Complex64 {
        self.coeffs
            .iter()
            .filter_map(|(f, c)| other.coeffs.get(f).map(|d| c * d.conj()))
            .sum()
    }

    pub fn max_abs_freq(&self) -> i64 {
        self.coeffs.keys().map(|f| f.abs()).max().unwrap_or(0)
    }

    /// Whether c_{−f} = conj c_f for every harmonic (real-valuedness).
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(f, c)| {
            let mirror = self.coeffs.get(&-f).copied().unwrap_or_default();
            (mirror - c.conj()).norm() <= 1e-14 * c.norm().max(1.0)
        })
    }
}

fn normalize(mut p: TrigPoly) -> TrigPoly {
    p.coeffs.retain(|_, c| c.norm() > 0.0);
    p
}

/// Circle resolution used to expand the pulse into harmonics.  The narrowest
/// pulse in use (τ = 8, half-width 1/64 of the period) still covers a
/// thousand of these nodes, so the sampled spectrum is converged far below
/// the truncation threshold.
const PULSE_SAMPLES: usize = 1 << 14;

/// The pulse is sin⁸ on its support: seven continuous derivatives, so its
/// harmonics decay like f⁻⁹ and a few dozen of them already carry all but a
/// ~1e−10 fraction of the amplitude.
const PULSE_POWER: i32 = 8;

/// Relative spectral *mass* (squared amplitude) allowed in the discarded
/// tail when the sampled pulse is truncated to a finite polynomial.
const PULSE_TAIL_TARGET: f64 = 1e-20;

/// The temporal oscillation pair (g, h) at integer concentration τ and
/// oscillation σ.
///
/// g is one smooth pulse per period: the 1-periodic function equal to
/// τ^{1/2} sin⁸(2π(τt − 1/4)) for τt ∈ [1/4, 3/4] and zero otherwise,
/// re-expanded as a trigonometric polynomial, rescaled so the mean of g²
/// is exactly one, and then sped up σ-fold by the frequency substitution
/// f → σf.  Raising τ narrows the pulse like 1/τ while its height grows
/// like τ^{1/2}, which is the whole point: the norms obey the exact power
/// laws
///
/// ```text
/// ‖∂_t^M g‖_{L^γ[0,1]} = σ^M τ^{M + 1/2 − 1/γ} · ‖∂_t^M pulse‖_{L^γ}
/// ```
///
/// — mean-square one for every τ, L¹ shrinking, higher norms growing.
///
/// h is the exact antiderivative of σ(g² − 1) with h(0) = 0.  Because g²
/// has unit mean this is again a trigonometric polynomial; it drifts down
/// with slope −σ between pulses and jumps up by ≈ 1 across each, so
/// ‖h‖_{C_t} ≤ 1 − 3/(4τ) < 1 uniformly in σ.  By construction the pair
/// satisfies identically
///
/// ```text
/// d/dt (σ⁻¹ h) = g² − 1,
/// ```
///
/// the replacement identity that trades a fast-time-average error for an
/// explicit 1/σ prefactor.
///
/// Both g and h vanish (to the spectral-truncation accuracy recorded in
/// `truncation_tail`) on [0, 1/(4στ)] and on the mirror window before each
/// period end, so anything modulated by the pair shuts off smoothly at
/// slab boundaries.
#[derive(Clone, Debug)]
pub struct TemporalProfile {
    pub tau: usize,
    pub sigma: usize,
    pub g: TrigPoly,
    pub g_squared: TrigPoly,
    pub h: TrigPoly,
    /// Relative spectral mass discarded when the sampled pulse was cut to a
    /// finite polynomial (so amplitudes are faithful to ~its square root).
    pub truncation_tail: f64,
}

impl TemporalProfile {
    pub fn new(tau: usize, sigma: usize) -> Self {
        assert!(tau >= 1 && sigma >= 1, "temporal frequencies must be ≥ 1");
        let (pulse, truncation_tail) = pulse_polynomial(tau);

        // Exact mean-square normalisation: for a real polynomial the zero
        // mode of g² is Σ|c_f|², so dividing by its square root pins the
        // mean of g² at one to rounding accuracy.
        let mass: f64 = pulse.coeffs.values().map(|c| c.norm_sqr()).sum();
        let g_slow = pulse.scale(1.0 / mass.sqrt());

        // σ-fold speed-up of a 1-periodic function = dilation of its
        // frequencies; exact, no resampling.
        let mut coeffs = BTreeMap::new();
        for (f, c) in &g_slow.coeffs {
            coeffs.insert(f * sigma as i64, *c);
        }
        let g = TrigPoly { coeffs };
        let g_squared = g.mul(&g);

        // h = σ ∫₀ᵗ (g² − 1): divide each oscillating mode of g² by 2πi f
        // and choose the constant so h(0) = 0 exactly.
        let mut h = TrigPoly::zero();
        for (f, c) in &g_squared.coeffs {
            if *f != 0 {
                let divisor = Complex64::new(0.0, 2.0 * PI * *f as f64);
                h.coeffs.insert(*f, c * sigma as f64 / divisor);
            }
        }
        let at_zero: Complex64 = h.coeffs.values().sum();
        h.coeffs.insert(0, Complex64::new(-at_zero.re, 0.0));

        TemporalProfile {
            tau,
            sigma,
            g,
            g_squared,
            h,
            truncation_tail,
        }
    }

    /// Largest harmonic appearing in any derived quantity (g², h) — callers
    /// compare this against the time-slice Nyquist limit.
    pub fn max_abs_freq(&self) -> i64 {
        self.g_squared.max_abs_freq().max(self.h.max_abs_freq())
    }

    /// Residual of d/dt(σ⁻¹h) − (g² − 1); zero to rounding by construction.
    pub fn compensator_defect(&self) -> f64 {
        let lhs = self.h.derivative().scale(1.0 / self.sigma as f64);
        let rhs = self.g_squared.add(&TrigPoly::constant(-1.0));
        let diff = lhs.add(&rhs.scale(-1.0));
        diff.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Length of the dead window after t = 0 (and before each period end)
    /// on which g vanishes to truncation accuracy.
    pub fn vanish_window(&self) -> f64 {
        1.0 / (4.0 * (self.sigma * self.tau) as f64)
    }
}

/// Expand the one-pulse-per-period profile at concentration τ into a
/// trigonometric polynomial: sample it on a fine circle, FFT, and keep the
/// smallest symmetric band whose discarded tail mass is below
/// `PULSE_TAIL_TARGET`.  Returns the (unnormalised) polynomial and the
/// relative tail mass actually dropped.
fn pulse_polynomial(tau: usize) -> (TrigPoly, f64) {
    let n = PULSE_SAMPLES;
    let mut data: Vec<Complex64> = (0..n)
        .map(|j| {
            let u = tau as f64 * j as f64 / n as f64;
            let v = if (0.25..=0.75).contains(&u) {
                (tau as f64).sqrt() * (2.0 * PI * (u - 0.25)).sin().powi(PULSE_POWER)
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut data);
    let inv_n = 1.0 / n as f64;
    data.iter_mut().for_each(|c| *c *= inv_n);

    let coeff = |f: i64| data[f.rem_euclid(n as i64) as usize];
    let half = (n / 2) as i64;
    // Spectral mass collected per |f| ring (the lone unpaired Nyquist bin
    // is dropped; its mass is far below the tail target).
    let ring_mass = |f: i64| {
        if f == 0 {
            coeff(0).norm_sqr()
        } else {
            coeff(f).norm_sqr() + coeff(-f).norm_sqr()
        }
    };
    let total: f64 = (0..half).map(ring_mass).sum();
    let mut kept = 0.0;
    let mut cap = 0;
    for f in 0..half {
        kept += ring_mass(f);
        if total - kept <= PULSE_TAIL_TARGET * total {
            cap = f;
            break;
        }
    }
    assert!(
        cap > 0 && cap < half / 4,
        "pulse truncation band {} out of range for the sampling circle",
        cap
    );

    let mut coeffs = BTreeMap::new();
    let c0 = coeff(0);
    coeffs.insert(0, Complex64::new(c0.re, 0.0));
    for f in 1..=cap {
        // Hermitian-symmetrised pair: the samples are real, so this only
        // shaves off rounding noise.
        let avg = 0.5 * (coeff(f) + coeff(-f).conj());
        coeffs.insert(f, avg);
        coeffs.insert(-f, avg.conj());
    }
    let tail = (total - kept).max(0.0) / total;
    (normalize(TrigPoly { coeffs }), tail)
}
