//! Periodic concentration profiles for the oscillatory blocks.
//!
//! The spatial profiles are built from the standard compactly supported
//! bump: a potential bump Φ on the 2-torus whose (spectrally exact)
//! negative Laplacian is the tube profile φ = −ΔΦ, and a mean-free 1-d
//! profile ψ for the travelling modulation.  Both are stored as *truncated*
//! Fourier coefficient sets: the truncation is what makes them exactly
//! representable inside the clean band of a desk-scale grid, and every
//! structural identity downstream (divergence-freeness, curl–curl
//! potential, product means) is an identity of the truncated objects, so
//! nothing is lost by cutting the series.  Normalisation is spectral:
//! Σ|φ̂|² = Σ|ψ̂|² = 1 makes the cell averages of φ² and ψ² exactly one.

use num_complex::Complex64;
use rustfft::FftPlanner;

use std::f64::consts::PI;

/// The C^∞ bump e^{−1/(1−u²)} on (−1, 1), zero outside.
pub fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Signed distance to the nearest integer (torus coordinate in [−½, ½]).
pub fn torus_dist(y: f64) -> f64 {
    y - y.round()
}

/// Forward FFT of complex samples, scaled to Fourier coefficients.
fn fft1d(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut data = samples.to_vec();
    FftPlanner::new()
        .plan_fft_forward(n)
        .process(&mut data);
    let s = 1.0 / n as f64;
    data.iter_mut().for_each(|c| *c *= s);
    data
}

/// Row–column forward FFT on an n×n sample square (row-major), scaled.
fn fft2d(n: usize, samples: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(samples.len(), n * n);
    let mut data = samples.to_vec();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut col = vec![Complex64::default(); n];
    for j in 0..n {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = data[i * n + j];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for (i, slot) in col.iter().enumerate() {
            data[i * n + j] = *slot;
        }
    }
    let s = 1.0 / (n * n) as f64;
    data.iter_mut().for_each(|c| *c *= s);
    data
}

/// Fine-grid transforms shared with the scaling-law measurements.
pub(crate) fn fft2d_for_scaling(n: usize, samples: &[Complex64]) -> Vec<Complex64> {
    fft2d(n, samples)
}

/// Unnormalised inverse (coefficients → samples), matching the forward
/// scaling above.
pub(crate) fn ifft2d_for_scaling(n: usize, hat: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(hat.len(), n * n);
    let mut data = hat.to_vec();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut col = vec![Complex64::default(); n];
    for j in 0..n {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = data[i * n + j];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for (i, slot) in col.iter().enumerate() {
            data[i * n + j] = *slot;
        }
    }
    data
}

/// Mean-free 1-d profile, truncated to |l| ≤ cap and normalised to
/// Σ|ψ̂_l|² = 1 (unit mean square on the circle).
#[derive(Clone, Debug)]
pub struct Profile1d {
    pub width: f64,
    pub cap: i64,
    /// (l, ψ̂_l) for all kept harmonics, conjugate pairs included.
    pub coeffs: Vec<(i64, Complex64)>,
}

impl Profile1d {
    pub fn bump(width: f64, cap: i64) -> Self {
        assert!(width > 0.0 && width < 0.5, "1-d profile width {width}");
        assert!(cap >= 1);
        let n = 2048usize;
        let samples: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(bump(torus_dist(i as f64 / n as f64) / width), 0.0))
            .collect();
        let hat = fft1d(&samples);
        let mut coeffs = Vec::new();
        for l in 1..=cap {
            let c = hat[l as usize];
            let cm = hat[n - l as usize];
            // Real even input: enforce the exact Hermitian pair.
            let avg = 0.5 * (c + cm.conj());
            coeffs.push((l, avg));
            coeffs.push((-l, avg.conj()));
        }
        let norm: f64 = coeffs.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "1-d profile lost all mass in truncation");
        for (_, c) in coeffs.iter_mut() {
            *c /= norm;
        }
        coeffs.sort_by_key(|(l, _)| *l);
        Profile1d { width, cap, coeffs }
    }

    /// Σ ψ̂ e^{2πi l z} (real by conjugate pairing).
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(l, c)| {
                let phase = 2.0 * PI * *l as f64 * z;
                (c * Complex64::new(phase.cos(), phase.sin())).re
            })
            .sum()
    }

    /// Coefficients of the derivative ψ′ (2πi l multipliers).
    pub fn derivative_coeffs(&self) -> Vec<(i64, Complex64)> {
        self.coeffs
            .iter()
            .map(|(l, c)| (*l, c * Complex64::new(0.0, 2.0 * PI * *l as f64)))
            .collect()
    }

    /// Coefficients of ψ² (exact self-convolution of the truncated set);
    /// the zero harmonic equals Σ|ψ̂|² = 1.
    pub fn squared_coeffs(&self) -> Vec<(i64, Complex64)> {
        let mut acc: std::collections::BTreeMap<i64, Complex64> = Default::default();
        for (l1, c1) in &self.coeffs {
            for (l2, c2) in &self.coeffs {
                *acc.entry(l1 + l2).or_default() += c1 * c2;
            }
        }
        acc.into_iter().collect()
    }
}

/// One kept harmonic of the 2-d profile pair (φ, Φ).
#[derive(Clone, Copy, Debug)]
pub struct ProfileMode2d {
    pub j: (i64, i64),
    /// Tube profile coefficient φ̂(j) = 4π²|j|² Φ̂(j).
    pub phi: Complex64,
    /// Potential coefficient Φ̂(j).
    pub pot: Complex64,
}

/// Radial potential bump and its spectral Laplacian on the 2-torus,
/// truncated to the ℓ¹ ball |j₁| + |j₂| ≤ cap and normalised to
/// Σ|φ̂|² = 1.  The pair satisfies φ = −ΔΦ *exactly* as truncated series.
#[derive(Clone, Debug)]
pub struct Profile2d {
    pub width: f64,
    pub cap: i64,
    pub modes: Vec<ProfileMode2d>,
}

impl Profile2d {
    pub fn bump(width: f64, cap: i64) -> Self {
        assert!(width > 0.0 && width < 0.5, "2-d profile width {width}");
        assert!(cap >= 2, "need at least two harmonics for a tube profile");
        let n = 512usize;
        let samples: Vec<Complex64> = (0..n * n)
            .map(|idx| {
                let d1 = torus_dist((idx / n) as f64 / n as f64);
                let d2 = torus_dist((idx % n) as f64 / n as f64);
                Complex64::new(bump((d1 * d1 + d2 * d2).sqrt() / width), 0.0)
            })
            .collect();
        let hat = fft2d(n, &samples);
        let fetch = |j1: i64, j2: i64| {
            let i1 = j1.rem_euclid(n as i64) as usize;
            let i2 = j2.rem_euclid(n as i64) as usize;
            hat[i1 * n + i2]
        };
        let mut modes = Vec::new();
        for j1 in -cap..=cap {
            for j2 in -cap..=cap {
                if j1.abs() + j2.abs() > cap || (j1, j2) == (0, 0) {
                    continue;
                }
                // Real even input: symmetrise the conjugate pair exactly.
                let pot = 0.5 * (fetch(j1, j2) + fetch(-j1, -j2).conj());
                let q = 4.0 * PI * PI * (j1 * j1 + j2 * j2) as f64;
                modes.push(ProfileMode2d {
                    j: (j1, j2),
                    phi: q * pot,
                    pot,
                });
            }
        }
        let norm: f64 = modes.iter().map(|m| m.phi.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "2-d profile lost all mass in truncation");
        for m in modes.iter_mut() {
            m.phi /= norm;
            m.pot /= norm;
        }
        modes.sort_by_key(|m| m.j);
        Profile2d { width, cap, modes }
    }

    /// Tube profile value φ(y₁, y₂).
    pub fn eval(&self, y1: f64, y2: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let phase = 2.0 * PI * (m.j.0 as f64 * y1 + m.j.1 as f64 * y2);
                (m.phi * Complex64::new(phase.cos(), phase.sin())).re
            })
            .sum()
    }

    /// Potential value Φ(y₁, y₂).
    pub fn eval_pot(&self, y1: f64, y2: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let phase = 2.0 * PI * (m.j.0 as f64 * y1 + m.j.1 as f64 * y2);
                (m.pot * Complex64::new(phase.cos(), phase.sin())).re
            })
            .sum()
    }

    /// Mean square of the truncated tube profile (= 1 after normalisation).
    pub fn mean_square(&self) -> f64 {
        self.modes.iter().map(|m| m.phi.norm_sqr()).sum()
    }

    /// Harmonics of φ² (exact self-convolution of the truncated set,
    /// including the (0,0) harmonic, which equals the mean square 1).
    pub fn squared_modes(&self) -> Vec<((i64, i64), Complex64)> {
        let mut acc: std::collections::BTreeMap<(i64, i64), Complex64> = Default::default();
        for a in &self.modes {
            for b in &self.modes {
                *acc.entry((a.j.0 + b.j.0, a.j.1 + b.j.1)).or_default() += a.phi * b.phi;
            }
        }
        acc.into_iter().collect()
    }
}
