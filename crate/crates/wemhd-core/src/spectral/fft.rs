//! Three-dimensional FFT on cubic grids with cached one-dimensional plans.
//!
//! Conventions: `spectral_from_physical` produces Fourier coefficients
//! (forward transform divided by n³), `physical_from_spectral` evaluates
//! Σ f̂(m) e^{2πi m·x} on the lattice (unnormalized inverse transform), so
//! the two are exact mutual inverses up to rounding.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::TorusGrid;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLAN_CACHE: Lazy<Mutex<HashMap<usize, Arc<Plans>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plans_for(n: usize) -> Arc<Plans> {
    let mut cache = PLAN_CACHE.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft(n, FftDirection::Forward),
                inverse: planner.plan_fft(n, FftDirection::Inverse),
            })
        })
        .clone()
}

/// Applies the 1-D transform along each of the three axes in place.
fn transform_axes(grid: &TorusGrid, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
    let n = grid.n;
    assert_eq!(data.len(), grid.len());
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // Axis 2 (contiguous rows).
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }

    // Axes 0 and 1: gather a strided line, transform, scatter back.
    let mut line = vec![Complex64::default(); n];
    for axis in [0usize, 1] {
        let stride = match axis {
            0 => n * n,
            _ => n,
        };
        for i in 0..n {
            for k in 0..n {
                let base = match axis {
                    0 => i * n + k,
                    _ => i * n * n + k,
                };
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, slot) in line.iter().enumerate() {
                    data[base + j * stride] = *slot;
                }
            }
        }
    }
}

/// Real samples → Fourier coefficients (Nyquist planes zeroed).
pub fn spectral_from_physical(grid: &TorusGrid, samples: &[f64]) -> Vec<Complex64> {
    assert_eq!(samples.len(), grid.len());
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let plans = plans_for(grid.n);
    transform_axes(grid, &mut data, &plans.forward);
    let scale = 1.0 / grid.len() as f64;
    for (idx, c) in data.iter_mut().enumerate() {
        if grid.on_nyquist(idx) {
            *c = Complex64::default();
        } else {
            *c *= scale;
        }
    }
    data
}

/// Complex samples → Fourier coefficients (Nyquist planes zeroed).  Used
/// for fields that are genuinely complex, e.g. the spatial envelopes of
/// travelling-wave harmonics before their conjugate partners are added.
pub fn spectral_from_complex_physical(grid: &TorusGrid, samples: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(samples.len(), grid.len());
    let mut data = samples.to_vec();
    let plans = plans_for(grid.n);
    transform_axes(grid, &mut data, &plans.forward);
    let scale = 1.0 / grid.len() as f64;
    for (idx, c) in data.iter_mut().enumerate() {
        if grid.on_nyquist(idx) {
            *c = Complex64::default();
        } else {
            *c *= scale;
        }
    }
    data
}

/// Fourier coefficients → complex lattice samples.
pub fn complex_physical_from_spectral(grid: &TorusGrid, hat: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(hat.len(), grid.len());
    let mut data = hat.to_vec();
    let plans = plans_for(grid.n);
    transform_axes(grid, &mut data, &plans.inverse);
    data
}

/// Fourier coefficients of a real field → real lattice samples.
///
/// The imaginary residue of the inverse transform is discarded; callers
/// that need to assert reality can use [`hermitian_defect`].
pub fn physical_from_spectral(grid: &TorusGrid, hat: &[Complex64]) -> Vec<f64> {
    complex_physical_from_spectral(grid, hat)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Largest violation of the Hermitian symmetry f̂(−m) = conj f̂(m).
pub fn hermitian_defect(grid: &TorusGrid, hat: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for idx in 0..hat.len() {
        let m = grid.mode_triple(idx);
        let neg = grid.spectral_index([-m[0], -m[1], -m[2]]);
        let d = (hat[idx] - hat[neg].conj()).norm();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Forces exact Hermitian symmetry by averaging paired coefficients.
pub fn hermitian_symmetrize(grid: &TorusGrid, hat: &mut [Complex64]) {
    for idx in 0..hat.len() {
        let m = grid.mode_triple(idx);
        let neg = grid.spectral_index([-m[0], -m[1], -m[2]]);
        if neg > idx {
            let avg = 0.5 * (hat[idx] + hat[neg].conj());
            hat[idx] = avg;
            hat[neg] = avg.conj();
        } else if neg == idx {
            hat[idx] = Complex64::new(hat[idx].re, 0.0);
        }
    }
}
