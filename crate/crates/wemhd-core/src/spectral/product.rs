//! Alias-free pointwise products.
//!
//! A product of band-limited fields is computed on a grid large enough to
//! hold every sum-of-modes without wrap-around: both operands are re-embedded
//! on that grid, multiplied at lattice points, and transformed back.  The
//! resulting coefficients are then *exact* convolution values — products in
//! this module introduce no truncation and no aliasing, only rounding.
//! Callers that want the result on a specific grid regrid it afterwards
//! (which panics on occupied-mode loss rather than truncating silently).

use num_complex::Complex64;

use super::fft;
use super::field::{sym_index, ScalarField, SymTensorField, VectorField};
use super::grid::{product_grid, TorusGrid};

/// Smallest grid that can hold the product of the given fields exactly.
pub fn joint_grid(bands: &[i64]) -> TorusGrid {
    TorusGrid::new(product_grid(bands))
}

/// Exact pointwise product of two scalars, on the automatically padded grid.
pub fn multiply(a: &ScalarField, b: &ScalarField) -> ScalarField {
    let target = joint_grid(&[a.occupied_band(), b.occupied_band()]);
    multiply_on(a, b, target)
}

/// Exact pointwise product on a caller-chosen grid; panics if that grid
/// cannot represent the product without aliasing.
pub fn multiply_on(a: &ScalarField, b: &ScalarField, target: TorusGrid) -> ScalarField {
    let need = a.occupied_band() + b.occupied_band();
    assert!(
        need <= target.band_limit(),
        "product band {} exceeds clean band of n = {}",
        need,
        target.n
    );
    let pa = a.regrid(target).physical();
    let pb = b.regrid(target).physical();
    let samples: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    ScalarField::from_samples(target, &samples)
}

/// Exact pointwise product of two fields with arbitrary complex spectra
/// (Hermitian symmetry is not assumed; travelling-harmonic envelopes use
/// this).  Same padding discipline as [`multiply`].
pub fn multiply_complex(a: &ScalarField, b: &ScalarField) -> ScalarField {
    let target = joint_grid(&[a.occupied_band(), b.occupied_band()]);
    let pa = fft::complex_physical_from_spectral(&target, &a.regrid(target).hat);
    let pb = fft::complex_physical_from_spectral(&target, &b.regrid(target).hat);
    let samples: Vec<Complex64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    ScalarField {
        grid: target,
        hat: fft::spectral_from_complex_physical(&target, &samples),
    }
}

/// Symmetric part of the outer product: (u ⊗ v + v ⊗ u)/2.
pub fn outer_sym(u: &VectorField, v: &VectorField) -> SymTensorField {
    let bands = [u.occupied_band(), v.occupied_band()];
    let target = joint_grid(&bands);
    let pu: Vec<Vec<f64>> = (0..3).map(|i| u.comps[i].regrid(target).physical()).collect();
    let pv: Vec<Vec<f64>> = (0..3).map(|i| v.comps[i].regrid(target).physical()).collect();
    let mut out = SymTensorField::zeros(target);
    for k in 0..3 {
        for l in k..3 {
            let samples: Vec<f64> = (0..target.len())
                .map(|idx| 0.5 * (pu[k][idx] * pv[l][idx] + pu[l][idx] * pv[k][idx]))
                .collect();
            out.comps[sym_index(k, l)] = ScalarField::from_samples(target, &samples);
        }
    }
    out
}

/// Pointwise dot product u · v.
pub fn dot(u: &VectorField, v: &VectorField) -> ScalarField {
    let target = joint_grid(&[u.occupied_band(), v.occupied_band()]);
    let pu: Vec<Vec<f64>> = (0..3).map(|i| u.comps[i].regrid(target).physical()).collect();
    let pv: Vec<Vec<f64>> = (0..3).map(|i| v.comps[i].regrid(target).physical()).collect();
    let samples: Vec<f64> = (0..target.len())
        .map(|idx| (0..3).map(|c| pu[c][idx] * pv[c][idx]).sum())
        .collect();
    ScalarField::from_samples(target, &samples)
}

/// Pointwise product of a scalar with every component of a vector.
pub fn scalar_times_vector(s: &ScalarField, v: &VectorField) -> VectorField {
    let target = joint_grid(&[s.occupied_band(), v.occupied_band()]);
    let ps = s.regrid(target).physical();
    let mut out = VectorField::zeros(target);
    for axis in 0..3 {
        let pv = v.comps[axis].regrid(target).physical();
        let samples: Vec<f64> = ps.iter().zip(&pv).map(|(x, y)| x * y).collect();
        out.comps[axis] = ScalarField::from_samples(target, &samples);
    }
    out
}

/// Pointwise product of a scalar with every component of a tensor.
pub fn scalar_times_tensor(s: &ScalarField, t: &SymTensorField) -> SymTensorField {
    let target = joint_grid(&[s.occupied_band(), t.occupied_band()]);
    let ps = s.regrid(target).physical();
    let mut out = SymTensorField::zeros(target);
    for slot in 0..6 {
        let pt = t.comps[slot].regrid(target).physical();
        let samples: Vec<f64> = ps.iter().zip(&pt).map(|(x, y)| x * y).collect();
        out.comps[slot] = ScalarField::from_samples(target, &samples);
    }
    out
}
