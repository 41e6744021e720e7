//! Band-limited real fields on the torus, stored as full complex Fourier
//! coefficient cubes with Hermitian symmetry.
//!
//! Storing the full cube (rather than a real-to-complex half plane) keeps
//! every multiplier, index permutation, and product code path uniform; the
//! factor-two memory cost is irrelevant at desk resolutions.  Reality is an
//! invariant, not an assertion: constructors symmetrize, and all provided
//! operations preserve Hermitian symmetry exactly.

use num_complex::Complex64;

use super::fft;
use super::grid::TorusGrid;

/// Real scalar field in spectral representation.
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub grid: TorusGrid,
    pub hat: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: TorusGrid) -> Self {
        ScalarField {
            grid,
            hat: vec![Complex64::default(); grid.len()],
        }
    }

    /// Transforms lattice samples; Nyquist planes are dropped.
    pub fn from_samples(grid: TorusGrid, samples: &[f64]) -> Self {
        ScalarField {
            grid,
            hat: fft::spectral_from_physical(&grid, samples),
        }
    }

    /// Evaluates a closure on every lattice point and transforms.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.len()).map(|idx| f(grid.point(idx))).collect();
        Self::from_samples(grid, &samples)
    }

    /// Builds a field from explicit modes; the conjugate partner of every
    /// entry is inserted automatically so the result is real.
    pub fn from_modes(grid: TorusGrid, modes: &[([i64; 3], Complex64)]) -> Self {
        let mut field = Self::zeros(grid);
        let b = grid.band_limit();
        for (m, c) in modes {
            assert!(
                m.iter().all(|mi| mi.abs() <= b),
                "mode {:?} outside the clean band of n = {}",
                m,
                grid.n
            );
            field.hat[grid.spectral_index(*m)] += c;
            field.hat[grid.spectral_index([-m[0], -m[1], -m[2]])] += c.conj();
        }
        field
    }

    pub fn physical(&self) -> Vec<f64> {
        fft::physical_from_spectral(&self.grid, &self.hat)
    }

    pub fn mean(&self) -> f64 {
        self.hat[0].re
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.hat {
            *c *= s;
        }
    }

    /// self += s · other (grids must match).
    pub fn add_scaled(&mut self, other: &ScalarField, s: f64) {
        assert_eq!(self.grid, other.grid, "grid mismatch in field sum");
        for (a, b) in self.hat.iter_mut().zip(&other.hat) {
            *a += s * b;
        }
    }

    /// self += s · other with a complex weight (phase factors of
    /// travelling harmonics); the result is generally non-Hermitian until
    /// the conjugate partner is added too.
    pub fn add_scaled_complex(&mut self, other: &ScalarField, s: Complex64) {
        assert_eq!(self.grid, other.grid, "grid mismatch in field sum");
        for (a, b) in self.hat.iter_mut().zip(&other.hat) {
            *a += s * b;
        }
    }

    /// Coefficients of the pointwise complex conjugate: ĝ(m) = conj f̂(−m).
    /// A fixed point of this map is a real field; travelling-harmonic
    /// envelopes use it to materialise their conjugate partners.
    pub fn conjugate_reflect(&self) -> ScalarField {
        let mut out = ScalarField::zeros(self.grid);
        for (idx, c) in self.hat.iter().enumerate() {
            let m = self.grid.mode_triple(idx);
            out.hat[self.grid.spectral_index([-m[0], -m[1], -m[2]])] = c.conj();
        }
        out
    }

    /// Re-embeds the coefficients on a different (usually larger) grid.
    /// Shrinking below the occupied band of the field is a bug, so it
    /// panics rather than silently truncating.
    pub fn regrid(&self, target: TorusGrid) -> ScalarField {
        let mut out = ScalarField::zeros(target);
        let tb = target.band_limit();
        for (idx, c) in self.hat.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let m = self.grid.mode_triple(idx);
            assert!(
                m.iter().all(|mi| mi.abs() <= tb),
                "regrid would drop occupied mode {:?} (target n = {})",
                m,
                target.n
            );
            out.hat[target.spectral_index(m)] = *c;
        }
        out
    }

    /// Largest |m|∞ carrying a nonzero coefficient.
    pub fn occupied_band(&self) -> i64 {
        let mut band = 0;
        for (idx, c) in self.hat.iter().enumerate() {
            if c.norm_sqr() > 0.0 {
                let m = self.grid.mode_triple(idx);
                band = band.max(m.iter().map(|mi| mi.abs()).max().unwrap());
            }
        }
        band
    }

    /// Fraction of spectral energy in the top octave |m|∞ > limit/2 — the
    /// under-resolution indicator (a well-resolved field decays well before
    /// the band edge).
    pub fn tail_fraction(&self) -> f64 {
        let half = self.grid.band_limit() / 2;
        let mut total = 0.0;
        let mut tail = 0.0;
        for (idx, c) in self.hat.iter().enumerate() {
            let e = c.norm_sqr();
            if e == 0.0 {
                continue;
            }
            total += e;
            let m = self.grid.mode_triple(idx);
            if m.iter().map(|mi| mi.abs()).max().unwrap() > half {
                tail += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// Largest deviation from Hermitian symmetry (diagnostic).
    pub fn reality_defect(&self) -> f64 {
        fft::hermitian_defect(&self.grid, &self.hat)
    }
}

/// Real vector field; components share one grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub comps: [ScalarField; 3],
}

impl VectorField {
    pub fn zeros(grid: TorusGrid) -> Self {
        VectorField {
            comps: std::array::from_fn(|_| ScalarField::zeros(grid)),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.comps[0].grid
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut samples: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
        for idx in 0..grid.len() {
            let v = f(grid.point(idx));
            for (axis, value) in v.into_iter().enumerate() {
                samples[axis].push(value);
            }
        }
        VectorField {
            comps: std::array::from_fn(|axis| ScalarField::from_samples(grid, &samples[axis])),
        }
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.comps {
            c.scale(s);
        }
    }

    pub fn add_scaled(&mut self, other: &VectorField, s: f64) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled(b, s);
        }
    }

    pub fn add_scaled_complex(&mut self, other: &VectorField, s: Complex64) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled_complex(b, s);
        }
    }

    /// Componentwise conjugate reflection (see [`ScalarField::conjugate_reflect`]).
    pub fn conjugate_reflect(&self) -> VectorField {
        VectorField {
            comps: std::array::from_fn(|i| self.comps[i].conjugate_reflect()),
        }
    }

    pub fn regrid(&self, target: TorusGrid) -> VectorField {
        VectorField {
            comps: std::array::from_fn(|i| self.comps[i].regrid(target)),
        }
    }

    pub fn occupied_band(&self) -> i64 {
        self.comps.iter().map(|c| c.occupied_band()).max().unwrap()
    }

    /// Per-component physical samples.
    pub fn physical(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|i| self.comps[i].physical())
    }
}

/// Symmetric 3×3 tensor field: six stored components in the order
/// (xx, xy, xz, yy, yz, zz).
#[derive(Clone, Debug)]
pub struct SymTensorField {
    pub comps: [ScalarField; 6],
}

/// Storage slot of component (k, l) of a symmetric tensor.
#[inline]
pub fn sym_index(k: usize, l: usize) -> usize {
    const MAP: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    MAP[k][l]
}

impl SymTensorField {
    pub fn zeros(grid: TorusGrid) -> Self {
        SymTensorField {
            comps: std::array::from_fn(|_| ScalarField::zeros(grid)),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.comps[0].grid
    }

    pub fn component(&self, k: usize, l: usize) -> &ScalarField {
        &self.comps[sym_index(k, l)]
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 3]) -> [f64; 6]) -> Self {
        let mut samples: [Vec<f64>; 6] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
        for idx in 0..grid.len() {
            let v = f(grid.point(idx));
            for (slot, value) in v.into_iter().enumerate() {
                samples[slot].push(value);
            }
        }
        SymTensorField {
            comps: std::array::from_fn(|slot| ScalarField::from_samples(grid, &samples[slot])),
        }
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.comps {
            c.scale(s);
        }
    }

    pub fn add_scaled(&mut self, other: &SymTensorField, s: f64) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled(b, s);
        }
    }

    pub fn add_scaled_complex(&mut self, other: &SymTensorField, s: Complex64) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled_complex(b, s);
        }
    }

    /// Componentwise conjugate reflection (see [`ScalarField::conjugate_reflect`]).
    pub fn conjugate_reflect(&self) -> SymTensorField {
        SymTensorField {
            comps: std::array::from_fn(|i| self.comps[i].conjugate_reflect()),
        }
    }

    pub fn regrid(&self, target: TorusGrid) -> SymTensorField {
        SymTensorField {
            comps: std::array::from_fn(|i| self.comps[i].regrid(target)),
        }
    }

    pub fn occupied_band(&self) -> i64 {
        self.comps.iter().map(|c| c.occupied_band()).max().unwrap()
    }

    pub fn trace(&self) -> ScalarField {
        let mut t = self.comps[sym_index(0, 0)].clone();
        t.add_scaled(&self.comps[sym_index(1, 1)], 1.0);
        t.add_scaled(&self.comps[sym_index(2, 2)], 1.0);
        t
    }

    /// Removes the pointwise trace: T ↦ T − (tr T/3)·Id.
    pub fn remove_trace(&mut self) {
        let mut third = self.trace();
        third.scale(1.0 / 3.0);
        for k in 0..3 {
            self.comps[sym_index(k, k)].add_scaled(&third, -1.0);
        }
    }

    pub fn physical(&self) -> [Vec<f64>; 6] {
        std::array::from_fn(|i| self.comps[i].physical())
    }
}
