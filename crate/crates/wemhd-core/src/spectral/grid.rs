//! Discrete unit torus and its Fourier mode bookkeeping.
//!
//! Physical samples live at x = j/n, j ∈ {0,…,n−1}³; spectral data holds
//! Fourier coefficients f̂(m) with f(x) = Σ f̂(m) e^{2πi m·x} in standard
//! wrap-around order (axis index i maps to mode i for i ≤ n/2, i−n above).
//! The Nyquist plane |m| = n/2 is excluded from the usable band — real
//! fields cannot carry oriented information there — so every constructor
//! and product zeroes it, leaving the clean band |mᵢ| ≤ n/2 − 1.

use std::f64::consts::PI;

/// Cubic grid descriptor for one torus resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid {
    pub n: usize,
}

impl TorusGrid {
    pub fn new(n: usize) -> Self {
        assert!(n >= 4 && n % 2 == 0, "grid size must be even and ≥ 4");
        TorusGrid { n }
    }

    /// Number of stored complex coefficients (= physical samples).
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest usable mode magnitude per axis (Nyquist excluded).
    pub fn band_limit(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    /// Signed mode for a storage index along one axis.
    #[inline]
    pub fn mode_of(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Storage index for a signed mode along one axis.
    #[inline]
    pub fn index_of(&self, mode: i64) -> usize {
        let n = self.n as i64;
        ((mode % n + n) % n) as usize
    }

    /// Linear index of the coefficient for mode (m₀, m₁, m₂).
    #[inline]
    pub fn spectral_index(&self, m: [i64; 3]) -> usize {
        let (i, j, k) = (self.index_of(m[0]), self.index_of(m[1]), self.index_of(m[2]));
        (i * self.n + j) * self.n + k
    }

    /// Linear index of the physical sample at lattice point (j₀, j₁, j₂).
    #[inline]
    pub fn physical_index(&self, j: [usize; 3]) -> usize {
        (j[0] * self.n + j[1]) * self.n + j[2]
    }

    /// Decomposes a linear index into its three axis indices.
    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.n;
        let rest = idx / self.n;
        [rest / self.n, rest % self.n, k]
    }

    /// Signed mode triple for a linear spectral index.
    #[inline]
    pub fn mode_triple(&self, idx: usize) -> [i64; 3] {
        let [i, j, k] = self.unravel(idx);
        [self.mode_of(i), self.mode_of(j), self.mode_of(k)]
    }

    /// Wavevector ξ = 2πm for a linear spectral index.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let m = self.mode_triple(idx);
        [
            2.0 * PI * m[0] as f64,
            2.0 * PI * m[1] as f64,
            2.0 * PI * m[2] as f64,
        ]
    }

    /// True when the linear index touches a Nyquist plane on any axis.
    #[inline]
    pub fn on_nyquist(&self, idx: usize) -> bool {
        let half = self.n / 2;
        let [i, j, k] = self.unravel(idx);
        i == half || j == half || k == half
    }

    /// Physical lattice point x = j/n for a linear physical index.
    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.unravel(idx);
        let h = 1.0 / self.n as f64;
        [i as f64 * h, j as f64 * h, k as f64 * h]
    }
}

/// Smallest 5-smooth even size ≥ `min`, a grid the FFT handles quickly.
pub fn smooth_size(min: usize) -> usize {
    let mut n = min.max(4);
    if n % 2 == 1 {
        n += 1;
    }
    loop {
        let mut r = n;
        for p in [2usize, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 2;
    }
}

/// Smallest grid that multiplies fields of the given band limits without
/// aliasing: every product mode |m| ≤ Σ bands must stay below Nyquist.
pub fn product_grid(bands: &[i64]) -> usize {
    let total: i64 = bands.iter().sum();
    smooth_size((2 * total + 2).max(4) as usize)
}
