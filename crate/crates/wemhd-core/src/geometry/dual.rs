//! Affine dual coefficients for the direction set.
//!
//! With P_k = k⊗k, the Gram operator S(X) = Σ_k ⟨P_k, X⟩ P_k on symmetric
//! matrices is invertible (eigenvalues 4 on multiples of the identity, 4/9
//! on traceless diagonal matrices, 64/27 on off-diagonal ones), so
//!
//! ```text
//! c_k(R) = ⟨S⁻¹ P_k, R⟩   satisfies   Σ_k c_k(R) k⊗k = R
//! ```
//!
//! exactly for every symmetric R.  The matrices S⁻¹P_k are rationals with
//! denominator 96; the one for the base direction is hard-coded and the
//! rest follow by the signed-permutation equivariance of S.  On the
//! identity every coefficient equals 1/4, and c_k stays positive on an
//! operator-norm ball around the identity whose radius is certified by
//! `certified_radius` (≈ 0.2233).

use super::direction::group_element;
use super::sym3::{self, Sym3};

/// Numerators of S⁻¹P_k for the base direction k = (1,2,2)/3, over the
/// common denominator 96: the matrix [[-5/12, 3/32, 3/32],
/// [3/32, 1/3, 3/16], [3/32, 3/16, 1/3]].
const BASE_NUM: [[i64; 3]; 3] = [[-40, 9, 9], [9, 32, 18], [9, 18, 32]];

const DENOM: f64 = 96.0;

/// The twelve dual matrices, stored in the same order as
/// `DirectionSet::standard()`.
#[derive(Clone, Debug)]
pub struct DualBasis {
    mats: Vec<Sym3>,
}

/// Conjugate an integer symmetric matrix by a signed permutation: g M gᵀ.
fn conjugate(g: &[[i64; 3]; 3], m: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut gm = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gm[i][j] = (0..3).map(|l| g[i][l] * m[l][j]).sum();
        }
    }
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|l| gm[i][l] * g[j][l]).sum();
        }
    }
    out
}

impl DualBasis {
    pub fn standard() -> DualBasis {
        let mut mats = Vec::with_capacity(12);
        for cyc in 0..3 {
            for (s1, s2) in [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)] {
                let g = group_element(cyc, s1, s2);
                let m = conjugate(&g, &BASE_NUM);
                mats.push(std::array::from_fn(|i| {
                    std::array::from_fn(|j| m[i][j] as f64 / DENOM)
                }));
            }
        }
        DualBasis { mats }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// The dual matrix S⁻¹P_k for direction index d.
    pub fn matrix(&self, d: usize) -> &Sym3 {
        &self.mats[d]
    }

    /// c_k(R) for direction index d.
    pub fn coefficient(&self, d: usize, r: &Sym3) -> f64 {
        sym3::inner(&self.mats[d], r)
    }

    /// All twelve coefficients of R.
    pub fn coefficients(&self, r: &Sym3) -> Vec<f64> {
        self.mats.iter().map(|m| sym3::inner(m, r)).collect()
    }

    /// Largest operator-norm deviation E from the identity for which the
    /// bound c_k(Id + E) ≥ 1/4 − ‖S⁻¹P_k‖_nuclear · ‖E‖_op stays positive.
    pub fn certified_radius(&self) -> f64 {
        let worst = self
            .mats
            .iter()
            .map(sym3::nuclear_norm)
            .fold(0.0f64, f64::max);
        0.25 / worst
    }
}

/// Σ_d coeffs[d] · k_d ⊗ k_d for any coefficient vector.
pub fn reconstruct(set: &super::direction::DirectionSet, coeffs: &[f64]) -> Sym3 {
    assert_eq!(coeffs.len(), set.len());
    let mut out = [[0.0; 3]; 3];
    for (d, c) in set.dirs.iter().zip(coeffs) {
        let k = d.k();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += c * k[i] * k[j];
            }
        }
    }
    out
}
