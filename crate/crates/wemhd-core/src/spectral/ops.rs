//! Exact Fourier-side operators: derivatives, projections, and the
//! trace-free right inverse of the divergence.
//!
//! Every operator is a mode-by-mode multiplier, so compositions commute
//! exactly and identities that hold mode-wise (e.g. div ∘ inverse_divergence
//! = identity on mean-free fields) hold on the grid to rounding accuracy.

use num_complex::Complex64;

use super::field::{sym_index, ScalarField, SymTensorField, VectorField};

/// ∇f.
pub fn gradient(f: &ScalarField) -> VectorField {
    let grid = f.grid;
    let mut out = VectorField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let c = f.hat[idx];
        for axis in 0..3 {
            out.comps[axis].hat[idx] = Complex64::new(0.0, xi[axis]) * c;
        }
    }
    out
}

/// ∇·v.
pub fn divergence(v: &VectorField) -> ScalarField {
    let grid = v.grid();
    let mut out = ScalarField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let mut acc = Complex64::default();
        for axis in 0..3 {
            acc += Complex64::new(0.0, xi[axis]) * v.comps[axis].hat[idx];
        }
        out.hat[idx] = acc;
    }
    out
}

/// Row-wise divergence of a symmetric tensor: (∇·T)ₗ = Σₖ ∂ₖ Tₖₗ.
pub fn divergence_tensor(t: &SymTensorField) -> VectorField {
    let grid = t.grid();
    let mut out = VectorField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        for l in 0..3 {
            let mut acc = Complex64::default();
            for k in 0..3 {
                acc += Complex64::new(0.0, xi[k]) * t.comps[sym_index(k, l)].hat[idx];
            }
            out.comps[l].hat[idx] = acc;
        }
    }
    out
}

/// ∇×v.
pub fn curl(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let mut out = VectorField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let [vx, vy, vz] = [
            v.comps[0].hat[idx],
            v.comps[1].hat[idx],
            v.comps[2].hat[idx],
        ];
        let i = Complex64::new(0.0, 1.0);
        out.comps[0].hat[idx] = i * (xi[1] * vz - xi[2] * vy);
        out.comps[1].hat[idx] = i * (xi[2] * vx - xi[0] * vz);
        out.comps[2].hat[idx] = i * (xi[0] * vy - xi[1] * vx);
    }
    out
}

/// ∇×∇×v.
pub fn curl_curl(v: &VectorField) -> VectorField {
    curl(&curl(v))
}

/// (−Δ)^α applied componentwise; the mean mode is annihilated.
pub fn frac_laplacian_scalar(f: &ScalarField, alpha: f64) -> ScalarField {
    let grid = f.grid;
    let mut out = ScalarField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if q > 0.0 {
            out.hat[idx] = f.hat[idx] * q.powf(alpha);
        }
    }
    out
}

/// (−Δ)^α on vectors.
pub fn frac_laplacian(v: &VectorField, alpha: f64) -> VectorField {
    VectorField {
        comps: std::array::from_fn(|i| frac_laplacian_scalar(&v.comps[i], alpha)),
    }
}

/// Δ⁻¹ on the mean-free part (the mean mode maps to zero).
pub fn inverse_laplacian_scalar(f: &ScalarField) -> ScalarField {
    let grid = f.grid;
    let mut out = ScalarField::zeros(grid);
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if q > 0.0 {
            out.hat[idx] = -f.hat[idx] / q;
        }
    }
    out
}

/// Removes the mean mode of a scalar.
pub fn project_nonzero_scalar(f: &ScalarField) -> ScalarField {
    let mut out = f.clone();
    out.hat[0] = Complex64::default();
    out
}

/// Removes the mean mode of a vector.
pub fn project_nonzero(v: &VectorField) -> VectorField {
    VectorField {
        comps: std::array::from_fn(|i| project_nonzero_scalar(&v.comps[i])),
    }
}

/// Removes the mean mode of a tensor.
pub fn project_nonzero_tensor(t: &SymTensorField) -> SymTensorField {
    SymTensorField {
        comps: std::array::from_fn(|i| project_nonzero_scalar(&t.comps[i])),
    }
}

/// Leray projection onto divergence-free fields (mean preserved).
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let mut out = v.clone();
    for idx in 1..grid.len() {
        let xi = grid.wavevector(idx);
        let q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if q == 0.0 {
            continue;
        }
        let dot = (0..3)
            .map(|a| Complex64::new(xi[a], 0.0) * v.comps[a].hat[idx])
            .sum::<Complex64>();
        for axis in 0..3 {
            out.comps[axis].hat[idx] -= xi[axis] / q * dot;
        }
    }
    out
}

/// Trace-free symmetric right inverse of the divergence: for mean-free v,
/// ∇·(inverse_divergence v) = v, and the output is symmetric with zero
/// pointwise trace.  The mean mode of v is discarded.
pub fn inverse_divergence(v: &VectorField) -> SymTensorField {
    let grid = v.grid();
    let mut out = SymTensorField::zeros(grid);
    for idx in 1..grid.len() {
        let xi = grid.wavevector(idx);
        let q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if q == 0.0 {
            continue;
        }
        let i = Complex64::new(0.0, 1.0);
        let vhat = [
            v.comps[0].hat[idx],
            v.comps[1].hat[idx],
            v.comps[2].hat[idx],
        ];
        let dot = (0..3).map(|a| xi[a] * vhat[a]).sum::<Complex64>();
        for k in 0..3 {
            for l in k..3 {
                let mut val = -i * (xi[k] * vhat[l] + xi[l] * vhat[k]) / q;
                if k == l {
                    val += i * dot / (2.0 * q);
                }
                val += i * xi[k] * xi[l] * dot / (2.0 * q * q);
                out.comps[sym_index(k, l)].hat[idx] = val;
            }
        }
    }
    out
}

/// Divergence-free vector potential: A with ∇×A equal to the solenoidal
/// part of b and ∇·A = 0 (the Biot–Savart potential ∇×(−Δ)⁻¹b).
pub fn vector_potential(b: &VectorField) -> VectorField {
    let grid = b.grid();
    let mut out = VectorField::zeros(grid);
    for idx in 1..grid.len() {
        let xi = grid.wavevector(idx);
        let q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if q == 0.0 {
            continue;
        }
        let i_over_q = Complex64::new(0.0, 1.0 / q);
        let [bx, by, bz] = [
            b.comps[0].hat[idx],
            b.comps[1].hat[idx],
            b.comps[2].hat[idx],
        ];
        out.comps[0].hat[idx] = i_over_q * (xi[1] * bz - xi[2] * by);
        out.comps[1].hat[idx] = i_over_q * (xi[2] * bx - xi[0] * bz);
        out.comps[2].hat[idx] = i_over_q * (xi[0] * by - xi[1] * bx);
    }
    out
}
