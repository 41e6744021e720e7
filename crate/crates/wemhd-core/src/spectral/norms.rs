//! Lebesgue and Sobolev norms by uniform lattice quadrature.
//!
//! For band-limited integrands the uniform quadrature of |f|² is exact
//! (Parseval); for other powers it is a spectrally accurate approximation.
//! Summation order is fixed (linear index), so results are bit-identical
//! regardless of thread count — parallel callers compute per-slice values
//! independently and combine in index order.

use super::field::{ScalarField, SymTensorField, VectorField};
use super::ops;

/// Integrability index: finite p or the sup norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lp {
    P(f64),
    Inf,
}

impl Lp {
    pub fn parse(text: &str) -> Result<Lp, String> {
        if text == "inf" || text == "∞" {
            return Ok(Lp::Inf);
        }
        text.parse::<f64>()
            .map_err(|_| format!("unreadable integrability index: {text}"))
            .and_then(|p| {
                if p > 0.0 {
                    Ok(Lp::P(p))
                } else {
                    Err("integrability index must be positive".into())
                }
            })
    }
}

/// ‖·‖_p of a sample array under the uniform probability measure.
pub fn lp_of_samples(samples: &[f64], p: Lp) -> f64 {
    match p {
        Lp::Inf => samples.iter().fold(0.0f64, |m, &x| m.max(x.abs())),
        Lp::P(p) => {
            let mean: f64 =
                samples.iter().map(|&x| x.abs().powf(p)).sum::<f64>() / samples.len() as f64;
            mean.powf(1.0 / p)
        }
    }
}

/// Pointwise Euclidean magnitude of a set of component sample arrays with
/// multiplicities (used to weight stored symmetric-tensor components).
pub fn magnitude_samples(components: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    assert_eq!(components.len(), weights.len());
    let len = components[0].len();
    (0..len)
        .map(|idx| {
            components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c[idx] * c[idx])
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Frobenius weights for the six stored components (xx, xy, xz, yy, yz, zz).
pub const SYM_WEIGHTS: [f64; 6] = [1.0, 2.0, 2.0, 1.0, 2.0, 1.0];

pub fn lp_scalar(f: &ScalarField, p: Lp) -> f64 {
    lp_of_samples(&f.physical(), p)
}

pub fn lp_vector(v: &VectorField, p: Lp) -> f64 {
    let comps: Vec<Vec<f64>> = v.physical().into_iter().collect();
    lp_of_samples(&magnitude_samples(&comps, &[1.0; 3]), p)
}

pub fn lp_tensor(t: &SymTensorField, p: Lp) -> f64 {
    let comps: Vec<Vec<f64>> = t.physical().into_iter().collect();
    lp_of_samples(&magnitude_samples(&comps, &SYM_WEIGHTS), p)
}

/// ‖f‖_p + ‖∇f‖_p.
pub fn w1p_scalar(f: &ScalarField, p: Lp) -> f64 {
    lp_scalar(f, p) + lp_vector(&ops::gradient(f), p)
}

/// ‖v‖_p + ‖∇v‖_p with the full 3×3 gradient in Frobenius norm.
pub fn w1p_vector(v: &VectorField, p: Lp) -> f64 {
    let mut grads: Vec<Vec<f64>> = Vec::with_capacity(9);
    for axis in 0..3 {
        for g in ops::gradient(&v.comps[axis]).physical() {
            grads.push(g);
        }
    }
    lp_vector(v, p) + lp_of_samples(&magnitude_samples(&grads, &[1.0; 9]), p)
}

/// Outer quadrature over the unit time interval: (Σ vᵧ Δt)^{1/γ} of per-slice
/// values, or their max for γ = ∞.
pub fn outer_time_norm(slice_values: &[f64], gamma: Lp) -> f64 {
    match gamma {
        Lp::Inf => slice_values.iter().fold(0.0f64, |m, &x| m.max(x.abs())),
        Lp::P(g) => {
            let mean: f64 = slice_values.iter().map(|&x| x.abs().powf(g)).sum::<f64>()
                / slice_values.len() as f64;
            mean.powf(1.0 / g)
        }
    }
}
