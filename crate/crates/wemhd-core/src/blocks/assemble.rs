//! Assembly of oscillatory tube blocks on the torus grid.
//!
//! A block for direction k compresses the 2-d tube profile onto the sparse
//! lattice of period 1/(3j) transverse to k: in block coordinates
//! y_i = j·(3k_i)·(x − p) the profile's harmonic (j₁, j₂) lands on the
//! integer grid mode m = j(j₁·3k₁ + j₂·3k₂), so the whole block is placed
//! exactly, coefficient by coefficient, with the transverse shift p
//! entering as a unit phase.  The standing block W = φ_{(k)} k is
//! divergence-free with a curl–curl potential; the travelling block
//! carries the extra modulation ψ(3j k·x + Mt) whose harmonics have
//! integer temporal frequencies lM, stored separately per harmonic so the
//! time dependence stays analytic.

use num_complex::Complex64;

use std::f64::consts::PI;

use crate::geometry::{Direction, DirectionSet};
use crate::spectral::{TorusGrid, VectorField};

use super::profile::{Profile1d, Profile2d};

/// Which direction and how strongly its lattice is compressed
/// (transverse period 1/(3j), i.e. concentration ratio r = j / L at
/// fundamental wavelength L).
#[derive(Clone, Copy, Debug)]
pub struct BlockSpec {
    pub dir_index: usize,
    pub j: i64,
}

/// Σ_f e^{2πi f t} F_f(x): a vector field with finitely many integer
/// temporal harmonics.  Realness is encoded pairwise: the term at −f
/// carries the conjugate-reflected field of the term at +f.
#[derive(Clone, Debug)]
pub struct HarmonicSum {
    pub terms: Vec<(i64, VectorField)>,
}

impl HarmonicSum {
    pub fn grid(&self) -> TorusGrid {
        self.terms[0].1.grid()
    }

    /// The (real) field at time t.
    pub fn eval_slice(&self, t: f64) -> VectorField {
        let mut out = VectorField::zeros(self.grid());
        for (f, field) in &self.terms {
            let phase = 2.0 * PI * *f as f64 * t;
            out.add_scaled_complex(field, Complex64::new(phase.cos(), phase.sin()));
        }
        out
    }

    /// Exact time derivative (each harmonic gains a 2πi f factor).
    pub fn derivative(&self) -> HarmonicSum {
        let terms = self
            .terms
            .iter()
            .map(|(f, field)| {
                let mut d = VectorField::zeros(field.grid());
                d.add_scaled_complex(field, Complex64::new(0.0, 2.0 * PI * *f as f64));
                (*f, d)
            })
            .collect();
        HarmonicSum { terms }
    }

    /// Largest violation of the pairing F_{−f} = conj-reflect(F_f); zero to
    /// rounding for a real space-time field.
    pub fn conjugate_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (f, field) in &self.terms {
            let partner = self
                .terms
                .iter()
                .find(|(g, _)| *g == -*f)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(|| VectorField::zeros(field.grid()));
            let reflected = field.conjugate_reflect();
            for c in 0..3 {
                for (a, b) in partner.comps[c].hat.iter().zip(&reflected.comps[c].hat) {
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst
    }

    /// Space–time average of the sum tensored with itself, by Parseval:
    /// only harmonic pairs (f, −f) and opposite spatial modes survive the
    /// double average, so the result is Σ_f Σ_m F̂_f(m) ⊗ conj F̂_f(m) —
    /// exact quadrature, no grids involved.
    pub fn mean_outer(&self) -> [[f64; 3]; 3] {
        let mut acc = [[Complex64::default(); 3]; 3];
        for (_, field) in &self.terms {
            accumulate_outer(&mut acc, field);
        }
        realify_outer(acc)
    }
}

fn accumulate_outer(acc: &mut [[Complex64; 3]; 3], field: &VectorField) {
    let len = field.grid().len();
    for idx in 0..len {
        let f: [Complex64; 3] = std::array::from_fn(|c| field.comps[c].hat[idx]);
        if f.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        for (a, fa) in f.iter().enumerate() {
            for (b, fb) in f.iter().enumerate() {
                acc[a][b] += fa * fb.conj();
            }
        }
    }
}

fn realify_outer(acc: [[Complex64; 3]; 3]) -> [[f64; 3]; 3] {
    let scale = acc
        .iter()
        .flatten()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let worst_im = acc
        .iter()
        .flatten()
        .map(|c| c.im.abs())
        .fold(0.0f64, f64::max);
    assert!(
        worst_im <= 1e-12 * scale,
        "imaginary residue {worst_im} in a block average that must be real"
    );
    std::array::from_fn(|a| std::array::from_fn(|b| acc[a][b].re))
}

/// Standing tube block: W = φ_{(k)} k and its curl–curl potential.
#[derive(Clone, Debug)]
pub struct StandingBlock {
    pub spec: BlockSpec,
    pub k: [f64; 3],
    /// W — divergence-free, cell average of W⊗W equal to k⊗k exactly.
    pub w: VectorField,
    /// W^c = (3j)⁻² Φ_{(k)} k with ∇×∇×W^c = W exactly.
    pub w_pot: VectorField,
}

impl StandingBlock {
    /// Cell average of W ⊗ W by Parseval; equals k ⊗ k exactly because the
    /// profile is mean-square normalised.
    pub fn mean_outer(&self) -> [[f64; 3]; 3] {
        let mut acc = [[Complex64::default(); 3]; 3];
        accumulate_outer(&mut acc, &self.w);
        realify_outer(acc)
    }
}

fn shift_phase(grid_scale: i64, j1: i64, j2: i64, u: f64, v: f64) -> Complex64 {
    // Phase of the evaluation at x − p with p = u·k₁ + v·k₂: the harmonic
    // (j₁, j₂) acquires e^{−2πi · 3j(j₁u + j₂v)}.
    let frac = 3.0 * grid_scale as f64 * (j1 as f64 * u + j2 as f64 * v);
    let angle = -2.0 * PI * frac.rem_euclid(1.0);
    Complex64::new(angle.cos(), angle.sin())
}

/// Spatial mode and placement phase of the combined lattice harmonic
/// (l, j₁, j₂) of a direction's block: l counts modulation cycles along k,
/// (j₁, j₂) the transverse profile harmonic; both live on the integer grid
/// because the frame numerators are divisible by the lattice period.
/// Quadratic products of block factors (ψ², φ², ψ²φ²) land on the same
/// lattice, so this is also how the oscillation terms get placed.
pub fn lattice_mode(dir: &Direction, j: i64, l: i64, j1: i64, j2: i64) -> ([i64; 3], Complex64) {
    let m = std::array::from_fn(|c| j * (l * dir.k_num[c] + j1 * dir.k1_num[c] + j2 * dir.k2_num[c]));
    let phase = shift_phase(j, j1, j2, rat_f64(&dir.shift_u), rat_f64(&dir.shift_v));
    (m, phase)
}

fn place(
    field: &mut VectorField,
    grid: TorusGrid,
    m: [i64; 3],
    coeff: Complex64,
    axis_weights: [f64; 3],
) {
    let b = grid.band_limit();
    assert!(
        m.iter().all(|mi| mi.abs() <= b),
        "block mode {m:?} falls outside the clean band of n = {} — \
         lower the profile cap or refine the grid",
        grid.n
    );
    let idx = grid.spectral_index(m);
    for c in 0..3 {
        if axis_weights[c] != 0.0 {
            field.comps[c].hat[idx] += coeff * axis_weights[c];
        }
    }
}

pub fn standing_block(
    grid: TorusGrid,
    set: &DirectionSet,
    prof: &Profile2d,
    spec: BlockSpec,
) -> StandingBlock {
    assert!(spec.j >= 1, "lattice compression j must be ≥ 1");
    let dir = &set.dirs[spec.dir_index];
    let k = dir.k();
    let mut w = VectorField::zeros(grid);
    let mut w_pot = VectorField::zeros(grid);
    let pot_scale = 1.0 / (3.0 * spec.j as f64).powi(2);
    for mode in &prof.modes {
        let (j1, j2) = mode.j;
        let (m, phase) = lattice_mode(dir, spec.j, 0, j1, j2);
        place(&mut w, grid, m, mode.phi * phase, k);
        place(&mut w_pot, grid, m, mode.pot * phase * pot_scale, k);
    }
    StandingBlock {
        spec,
        k,
        w,
        w_pot,
    }
}

/// Travelling tube block: W = ψ(3j k·x + Mt) φ_{(k)} k plus the jet
/// corrector W̃ that restores exact divergence-freeness of W + W̃.
#[derive(Clone, Debug)]
pub struct TravellingBlock {
    pub spec: BlockSpec,
    pub k: [f64; 3],
    /// Temporal frequency of the fundamental: M cycles per unit time.
    pub m_cycles: i64,
    /// W as a harmonic sum over the modulation harmonics l (frequency lM).
    pub w: HarmonicSum,
    /// W̃ = (3j)⁻¹ ψ′_{(k)} ∇Φ_{(k)}, same harmonic layout.
    pub jet: HarmonicSum,
    /// W^c = (3j)⁻² ψ_{(k)} Φ_{(k)} k with ∇×∇×W^c = W + W̃ exactly
    /// (the modulation gradient is parallel to k, so it never enters the
    /// transverse Laplacian that converts Φ back into φ).
    pub w_pot: HarmonicSum,
}

pub fn travelling_block(
    grid: TorusGrid,
    set: &DirectionSet,
    prof: &Profile2d,
    modulation: &Profile1d,
    spec: BlockSpec,
    m_cycles: i64,
) -> TravellingBlock {
    assert!(spec.j >= 1, "lattice compression j must be ≥ 1");
    assert!(m_cycles >= 1, "temporal frequency must be ≥ 1");
    let dir = &set.dirs[spec.dir_index];
    let k = dir.k();
    let psi_dot = modulation.derivative_coeffs();
    let pot_scale = 1.0 / (3.0 * spec.j as f64).powi(2);
    let mut w_terms = Vec::new();
    let mut jet_terms = Vec::new();
    let mut pot_terms = Vec::new();
    for (pos, (l, psi_hat)) in modulation.coeffs.iter().enumerate() {
        let mut env = VectorField::zeros(grid);
        let mut jet_env = VectorField::zeros(grid);
        let mut pot_env = VectorField::zeros(grid);
        let psi_dot_hat = psi_dot[pos].1;
        assert_eq!(psi_dot[pos].0, *l);
        for mode in &prof.modes {
            let (j1, j2) = mode.j;
            let (m, phase) = lattice_mode(dir, spec.j, *l, j1, j2);
            place(&mut env, grid, m, psi_hat * mode.phi * phase, k);
            place(&mut pot_env, grid, m, psi_hat * mode.pot * phase * pot_scale, k);
            // ∇Φ_{(k)} contributes along k₁ and k₂ with 2πi j_i weights; the
            // 3j factors of ψ′ and ∇ cancel against the (3j)⁻¹ prefactor.
            let grad_coeff = psi_dot_hat * mode.pot * phase * Complex64::new(0.0, 2.0 * PI);
            let weights =
                std::array::from_fn(|c| (j1 * dir.k1_num[c] + j2 * dir.k2_num[c]) as f64 / 3.0);
            place(&mut jet_env, grid, m, grad_coeff, weights);
        }
        w_terms.push((l * m_cycles, env));
        jet_terms.push((l * m_cycles, jet_env));
        pot_terms.push((l * m_cycles, pot_env));
    }
    TravellingBlock {
        spec,
        k,
        m_cycles,
        w: HarmonicSum { terms: w_terms },
        jet: HarmonicSum { terms: jet_terms },
        w_pot: HarmonicSum { terms: pot_terms },
    }
}

fn rat_f64(r: &crate::planner::Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap()
}
