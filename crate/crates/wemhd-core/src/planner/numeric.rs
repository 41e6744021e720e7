//! Snapping witness exponents to grid-representable desk-scale parameters.
//!
//! The asymptotic construction works at frequencies λ = 2π⌈a^{b^q}⌉ far
//! beyond anything a workstation can resolve.  At desk scale we keep every
//! structural identity exact by snapping each continuous target λ^x to the
//! nearest value the discrete torus can represent without aliasing:
//!
//! * the tube radius r becomes j/L with integer j, so block mode indices
//!   L·r·N·k are exact integer lattice points;
//! * the phase speed μ becomes M/(L·r·N) with integer M, so the travelling
//!   phase closes up over the unit time interval with exactly M cycles;
//! * the temporal oscillation and intermittency factors σ, τ become small
//!   integers with at least eight samples per oscillation on the time grid.
//!
//! Clamping is loud: every snapped value is stored exactly (as a rational)
//! next to its continuous target so reports can show the distortion, and
//! impossible requests (grids too coarse to hold a single tube) are errors
//! rather than silent degradation.

use std::f64::consts::PI;

use num::ToPrimitive;
use serde_json::{json, Value};

use super::constraint::{rat, rat_str, Assignment, Rat, Var};
use super::CaseId;

/// Discrete torus sizes: `n_space`³ spatial cells, `n_time` slices over the
/// unit period, and the padding factor used for de-aliased products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeskGrid {
    pub n_space: usize,
    pub n_time: usize,
    pub oversample: usize,
}

impl DeskGrid {
    pub fn new(n_space: usize, n_time: usize) -> Self {
        DeskGrid {
            n_space,
            n_time,
            oversample: 2,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_space < 8 || self.n_space % 2 != 0 {
            return Err(format!(
                "spatial grid must be even and at least 8, got {}",
                self.n_space
            ));
        }
        if self.n_time < 8 || self.n_time % 2 != 0 {
            return Err(format!(
                "time grid must be even and at least 8, got {}",
                self.n_time
            ));
        }
        if !(1..=4).contains(&self.oversample) {
            return Err(format!(
                "oversample factor must lie in 1..=4, got {}",
                self.oversample
            ));
        }
        Ok(())
    }
}

/// Grid-representable parameters for one perturbation step.
///
/// All rationals are exact; `*_target` fields record the continuous values
/// the snapping started from.
#[derive(Clone, Debug)]
pub struct DeskParameters {
    pub case_id: CaseId,
    pub grid: DeskGrid,
    /// λ = 2π·`lambda_cycles`; the block frequency in whole cycles.
    pub lambda_cycles: usize,
    /// Tube radius r = `r_num`/`lambda_cycles` (so L·r = `r_num` exactly).
    pub r_num: usize,
    pub r_target: f64,
    /// Sheet width ℓ ≥ 2r² in 64ths of the period (travelling case only).
    pub ell: Option<Rat>,
    pub ell_target: Option<f64>,
    /// Phase speed μ = `mu_num`/(L·r·N): the phase makes `mu_num` whole
    /// cycles per unit time (travelling case only).
    pub mu_num: Option<usize>,
    pub mu_target: Option<f64>,
    /// Temporal oscillation factor τ (whole cycles of the fast profile).
    pub tau: usize,
    pub tau_target: f64,
    /// Temporal intermittency factor σ (whole cycles of the slow gate).
    pub sigma: usize,
    pub sigma_target: f64,
    /// Amplitude scale δ = λ^(−2β) carried to the decrease report.
    pub delta_next: f64,
}

impl DeskParameters {
    pub fn lambda(&self) -> f64 {
        2.0 * PI * self.lambda_cycles as f64
    }

    /// Exact tube radius j/L.
    pub fn r(&self) -> Rat {
        rat(self.r_num as i64, self.lambda_cycles as i64)
    }

    pub fn r_f64(&self) -> f64 {
        self.r_num as f64 / self.lambda_cycles as f64
    }

    /// Exact phase speed M/(L·r·N) for direction lattice constant `n_lattice`
    /// (the smallest integer N with N·k ∈ Z³ for every direction k).
    pub fn mu(&self, n_lattice: i64) -> Option<Rat> {
        self.mu_num
            .map(|m| rat(m as i64, self.r_num as i64 * n_lattice))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case_id.name(),
            "grid": {
                "n_space": self.grid.n_space,
                "n_time": self.grid.n_time,
                "oversample": self.grid.oversample,
            },
            "lambda_cycles": self.lambda_cycles,
            "r": rat_str(&self.r()),
            "r_target": self.r_target,
            "ell": self.ell.as_ref().map(rat_str),
            "ell_target": self.ell_target,
            "mu_cycles": self.mu_num,
            "mu_target": self.mu_target,
            "tau": self.tau,
            "tau_target": self.tau_target,
            "sigma": self.sigma,
            "sigma_target": self.sigma_target,
            "delta_next": self.delta_next,
        })
    }
}

/// Snaps the witness exponents to grid-representable values.
///
/// `witness` supplies the exponents (tube radius n₁, and per case either the
/// temporal exponent n₂ or the triple n₂/n₃/n₄ for sheet width, phase speed
/// and temporal oscillation) together with the smallness symbols; targets
/// are λ raised to those exponents.  `n_lattice` is the smallest integer N
/// with N·k ∈ Z³ for every direction k; it enters the phase frequency.
pub fn numeric_parameters(
    case_id: CaseId,
    witness: &Assignment,
    grid: &DeskGrid,
    lambda_cycles: usize,
    n_lattice: usize,
) -> Result<DeskParameters, String> {
    grid.validate()?;
    if lambda_cycles < 8 {
        return Err(format!(
            "need at least 8 cycles of the block frequency to pack tubes, got {}",
            lambda_cycles
        ));
    }
    let lambda = 2.0 * PI * lambda_cycles as f64;
    let exp_of = |v: Var| -> Result<f64, String> {
        witness
            .get(&v)
            .and_then(|x| x.to_f64())
            .ok_or_else(|| format!("witness is missing exponent {}", v.name()))
    };
    let pow = |x: f64| lambda.powf(x);

    // Tube radius r = j/L, at least one cell, at most 1/8 of the period so
    // shifted tube families stay disjoint.
    let n1 = exp_of(Var::N1)?;
    let r_target = pow(n1);
    let j_max = lambda_cycles / 8;
    let j = ((lambda_cycles as f64 * r_target).round() as i64).clamp(1, j_max as i64) as usize;

    // Temporal factors: σ tracks λ^(2ε), τ tracks the temporal exponent
    // (n₂ standing, n₄ travelling); both keep ≥ 8 time samples per cycle.
    let eps = exp_of(Var::Eps)?;
    let sigma_target = pow(2.0 * eps);
    let sigma_max = (grid.n_time / 8).max(1);
    let sigma = (sigma_target.round() as i64).clamp(1, sigma_max as i64) as usize;
    let tau_exp = match case_id {
        CaseId::CaseI => exp_of(Var::N2)?,
        CaseId::CaseII => exp_of(Var::N4)?,
    };
    let tau_target = pow(tau_exp);
    let tau_max = (grid.n_time / (8 * sigma)).max(1);
    let tau = (tau_target.round() as i64).clamp(1, tau_max as i64) as usize;

    // Travelling case: sheet width ℓ (in 64ths, at least 2r² so the sheet
    // profile is wider than the tube core and at least 8 spatial cells so
    // the grid can hold it) and phase speed μ = M/(L·r·N) with a whole
    // number M of phase cycles per unit time.
    let (ell, ell_target, mu_num, mu_target) = match case_id {
        CaseId::CaseI => (None, None, None, None),
        CaseId::CaseII => {
            let n2 = exp_of(Var::N2)?;
            let ell_t = pow(n2);
            let snapped = ((64.0 * ell_t).round() as i64).clamp(1, 32); // ≤ 1/2
            let mut ell_exact = rat(snapped, 64);
            let r_exact = rat(j as i64, lambda_cycles as i64);
            let mut floor = rat(2, 1) * &r_exact * &r_exact;
            let cell_floor = rat(8, grid.n_space as i64);
            if cell_floor > floor {
                floor = cell_floor;
            }
            if ell_exact < floor {
                // Round the floor up to the 64ths lattice.
                let sixty_fourths = (&floor * rat(64, 1)).ceil().to_integer();
                let snapped_floor = sixty_fourths.to_i64().unwrap_or(33);
                if snapped_floor > 32 {
                    return Err(format!(
                        "sheet width floor {} exceeds 1/2 on a {}-cell grid",
                        rat_str(&floor),
                        grid.n_space
                    ));
                }
                ell_exact = rat(snapped_floor, 64);
            }
            let n3 = exp_of(Var::N3)?;
            let mu_t = pow(n3);
            let m_target = (j * n_lattice) as f64 * mu_t;
            let m_max = (grid.n_time / 4).max(1);
            let m = (m_target.round() as i64).clamp(1, m_max as i64) as usize;
            (Some(ell_exact), Some(ell_t), Some(m), Some(mu_t))
        }
    };

    let bbeta = exp_of(Var::BBeta)?;
    let inv_b = exp_of(Var::InvB)?;
    let delta_next = pow(-2.0 * bbeta * inv_b);

    Ok(DeskParameters {
        case_id,
        grid: *grid,
        lambda_cycles,
        r_num: j,
        r_target,
        ell,
        ell_target,
        mu_num,
        mu_target,
        tau,
        tau_target,
        sigma,
        sigma_target,
        delta_next,
    })
}
