//! Integrability thresholds of the exponent systems.
//!
//! The supremum is taken over the zero-slack closure: slack symbols
//! (ε, bβ, β, 1/b, ε₀) set to zero and inequalities relaxed to `≤` — the
//! exact limit of the strict systems as the slacks shrink.  The canonical
//! parameter choices reduce each family to a two/three-variable system that
//! admits a closed-form elimination; a generic exact Fourier–Motzkin pass
//! over rows derived mechanically from the stored tables must reproduce the
//! same value and feasibility verdict, or we panic.
//!
//! Canonical substitutions (zero-slack limits): Case I pushes the tube
//! radius to its flat limit n₁ → 0 and optimizes the temporal exponent n₂;
//! Case II fixes n₁ = −1, n₂ = −1 (tube radius and sheet width at the block
//! wavelength) and optimizes phase speed and temporal exponents (n₃, n₄)
//! jointly with 1/p at outer temporal index γ = ∞.  Strict feasibility at a
//! given α is decided by validating the canonical witness (slack 10⁻⁴,
//! shrinking near the admissibility onset) against every strict line.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use super::constraint::{check_point, rat, rat_str, Assignment, Rat, Var};
use super::fm::{feasible as fm_feasible, minimize, Row};
use super::{CaseId, ExponentSystem};

/// Which integrability index the threshold maximizes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Objective {
    /// Outer temporal index γ for L^γ_t W^{1,∞}_x (Case I).
    GammaSup,
    /// Spatial index p for W^{1,p}_x (Case II).
    PSup,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::GammaSup => "gamma_sup",
            Objective::PSup => "p_sup",
        }
    }
}

/// Exact threshold answer for one system.
#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub case_id: CaseId,
    pub alpha: Rat,
    pub dissipation_on: bool,
    pub objective: Objective,
    /// Whether the strict system (positive slacks) admits a point at this α.
    pub feasible: bool,
    /// Supremum of the objective over the zero-slack closure, when nonempty.
    pub sup_value: Option<Rat>,
    /// Strictly feasible point at slack ~10⁻⁴ witnessing the supremum up to
    /// a few slack units; validated line by line before being returned.
    pub witness: Option<Assignment>,
    /// Labels of the constraints pinning the supremum.
    pub binding: Vec<String>,
    /// Labels of a contradictory constraint subset (infeasible case).
    pub conflict: Vec<String>,
    /// Supremum of admissible α for this family (dissipation on only).
    pub onset_alpha: Option<Rat>,
    /// Constraint subset that pinches at the admissibility onset.
    pub onset_binding: Vec<String>,
}

impl ThresholdResult {
    /// Machine-readable form used by the command-line reports.
    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            let mut m = serde_json::Map::new();
            for (v, x) in w {
                m.insert(v.name().to_string(), Value::String(rat_str(x)));
            }
            Value::Object(m)
        });
        json!({
            "case": self.case_id.name(),
            "alpha": rat_str(&self.alpha),
            "dissipation": self.dissipation_on,
            "objective": self.objective.name(),
            "feasible": self.feasible,
            "sup_value": self.sup_value.as_ref().map(rat_str),
            "witness": witness,
            "binding_constraints": self.binding,
            "conflict_constraints": self.conflict,
            "onset_alpha": self.onset_alpha.as_ref().map(rat_str),
            "onset_binding": self.onset_binding,
        })
    }
}

/// Computes the integrability threshold of `system`.
pub fn threshold(system: &ExponentSystem) -> ThresholdResult {
    match system.case_id {
        CaseId::CaseI => threshold_case1(system),
        CaseId::CaseII => threshold_case2(system),
    }
}

// ---------------------------------------------------------------- Case I --

fn threshold_case1(system: &ExponentSystem) -> ThresholdResult {
    let alpha = &system.alpha;
    let two = rat(2, 1);
    // Closed form: the temporal exponent is pinched into [4α−4, 4] (lower
    // bound active only with dissipation), and the increment-norm line reads
    // 1/γ ≥ 1/2 + 1/n₂, minimized at n₂ = 4: sup γ = 4/3.
    let closure_feasible = !system.dissipation_on || *alpha <= two;
    let closed_sup = closure_feasible.then(|| rat(4, 3));

    // Generic elimination over (t, u) = (1/n₂, 1/γ).
    let rows = case1_rows(system);
    let out = minimize(rows, 2, 1);
    assert_eq!(
        out.feasible, closure_feasible,
        "threshold cross-validation failed (case1 feasibility at alpha = {})",
        alpha
    );
    if let Some(u_inf) = &out.inf {
        let fm_sup = u_inf.recip();
        assert_eq!(
            Some(&fm_sup),
            closed_sup.as_ref(),
            "threshold cross-validation failed (case1 value at alpha = {})",
            alpha
        );
        assert!(out.attained, "case1 closure supremum should be attained");
    }

    let witness = closure_feasible.then(|| case1_witness(alpha));
    let feasible = match &witness {
        Some(w) => {
            let viol = check_point(system, w);
            assert!(
                viol.is_empty(),
                "canonical case1 witness invalid at alpha = {}: {:?}",
                alpha,
                viol
            );
            true
        }
        None => false,
    };

    let (onset_alpha, onset_binding) = if system.dissipation_on {
        (Some(two), probe_conflict(system.case_id, &rat(5, 2), true))
    } else {
        (None, Vec::new())
    };
    ThresholdResult {
        case_id: system.case_id,
        alpha: alpha.clone(),
        dissipation_on: system.dissipation_on,
        objective: Objective::GammaSup,
        feasible,
        sup_value: closed_sup,
        witness: feasible.then(|| case1_witness(alpha)),
        binding: out.binding.into_iter().collect(),
        conflict: out.conflict.into_iter().collect(),
        onset_alpha,
        onset_binding,
    }
}

/// Mechanically derives the Case I closure rows over (t, u) = (1/n₂, 1/γ)
/// from the stored tables: substitute n₁ = 0 and zero slacks, then divide
/// each line by n₂ > 0 (a·n₂ + k ≤ 0 becomes k·t + a ≤ 0).
fn case1_rows(system: &ExponentSystem) -> Vec<Row> {
    let mut rows = Vec::new();
    let subst = |coeffs: &BTreeMap<Var, Rat>, constant: &Rat| -> (Rat, Rat) {
        // Returns (coefficient of n₂, constant) after the substitution.
        for v in coeffs.keys() {
            assert!(
                matches!(v, Var::N1 | Var::N2 | Var::Eps | Var::BBeta | Var::InvB | Var::Beta | Var::Eps0),
                "unexpected variable {v:?} in a case1 line"
            );
        }
        (coeffs.get(&Var::N2).cloned().unwrap_or_else(Rat::zero), constant.clone())
    };
    for c in &system.amplitude {
        if c.label.starts_with("c1.a.") {
            continue; // sign ansatz is encoded by the t > 0 domain row
        }
        let (a, k) = subst(&c.lhs.coeffs, &c.lhs.constant);
        let mut row = Row::new(2, &c.label);
        row.coeffs[0] = k; // k·t + a ≤ 0
        row.constant = a;
        row.strict = false;
        rows.push(row);
    }
    for c in &system.norm {
        let (a, k) = subst(&c.base.coeffs, &c.base.constant);
        let (au, ku) = subst(&c.with_u.coeffs, &c.with_u.constant);
        assert!(ku.is_zero(), "case1 norm line has a bare 1/γ term");
        assert!(
            c.with_s.coeffs.keys().all(|v| *v == Var::N1),
            "case1 norm line couples 1/p beyond the tube radius"
        );
        // (a·n₂ + k) + u·(au·n₂) ≤ 0  ⇒  a + k·t + au·u ≤ 0.
        let mut row = Row::new(2, &c.label);
        row.coeffs[0] = k;
        row.coeffs[1] = au;
        row.constant = a;
        row.strict = false;
        rows.push(row);
    }
    let mut domain = Row::new(2, "domain.n2");
    domain.coeffs[0] = rat(-1, 1); // t > 0, relaxed in the closure
    domain.strict = false;
    rows.push(domain);
    rows
}

fn case1_witness(alpha: &Rat) -> Assignment {
    let _ = alpha; // margins are uniform over α ∈ [1,2]
    let e = rat(1, 10_000);
    let mut w = Assignment::new();
    w.insert(Var::N1, -rat(3, 1) * &e);
    w.insert(Var::N2, rat(4, 1));
    w.insert(Var::Eps, e.clone());
    w.insert(Var::BBeta, &e / rat(4, 1));
    w.insert(Var::InvB, rat(1, 100));
    w.insert(Var::Beta, &e / rat(400, 1));
    w.insert(Var::Eps0, e.clone());
    w.insert(Var::U, rat(3, 4) + &e);
    w.insert(Var::S, Rat::zero());
    w
}

// --------------------------------------------------------------- Case II --

fn threshold_case2(system: &ExponentSystem) -> ThresholdResult {
    let alpha = &system.alpha;
    let three = rat(3, 1);
    // Closed form: with n₁ = n₂ = −1 the phase-speed exponent is pinned to
    // n₃ = n₄/2 + 5/2, both increment-norm denominators coincide there, and
    // the temporal exponent bottoms out at n₄* = max(0, 4α−7) (0 without
    // dissipation), giving sup p = 6/(5 + n₄*).  The closure empties when
    // n₄* > 5, i.e. beyond α = 3.
    let n4_star = if system.dissipation_on {
        let cand = rat(4, 1) * alpha - rat(7, 1);
        if cand.is_positive() {
            cand
        } else {
            Rat::zero()
        }
    } else {
        Rat::zero()
    };
    let closure_feasible = !system.dissipation_on || *alpha <= three;
    let closed_sup = closure_feasible.then(|| rat(6, 1) / (rat(5, 1) + &n4_star));

    let rows = case2_rows(system);
    let out = minimize(rows, 3, 2);
    assert_eq!(
        out.feasible, closure_feasible,
        "threshold cross-validation failed (case2 feasibility at alpha = {})",
        alpha
    );
    if let Some(s_inf) = &out.inf {
        let fm_sup = s_inf.recip();
        assert_eq!(
            Some(&fm_sup),
            closed_sup.as_ref(),
            "threshold cross-validation failed (case2 value at alpha = {})",
            alpha
        );
        assert!(out.attained, "case2 closure supremum should be attained");
    }

    // Strict feasibility: the witness slack must shrink near the onset.
    let witness_slack = if system.dissipation_on {
        let margin = (rat(6, 1) - rat(2, 1) * alpha) / rat(21, 1);
        if !margin.is_positive() {
            None
        } else if margin < rat(1, 10_000) {
            Some(margin)
        } else {
            Some(rat(1, 10_000))
        }
    } else {
        Some(rat(1, 10_000))
    };
    let witness = witness_slack.map(|e| case2_witness(alpha, system.dissipation_on, &e));
    let feasible = match &witness {
        Some(w) => {
            let viol = check_point(system, w);
            assert!(
                viol.is_empty(),
                "canonical case2 witness invalid at alpha = {}: {:?}",
                alpha,
                viol
            );
            true
        }
        None => false,
    };

    let (onset_alpha, onset_binding) = if system.dissipation_on {
        (Some(three), probe_conflict(system.case_id, &rat(7, 2), true))
    } else {
        (None, Vec::new())
    };
    let conflict: Vec<String> = if !feasible && out.conflict.is_empty() {
        // Exactly at the onset the closure is a degenerate pinch; certify
        // with the beyond-onset conflict set.
        onset_binding.clone()
    } else {
        out.conflict.into_iter().collect()
    };
    ThresholdResult {
        case_id: system.case_id,
        alpha: alpha.clone(),
        dissipation_on: system.dissipation_on,
        objective: Objective::PSup,
        feasible,
        sup_value: closed_sup,
        witness,
        binding: out.binding.into_iter().collect(),
        conflict,
        onset_alpha,
        onset_binding,
    }
}

/// Mechanically derives the Case II closure rows over (n₃, n₄, s): substitute
/// n₁ = −1, n₂ = −1, zero slacks, and 1/γ = 0.
fn case2_rows(system: &ExponentSystem) -> Vec<Row> {
    let minus_one = -Rat::one();
    let eval_affine = |coeffs: &BTreeMap<Var, Rat>, constant: &Rat| -> (Rat, Rat, Rat) {
        // Returns (coeff n₃, coeff n₄, constant) after the substitution.
        let mut k = constant.clone();
        let mut a3 = Rat::zero();
        let mut a4 = Rat::zero();
        for (v, c) in coeffs {
            match v {
                Var::N1 | Var::N2 => k += c * &minus_one,
                Var::N3 => a3 += c,
                Var::N4 => a4 += c,
                Var::Eps | Var::BBeta | Var::InvB | Var::Beta | Var::Eps0 => {}
                Var::U | Var::S => unreachable!("reciprocal in an amplitude line"),
            }
        }
        (a3, a4, k)
    };
    let mut rows = Vec::new();
    for c in &system.amplitude {
        if c.label.starts_with("c2.a.") {
            continue; // sign ansatz holds identically at n₁ = n₂ = −1
        }
        let (a3, a4, k) = eval_affine(&c.lhs.coeffs, &c.lhs.constant);
        let mut row = Row::new(3, &c.label);
        row.coeffs[0] = a3;
        row.coeffs[1] = a4;
        row.constant = k;
        row.strict = false;
        rows.push(row);
    }
    for c in &system.norm {
        let (a3, a4, k) = eval_affine(&c.base.coeffs, &c.base.constant);
        // γ = ∞ here: the whole 1/γ part of the line drops.
        let _ = eval_affine(&c.with_u.coeffs, &c.with_u.constant);
        let (s3, s4, sk) = eval_affine(&c.with_s.coeffs, &c.with_s.constant);
        assert!(s3.is_zero() && s4.is_zero(), "1/p couples beyond r and ℓ");
        let mut row = Row::new(3, &c.label);
        row.coeffs[0] = a3;
        row.coeffs[1] = a4;
        row.coeffs[2] = sk; // coefficient of s = 1/p
        row.constant = k;
        row.strict = false;
        rows.push(row);
    }
    rows
}

fn case2_witness(alpha: &Rat, dissipation_on: bool, e: &Rat) -> Assignment {
    let seven_quarters = rat(7, 4);
    let steep = dissipation_on && *alpha > seven_quarters;
    let (n3_base, n4_base) = if steep {
        (rat(2, 1) * alpha - rat(1, 1), rat(4, 1) * alpha - rat(7, 1))
    } else {
        (rat(5, 2), Rat::zero())
    };
    let s = (rat(5, 1) + &n4_base) / rat(6, 1) + rat(5, 1) * e;
    let mut w = Assignment::new();
    w.insert(Var::N1, -Rat::one() + rat(2, 1) * e);
    w.insert(Var::N2, -Rat::one() + rat(4, 1) * e);
    w.insert(Var::N3, n3_base + rat(2, 1) * e);
    w.insert(Var::N4, n4_base + rat(10, 1) * e);
    w.insert(Var::Eps, e.clone());
    w.insert(Var::BBeta, e / rat(4, 1));
    w.insert(Var::InvB, rat(1, 100));
    w.insert(Var::Beta, e / rat(400, 1));
    w.insert(Var::Eps0, e.clone());
    w.insert(Var::U, Rat::zero());
    w.insert(Var::S, s);
    w
}

// ---------------------------------------------------------------- shared --

/// Conflict certificate extracted beyond the admissibility onset.
fn probe_conflict(case_id: CaseId, alpha_probe: &Rat, dissipation_on: bool) -> Vec<String> {
    let system = super::families::build_system(case_id, alpha_probe, dissipation_on)
        .expect("probe alpha inside the builder range");
    let (rows, nvars) = match case_id {
        CaseId::CaseI => (case1_rows(&system), 2),
        CaseId::CaseII => (case2_rows(&system), 3),
    };
    match fm_feasible(rows, nvars) {
        Err(conflict) => conflict.into_iter().collect(),
        Ok(()) => panic!("probe beyond the onset should be infeasible"),
    }
}
