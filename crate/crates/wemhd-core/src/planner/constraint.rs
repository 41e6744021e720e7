//! Constraint and assignment types shared by the exponent systems.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::ExponentSystem;

/// Exact rational scalar used throughout the planner.
pub type Rat = BigRational;

/// Shorthand constructor: `rat(n, d)` = n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `num/den` (or just `num` when the denominator is 1).
pub fn rat_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num`, `num/den`, or a plain decimal like `1.75` into an exact
/// rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|e| format!("bad integer part {int:?}: {e}"))?
        };
        let frac: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|e| format!("bad fractional part {frac:?}: {e}"))?
        };
        let den = BigInt::from(10u32).pow(digits);
        let num = if neg { int * &den - frac } else { int * &den + frac };
        return Ok(Rat::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
    Ok(Rat::from_integer(n))
}

/// Exponent-system variables.
///
/// `U` and `S` are the reciprocals 1/γ and 1/p of the outer temporal and the
/// spatial integrability index; working with reciprocals keeps the
/// increment-size conditions affine.  `BBeta` is the product b·β as a single
/// symbol, `InvB` is 1/b, and `Beta` is β itself; an [`Assignment`] must keep
/// them consistent (β = (b·β)·(1/b)), which [`check_point`] verifies.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Var {
    /// Tube-radius exponent: r = λ^{n₁}.
    N1,
    /// Case I temporal exponent τ = λ^{n₂}; Case II sheet width ℓ = λ^{n₂}.
    N2,
    /// Case II phase-speed exponent: μ = λ^{n₃}.
    N3,
    /// Case II temporal exponent: τ = λ^{n₄}.
    N4,
    /// Slow-oscillation exponent: σ = λ^{2ε}.
    Eps,
    /// Ladder-gain product b·β.
    BBeta,
    /// Reciprocal of the frequency-growth exponent b.
    InvB,
    /// Ladder exponent β alone.
    Beta,
    /// Spare slack used by the canonical temporal-exponent choice.
    Eps0,
    /// Reciprocal 1/γ of the outer temporal integrability index.
    U,
    /// Reciprocal 1/p of the spatial integrability index.
    S,
}

impl Var {
    pub const ALL: [Var; 11] = [
        Var::N1,
        Var::N2,
        Var::N3,
        Var::N4,
        Var::Eps,
        Var::BBeta,
        Var::InvB,
        Var::Beta,
        Var::Eps0,
        Var::U,
        Var::S,
    ];

    /// Stable lowercase name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Var::N1 => "n1",
            Var::N2 => "n2",
            Var::N3 => "n3",
            Var::N4 => "n4",
            Var::Eps => "eps",
            Var::BBeta => "bbeta",
            Var::InvB => "inv_b",
            Var::Beta => "beta",
            Var::Eps0 => "eps0",
            Var::U => "inv_gamma",
            Var::S => "inv_p",
        }
    }
}

/// A point in exponent space: values for every variable (absent ⇒ 0).
pub type Assignment = BTreeMap<Var, Rat>;

/// Affine expression Σ coeffs·x + constant.
#[derive(Clone, Debug, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<Var, Rat>,
    pub constant: Rat,
}

impl LinExpr {
    pub fn new(terms: &[(Var, Rat)], constant: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        for (v, c) in terms {
            if !c.is_zero() {
                *coeffs.entry(*v).or_insert_with(Rat::zero) += c.clone();
            }
        }
        LinExpr { coeffs, constant }
    }

    pub fn eval(&self, point: &Assignment) -> Rat {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            if let Some(x) = point.get(v) {
                acc += c * x;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.values().all(|c| c.is_zero())
    }
}

/// One amplitude-budget inequality: `lhs < 0` (strict) or `lhs ≤ 0`.
#[derive(Clone, Debug)]
pub struct Constraint {
    /// Stable identifier, e.g. `c1.2` or `c2.w.3`.
    pub label: String,
    pub lhs: LinExpr,
    pub strict: bool,
}

impl Constraint {
    pub fn new(label: &str, terms: &[(Var, Rat)], constant: Rat) -> Self {
        Constraint { label: label.to_string(), lhs: LinExpr::new(terms, constant), strict: true }
    }

    pub fn eval(&self, point: &Assignment) -> Rat {
        self.lhs.eval(point)
    }

    pub fn satisfied(&self, point: &Assignment) -> bool {
        let v = self.eval(point);
        if self.strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.lhs.coeffs {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{}·{}", rat_str(c), v.name())?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}·{}", rat_str(&-c.clone()), v.name())?;
            } else {
                write!(f, " + {}·{}", rat_str(c), v.name())?;
            }
        }
        if !self.lhs.constant.is_zero() || first {
            if first {
                write!(f, "{}", rat_str(&self.lhs.constant))?;
            } else if self.lhs.constant.is_negative() {
                write!(f, " - {}", rat_str(&-self.lhs.constant.clone()))?;
            } else {
                write!(f, " + {}", rat_str(&self.lhs.constant))?;
            }
        }
        write!(f, " {} 0", if self.strict { "<" } else { "≤" })
    }
}

/// One increment-size inequality, affine in the exponents with coefficients
/// affine in the reciprocals U = 1/γ and S = 1/p:
/// `base + U·with_u + S·with_s < 0`.
#[derive(Clone, Debug)]
pub struct NormConstraint {
    pub label: String,
    pub base: LinExpr,
    pub with_u: LinExpr,
    pub with_s: LinExpr,
    pub strict: bool,
}

impl NormConstraint {
    pub fn eval(&self, point: &Assignment) -> Rat {
        let u = point.get(&Var::U).cloned().unwrap_or_else(Rat::zero);
        let s = point.get(&Var::S).cloned().unwrap_or_else(Rat::zero);
        self.base.eval(point) + u * self.with_u.eval(point) + s * self.with_s.eval(point)
    }

    pub fn satisfied(&self, point: &Assignment) -> bool {
        let v = self.eval(point);
        if self.strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    }
}

/// A constraint violated by a queried point, with its attained value.
#[derive(Clone, Debug)]
pub struct Violation {
    pub label: String,
    pub value: Rat,
    pub strict: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: lhs = {} (needs {} 0)",
            self.label,
            rat_str(&self.value),
            if self.strict { "<" } else { "≤" }
        )
    }
}

/// Evaluates every constraint of `system` at `point` exactly and returns the
/// violated ones (empty ⇒ the point is strictly feasible).
///
/// Also enforces well-formedness of the slack symbols: ε, bβ, β, 1/b, ε₀
/// must be positive and satisfy β = bβ·(1/b); inconsistencies are reported
/// under the pseudo-labels `wf.positive` / `wf.beta-product`.
pub fn check_point(system: &ExponentSystem, point: &Assignment) -> Vec<Violation> {
    let mut out = Vec::new();
    let zero = Rat::zero();
    for v in [Var::Eps, Var::BBeta, Var::InvB, Var::Beta, Var::Eps0] {
        let x = point.get(&v).unwrap_or(&zero);
        if !x.is_positive() {
            out.push(Violation {
                label: format!("wf.positive.{}", v.name()),
                value: x.clone(),
                strict: true,
            });
        }
    }
    let bbeta = point.get(&Var::BBeta).unwrap_or(&zero);
    let invb = point.get(&Var::InvB).unwrap_or(&zero);
    let beta = point.get(&Var::Beta).unwrap_or(&zero);
    let defect = beta.clone() - bbeta.clone() * invb.clone();
    if !defect.is_zero() {
        out.push(Violation { label: "wf.beta-product".into(), value: defect, strict: false });
    }
    for c in &system.amplitude {
        if !c.satisfied(point) {
            out.push(Violation { label: c.label.clone(), value: c.eval(point), strict: c.strict });
        }
    }
    for c in &system.norm {
        if !c.satisfied(point) {
            out.push(Violation { label: c.label.clone(), value: c.eval(point), strict: c.strict });
        }
    }
    out
}
