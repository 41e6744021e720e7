//! Generic exact Fourier–Motzkin elimination over rational inequality rows.
//!
//! Rows are `Σ coeffs·x + constant ≺ 0` with `≺` either `<` or `≤`.  Each
//! row carries the set of source labels it was combined from, so the final
//! one-dimensional bounds (and any contradiction) come with a certificate of
//! originating constraints.  System sizes here are tiny (≤ ~20 rows, ≤ 4
//! variables), so no redundancy pruning is needed.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::constraint::Rat;

/// One inequality row over positionally indexed variables.
#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub strict: bool,
    pub sources: BTreeSet<String>,
}

impl Row {
    pub fn new(nvars: usize, label: &str) -> Self {
        Row {
            coeffs: vec![Rat::zero(); nvars],
            constant: Rat::zero(),
            strict: true,
            sources: BTreeSet::from([label.to_string()]),
        }
    }
}

/// Outcome of minimizing one variable over the rows.
#[derive(Clone, Debug)]
pub struct FmOutcome {
    /// Greatest lower bound of the objective variable, if the system is
    /// feasible and the variable is bounded below.
    pub inf: Option<Rat>,
    /// Whether the greatest lower bound is attained (`≤`) or only approached
    /// (`<`, i.e. some binding bound was strict).
    pub attained: bool,
    pub feasible: bool,
    /// Sources of the rows pinning the infimum (feasible case).
    pub binding: BTreeSet<String>,
    /// Sources of a contradictory derived row (infeasible case).
    pub conflict: BTreeSet<String>,
}

/// Eliminates every variable except `keep` and returns the infimum of
/// variable `keep` over the projected system.
pub fn minimize(rows: Vec<Row>, nvars: usize, keep: usize) -> FmOutcome {
    let mut rows = rows;
    for j in (0..nvars).filter(|&j| j != keep) {
        rows = eliminate(rows, j);
        if let Some(bad) = find_contradiction(&rows) {
            return FmOutcome {
                inf: None,
                attained: false,
                feasible: false,
                binding: BTreeSet::new(),
                conflict: bad,
            };
        }
    }
    // All remaining rows involve only `keep` (or are constant).
    let mut inf: Option<Rat> = None;
    let mut attained = false;
    let mut binding = BTreeSet::new();
    let mut uppers: Vec<(Rat, bool, BTreeSet<String>)> = Vec::new();
    for row in &rows {
        let a = &row.coeffs[keep];
        if a.is_zero() {
            continue; // contradictions already screened
        }
        let bound = -row.constant.clone() / a;
        if a.is_negative() {
            // a·x + c ≺ 0 with a < 0  ⇒  x ≻ c/(-a): lower bound.
            let better = match &inf {
                None => true,
                Some(cur) => bound > *cur || (bound == *cur && row.strict && attained),
            };
            if better {
                if inf.as_ref() != Some(&bound) {
                    binding.clear();
                }
                inf = Some(bound.clone());
                attained = !row.strict;
                binding.extend(row.sources.iter().cloned());
            } else if inf.as_ref() == Some(&bound) {
                binding.extend(row.sources.iter().cloned());
                attained = attained && !row.strict;
            }
        } else {
            uppers.push((bound, row.strict, row.sources.clone()));
        }
    }
    // A lower bound above some upper bound is a (1-D) infeasibility.
    if let Some(lo) = &inf {
        for (up, strict, sources) in &uppers {
            let empty = if *strict || !attained { lo >= up } else { lo > up };
            if empty {
                let mut conflict = binding.clone();
                conflict.extend(sources.iter().cloned());
                return FmOutcome {
                    inf: None,
                    attained: false,
                    feasible: false,
                    binding: BTreeSet::new(),
                    conflict,
                };
            }
        }
    }
    FmOutcome { inf, attained, feasible: true, binding, conflict: BTreeSet::new() }
}

/// Checks plain feasibility (no objective) of the rows.
pub fn feasible(rows: Vec<Row>, nvars: usize) -> Result<(), BTreeSet<String>> {
    let mut rows = rows;
    for j in 0..nvars {
        rows = eliminate(rows, j);
        if let Some(bad) = find_contradiction(&rows) {
            return Err(bad);
        }
    }
    Ok(())
}

fn find_contradiction(rows: &[Row]) -> Option<BTreeSet<String>> {
    rows.iter()
        .find(|r| {
            r.coeffs.iter().all(|c| c.is_zero())
                && (r.constant.is_positive() || (r.strict && r.constant.is_zero()))
        })
        .map(|r| r.sources.clone())
}

fn eliminate(rows: Vec<Row>, j: usize) -> Vec<Row> {
    let mut kept = Vec::new();
    let mut uppers = Vec::new(); // coeff > 0
    let mut lowers = Vec::new(); // coeff < 0
    for row in rows {
        let a = &row.coeffs[j];
        if a.is_zero() {
            kept.push(row);
        } else if a.is_positive() {
            uppers.push(row);
        } else {
            lowers.push(row);
        }
    }
    for up in &uppers {
        for lo in &lowers {
            // up: a·x + R_u ≺ 0 (a > 0);  lo: -b·x + R_l ≺ 0 (b > 0).
            // b·up + a·lo eliminates x.
            let a = up.coeffs[j].clone();
            let b = -lo.coeffs[j].clone();
            let mut combined = Row {
                coeffs: vec![Rat::zero(); up.coeffs.len()],
                constant: &b * &up.constant + &a * &lo.constant,
                strict: up.strict || lo.strict,
                sources: up.sources.union(&lo.sources).cloned().collect(),
            };
            for (idx, slot) in combined.coeffs.iter_mut().enumerate() {
                *slot = &b * &up.coeffs[idx] + &a * &lo.coeffs[idx];
            }
            combined.coeffs[j] = Rat::zero(); // exact cancellation by construction
            kept.push(combined);
        }
    }
    kept
}
