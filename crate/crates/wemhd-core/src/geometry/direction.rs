//! The twelve rational unit directions and their orthonormal frames.
//!
//! Each direction k has |k| = 1 and 3k ∈ Z³ (entries of 3k are a signed
//! permutation of (1, 2, 2) with the odd entry positive), so every lattice
//! multiple used by the oscillatory blocks is an exact integer mode.  The
//! set is closed under the symmetries needed by the dual-coefficient
//! construction and spans symmetric matrices: Σ k⊗k = 4·Id.
//!
//! Every direction carries a right-handed orthonormal frame (k, k₁, k₂)
//! with 3k₁, 3k₂ ∈ Z³, and a frozen rational transverse shift that spreads
//! the tube families of different directions across the torus.

use num::ToPrimitive;

use crate::planner::{rat, rat_str, Rat};

/// Smallest integer N with N·k ∈ Z³ for every direction.
pub const N_LATTICE: i64 = 3;

/// One direction with its frame and placement shift; vector entries are the
/// numerators over the common denominator 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub k_num: [i64; 3],
    pub k1_num: [i64; 3],
    pub k2_num: [i64; 3],
    /// Transverse placement shift in frame coordinates: the block lattice is
    /// evaluated at x − shift, shift = u·k₁ + v·k₂ with frozen rational u, v.
    pub shift_u: Rat,
    pub shift_v: Rat,
}

impl Direction {
    pub fn k(&self) -> [f64; 3] {
        self.k_num.map(|x| x as f64 / 3.0)
    }

    pub fn k1(&self) -> [f64; 3] {
        self.k1_num.map(|x| x as f64 / 3.0)
    }

    pub fn k2(&self) -> [f64; 3] {
        self.k2_num.map(|x| x as f64 / 3.0)
    }

    /// The shift as a rational point of the torus.
    pub fn shift(&self) -> [Rat; 3] {
        std::array::from_fn(|i| {
            (&self.shift_u * rat(self.k1_num[i], 3)) + (&self.shift_v * rat(self.k2_num[i], 3))
        })
    }

    pub fn shift_f64(&self) -> [f64; 3] {
        let s = self.shift();
        std::array::from_fn(|i| s[i].to_f64().unwrap())
    }
}

/// The full direction set.
#[derive(Clone, Debug)]
pub struct DirectionSet {
    pub dirs: Vec<Direction>,
}

/// 3×3 signed permutation: columns of the transformation as integer vectors.
fn apply(g: &[[i64; 3]; 3], v: [i64; 3]) -> [i64; 3] {
    std::array::from_fn(|r| (0..3).map(|c| g[r][c] * v[c]).sum())
}

fn det(g: &[[i64; 3]; 3]) -> i64 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// The signed permutation carrying the base direction to slot (cyc, s₁, s₂):
/// first a sign flip of axes 1, 2, then a cyclic rotation by `cyc`.
pub(crate) fn group_element(cyc: usize, s1: i64, s2: i64) -> [[i64; 3]; 3] {
    let flip = [[1, 0, 0], [0, s1, 0], [0, 0, s2]];
    // Cyclic rotation C: (x, y, z) → (z, x, y) applied `cyc` times.
    let mut g = flip;
    for _ in 0..cyc {
        g = [g[2], g[0], g[1]];
    }
    g
}

impl DirectionSet {
    /// The standard twelve-direction set with frozen shifts.
    pub fn standard() -> DirectionSet {
        let base_k = [1i64, 2, 2];
        let base_k1 = [2i64, -2, 1];
        let base_k2 = [2i64, 1, -2];
        let mut dirs = Vec::with_capacity(12);
        let mut index = 0i64;
        for cyc in 0..3 {
            for (s1, s2) in [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)] {
                let g = group_element(cyc, s1, s2);
                let k_num = apply(&g, base_k);
                let mut k1_num = apply(&g, base_k1);
                let mut k2_num = apply(&g, base_k2);
                if det(&g) < 0 {
                    std::mem::swap(&mut k1_num, &mut k2_num);
                }
                // Frozen shifts: distinct low-denominator offsets that spread
                // the tube lattices of different directions apart.
                let shift_u = rat(2 * index + 1, 32);
                let shift_v = rat((5 * index + 3) % 32, 32);
                dirs.push(Direction {
                    k_num,
                    k1_num,
                    k2_num,
                    shift_u,
                    shift_v,
                });
                index += 1;
            }
        }
        DirectionSet { dirs }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Plain-text table of the set (one line per direction, exact rationals).
    pub fn to_text(&self) -> String {
        let mut out = String::from("index,k,k1,k2,shift\n");
        for (i, d) in self.dirs.iter().enumerate() {
            let tr = |v: [i64; 3]| {
                v.iter()
                    .map(|&n| rat_str(&rat(n, 3)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let s = d.shift();
            let sh = s.iter().map(rat_str).collect::<Vec<_>>().join(" ");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i,
                tr(d.k_num),
                tr(d.k1_num),
                tr(d.k2_num),
                sh
            ));
        }
        out
    }
}
