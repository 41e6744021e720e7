//! Small dense 3×3 symmetric-matrix helpers used by the pointwise
//! amplitude construction.  Everything works on plain `[[f64; 3]; 3]`
//! arrays; fields store their six independent components elsewhere.

pub type Sym3 = [[f64; 3]; 3];

pub const IDENTITY: Sym3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Full double-sum inner product ⟨A, B⟩ = Σ_ij A_ij B_ij.
pub fn inner(a: &Sym3, b: &Sym3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i][j] * b[i][j];
        }
    }
    s
}

pub fn frobenius(a: &Sym3) -> f64 {
    inner(a, a).sqrt()
}

pub fn add_scaled(a: &Sym3, c: f64, b: &Sym3) -> Sym3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + c * b[i][j]))
}

pub fn scale(a: &Sym3, c: f64) -> Sym3 {
    std::array::from_fn(|i| std::array::from_fn(|j| c * a[i][j]))
}

pub fn outer(v: &[f64; 3]) -> Sym3 {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i] * v[j]))
}

/// Eigenvalues of a symmetric 3×3 matrix in descending order, by the
/// trigonometric closed form (Cardano on the shifted characteristic
/// polynomial).  Accurate to a few ulps for well-scaled input.
pub fn eigenvalues(a: &Sym3) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return d;
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (detb / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}

/// Spectral norm max |λ_i|.
pub fn op_norm(a: &Sym3) -> f64 {
    let e = eigenvalues(a);
    e[0].abs().max(e[2].abs())
}

/// Nuclear norm Σ |λ_i|.
pub fn nuclear_norm(a: &Sym3) -> f64 {
    eigenvalues(a).iter().map(|x| x.abs()).sum()
}
