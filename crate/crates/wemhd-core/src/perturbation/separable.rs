//! Space–time fields as short sums of (trigonometric time factor) × (slow
//! spatial envelope).
//!
//! Every corrector field assembled in this crate has the form
//!
//! ```text
//!     F(t, x) = Σ_i  T_i(t) · S_i(t, x),
//! ```
//!
//! where `T_i` is an exact trigonometric polynomial carrying every fast time
//! scale (the oscillation g, its compensator h, travelling phases) and `S_i`
//! is a slowly varying envelope: either constant in time or tabulated at
//! uniform time nodes.  Keeping the factorised form end to end means
//!
//! * time derivatives are exact on the fast factor (only the envelope ever
//!   sees a finite difference),
//! * spatial operators act termwise on the envelopes,
//! * space–time Lebesgue norms need fine sampling only in the cheap time
//!   variable, with the expensive spatial transforms done once per envelope.
//!
//! Envelope evaluation between nodes uses periodic cubic (Catmull–Rom)
//! interpolation; norm quadrature freezes the envelope over each node
//! interval up to linear interpolation, which is consistent with the
//! fourth-order node derivative used for ∂_t.  Per-slice norm values are
//! always combined in time order, so results do not depend on the rayon
//! worker count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::blocks::TrigPoly;
use crate::spectral::{
    lp_of_samples, magnitude_samples, outer_time_norm, Lp, ScalarField, SymTensorField, TorusGrid,
    VectorField, SYM_WEIGHTS,
};

/// Spatial fields that can serve as separable-term envelopes.
///
/// The engine only needs linear combinations, physical-space component
/// samples with their magnitude weights, and the Parseval inner product;
/// everything else stays in the concrete field types.
pub trait Envelope: Clone + Send + Sync {
    fn grid(&self) -> TorusGrid;
    /// A zero field of the same shape (grid and component count).
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, s: f64);
    fn add_scaled_complex(&mut self, other: &Self, s: Complex64);
    fn scale(&mut self, s: f64);
    /// Componentwise spectral conjugate reflection m ↦ conj(·)(−m).
    fn conjugate_reflect(&self) -> Self;
    /// Componentwise re-embedding on a covering grid (never truncates).
    fn regrid(&self, target: TorusGrid) -> Self;
    /// Physical samples of every scalar component, in a fixed order.
    fn physical_comps(&self) -> Vec<Vec<f64>>;
    /// Quadratic weight of each component in the pointwise magnitude.
    fn comp_weights(&self) -> Vec<f64>;
    /// Weighted Parseval inner product ∮ A : B over the torus.
    fn spectral_dot(&self, other: &Self) -> f64;
}

fn dot_hats(a: &ScalarField, b: &ScalarField) -> f64 {
    assert_eq!(a.hat.len(), b.hat.len(), "spectral dot needs matching grids");
    a.hat
        .iter()
        .zip(&b.hat)
        .map(|(x, y)| (x * y.conj()).re)
        .sum()
}

impl Envelope for ScalarField {
    fn grid(&self) -> TorusGrid {
        self.grid
    }
    fn zero_like(&self) -> Self {
        ScalarField::zeros(self.grid)
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        ScalarField::add_scaled(self, other, s);
    }
    fn add_scaled_complex(&mut self, other: &Self, s: Complex64) {
        ScalarField::add_scaled_complex(self, other, s);
    }
    fn scale(&mut self, s: f64) {
        ScalarField::scale(self, s);
    }
    fn conjugate_reflect(&self) -> Self {
        ScalarField::conjugate_reflect(self)
    }
    fn regrid(&self, target: TorusGrid) -> Self {
        ScalarField::regrid(self, target)
    }
    fn physical_comps(&self) -> Vec<Vec<f64>> {
        vec![self.physical()]
    }
    fn comp_weights(&self) -> Vec<f64> {
        vec![1.0]
    }
    fn spectral_dot(&self, other: &Self) -> f64 {
        dot_hats(self, other)
    }
}

impl Envelope for VectorField {
    fn grid(&self) -> TorusGrid {
        VectorField::grid(self)
    }
    fn zero_like(&self) -> Self {
        VectorField::zeros(VectorField::grid(self))
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        VectorField::add_scaled(self, other, s);
    }
    fn add_scaled_complex(&mut self, other: &Self, s: Complex64) {
        VectorField::add_scaled_complex(self, other, s);
    }
    fn scale(&mut self, s: f64) {
        VectorField::scale(self, s);
    }
    fn conjugate_reflect(&self) -> Self {
        VectorField::conjugate_reflect(self)
    }
    fn regrid(&self, target: TorusGrid) -> Self {
        VectorField::regrid(self, target)
    }
    fn physical_comps(&self) -> Vec<Vec<f64>> {
        self.physical().into_iter().collect()
    }
    fn comp_weights(&self) -> Vec<f64> {
        vec![1.0; 3]
    }
    fn spectral_dot(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| dot_hats(a, b))
            .sum()
    }
}

impl Envelope for SymTensorField {
    fn grid(&self) -> TorusGrid {
        SymTensorField::grid(self)
    }
    fn zero_like(&self) -> Self {
        SymTensorField::zeros(SymTensorField::grid(self))
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        SymTensorField::add_scaled(self, other, s);
    }
    fn add_scaled_complex(&mut self, other: &Self, s: Complex64) {
        SymTensorField::add_scaled_complex(self, other, s);
    }
    fn scale(&mut self, s: f64) {
        SymTensorField::scale(self, s);
    }
    fn conjugate_reflect(&self) -> Self {
        SymTensorField::conjugate_reflect(self)
    }
    fn regrid(&self, target: TorusGrid) -> Self {
        SymTensorField::regrid(self, target)
    }
    fn physical_comps(&self) -> Vec<Vec<f64>> {
        self.physical().into_iter().collect()
    }
    fn comp_weights(&self) -> Vec<f64> {
        SYM_WEIGHTS.to_vec()
    }
    fn spectral_dot(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .zip(SYM_WEIGHTS)
            .map(|((a, b), w)| w * dot_hats(a, b))
            .sum()
    }
}

/// An ad-hoc bundle of scalar components measured jointly (e.g. the nine
/// entries of a velocity gradient), all with unit magnitude weight.
#[derive(Clone)]
pub struct Stacked {
    pub parts: Vec<ScalarField>,
}

impl Envelope for Stacked {
    fn grid(&self) -> TorusGrid {
        self.parts[0].grid
    }
    fn zero_like(&self) -> Self {
        Stacked {
            parts: self.parts.iter().map(|p| ScalarField::zeros(p.grid)).collect(),
        }
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!(self.parts.len(), other.parts.len());
        for (a, b) in self.parts.iter_mut().zip(&other.parts) {
            a.add_scaled(b, s);
        }
    }
    fn add_scaled_complex(&mut self, other: &Self, s: Complex64) {
        assert_eq!(self.parts.len(), other.parts.len());
        for (a, b) in self.parts.iter_mut().zip(&other.parts) {
            a.add_scaled_complex(b, s);
        }
    }
    fn scale(&mut self, s: f64) {
        for p in &mut self.parts {
            p.scale(s);
        }
    }
    fn conjugate_reflect(&self) -> Self {
        Stacked {
            parts: self.parts.iter().map(|p| p.conjugate_reflect()).collect(),
        }
    }
    fn regrid(&self, target: TorusGrid) -> Self {
        Stacked {
            parts: self.parts.iter().map(|p| p.regrid(target)).collect(),
        }
    }
    fn physical_comps(&self) -> Vec<Vec<f64>> {
        self.parts.iter().map(|p| p.physical()).collect()
    }
    fn comp_weights(&self) -> Vec<f64> {
        vec![1.0; self.parts.len()]
    }
    fn spectral_dot(&self, other: &Self) -> f64 {
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| dot_hats(a, b))
            .sum()
    }
}

/// Slow time dependence of an envelope: frozen, or tabulated at the uniform
/// nodes t_j = j/n over the unit period.
#[derive(Clone)]
pub enum Slow<F> {
    Const(F),
    Nodes(Vec<F>),
}

impl<F: Envelope> Slow<F> {
    pub fn grid(&self) -> TorusGrid {
        match self {
            Slow::Const(f) => f.grid(),
            Slow::Nodes(fs) => fs[0].grid(),
        }
    }

    pub fn node_count(&self) -> Option<usize> {
        match self {
            Slow::Const(_) => None,
            Slow::Nodes(fs) => Some(fs.len()),
        }
    }

    pub fn map<G: Envelope>(&self, op: &impl Fn(&F) -> G) -> Slow<G> {
        match self {
            Slow::Const(f) => Slow::Const(op(f)),
            Slow::Nodes(fs) => Slow::Nodes(fs.iter().map(op).collect()),
        }
    }

    pub fn add_scaled(&mut self, other: &Slow<F>, s: f64) {
        match (self, other) {
            (Slow::Const(a), Slow::Const(b)) => a.add_scaled(b, s),
            (Slow::Nodes(a), Slow::Nodes(b)) => {
                assert_eq!(a.len(), b.len());
                for (x, y) in a.iter_mut().zip(b) {
                    x.add_scaled(y, s);
                }
            }
            _ => panic!("cannot merge frozen and tabulated envelopes in place"),
        }
    }

    /// Periodic cubic interpolation at fractional time t (exact at nodes).
    fn eval(&self, t: f64) -> F {
        match self {
            Slow::Const(f) => f.clone(),
            Slow::Nodes(fs) => {
                let n = fs.len();
                let x = t.rem_euclid(1.0) * n as f64;
                let j = x.floor() as usize % n;
                let u = x - x.floor();
                let (u2, u3) = (u * u, u * u * u);
                let stencil = [
                    ((j + n - 1) % n, 0.5 * (-u3 + 2.0 * u2 - u)),
                    (j, 0.5 * (3.0 * u3 - 5.0 * u2 + 2.0)),
                    ((j + 1) % n, 0.5 * (-3.0 * u3 + 4.0 * u2 + u)),
                    ((j + 2) % n, 0.5 * (u3 - u2)),
                ];
                let mut out = fs[0].zero_like();
                for (idx, w) in stencil {
                    if w != 0.0 {
                        out.add_scaled(&fs[idx], w);
                    }
                }
                out
            }
        }
    }

    /// Fourth-order centred periodic finite difference in the node index.
    fn node_derivative(&self) -> Option<Slow<F>> {
        match self {
            Slow::Const(_) => None,
            Slow::Nodes(fs) => {
                let n = fs.len();
                assert!(n >= 5, "node derivative needs at least five time nodes");
                let scale = n as f64 / 12.0;
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let mut d = fs[0].zero_like();
                    d.add_scaled(&fs[(i + 1) % n], 8.0 * scale);
                    d.add_scaled(&fs[(i + n - 1) % n], -8.0 * scale);
                    d.add_scaled(&fs[(i + 2) % n], -scale);
                    d.add_scaled(&fs[(i + n - 2) % n], scale);
                    out.push(d);
                }
                Some(Slow::Nodes(out))
            }
        }
    }
}

/// A space–time field stored as Σ_i T_i(t)·S_i(t, x).
#[derive(Clone)]
pub struct Separable<F> {
    grid: TorusGrid,
    terms: Vec<(TrigPoly, Slow<F>)>,
}

fn same_poly(a: &TrigPoly, b: &TrigPoly) -> bool {
    a.coeffs.len() == b.coeffs.len()
        && a.coeffs
            .iter()
            .zip(&b.coeffs)
            .all(|((fa, ca), (fb, cb))| fa == fb && ca == cb)
}

impl<F: Envelope> Separable<F> {
    pub fn new(grid: TorusGrid) -> Self {
        Separable { grid, terms: Vec::new() }
    }

    /// A time-independent field.
    pub fn constant(field: F) -> Self {
        let grid = field.grid();
        let mut s = Separable::new(grid);
        s.push(TrigPoly::one(), Slow::Const(field));
        s
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn terms(&self) -> &[(TrigPoly, Slow<F>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Shared node count of the tabulated envelopes, if any are present.
    pub fn node_count(&self) -> Option<usize> {
        self.terms.iter().find_map(|(_, s)| s.node_count())
    }

    pub fn max_time_freq(&self) -> i64 {
        self.terms.iter().map(|(p, _)| p.max_abs_freq()).max().unwrap_or(0)
    }

    /// Appends a term, merging it into an existing one when the time factors
    /// are identical (keeps term counts small during assembly).
    pub fn push(&mut self, poly: TrigPoly, slow: Slow<F>) {
        if poly.coeffs.is_empty() {
            return;
        }
        assert_eq!(slow.grid().n, self.grid.n, "envelope grid mismatch");
        if let (Some(a), Some(b)) = (self.node_count(), slow.node_count()) {
            assert_eq!(a, b, "tabulated envelopes must share their time nodes");
        }
        for (p, s) in &mut self.terms {
            let mergeable = same_poly(p, &poly)
                && matches!(
                    (&*s, &slow),
                    (Slow::Const(_), Slow::Const(_)) | (Slow::Nodes(_), Slow::Nodes(_))
                );
            if mergeable {
                s.add_scaled(&slow, 1.0);
                return;
            }
        }
        self.terms.push((poly, slow));
    }

    /// Adds `other` term by term, merging matching time factors.
    pub fn merge(&mut self, other: &Separable<F>) {
        for (p, s) in &other.terms {
            self.push(p.clone(), s.clone());
        }
    }

    pub fn scale(&mut self, s: f64) {
        for (p, _) in &mut self.terms {
            *p = p.scale(s);
        }
    }

    /// Applies a linear spatial operator to every envelope.
    pub fn map<G: Envelope>(&self, op: impl Fn(&F) -> G) -> Separable<G> {
        let terms: Vec<(TrigPoly, Slow<G>)> = self
            .terms
            .iter()
            .map(|(p, s)| (p.clone(), s.map(&op)))
            .collect();
        let grid = terms
            .first()
            .map(|(_, s)| s.grid())
            .unwrap_or(self.grid);
        Separable { grid, terms }
    }

    /// Re-embeds every envelope on a covering grid, so that separables
    /// living on different product grids can be merged.
    pub fn regrid(&self, target: TorusGrid) -> Separable<F> {
        Separable {
            grid: target,
            terms: self
                .terms
                .iter()
                .map(|(p, s)| (p.clone(), s.map(&|f: &F| f.regrid(target))))
                .collect(),
        }
    }

    /// Exact time derivative: the trigonometric factors are differentiated
    /// in closed form; tabulated envelopes additionally contribute their
    /// fourth-order node derivative.
    pub fn time_derivative(&self) -> Separable<F> {
        let mut out = Separable::new(self.grid);
        for (p, s) in &self.terms {
            out.push(p.derivative(), s.clone());
            if let Some(ds) = s.node_derivative() {
                out.push(p.clone(), ds);
            }
        }
        out
    }

    /// The field at node j of an n-node uniform time grid (envelopes exact).
    pub fn eval_node(&self, j: usize, n_t: usize) -> F {
        if let Some(n) = self.node_count() {
            assert_eq!(n, n_t, "node evaluation must use the envelope grid");
        }
        self.eval_at(j as f64 / n_t as f64)
    }

    /// The field at an arbitrary time (cubic interpolation between nodes).
    pub fn eval_at(&self, t: f64) -> F {
        let (first, rest) = self
            .terms
            .split_first()
            .expect("cannot evaluate an empty separable field");
        let mut out = first.1.eval(t);
        out.scale(eval_real_checked(&first.0, t));
        for (p, s) in rest {
            let c = eval_real_checked(p, t);
            if c != 0.0 {
                out.add_scaled(&s.eval(t), c);
            }
        }
        out
    }

    /// ‖F‖_{L²_t L²_x}, exact (Parseval in both variables) when every
    /// envelope is frozen; otherwise falls back to fine quadrature.
    pub fn l2l2(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        if self.node_count().is_some() {
            return self.space_time_norm(Lp::P(2.0), Lp::P(2.0), self.default_fine());
        }
        let mut acc = 0.0;
        for (pi, si) in &self.terms {
            let Slow::Const(fi) = si else { unreachable!() };
            for (pj, sj) in &self.terms {
                let Slow::Const(fj) = sj else { unreachable!() };
                let w = pi.inner(pj);
                assert!(
                    w.im.abs() <= 1e-12 * w.re.abs().max(1.0),
                    "time factors must be real-valued"
                );
                acc += w.re * fi.spectral_dot(fj);
            }
        }
        acc.max(0.0).sqrt()
    }

    /// A time-sample count resolving the fastest trigonometric factor.
    pub fn default_fine(&self) -> usize {
        let nyquist = 2 * self.max_time_freq() as usize + 1;
        (nyquist + 63).next_multiple_of(64).clamp(64, 8192)
    }

    /// ‖F‖_{L^γ_t L^η_x} by uniform time quadrature with at least `fine`
    /// slices.  Envelopes are interpolated linearly within node intervals;
    /// the trigonometric factors are evaluated exactly on every slice.
    pub fn space_time_norm(&self, gamma: Lp, eta: Lp, fine: usize) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let slice_values = match self.node_count() {
            None => self.slices_frozen(eta, fine.max(1)),
            Some(n_t) => self.slices_tabulated(eta, fine.max(1), n_t),
        };
        outer_time_norm(&slice_values, gamma)
    }

    /// Per-slice L^η_x values when every envelope is frozen: physical
    /// samples are cached once per term and recombined on each slice.
    fn slices_frozen(&self, eta: Lp, fine: usize) -> Vec<f64> {
        let cached: Vec<Vec<Vec<f64>>> = self
            .terms
            .iter()
            .map(|(_, s)| {
                let Slow::Const(f) = s else { unreachable!() };
                f.physical_comps()
            })
            .collect();
        let weights = self.comp_weights_of_first();
        (0..fine)
            .into_par_iter()
            .map(|j| {
                let t = j as f64 / fine as f64;
                let contribs: Vec<(f64, &[Vec<f64>])> = self
                    .terms
                    .iter()
                    .zip(&cached)
                    .map(|((p, _), comps)| (eval_real_checked(p, t), comps.as_slice()))
                    .collect();
                measure_slice(&contribs, &weights, eta)
            })
            .collect()
    }

    /// Per-slice values with tabulated envelopes: the outer loop walks the
    /// node intervals in order, keeping physical samples only for the two
    /// bracketing nodes of each interval, and subdivides each interval with
    /// the trigonometric factors evaluated exactly.
    fn slices_tabulated(&self, eta: Lp, fine: usize, n_t: usize) -> Vec<f64> {
        let n_sub = fine.div_ceil(n_t).max(1);
        let weights = self.comp_weights_of_first();
        // Cache slots per term: frozen envelopes once, tabulated envelopes
        // as a sliding pair (current node, next node).
        enum Cache {
            Frozen(Vec<Vec<f64>>),
            Pair(Vec<Vec<f64>>, Vec<Vec<f64>>),
        }
        let node_phys = |s: &Slow<F>, j: usize| -> Vec<Vec<f64>> {
            let Slow::Nodes(fs) = s else { unreachable!() };
            fs[j % n_t].physical_comps()
        };
        let mut caches: Vec<Cache> = self
            .terms
            .iter()
            .map(|(_, s)| match s {
                Slow::Const(f) => Cache::Frozen(f.physical_comps()),
                Slow::Nodes(_) => Cache::Pair(node_phys(s, 0), node_phys(s, 1)),
            })
            .collect();
        let mut slice_values = Vec::with_capacity(n_t * n_sub);
        for j0 in 0..n_t {
            let sub: Vec<f64> = (0..n_sub)
                .into_par_iter()
                .map(|s| {
                    let u = s as f64 / n_sub as f64;
                    let t = (j0 as f64 + u) / n_t as f64;
                    let mut contribs: Vec<(f64, &[Vec<f64>])> =
                        Vec::with_capacity(2 * self.terms.len());
                    for ((p, _), cache) in self.terms.iter().zip(&caches) {
                        let c = eval_real_checked(p, t);
                        match cache {
                            Cache::Frozen(comps) => contribs.push((c, comps.as_slice())),
                            Cache::Pair(cur, next) => {
                                contribs.push((c * (1.0 - u), cur.as_slice()));
                                contribs.push((c * u, next.as_slice()));
                            }
                        }
                    }
                    measure_slice(&contribs, &weights, eta)
                })
                .collect();
            slice_values.extend(sub);
            // Slide the caches one node forward.
            for ((_, s), cache) in self.terms.iter().zip(&mut caches) {
                if let Cache::Pair(cur, next) = cache {
                    std::mem::swap(cur, next);
                    *next = node_phys(s, j0 + 2);
                }
            }
        }
        slice_values
    }

    fn comp_weights_of_first(&self) -> Vec<f64> {
        match &self.terms[0].1 {
            Slow::Const(f) => f.comp_weights(),
            Slow::Nodes(fs) => fs[0].comp_weights(),
        }
    }
}

fn eval_real_checked(p: &TrigPoly, t: f64) -> f64 {
    let v = p.eval(t);
    debug_assert!(
        v.im.abs() <= 1e-9 * v.re.abs().max(1.0),
        "time factor is not real-valued"
    );
    v.re
}

/// Combines weighted physical contributions into one slice and returns its
/// L^η_x value.
fn measure_slice(contribs: &[(f64, &[Vec<f64>])], weights: &[f64], eta: Lp) -> f64 {
    let ncomp = weights.len();
    let len = contribs[0].1[0].len();
    let mut bufs = vec![vec![0.0f64; len]; ncomp];
    for (c, comps) in contribs {
        if *c == 0.0 {
            continue;
        }
        assert_eq!(comps.len(), ncomp);
        for (buf, comp) in bufs.iter_mut().zip(*comps) {
            for (b, v) in buf.iter_mut().zip(comp) {
                *b += c * v;
            }
        }
    }
    lp_of_samples(&magnitude_samples(&bufs, weights), eta)
}

/// Realifies one travelling-phase harmonic pair: the complex envelope E at
/// phase frequency f (paired with its conjugate reflection at −f) contributes
/// cos(2πft)·(E + Ē) + sin(2πft)·i(E − Ē), both envelopes real-valued.  The
/// time factors are multiplied by `carrier` (e.g. the oscillation g).  For
/// f = 0 the envelope must already be Hermitian and is used as is.
pub fn realified_pair<F: Envelope>(f: i64, env: &F) -> Vec<(TrigPoly, F)> {
    if f == 0 {
        return vec![(TrigPoly::one(), env.clone())];
    }
    let refl = env.conjugate_reflect();
    let mut even = env.clone();
    even.add_scaled(&refl, 1.0);
    let mut odd = env.zero_like();
    odd.add_scaled_complex(env, Complex64::new(0.0, 1.0));
    odd.add_scaled_complex(&refl, Complex64::new(0.0, -1.0));
    vec![
        (TrigPoly::cosine(f, 1.0), even),
        (TrigPoly::sine(f, 1.0), odd),
    ]
}
