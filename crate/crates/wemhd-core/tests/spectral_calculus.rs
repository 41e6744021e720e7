//! Exactness suite for the pseudospectral calculus: transform round trips,
//! operator identities, alias-free products, and quadrature norms.

use num_complex::Complex64;
use proptest::prelude::*;
use tempfile::tempdir;

use wemhd_core::spectral::{
    curl, curl_curl, divergence, divergence_tensor, dot, gradient, hermitian_symmetrize,
    inverse_divergence, inverse_laplacian_scalar, frac_laplacian, frac_laplacian_scalar,
    joint_grid, leray_project, lp_scalar, lp_vector, multiply, multiply_on, outer_sym,
    outer_time_norm, project_nonzero, read_field_dump, scalar_times_vector, smooth_size,
    vector_potential, w1p_scalar, write_csv, FieldDumpWriter, Lp, ScalarField, TorusGrid,
    VectorField,
};

/// Small deterministic generator so golden tests need no external seed state.
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        // xorshift64*, mapped to [-1, 1].
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        let u = self.0.wrapping_mul(0x2545F4914F6CDD1D);
        (u >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// Random real scalar with full support up to |m|∞ ≤ band.
fn random_scalar(grid: TorusGrid, band: i64, seed: u64) -> ScalarField {
    let mut rng = Rng(seed.wrapping_mul(0x9E3779B97F4A7C15) | 1);
    let mut modes = Vec::new();
    for m0 in -band..=band {
        for m1 in -band..=band {
            for m2 in -band..=band {
                // One representative per conjugate pair.
                if (m0, m1, m2) < (0, 0, 0) || (m0, m1, m2) == (0, 0, 0) {
                    continue;
                }
                let c = Complex64::new(rng.next_f64(), rng.next_f64());
                modes.push(([m0, m1, m2], 0.5 * c));
            }
        }
    }
    ScalarField::from_modes(grid, &modes)
}

fn random_vector(grid: TorusGrid, band: i64, seed: u64) -> VectorField {
    VectorField {
        comps: std::array::from_fn(|i| random_scalar(grid, band, seed + 101 * i as u64 + 1)),
    }
}

fn sup_diff_scalar(a: &ScalarField, b: &ScalarField) -> f64 {
    let grid = joint_grid(&[a.occupied_band(), b.occupied_band()]);
    let pa = a.regrid(grid).physical();
    let pb = b.regrid(grid).physical();
    pa.iter()
        .zip(&pb)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn sup_diff_vector(a: &VectorField, b: &VectorField) -> f64 {
    (0..3)
        .map(|i| sup_diff_scalar(&a.comps[i], &b.comps[i]))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------- transforms --

#[test]
fn transform_round_trip_and_parseval() {
    let grid = TorusGrid::new(32);
    let f = random_scalar(grid, 9, 7);
    let samples = f.physical();
    let back = ScalarField::from_samples(grid, &samples);
    let defect: f64 = f
        .hat
        .iter()
        .zip(&back.hat)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(defect < 1e-12, "round trip defect {defect}");

    let quad: f64 = samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64;
    let spectral: f64 = f.hat.iter().map(|c| c.norm_sqr()).sum();
    assert!(
        (quad - spectral).abs() < 1e-12 * spectral.max(1.0),
        "Parseval defect"
    );
}

#[test]
fn single_mode_derivative_is_exact() {
    let grid = TorusGrid::new(16);
    let m = [3i64, -2, 1];
    let f = ScalarField::from_modes(grid, &[(m, Complex64::new(0.5, 0.0))]);
    let g = gradient(&f);
    // f = cos(2π m·x): ∂ᵢf = −2π mᵢ sin(2π m·x).
    for axis in 0..3 {
        let expected = ScalarField::from_fn(grid, |x| {
            let phase = 2.0 * std::f64::consts::PI
                * (m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2]);
            -2.0 * std::f64::consts::PI * m[axis] as f64 * phase.sin()
        });
        assert!(sup_diff_scalar(&g.comps[axis], &expected) < 1e-10);
    }
}

#[test]
fn hermitian_symmetrization_restores_reality() {
    let grid = TorusGrid::new(8);
    let mut f = random_scalar(grid, 2, 3);
    f.hat[grid.spectral_index([1, 2, 0])] += Complex64::new(0.3, 0.7);
    assert!(f.reality_defect() > 0.1);
    hermitian_symmetrize(&grid, &mut f.hat);
    assert!(f.reality_defect() < 1e-15);
}

// ----------------------------------------------------------- operators --

#[test]
fn inverse_divergence_is_a_trace_free_right_inverse() {
    let grid = TorusGrid::new(32);
    for seed in 0..5 {
        let v = random_vector(grid, 8, 40 + seed);
        let r = inverse_divergence(&v);
        // Right inverse on the mean-free part.
        let recovered = divergence_tensor(&r);
        let target = project_nonzero(&v);
        assert!(
            sup_diff_vector(&recovered, &target) < 1e-10,
            "divergence inversion defect at seed {seed}"
        );
        // Pointwise trace-free.
        assert!(lp_scalar(&r.trace(), Lp::Inf) < 1e-12);
    }
}

#[test]
fn leray_projection_properties() {
    let grid = TorusGrid::new(32);
    let v = random_vector(grid, 8, 11);
    let pv = leray_project(&v);
    assert!(lp_scalar(&divergence(&pv), Lp::Inf) < 1e-9);
    assert!(sup_diff_vector(&leray_project(&pv), &pv) < 1e-11, "idempotent");

    let g = gradient(&random_scalar(grid, 8, 12));
    let killed = leray_project(&g);
    assert!(lp_vector(&killed, Lp::Inf) < 1e-10, "gradients are annihilated");

    let c = curl(&v);
    assert!(sup_diff_vector(&leray_project(&c), &c) < 1e-10, "curls are fixed");
}

#[test]
fn curl_curl_matches_grad_div_minus_laplacian() {
    let grid = TorusGrid::new(16);
    let v = random_vector(grid, 4, 21);
    let lhs = curl_curl(&v);
    // ∇(∇·v) + (−Δ)v.
    let mut rhs = gradient(&divergence(&v));
    rhs.add_scaled(&frac_laplacian(&v, 1.0), 1.0);
    // (−Δ) keeps the mean at zero; curl_curl likewise has no mean.
    assert!(sup_diff_vector(&lhs, &rhs) < 1e-9);
}

#[test]
fn fractional_laplacian_multiplier_values() {
    let grid = TorusGrid::new(16);
    let m = [2i64, -1, 3];
    let f = ScalarField::from_modes(grid, &[(m, Complex64::new(1.0, 0.25))]);
    let q = 4.0
        * std::f64::consts::PI
        * std::f64::consts::PI
        * (m.iter().map(|x| (x * x) as f64).sum::<f64>());
    for alpha in [0.5, 1.0, 1.75, 2.9] {
        let g = frac_laplacian_scalar(&f, alpha);
        let idx = grid.spectral_index(m);
        let expected = f.hat[idx] * q.powf(alpha);
        assert!((g.hat[idx] - expected).norm() < 1e-9 * q.powf(alpha));
    }
    // α = 1 agrees with the exact Laplacian of a smooth sample field.
    let s = random_scalar(grid, 4, 9);
    let lap = frac_laplacian_scalar(&s, 1.0);
    let expected = {
        let mut acc = ScalarField::zeros(grid);
        for axis in 0..3 {
            acc.add_scaled(&gradient(&gradient(&s).comps[axis]).comps[axis], -1.0);
        }
        acc
    };
    assert!(sup_diff_scalar(&lap, &expected) < 1e-9);
}

#[test]
fn inverse_laplacian_inverts_on_mean_free_fields() {
    let grid = TorusGrid::new(16);
    let f = random_scalar(grid, 4, 31);
    let f0 = {
        let mut g = f.clone();
        g.hat[0] = Complex64::default();
        g
    };
    let lap_inv = inverse_laplacian_scalar(&f0);
    let back = frac_laplacian_scalar(&lap_inv, 1.0);
    let mut diff = back;
    diff.add_scaled(&f0, 1.0); // (−Δ)Δ⁻¹ = −Id on mean-free
    assert!(lp_scalar(&diff, Lp::Inf) < 1e-10);
}

#[test]
fn vector_potential_recovers_the_solenoidal_part() {
    let grid = TorusGrid::new(32);
    let b = random_vector(grid, 6, 55);
    let a = vector_potential(&b);
    assert!(lp_scalar(&divergence(&a), Lp::Inf) < 1e-10);
    let recovered = curl(&a);
    let expected = {
        let lp = leray_project(&b);
        project_nonzero(&lp)
    };
    assert!(sup_diff_vector(&recovered, &expected) < 1e-9);
}

#[test]
fn divergence_of_curl_vanishes() {
    let grid = TorusGrid::new(16);
    let v = random_vector(grid, 5, 77);
    assert!(lp_scalar(&divergence(&curl(&v)), Lp::Inf) < 1e-9);
}

// ------------------------------------------------------------ products --

#[test]
fn padded_product_equals_brute_force_convolution() {
    let grid = TorusGrid::new(8);
    let a = random_scalar(grid, 3, 1);
    let b = random_scalar(grid, 3, 2);
    let prod = multiply(&a, &b);

    // Direct convolution over the sparse mode sets.
    let out_grid = prod.grid;
    let mut expected = ScalarField::zeros(out_grid);
    for ia in 0..grid.len() {
        let ca = a.hat[ia];
        if ca.norm_sqr() == 0.0 {
            continue;
        }
        let ma = grid.mode_triple(ia);
        for ib in 0..grid.len() {
            let cb = b.hat[ib];
            if cb.norm_sqr() == 0.0 {
                continue;
            }
            let mb = grid.mode_triple(ib);
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            expected.hat[out_grid.spectral_index(m)] += ca * cb;
        }
    }
    let defect: f64 = prod
        .hat
        .iter()
        .zip(&expected.hat)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(defect < 1e-12, "convolution defect {defect}");
}

#[test]
#[should_panic(expected = "product band")]
fn underpadded_products_refuse_to_alias() {
    let grid = TorusGrid::new(16);
    let a = random_scalar(grid, 5, 1);
    let b = random_scalar(grid, 5, 2);
    multiply_on(&a, &b, TorusGrid::new(16)); // needs band 10 > 7
}

#[test]
fn product_helpers_are_consistent() {
    let grid = TorusGrid::new(16);
    let s = random_scalar(grid, 3, 5);
    let u = random_vector(grid, 3, 6);
    let v = random_vector(grid, 3, 7);

    // dot(u, v) equals trace of the symmetrized outer product.
    let t = outer_sym(&u, &v);
    let d = dot(&u, &v);
    assert!(sup_diff_scalar(&t.trace(), &d) < 1e-11);

    // scalar_times_vector distributes over components.
    let sv = scalar_times_vector(&s, &u);
    for axis in 0..3 {
        let direct = multiply(&s, &u.comps[axis]);
        assert!(sup_diff_scalar(&sv.comps[axis], &direct) < 1e-12);
    }
}

#[test]
fn smooth_sizes_are_small_and_sufficient() {
    assert_eq!(smooth_size(14), 16);
    assert_eq!(smooth_size(33), 36);
    assert_eq!(smooth_size(64), 64);
    for min in [4usize, 10, 17, 50, 100, 190] {
        let n = smooth_size(min);
        assert!(n >= min && n % 2 == 0);
        let mut r = n;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        assert_eq!(r, 1, "{n} is not 5-smooth");
    }
}

// --------------------------------------------------------------- norms --

#[test]
fn quadrature_norms_match_closed_forms() {
    let grid = TorusGrid::new(32);
    let f = ScalarField::from_fn(grid, |x| (2.0 * std::f64::consts::PI * x[0]).sin());
    let l2 = lp_scalar(&f, Lp::P(2.0));
    assert!((l2 - 0.5f64.sqrt()).abs() < 1e-12);
    let l4 = lp_scalar(&f, Lp::P(4.0));
    assert!((l4 - 0.375f64.powf(0.25)).abs() < 1e-12);
    assert!((lp_scalar(&f, Lp::Inf) - 1.0).abs() < 1e-12);

    // W^{1,2}: ‖f‖₂ + ‖∇f‖₂ with ∇f = 2π cos(2πx) e₀.
    let w = w1p_scalar(&f, Lp::P(2.0));
    let expected = 0.5f64.sqrt() * (1.0 + 2.0 * std::f64::consts::PI);
    assert!((w - expected).abs() < 1e-10);
}

#[test]
fn outer_time_quadrature() {
    let vals = [1.0, 2.0, 2.0, 1.0];
    assert!((outer_time_norm(&vals, Lp::Inf) - 2.0).abs() < 1e-15);
    let l2 = outer_time_norm(&vals, Lp::P(2.0));
    assert!((l2 - (10.0f64 / 4.0).sqrt()).abs() < 1e-15);
}

#[test]
fn tail_fraction_flags_band_edge_content() {
    let grid = TorusGrid::new(32);
    let low = ScalarField::from_modes(grid, &[([2, 1, 0], Complex64::new(1.0, 0.0))]);
    assert_eq!(low.tail_fraction(), 0.0);
    let high = ScalarField::from_modes(grid, &[([14, 0, 0], Complex64::new(1.0, 0.0))]);
    assert!(high.tail_fraction() > 0.99);
}

// ------------------------------------------------------------- reports --

#[test]
fn field_dump_round_trips() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("dump.wemhd");
    let grid = TorusGrid::new(8);
    let f = random_scalar(grid, 3, 13);
    let g = random_scalar(grid, 3, 14);

    let mut writer = FieldDumpWriter::create(&path, 8, 1, 2).unwrap();
    writer.write_block(&grid, &f.physical()).unwrap();
    writer.write_block(&grid, &g.physical()).unwrap();
    writer.finish().unwrap();

    let dump = read_field_dump(&path).unwrap();
    assert_eq!((dump.n_space, dump.n_time, dump.n_components), (8, 1, 2));
    let fp = f.physical();
    let worst = dump.blocks[0]
        .iter()
        .zip(&fp)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert_eq!(worst, 0.0, "binary dump must be bit-exact");
}

#[test]
fn csv_tables_are_plain_text() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("table.csv");
    write_csv(
        &path,
        &["quantity", "value"],
        &[vec!["alpha".into(), "1.5".into()]],
    )
    .unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "quantity,value\nalpha,1.5\n");
}

// ---------------------------------------------------------- properties --

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Lebesgue norms are nondecreasing in p under a probability measure.
    #[test]
    fn lp_monotone_in_p(seed in 0u64..1000, p_lo in 1u32..4, dp in 1u32..4) {
        let grid = TorusGrid::new(8);
        let f = random_scalar(grid, 2, seed + 1);
        let lo = lp_scalar(&f, Lp::P(p_lo as f64));
        let hi = lp_scalar(&f, Lp::P((p_lo + dp) as f64));
        let sup = lp_scalar(&f, Lp::Inf);
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        prop_assert!(hi <= sup * (1.0 + 1e-12));
    }

    /// Differential operators are linear.
    #[test]
    fn operators_are_linear(seed in 0u64..1000, s in -3.0f64..3.0) {
        let grid = TorusGrid::new(8);
        let u = random_vector(grid, 2, seed + 1);
        let v = random_vector(grid, 2, seed + 500);
        let mut combo = u.clone();
        combo.add_scaled(&v, s);
        let lhs = divergence(&combo);
        let mut rhs = divergence(&u);
        rhs.add_scaled(&divergence(&v), s);
        prop_assert!(sup_diff_scalar(&lhs, &rhs) < 1e-9);

        let lhs_c = curl(&combo);
        let mut rhs_c = curl(&u);
        rhs_c.add_scaled(&curl(&v), s);
        prop_assert!(sup_diff_vector(&lhs_c, &rhs_c) < 1e-9);
    }
}
