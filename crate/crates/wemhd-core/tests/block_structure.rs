//! Structural identities and scaling laws of the oscillatory blocks.

use num_complex::Complex64;

use wemhd_core::blocks::{
    profile_scaling_fits, scaling_rows, standing_block, travelling_block, BlockSpec, Profile1d,
    Profile2d, TemporalProfile, TrigPoly,
};
use wemhd_core::geometry::DirectionSet;
use wemhd_core::spectral::{
    curl_curl, divergence, divergence_tensor, outer_sym, TorusGrid, VectorField,
};

use std::f64::consts::PI;

fn sup_coeff(field: &wemhd_core::spectral::ScalarField) -> f64 {
    field.hat.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn sup_coeff_vec(field: &VectorField) -> f64 {
    field.comps.iter().map(sup_coeff).fold(0.0, f64::max)
}

#[test]
fn trig_polynomials_do_exact_calculus() {
    let c = TrigPoly::cosine(3, 2.0);
    let s = TrigPoly::sine(3, 2.0);
    // cos·cos + sin·sin at equal amplitude is a constant (amp²/2 · 2).
    let sum = c.mul(&c).add(&s.mul(&s));
    assert_eq!(sum.coeffs.len(), 1);
    assert!((sum.mean().re - 4.0).abs() < 1e-14);
    // d/dt sin(2πft) = 2πf cos(2πft).
    let ds = s.derivative();
    let expect = TrigPoly::cosine(3, 2.0 * 2.0 * PI * 3.0);
    let diff = ds.add(&expect.scale(-1.0));
    assert!(diff.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max) < 1e-12);
    // Pointwise evaluation against the closed form.
    for t in [0.0, 0.137, 0.5, 0.93] {
        assert!((c.eval_real(t) - 2.0 * (2.0 * PI * 3.0 * t).cos()).abs() < 1e-12);
    }
    assert!(c.is_real() && s.is_real() && sum.is_real());
    assert_eq!(c.mul(&s).max_abs_freq(), 6);
}

#[test]
fn temporal_pair_satisfies_the_compensator_identity() {
    for (tau, sigma) in [(1usize, 2usize), (2, 4), (3, 8)] {
        let prof = TemporalProfile::new(tau, sigma);
        assert!(prof.compensator_defect() < 1e-13, "(τ, σ) = ({tau}, {sigma})");
        assert!(prof.g.is_real() && prof.h.is_real());
        // Mean-square of g pinned at one exactly, so g² − 1 is mean-free and
        // h stays a trigonometric polynomial.
        assert!((prof.g_squared.mean().re - 1.0).abs() < 1e-13);
        assert!(prof.truncation_tail < 1e-19);
        // h starts at zero and never leaves [−1, 1]; its actual range is
        // [−1/(4τ), 1 − 3/(4τ)] plus truncation fuzz.
        assert!(prof.h.eval_real(0.0).abs() < 1e-11);
        let fine = 1 << 13;
        let h_max = prof
            .h
            .eval_grid(fine)
            .iter()
            .fold(0.0f64, |m, &v| m.max(v.abs()));
        assert!(h_max <= 1.0, "‖h‖∞ = {h_max} at (τ, σ) = ({tau}, {sigma})");
        assert!(
            h_max >= 1.0 - 3.0 / (4.0 * tau as f64) - 1e-6,
            "h too small: {h_max}"
        );
    }
}

#[test]
fn temporal_pulse_is_dead_near_the_period_boundaries() {
    for (tau, sigma) in [(1usize, 1usize), (2, 4), (4, 2)] {
        let prof = TemporalProfile::new(tau, sigma);
        let fine = 1 << 13;
        let samples = prof.g.eval_grid(fine);
        let peak = samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let window = prof.vanish_window();
        let mut worst = 0.0f64;
        for (i, &v) in samples.iter().enumerate() {
            let t = i as f64 / fine as f64;
            // Distance to the nearest pulse-interval [i/σ + w, i/σ + 3w].
            let local = (t * sigma as f64).fract() / sigma as f64;
            if local < window || local > 3.0 * window {
                worst = worst.max(v.abs());
            }
        }
        assert!(
            worst < 1e-6 * peak,
            "pulse leaks {worst} (peak {peak}) outside its support at (τ, σ) = ({tau}, {sigma})"
        );
        // In particular the whole pair vanishes at t = 0.
        assert!(prof.g.eval_real(0.0).abs() < 1e-6 * peak);
    }
}

#[test]
fn modulation_profile_is_mean_free_and_normalised() {
    let psi = Profile1d::bump(0.3, 5);
    assert!(psi.coeffs.iter().all(|(l, _)| *l != 0));
    let mass: f64 = psi.coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
    assert!((mass - 1.0).abs() < 1e-13);
    // Conjugate pairs ⇒ real values.
    for z in [0.0, 0.21, 0.5, 0.77] {
        let v: Complex64 = psi
            .coeffs
            .iter()
            .map(|(l, c)| {
                let ph = 2.0 * PI * *l as f64 * z;
                c * Complex64::new(ph.cos(), ph.sin())
            })
            .sum();
        assert!(v.im.abs() < 1e-14);
        assert!((v.re - psi.eval(z)).abs() < 1e-14);
    }
    // The zero harmonic of ψ² is the mean square, i.e. exactly 1.
    let sq = psi.squared_coeffs();
    let zero = sq.iter().find(|(l, _)| *l == 0).unwrap().1;
    assert!((zero.re - 1.0).abs() < 1e-13 && zero.im.abs() < 1e-15);
}

#[test]
fn tube_profile_is_an_exact_laplacian_pair() {
    let phi = Profile2d::bump(0.3, 6);
    assert!((phi.mean_square() - 1.0).abs() < 1e-13);
    for m in &phi.modes {
        assert!(m.j != (0, 0));
        let q = 4.0 * PI * PI * ((m.j.0 * m.j.0 + m.j.1 * m.j.1) as f64);
        assert!((m.phi - q * m.pot).norm() < 1e-15 * m.phi.norm().max(1e-30));
    }
    // Hermitian pairing: coefficients at j and −j are conjugate.
    for m in &phi.modes {
        let partner = phi
            .modes
            .iter()
            .find(|p| p.j == (-m.j.0, -m.j.1))
            .expect("missing conjugate mode");
        assert!((partner.phi - m.phi.conj()).norm() < 1e-15);
    }
    // φ has mean zero by construction, so its values average out.
    let n = 64;
    let mean: f64 = (0..n * n)
        .map(|i| phi.eval((i / n) as f64 / n as f64, (i % n) as f64 / n as f64))
        .sum::<f64>()
        / (n * n) as f64;
    assert!(mean.abs() < 1e-12);
}

#[test]
fn standing_block_identities() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 5);
    let grid = TorusGrid::new(48);
    for (dir_index, j) in [(0usize, 1i64), (7, 2)] {
        let blk = standing_block(grid, &set, &phi, BlockSpec { dir_index, j });
        let scale = sup_coeff_vec(&blk.w).max(1.0);
        // Exact divergence-freeness, mode by mode.
        assert!(sup_coeff(&divergence(&blk.w)) < 1e-12 * scale);
        // The potential reproduces the block through curl curl.
        let back = curl_curl(&blk.w_pot);
        let mut diff = back.clone();
        diff.add_scaled(&blk.w, -1.0);
        assert!(sup_coeff_vec(&diff) < 1e-12 * scale, "curl–curl potential");
        // The block self-stress is divergence-free and has mean k⊗k.
        let ww = outer_sym(&blk.w, &blk.w);
        let div = divergence_tensor(&ww);
        assert!(sup_coeff_vec(&div) < 1e-10 * scale * scale);
        for (a, b, slot) in [
            (0usize, 0usize, 0usize),
            (0, 1, 1),
            (0, 2, 2),
            (1, 1, 3),
            (1, 2, 4),
            (2, 2, 5),
        ] {
            let want = blk.k[a] * blk.k[b];
            assert!(
                (ww.comps[slot].mean() - want).abs() < 1e-12,
                "mean of W⊗W component ({a}, {b})"
            );
        }
        assert!(blk.w.occupied_band() <= 2 * j * 5);
    }
}

#[test]
fn standing_blocks_average_isotropically() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 4);
    let grid = TorusGrid::new(48);
    let mut sums = [[0.0f64; 3]; 3];
    for d in 0..set.len() {
        let blk = standing_block(grid, &set, &phi, BlockSpec { dir_index: d, j: 1 });
        let ww = outer_sym(&blk.w, &blk.w);
        for a in 0..3 {
            for b in 0..3 {
                sums[a][b] += ww.component(a, b).mean();
            }
        }
    }
    // Means are k⊗k per block, so the full sum is Σ k⊗k = 4·Id.
    for a in 0..3 {
        for b in 0..3 {
            let want = if a == b { 4.0 } else { 0.0 };
            assert!((sums[a][b] - want).abs() < 1e-11, "sum[{a}][{b}] = {}", sums[a][b]);
        }
    }
}

#[test]
fn travelling_block_is_divergence_free_with_its_jet() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 4);
    let psi = Profile1d::bump(0.3, 3);
    let grid = TorusGrid::new(48);
    let blk = travelling_block(
        grid,
        &set,
        &phi,
        &psi,
        BlockSpec {
            dir_index: 2,
            j: 1,
        },
        4,
    );
    assert_eq!(blk.w.terms.len(), blk.jet.terms.len());
    // Harmonic by harmonic: div(W_l + W̃_l) = 0 exactly.
    for ((f, env), (fj, jet)) in blk.w.terms.iter().zip(&blk.jet.terms) {
        assert_eq!(f, fj);
        let mut total = env.clone();
        total.add_scaled(jet, 1.0);
        let d = divergence(&total);
        let scale = sup_coeff_vec(env).max(1.0);
        assert!(
            sup_coeff(&d) < 1e-11 * scale,
            "harmonic {f}: divergence {}",
            sup_coeff(&d)
        );
        // W alone is *not* divergence-free — the jet corrector is earning
        // its keep.
        assert!(sup_coeff(&divergence(env)) > 1e-3 * scale);
    }
    // Conjugate pairing makes slices real.
    assert!(blk.w.conjugate_defect() < 1e-14);
    assert!(blk.jet.conjugate_defect() < 1e-14);
    let slice = blk.w.eval_slice(0.37);
    let defect = slice
        .comps
        .iter()
        .map(|c| c.reality_defect())
        .fold(0.0, f64::max);
    assert!(defect < 1e-13);
    // The slice of W + W̃ is divergence-free too.
    let mut both = slice.clone();
    both.add_scaled(&blk.jet.eval_slice(0.37), 1.0);
    assert!(sup_coeff(&divergence(&both)) < 1e-11);
}

#[test]
fn travelling_block_time_average_of_squares_is_directional() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 4);
    let psi = Profile1d::bump(0.3, 3);
    let grid = TorusGrid::new(48);
    let blk = travelling_block(
        grid,
        &set,
        &phi,
        &psi,
        BlockSpec {
            dir_index: 9,
            j: 1,
        },
        4,
    );
    // Time–space mean of W⊗W: only harmonic pairs (l, −l) survive the time
    // average, and the spatial mean of E_l ⊗ E_{−l} is the convolution at
    // mode zero.  The total must be (Σ|ψ̂|²)(Σ|φ̂|²) k⊗k = k⊗k.
    let sparse: Vec<(i64, Vec<([i64; 3], [Complex64; 3])>)> = blk
        .w
        .terms
        .iter()
        .map(|(f, field)| {
            let mut entries = Vec::new();
            for idx in 0..grid.len() {
                let cs: [Complex64; 3] = std::array::from_fn(|c| field.comps[c].hat[idx]);
                if cs.iter().any(|c| c.norm_sqr() > 0.0) {
                    entries.push((grid.mode_triple(idx), cs));
                }
            }
            (*f, entries)
        })
        .collect();
    let mut mean = [[Complex64::default(); 3]; 3];
    for (f, entries) in &sparse {
        let partner = sparse.iter().find(|(g, _)| *g == -*f).unwrap();
        for (m, cs) in entries {
            for (mp, csp) in &partner.1 {
                if [m[0] + mp[0], m[1] + mp[1], m[2] + mp[2]] == [0, 0, 0] {
                    for a in 0..3 {
                        for b in 0..3 {
                            mean[a][b] += cs[a] * csp[b];
                        }
                    }
                }
            }
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            let want = blk.k[a] * blk.k[b];
            assert!(
                (mean[a][b].re - want).abs() < 1e-12 && mean[a][b].im.abs() < 1e-12,
                "time-mean component ({a}, {b}) = {:?}",
                mean[a][b]
            );
        }
    }
}

#[test]
#[should_panic(expected = "outside the clean band")]
fn blocks_refuse_to_alias_past_the_band() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 6);
    // Band limit of n = 16 is 7; the cap-6 profile at j = 2 needs modes up
    // to 24.
    let grid = TorusGrid::new(16);
    let _ = standing_block(
        grid,
        &set,
        &phi,
        BlockSpec {
            dir_index: 0,
            j: 2,
        },
    );
}

#[test]
fn scaling_fits_match_predictions() {
    let fits = profile_scaling_fits();
    assert!(fits.len() >= 10);
    for f in &fits {
        assert!(
            f.rel_error < 0.10,
            "{} / {} vs {}: predicted {:.4}, fitted {:.4} (rel {:.4})",
            f.lemma,
            f.quantity,
            f.parameter,
            f.predicted_exponent,
            f.fitted_exponent,
            f.rel_error
        );
    }
    // The mean-square pinning of the pulse is exact, not asymptotic.
    let g2 = fits
        .iter()
        .find(|f| f.quantity == "g_mean_square")
        .expect("temporal fit missing");
    assert!(g2.fitted_exponent.abs() < 1e-6);
    let rows = scaling_rows(&fits);
    assert_eq!(rows[0][0], "lemma");
    assert_eq!(rows.len(), fits.len() + 1);
}

#[test]
fn travelling_potential_recovers_the_block_by_curl_curl() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 4);
    let psi = Profile1d::bump(0.3, 3);
    let grid = TorusGrid::new(48);
    let blk = travelling_block(
        grid,
        &set,
        &phi,
        &psi,
        BlockSpec {
            dir_index: 7,
            j: 1,
        },
        2,
    );
    assert_eq!(blk.w.terms.len(), blk.w_pot.terms.len());
    // Harmonic by harmonic: ∇×∇× W^c_l = W_l + W̃_l, coefficient-exact.
    for (((f, pot), (fw, env)), (fj, jet)) in blk
        .w_pot
        .terms
        .iter()
        .zip(&blk.w.terms)
        .zip(&blk.jet.terms)
    {
        assert_eq!(f, fw);
        assert_eq!(f, fj);
        let back = curl_curl(pot);
        let mut expect = env.clone();
        expect.add_scaled(jet, 1.0);
        let scale = sup_coeff_vec(env).max(1.0);
        let mut worst = 0.0f64;
        for c in 0..3 {
            for (a, b) in back.comps[c].hat.iter().zip(&expect.comps[c].hat) {
                worst = worst.max((a - b).norm());
            }
        }
        assert!(worst < 1e-10 * scale, "harmonic {f}: curl–curl defect {worst}");
    }
    assert!(blk.w_pot.conjugate_defect() < 1e-14);
}

#[test]
fn block_averages_equal_the_direction_dyad() {
    let set = DirectionSet::standard();
    let phi = Profile2d::bump(0.3, 4);
    let psi = Profile1d::bump(0.3, 3);
    let grid = TorusGrid::new(48);
    for d in [0usize, 5, 10] {
        let spec = BlockSpec { dir_index: d, j: 1 };
        let standing = standing_block(grid, &set, &phi, spec);
        let avg = standing.mean_outer();
        for a in 0..3 {
            for b in 0..3 {
                let want = standing.k[a] * standing.k[b];
                assert!(
                    (avg[a][b] - want).abs() < 1e-12,
                    "standing dir {d}: avg[{a}][{b}] = {} vs {}",
                    avg[a][b],
                    want
                );
            }
        }
        let travelling = travelling_block(grid, &set, &phi, &psi, spec, 3);
        let avg = travelling.w.mean_outer();
        for a in 0..3 {
            for b in 0..3 {
                let want = travelling.k[a] * travelling.k[b];
                assert!(
                    (avg[a][b] - want).abs() < 1e-12,
                    "travelling dir {d}: avg[{a}][{b}] = {} vs {}",
                    avg[a][b],
                    want
                );
            }
        }
    }
}

#[test]
fn squared_profile_harmonics_match_pointwise_squares() {
    let psi = Profile1d::bump(0.22, 4);
    let sq = psi.squared_coeffs();
    let zero = sq
        .iter()
        .find(|(l, _)| *l == 0)
        .map(|(_, c)| c.re)
        .unwrap();
    assert!((zero - 1.0).abs() < 1e-12);
    for z in [0.0, 0.21, 0.68] {
        let direct = psi.eval(z).powi(2);
        let from_sq: f64 = sq
            .iter()
            .map(|(l, c)| {
                let phase = 2.0 * PI * *l as f64 * z;
                (c * Complex64::new(phase.cos(), phase.sin())).re
            })
            .sum();
        assert!((direct - from_sq).abs() < 1e-11, "ψ² at {z}");
    }

    let phi = Profile2d::bump(0.3, 4);
    let sq = phi.squared_modes();
    let zero = sq
        .iter()
        .find(|(j, _)| *j == (0, 0))
        .map(|(_, c)| c.re)
        .unwrap();
    assert!((zero - 1.0).abs() < 1e-12);
    for (y1, y2) in [(0.0, 0.0), (0.13, 0.81), (0.47, 0.29)] {
        let direct = phi.eval(y1, y2).powi(2);
        let from_sq: f64 = sq
            .iter()
            .map(|(j, c)| {
                let phase = 2.0 * PI * (j.0 as f64 * y1 + j.1 as f64 * y2);
                (c * Complex64::new(phase.cos(), phase.sin())).re
            })
            .sum();
        assert!((direct - from_sq).abs() < 1e-10, "φ² at ({y1}, {y2})");
    }
}
