use gkp_core::analysis::{mean_out, width_out, width_out_matrix, widths_standard, widths_standard_swapped};
use gkp_core::gaussian::{
    project_superposition, special_integral, Gaussian1D, Gaussian2D, SpikeSuperposition1D, Sym2,
};
use gkp_core::grid::{
    apply_bs_grid, apply_cx_grid, apply_cz_grid, apply_parity, fourier_mode, grid_bell_standard, sample_2d,
    sample_comb, simulate_knill_cx, simulate_knill_cx_kernel, simulate_steane, wigner, Direction, Grid1D,
    GridWavefunction, SupportPolicy,
};
use gkp_core::model::{
    apply_gate, bell_qunaught, bell_standard, make_comb, product, BellPrecision, BellProvenance, GateSpec,
    LogicalLabel, SpikeState,
};
use gkp_core::quadrature::integrate;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn spd2() -> impl Strategy<Value = [[f64; 2]; 2]> {
    (0.3f64..3.0, 0.3f64..3.0, -0.9f64..0.9).prop_map(|(a, b, r)| {
        let off = r * (a * b).sqrt();
        [[a, off], [off, b]]
    })
}

fn random_state(n: usize, modes: usize) -> impl Strategy<Value = GridWavefunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n.pow(modes as u32)).prop_map(move |v| {
        let g = Grid1D::self_dual(n).unwrap();
        GridWavefunction::new(vec![g; modes], v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, m1 in -1.0f64..1.0, m2 in -1.0f64..1.0) {
        let (bell, _) = bell_qunaught(0.3, 3).unwrap();
        let s1 = Gaussian1D::real(1.0, m1, 3.0).unwrap();
        let s2 = Gaussian1D::real(1.0, m2, 5.0).unwrap();
        let both = SpikeSuperposition1D::new(vec![
            Gaussian1D::real(a, m1, 3.0).unwrap(),
            Gaussian1D::real(b, m2, 5.0).unwrap(),
        ]);
        let lhs = project_superposition(&both, &bell).unwrap();
        let r1 = project_superposition(&SpikeSuperposition1D::new(vec![s1]), &bell).unwrap();
        let r2 = project_superposition(&SpikeSuperposition1D::new(vec![s2]), &bell).unwrap();
        let scale = lhs.spikes().iter().map(|s| s.amplitude().norm()).fold(0.0, f64::max);
        for x in [-3.0, -1.1, 0.0, 0.4, 2.5] {
            let want = r1.eval(x) * a + r2.eval(x) * b;
            prop_assert!((lhs.eval(x) - want).norm() <= 1e-12 * scale.max(want.norm()));
        }
    }

    #[test]
    fn common_width_outputs(var_in in 0.02f64..1.0, shift in -1.0f64..1.0) {
        let (bell, prec) = bell_standard(0.3, 3).unwrap();
        let comb = make_comb(LogicalLabel::Zero, 0.3, 3).unwrap();
        let input = SpikeSuperposition1D::new(
            comb.spikes()
                .iter()
                .map(|s| Gaussian1D::from_log_amplitude(s.log_amplitude(), s.mean + shift, (1.0 / var_in).into()).unwrap())
                .collect(),
        );
        let out = project_superposition(&input, &bell).unwrap();
        let expected = 1.0 / width_out(&prec, 1.0 / var_in);
        for s in out.spikes() {
            prop_assert!(rel(s.precision.re, expected) < 1e-13);
            prop_assert!(s.precision.im.abs() < 1e-13 * expected);
        }
    }

    #[test]
    fn integral_width_and_mean_match_formulas(
        qm in spd2(), q in 0.3f64..3.0, mu1 in -2.0f64..2.0, mu2 in -2.0f64..2.0, mu in -2.0f64..2.0,
    ) {
        let g2 = Gaussian2D::real(1.0, [mu1, mu2], qm).unwrap();
        let g1 = Gaussian1D::real(1.0, mu, q).unwrap();
        let r = special_integral(&g2, &g1).unwrap();
        let bell = BellPrecision { q: qm, provenance: BellProvenance::Custom { transform: None } };
        prop_assert!(rel(r.sigma2.re, width_out_matrix(qm, q)) < 1e-14);
        let nu = mean_out(mu1, mu2, mu, &bell, q);
        prop_assert!((r.nu.re - nu).abs() <= 1e-14 * nu.abs().max(1.0));
    }

    #[test]
    fn complex_integral_matches_quadrature(
        qm in spd2(), b11 in -1.0f64..1.0, b12 in -1.0f64..1.0, b22 in -1.0f64..1.0,
        q in 0.3f64..3.0, qi in -1.0f64..1.0, mu1 in -1.0f64..1.0, mu2 in -1.0f64..1.0,
        mu in -1.0f64..1.0, x2 in -1.5f64..1.5,
    ) {
        let prec = Sym2::new(C64::new(qm[0][0], b11), C64::new(qm[0][1], b12), C64::new(qm[1][1], b22));
        let g2 = Gaussian2D::new(C64::new(1.0, 0.0), [mu1.into(), mu2.into()], prec).unwrap();
        let g1 = Gaussian1D::new(C64::new(1.0, 0.0), mu.into(), C64::new(q, qi)).unwrap();
        let r = special_integral(&g2, &g1).unwrap();
        let closed = r.prefactor() * (-0.5 * (x2 - r.nu) * (x2 - r.nu) / r.sigma2).exp();
        let (num, _) = integrate(|x| g2.eval([x, x2]) * g1.eval(x), -40.0, 40.0, 1e-300, 1e-14);
        let num = num / (2.0 * PI).sqrt();
        prop_assert!((closed - num).norm() < 1e-10 * num.norm(), "{closed} vs {num}");
    }

    #[test]
    fn cx_round_trip(delta in 0.15f64..0.6) {
        let a = make_comb(LogicalLabel::Plus, delta, 3).unwrap();
        let b = make_comb(LogicalLabel::Zero, delta, 3).unwrap();
        let start = SpikeState::Two(product(&a, &b).unwrap());
        let there = apply_gate(&start, &GateSpec::cx()).unwrap();
        let back = apply_gate(&there, &GateSpec::cx_inverse()).unwrap().into_two().unwrap();
        let start = start.into_two().unwrap();
        prop_assert_eq!(back.len(), start.len());
        for (x, y) in back.spikes().iter().zip(start.spikes()) {
            prop_assert!((x.log_amplitude() - y.log_amplitude()).norm() < 1e-13 * (1.0 + y.log_amplitude().norm()));
            for k in 0..2 {
                prop_assert!((x.mean[k] - y.mean[k]).norm() < 1e-13 * (1.0 + y.mean[k].norm()));
            }
        }
    }

    #[test]
    fn beam_splitter_keeps_isotropic_precision(delta in 0.15f64..0.6) {
        let (bell, _) = bell_qunaught(delta, 3).unwrap();
        let d = 1.0 / (delta * delta);
        for s in bell.spikes() {
            let p = s.precision;
            prop_assert!(rel(p.a11.re, d) < 1e-15 && rel(p.a22.re, d) < 1e-15);
            prop_assert!(p.a12.norm() < 1e-15 * d && p.a11.im == 0.0 && p.a22.im == 0.0);
        }
    }

    #[test]
    fn standard_widths_are_bracketed(sq in 0.01f64..10.0, sp in 0.01f64..10.0, delta in 0.1f64..0.5) {
        let d2 = delta * delta;
        let r = widths_standard(delta, sq, sp);
        prop_assert!(r.sigma_out_q_sq > d2 && r.sigma_out_p_sq < d2);
        let q = [[2.0 / d2, -1.0 / d2], [-1.0 / d2, 1.0 / d2]];
        let p = [[1.0 / d2, 1.0 / d2], [1.0 / d2, 2.0 / d2]];
        let p_flipped = [[1.0 / d2, -1.0 / d2], [-1.0 / d2, 2.0 / d2]];
        prop_assert_eq!(r.sigma_out_q_sq, width_out_matrix(q, 1.0 / (sq * sq)));
        prop_assert_eq!(r.sigma_out_p_sq, width_out_matrix(p, 1.0 / (sp * sp)));
        prop_assert!(rel(width_out_matrix(p_flipped, 1.0 / (sp * sp)), r.sigma_out_p_sq) < 1e-15);
        let swapped = widths_standard_swapped(delta, sp, sq);
        prop_assert!(rel(swapped.sigma_out_q_sq, r.sigma_out_p_sq) < 1e-14);
        prop_assert!(rel(swapped.sigma_out_p_sq, r.sigma_out_q_sq) < 1e-14);
        prop_assert!((r.squeezing_db_q - (-20.0 * r.r_q / 10f64.ln() - 10.0 * d2.log10())).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn grid_gates_preserve_norm(psi in random_state(16, 3)) {
        let n0 = psi.norm();
        let steps = [
            fourier_mode(&psi, 1, Direction::Forward).unwrap(),
            apply_cx_grid(&psi, 0, 2, 1).unwrap(),
            apply_cz_grid(&psi, 1, 2).unwrap(),
            apply_bs_grid(&psi, 0, 1).unwrap(),
            apply_parity(&psi, 2).unwrap(),
        ];
        for s in &steps {
            prop_assert!(rel(s.norm(), n0) < 1e-12);
        }
    }

    #[test]
    fn fourier_round_trip(psi in random_state(32, 2)) {
        let f = fourier_mode(&psi, 0, Direction::Forward).unwrap();
        let back = fourier_mode(&f, 0, Direction::Inverse).unwrap();
        prop_assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn conjugated_cz_is_inverse_cx(psi in random_state(16, 3)) {
        let lhs = fourier_mode(&psi, 0, Direction::Forward).unwrap();
        let lhs = apply_cz_grid(&lhs, 2, 0).unwrap();
        let lhs = fourier_mode(&lhs, 0, Direction::Inverse).unwrap();
        let rhs = apply_cx_grid(&psi, 2, 0, -1).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn kernel_equals_circuit(psi in random_state(32, 1), i1 in 0usize..32, i2 in 0usize..32) {
        let g = Grid1D::self_dual(32).unwrap();
        let (sup, _) = bell_qunaught(0.4, 6).unwrap();
        let bell = sample_2d(&sup, [g, g], SupportPolicy::Truncate).unwrap();
        let a = simulate_knill_cx(&psi, &bell, i1, i2).unwrap().state;
        let b = simulate_knill_cx_kernel(&psi, &bell, i1, i2).unwrap().state;
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-8 * a.max_abs().max(1e-300));
    }

    #[test]
    fn wigner_marginal_is_density(psi in random_state(32, 1)) {
        let w = wigner(&psi).unwrap();
        let m = w.q_marginal();
        for (v, d) in psi.values().iter().zip(&m) {
            prop_assert!((v.norm_sqr() - d).abs() < 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn steane_matches_knill_on_combs(shift in -1.0f64..1.0, label in prop::sample::select(vec![
        LogicalLabel::Zero, LogicalLabel::One, LogicalLabel::Plus, LogicalLabel::Minus,
    ])) {
        let g = Grid1D::self_dual(64).unwrap();
        let comb = sample_comb(label, 0.35, g).unwrap();
        let input = gkp_core::grid::apply_displacement(&comb, 0, shift, 0.0).unwrap();
        let mid = g.n() / 2;
        let steane = simulate_steane(&input, 0.35, mid, mid).unwrap().state;
        let bell = grid_bell_standard(g, 0.35).unwrap();
        let knill = simulate_knill_cx(&input, &bell, mid, mid).unwrap().state;
        prop_assert!(steane.aligned_diff(&knill).unwrap() < 1e-6);
    }
}

#[test]
fn bell_standard_means_on_lattice() {
    let (bell, _) = bell_standard(0.3, 4).unwrap();
    let s = PI.sqrt();
    for spike in bell.spikes() {
        let m = spike.mean[0].re / s;
        let n2 = (spike.mean[1].re / s - m) / 2.0;
        assert!((m - m.round()).abs() < 1e-12 && (n2 - n2.round()).abs() < 1e-12, "{spike:?}");
        assert_eq!(spike.mean[0].im, 0.0);
    }
}

#[test]
fn zero_envelope_ratio() {
    let delta: f64 = 0.3;
    let comb = make_comb(LogicalLabel::Zero, delta, 5).unwrap();
    let sp = comb.spikes();
    for w in sp.windows(2) {
        let (a, b) = (w[0].mean.re, w[1].mean.re);
        let ratio = (w[1].log_amplitude() - w[0].log_amplitude()).re;
        assert!((ratio - (-delta * delta * (b * b - a * a) / 2.0)).abs() < 1e-12);
    }
}

#[test]
fn point_transform_preserves_norm() {
    let g = Grid1D::with_extent(1024, 34.0).unwrap();
    let c = make_comb(LogicalLabel::Qunaught, 0.4, 6).unwrap();
    let state = SpikeState::Two(product(&c, &c).unwrap());
    let before =
        sample_2d(&state.clone().into_two().unwrap(), [g, g], SupportPolicy::Truncate).unwrap().norm();
    for m in [[[1.0, 0.0], [1.0, 1.0]], [[2.0, 0.0], [0.0, 0.5]], [[0.0, 1.0], [1.0, 0.0]]] {
        let after = apply_gate(&state, &GateSpec::PointTransform(m)).unwrap().into_two().unwrap();
        let after = sample_2d(&after, [g, g], SupportPolicy::Truncate).unwrap().norm();
        assert!(rel(after, before) < 1e-10, "{m:?}: {after} vs {before}");
    }
}
