//! Numerical acceptance checks tying the closed forms to the grid simulator.

use crate::analysis::{heisenberg_gain, mean_out, width_out_matrix, widths_standard};
use crate::error::Result;
use crate::gaussian::{eval_nd, project_superposition, Gaussian1D, Gaussian2D, SpikeSuperposition1D, Sym2};
use crate::gaussian::{product_reduce, special_integral};
use crate::grid::{
    apply_displacement, coherent_state, fourier_mode, grid_bell_qunaught, grid_bell_standard, mehler_damp,
    peak_fit, peak_fit_local, sample_1d, sample_2d, sample_comb, simulate_knill_bs, simulate_knill_cx,
    simulate_knill_cx_kernel, simulate_steane, Direction, Grid1D, GridWavefunction, Peak, SupportPolicy,
};
use crate::model::{
    bell_qunaught, bell_standard, make_comb, make_custom_comb, BellPrecision, BellProvenance, LatticeSpec,
    LogicalLabel,
};
use crate::quadrature::integrate;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Fewer random instances for the lemma checks.
    pub quick: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 1, quick: false }
    }
}

impl VerifyOptions {
    fn instances(&self) -> usize {
        if self.quick {
            20
        } else {
            100
        }
    }
}

type Outcome = Result<(bool, String)>;

fn wrap(id: u8, name: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult { id, name, passed, detail },
        Err(e) => CheckResult { id, name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    vec![
        steane_knill_equivalence(),
        knill_variant_phase(opts),
        product_lemma(opts),
        special_integral_lemma(opts),
        qunaught_correction(),
        standard_widths(),
        gain_predicate(),
        mean_shift(),
        projection_vs_grid(),
        mehler_checks(),
    ]
}

const DELTA: f64 = 0.3;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn gaussian_input(grid: Grid1D, mean: f64, variance: f64) -> GridWavefunction {
    GridWavefunction::from_fn_1d(grid, |q| C64::new((-(q - mean).powi(2) / (2.0 * variance)).exp(), 0.0))
}

/// Bell-state spike count covering `grid` in both modes.
fn bell_n_max(grid: &Grid1D) -> usize {
    (grid.hi().abs().max(grid.lo().abs()) / PI.sqrt()).ceil() as usize + 2
}

fn sqrt_pi_lattice(grid: &Grid1D) -> Result<LatticeSpec> {
    LatticeSpec::new(PI.sqrt(), 0.0, (grid.hi() / PI.sqrt()).floor() as usize)
}

fn worst_rel(peaks: &[Peak], target: f64) -> f64 {
    peaks.iter().map(|p| rel(p.variance, target)).fold(0.0, f64::max)
}

/// Steane correction against Knill with the `CX`-prepared Bell state.
pub fn steane_knill_equivalence() -> CheckResult {
    wrap(1, "steane-knill equivalence", || {
        let start = Instant::now();
        let g = Grid1D::self_dual(128)?;
        let input = coherent_state(g, 1.0);
        let mid = g.n() / 2;
        let steane = simulate_steane(&input, DELTA, mid, mid)?;
        let bell = grid_bell_standard(g, DELTA)?;
        let knill = simulate_knill_cx(&input, &bell, mid, mid)?;
        let diff = steane.state.aligned_diff(&knill.state)?;
        let secs = start.elapsed().as_secs_f64();
        Ok((diff < 1e-6 && secs < 30.0, format!("max |Δψ| = {diff:.2e} (< 1e-6), {secs:.2} s (< 30 s)")))
    })
}

/// Beam-splitter Knill output equals the `CX` kernel output up to
/// `e^{-i s₁ s₂ / 2}`.
pub fn knill_variant_phase(opts: &VerifyOptions) -> CheckResult {
    wrap(2, "knill variant phase", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let g = Grid1D::self_dual(64)?;
        let input = coherent_state(g, 0.5);
        let bell = grid_bell_qunaught(g, DELTA)?;
        let mid = g.n() as i64 / 2;
        let mut worst = 0.0f64;
        let mut worst_phase = 0.0f64;
        for _ in 0..10 {
            let i1 = (mid + rng.random_range(-8..=8)) as usize;
            let i2 = (mid + rng.random_range(-8..=8)) as usize;
            let k1 = simulate_knill_cx_kernel(&input, &bell, i1, i2)?;
            let k2 = simulate_knill_bs(&input, &bell, i1, i2)?;
            let phase = C64::from_polar(1.0, -0.5 * k1.s1 * k1.s2);
            let expected = k1.state.scaled(phase);
            let scale = k1.state.max_abs();
            worst = worst.max(k2.state.max_abs_diff(&expected)? / scale);
            let j = k1.state.argmax();
            let ratio = k2.state.values()[j] / k1.state.values()[j];
            let dphi = (ratio * phase.conj()).arg().abs();
            worst_phase = worst_phase.max(dphi);
        }
        Ok((
            worst < 1e-8 && worst_phase < 1e-8,
            format!("relative residual {worst:.2e} (< 1e-8), phase error {worst_phase:.2e} rad"),
        ))
    })
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.transpose() * &m + DMatrix::identity(n, n) * 0.5
}

fn to_c(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Product reduction against direct evaluation of both sides.
pub fn product_lemma(opts: &VerifyOptions) -> CheckResult {
    wrap(3, "gaussian product reduction", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
        let mut worst = 0.0f64;
        for t in 0..opts.instances() {
            let n = 1 + t % 3;
            let a = to_c(&random_spd(&mut rng, n));
            let b = to_c(&random_spd(&mut rng, n));
            let delta = DVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.5..1.5), 0.0));
            let red = product_reduce(&delta, &a, &b)?;
            let zero = DVector::zeros(n);
            for _ in 0..100 {
                let x = DVector::from_fn(n, |_, _| C64::new(rng.random_range(-2.0..2.0), 0.0));
                let lhs = eval_nd(&x, &delta, &a) * eval_nd(&x, &zero, &b);
                let rhs = eval_nd(&zero, &delta, &red.d) * eval_nd(&x, &red.alpha, &red.v);
                worst = worst.max((lhs - rhs).norm() / lhs.norm());
            }
        }
        Ok((worst < 1e-12, format!("worst relative error {worst:.2e} (< 1e-12)")))
    })
}

/// Partial Gaussian integral against adaptive quadrature, and its width and
/// mean against the correction formulas.
pub fn special_integral_lemma(opts: &VerifyOptions) -> CheckResult {
    wrap(4, "partial gaussian integral", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(4));
        let mut worst = 0.0f64;
        let mut worst_formula = 0.0f64;
        for _ in 0..opts.instances() {
            let m = random_spd(&mut rng, 2);
            let qm = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
            let q = rng.random_range(0.3..3.0);
            let mu = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
            let mu_in = rng.random_range(-1.5..1.5);
            let x2 = rng.random_range(-2.0..2.0);
            let g2 = Gaussian2D::new(
                C64::new(1.0, 0.0),
                [mu[0].into(), mu[1].into()],
                Sym2::real(qm[0][0], qm[0][1], qm[1][1]),
            )?;
            let g1 = Gaussian1D::real(1.0, mu_in, q)?;
            let r = special_integral(&g2, &g1)?;
            let closed = r.prefactor() * (-0.5 * (x2 - r.nu).powi(2) / r.sigma2).exp();
            let (num, _) = integrate(|x1| g2.eval([x1, x2]) * g1.eval(x1), -40.0, 40.0, 1e-300, 1e-14);
            let num = num / (2.0 * PI).sqrt();
            worst = worst.max((closed - num).norm() / num.norm());
            let bell = BellPrecision { q: qm, provenance: BellProvenance::Custom { transform: None } };
            let s2 = width_out_matrix(qm, q);
            let nu = mean_out(mu[0], mu[1], mu_in, &bell, q);
            worst_formula =
                worst_formula.max((r.sigma2 - s2).norm() / s2).max((r.nu - nu).norm() / nu.abs().max(1.0));
        }
        Ok((
            worst < 1e-10 && worst_formula < 1e-14,
            format!("quadrature {worst:.2e} (< 1e-10), formulas {worst_formula:.2e} (< 1e-14)"),
        ))
    })
}

/// Knill correction with the beam-splitter Bell state restores `Δ²` widths
/// in both quadratures regardless of the input width.
pub fn qunaught_correction() -> CheckResult {
    wrap(5, "qunaught bell correction", || {
        let g = Grid1D::self_dual(128)?;
        let (sup, _) = bell_qunaught(DELTA, bell_n_max(&g))?;
        let bell = sample_2d(&sup, [g, g], SupportPolicy::Truncate)?;
        let lattice = sqrt_pi_lattice(&g)?;
        let target = DELTA * DELTA;
        let mid = g.n() / 2;
        let (mut wq, mut wp, mut shift) = (0.0f64, 0.0f64, 0.0f64);
        for var_in in [0.04, 0.09, 0.25] {
            let out = simulate_knill_cx(&gaussian_input(g, 0.0, var_in), &bell, mid, mid)?.state;
            let q_peaks = peak_fit(&out, &lattice)?;
            let p_peaks = peak_fit(&fourier_mode(&out, 0, Direction::Forward)?, &lattice)?;
            wq = wq.max(worst_rel(&q_peaks, target));
            wp = wp.max(worst_rel(&p_peaks, target));
            let moved = simulate_knill_cx(&gaussian_input(g, 0.05, var_in), &bell, mid, mid)?.state;
            let moved_peaks = peak_fit(&moved, &lattice)?;
            shift = shift.max(max_mean_shift(&q_peaks, &moved_peaks));
        }
        Ok((
            wq < 0.01 && wp < 0.01 && shift < 1e-3,
            format!(
                "q {:.2}%, p {:.2}% off Δ² (< 1%), mean drift {shift:.1e} (< 1e-3)",
                100.0 * wq,
                100.0 * wp
            ),
        ))
    })
}

/// Largest `|Δμ|` between peaks of two fits, paired by nearest mean.
fn max_mean_shift(a: &[Peak], b: &[Peak]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|r| (r.mean - p.mean).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Steane correction of a `|0⟩_Δ` input: fitted widths against the closed
/// forms, and the wide-input limit `2Δ²`.
pub fn standard_widths() -> CheckResult {
    wrap(6, "standard bell widths", || {
        let d2 = DELTA * DELTA;
        let g = Grid1D::self_dual(128)?;
        let mid = g.n() / 2;
        let report = widths_standard(DELTA, DELTA, DELTA);
        let out = simulate_steane(&sample_comb(LogicalLabel::Zero, DELTA, g)?, DELTA, mid, mid)?.state;
        let q_lattice = LogicalLabel::Zero.lattice((g.hi() / (2.0 * PI.sqrt())) as usize);
        let q_peaks = peak_fit(&out, &q_lattice)?;
        let p_peaks = peak_fit(&fourier_mode(&out, 0, Direction::Forward)?, &sqrt_pi_lattice(&g)?)?;
        let eq = worst_rel(&q_peaks, 0.135);
        let ep = worst_rel(&p_peaks, 0.060);
        let closed = (rel(report.sigma_out_q_sq, 0.135), rel(report.sigma_out_p_sq, 0.060));

        let limit = widths_standard(DELTA, 100.0 * DELTA, DELTA).sigma_out_q_sq;
        let e_limit = rel(limit, 2.0 * d2);
        let wide = gaussian_input(g, 0.0, (100.0 * DELTA).powi(2));
        let wide_out = simulate_steane(&wide, DELTA, mid, mid)?.state;
        let e_wide = worst_rel(&peak_fit_local(&wide_out, &sqrt_pi_lattice(&g)?)?, 2.0 * d2);
        Ok((
            eq < 0.02 && ep < 0.02 && closed.0 < 1e-12 && closed.1 < 1e-12 && e_limit < 1e-3 && e_wide < 0.03,
            format!(
                "grid q {:.2}%, p {:.2}% (< 2%); limit 2Δ²: closed {e_limit:.1e} (< 1e-3), grid {:.2}% (< 3%)",
                100.0 * eq,
                100.0 * ep,
                100.0 * e_wide
            ),
        ))
    })
}

/// Sign of the squeezing gain relative to one on a log grid of input ratios.
pub fn gain_predicate() -> CheckResult {
    wrap(7, "heisenberg gain predicate", || {
        let axis: Vec<f64> = (0..50).map(|i| 10f64.powf(-1.0 + 2.0 * i as f64 / 49.0)).collect();
        let mut mismatches = 0;
        let mut consistency = 0.0f64;
        for &x in &axis {
            for &y in &axis {
                let gain = heisenberg_gain(x, y);
                let lhs = x * x * y * y - 1.0;
                let agree = if lhs.abs() < 1e-12 {
                    (gain - 1.0).abs() < 1e-12
                } else {
                    (gain - 1.0).signum() == lhs.signum()
                };
                if !agree {
                    mismatches += 1;
                }
                let r = widths_standard(DELTA, x * DELTA, y * DELTA);
                consistency = consistency.max(rel(r.sigma_out_q_sq * r.sigma_out_p_sq / DELTA.powi(4), gain));
            }
        }
        let g11 = heisenberg_gain(1.0, 1.0);
        let g22 = heisenberg_gain(2.0, 2.0);
        Ok((
            mismatches == 0 && g11 == 1.0 && (g22 - 1.5).abs() < 1e-14 && consistency < 1e-12,
            format!("{mismatches} sign mismatches, gain(1,1) = {g11}, gain(2,2) - 1.5 = {:.1e}", g22 - 1.5),
        ))
    })
}

/// Output peaks follow an input displacement by half its size.
pub fn mean_shift() -> CheckResult {
    wrap(8, "standard bell mean shift", || {
        let eps = 0.05;
        let d = 1.0 / (DELTA * DELTA);
        let std = BellPrecision { q: [[2.0 * d, -d], [-d, d]], provenance: BellProvenance::StandardCX };
        let closed = mean_out(0.0, 0.0, eps, &std, d) - mean_out(0.0, 0.0, 0.0, &std, d);
        let e_closed = rel(closed, eps / 2.0);

        let g = Grid1D::self_dual(128)?;
        let mid = g.n() / 2;
        let comb = sample_comb(LogicalLabel::Zero, DELTA, g)?;
        let moved = apply_displacement(&comb, 0, eps, 0.0)?;
        let lattice = LogicalLabel::Zero.lattice((g.hi() / (2.0 * PI.sqrt())) as usize);
        let base = peak_fit(&simulate_steane(&comb, DELTA, mid, mid)?.state, &lattice)?;
        let shifted = peak_fit(&simulate_steane(&moved, DELTA, mid, mid)?.state, &lattice)?;
        let mut worst = 0.0f64;
        for p in &base {
            let r = shifted
                .iter()
                .min_by(|a, b| (a.mean - p.mean).abs().total_cmp(&(b.mean - p.mean).abs()))
                .ok_or(crate::Error::EmptyResult)?;
            worst = worst.max(rel(r.mean - p.mean, eps / 2.0));
        }
        Ok((
            worst < 0.05 && e_closed < 1e-12,
            format!("grid {:.2}% off ε/2 (< 5%), closed form {e_closed:.1e}", 100.0 * worst),
        ))
    })
}

/// Symbolic projection sampled on the grid against the grid circuit.
pub fn projection_vs_grid() -> CheckResult {
    wrap(9, "symbolic projection vs grid", || {
        let g = Grid1D::self_dual(128)?;
        let mid = g.n() / 2;
        let input = SpikeSuperposition1D::new(vec![Gaussian1D::real(1.0, 0.3, 4.0)?]);
        let psi_in = sample_1d(&input, g, SupportPolicy::Strict)?;
        let mut worst = 0.0f64;
        for (bell, _) in [bell_qunaught(DELTA, bell_n_max(&g))?, bell_standard(DELTA, bell_n_max(&g))?] {
            let bell_grid = sample_2d(&bell, [g, g], SupportPolicy::Truncate)?;
            let grid_out = simulate_knill_cx(&psi_in, &bell_grid, mid, mid)?.state.normalized();
            let sym = project_superposition(&input, &bell)?;
            let sym_out = sample_1d(&sym, g, SupportPolicy::Truncate)?.normalized();
            worst = worst.max(grid_out.max_abs_diff(&sym_out)?);
        }
        Ok((worst < 1e-6, format!("normalised max |Δψ| = {worst:.2e} (< 1e-6)")))
    })
}

/// Damping kernel on the vacuum, a coherent state and a comb.
pub fn mehler_checks() -> CheckResult {
    wrap(10, "damping kernel", || {
        let g = Grid1D::with_extent(256, 10.0)?;
        let vac = coherent_state(g, 0.0);
        let e_vac = mehler_damp(&vac, DELTA)?.max_abs_diff(&vac)?;

        let g = Grid1D::with_extent(512, 12.0)?;
        let (alpha, beta) = (1.0f64, DELTA * DELTA);
        let factor = ((alpha * alpha / 2.0) * ((-2.0 * beta).exp() - 1.0)).exp();
        let expected = coherent_state(g, alpha * (-beta).exp()).scaled(C64::new(factor, 0.0));
        let e_coh = mehler_damp(&coherent_state(g, alpha), DELTA)?.max_abs_diff(&expected)?;

        let delta = 0.2;
        let g = Grid1D::with_extent(4096, 32.0)?;
        let proxy = make_custom_comb(&LogicalLabel::Zero.lattice(9), 0.02 * 0.02, 0.0)?;
        let damped = mehler_damp(&sample_1d(&proxy, g, SupportPolicy::Truncate)?, delta)?;
        let comb = sample_1d(&make_comb(LogicalLabel::Zero, delta, 8)?, g, SupportPolicy::Strict)?;
        let fid = comb.fidelity(&damped)?;
        Ok((
            e_vac < 1e-10 && e_coh < 1e-8 && fid >= 0.999,
            format!("vacuum {e_vac:.1e} (< 1e-10), coherent {e_coh:.1e} (< 1e-8), comb fidelity {fid:.5} (≥ 0.999)"),
        ))
    })
}
