use super::fft::{convolve, fourier_mode, Direction};
use super::gates::{apply_bs_grid, apply_cx_grid, apply_cz_grid, apply_displacement, apply_parity};
use super::homodyne::{homodyne_slice, Basis};
use super::{sample_comb, Grid1D, GridWavefunction};
use crate::error::{Error, Result};
use crate::model::LogicalLabel;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Corrected state together with the syndrome values the outcome indices
/// stand for.
#[derive(Debug, Clone, PartialEq)]
pub struct KnillOutput {
    pub state: GridWavefunction,
    pub s1: f64,
    pub s2: f64,
}

fn check_knill_inputs(psi_in: &GridWavefunction, bell: &GridWavefunction) -> Result<Grid1D> {
    if psi_in.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi_in.rank() });
    }
    if bell.rank() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: bell.rank() });
    }
    let g = psi_in.grids[0];
    if !g.approx_eq(&bell.grids[0]) {
        return Err(Error::GridMismatch(format!(
            "input grid {g:?} differs from the first Bell mode {:?}",
            bell.grids[0]
        )));
    }
    if g.center() != 0.0 {
        return Err(Error::AsymmetricGrid(g.center()));
    }
    Ok(g)
}

fn check_index(idx: usize, n: usize) -> Result<()> {
    if idx < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: idx, len: n })
    }
}

/// Knill teleportation with a `CX₂₁†` coupling, simulated gate by gate on the
/// three-mode grid.
pub fn simulate_knill_cx(
    psi_in: &GridWavefunction,
    bell: &GridWavefunction,
    s1_idx: usize,
    s2_idx: usize,
) -> Result<KnillOutput> {
    let g = check_knill_inputs(psi_in, bell)?;
    check_index(s1_idx, g.n())?;
    check_index(s2_idx, g.n())?;
    let full = psi_in.product(bell);
    let coupled = apply_cx_grid(&full, 1, 0, -1)?;
    let after_q = homodyne_slice(&coupled, 0, Basis::Q, s1_idx)?;
    let state = homodyne_slice(&after_q, 0, Basis::P, s2_idx)?;
    Ok(KnillOutput { state, s1: g.point(s1_idx), s2: g.momentum_grid().point(s2_idx) })
}

/// Shared contraction `(1/√2π) Σ_{q'} dq Φ(q', q'') ψ(q' + s₁) e^{-iφ(q')}`.
fn knill_contract(
    psi_in: &GridWavefunction,
    bell: &GridWavefunction,
    s1_idx: usize,
    phase: impl Fn(f64) -> f64,
) -> Result<GridWavefunction> {
    let g = psi_in.grids[0];
    let n = g.n();
    let shift = s1_idx as isize - (n / 2) as isize;
    let out_grid = bell.grids[1];
    let m = out_grid.n();
    let weight = g.dq() / (2.0 * PI).sqrt();
    let mut out = vec![C64::new(0.0, 0.0); m];
    for j in 0..n {
        let src = (j as isize + shift).rem_euclid(n as isize) as usize;
        let w = psi_in.values[src] * C64::from_polar(weight, -phase(g.point(j)));
        if w.norm() == 0.0 {
            continue;
        }
        for (o, b) in out.iter_mut().zip(&bell.values[j * m..(j + 1) * m]) {
            *o += w * b;
        }
    }
    GridWavefunction::new(vec![out_grid], out)
}

/// Kernel form of `simulate_knill_cx`: `D(-s)` on the input followed by the
/// contraction with the Bell amplitudes. Shifts by `s₁` wrap around the torus
/// exactly as the gate-level `CX` does.
pub fn simulate_knill_cx_kernel(
    psi_in: &GridWavefunction,
    bell: &GridWavefunction,
    s1_idx: usize,
    s2_idx: usize,
) -> Result<KnillOutput> {
    let g = check_knill_inputs(psi_in, bell)?;
    check_index(s1_idx, g.n())?;
    check_index(s2_idx, g.n())?;
    let s2 = g.momentum_grid().point(s2_idx);
    let state = knill_contract(psi_in, bell, s1_idx, |q| s2 * q)?;
    Ok(KnillOutput { state, s1: g.point(s1_idx), s2 })
}

/// Knill teleportation with a beam-splitter coupling, outcomes rescaled by
/// `√2` and the measurement density factor `1/√2` included.
pub fn simulate_knill_bs(
    psi_in: &GridWavefunction,
    bell: &GridWavefunction,
    s1_idx: usize,
    s2_idx: usize,
) -> Result<KnillOutput> {
    let g = check_knill_inputs(psi_in, bell)?;
    check_index(s1_idx, g.n())?;
    check_index(s2_idx, g.n())?;
    let s1 = g.point(s1_idx);
    let s2 = g.momentum_grid().point(s2_idx);
    // The q-projection pins q = q' + s₁; the p-projection of (q + q')/√2 at
    // s₂/√2 contributes e^{-i s₂ (q + q')/2}.
    let state = knill_contract(psi_in, bell, s1_idx, |q| 0.5 * s2 * (2.0 * q + s1))?;
    Ok(KnillOutput { state, s1, s2 })
}

/// Steane-type correction with two `|0⟩_Δ` ancillas, on a self-dual grid.
pub fn simulate_steane(
    psi_in: &GridWavefunction,
    ancilla_delta: f64,
    s1_idx: usize,
    s2_idx: usize,
) -> Result<KnillOutput> {
    if psi_in.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi_in.rank() });
    }
    let g = psi_in.grids[0];
    if !g.is_self_dual() {
        return Err(Error::GridMismatch(format!("Fourier gates need a self-dual grid, got {g:?}")));
    }
    check_index(s1_idx, g.n())?;
    check_index(s2_idx, g.n())?;
    let zero = sample_comb(LogicalLabel::Zero, ancilla_delta, g)?;
    let mut state = psi_in.product(&zero).product(&zero);
    state = apply_parity(&state, 2)?;
    state = apply_cz_grid(&state, 1, 0)?;
    state = fourier_mode(&state, 0, Direction::Forward)?;
    state = apply_cz_grid(&state, 2, 0)?;
    state = fourier_mode(&state, 0, Direction::Inverse)?;
    let after_1 = homodyne_slice(&state, 1, Basis::P, s1_idx)?;
    let out = homodyne_slice(&after_1, 1, Basis::P, s2_idx)?;
    let p = g.momentum_grid();
    let (s1, s2) = (p.point(s1_idx), p.point(s2_idx));
    let state = apply_displacement(&out, 0, -s1, -s2)?;
    Ok(KnillOutput { state, s1, s2 })
}

/// Steane projector at zero syndrome as two FFT convolutions:
/// `(1/√2π) 𝓕⁻¹[𝓕[ψ] ∗ ψ₀] ∗ ψ₀`.
pub fn steane_fft_project(psi: &GridWavefunction, psi0: &GridWavefunction) -> Result<GridWavefunction> {
    if psi.rank() != 1 || psi0.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.rank().max(psi0.rank()) });
    }
    psi.check_same_grids(psi0)?;
    let g = psi.grids[0];
    if !g.is_self_dual() {
        return Err(Error::GridMismatch(format!(
            "convolving momentum and position amplitudes needs a self-dual grid, got {g:?}"
        )));
    }
    let p = fourier_mode(psi, 0, Direction::Forward)?;
    let conv = convolve(&p.values, &psi0.values, g.dq());
    let back = fourier_mode(&GridWavefunction::new(vec![g], conv)?, 0, Direction::Inverse)?;
    let out = convolve(&back.values, &psi0.values, g.dq());
    let s = 1.0 / (2.0 * PI).sqrt();
    GridWavefunction::new(vec![g], out.into_iter().map(|v| v * s).collect())
}

/// `CX₁₂ F₁ |0, 0⟩_Δ` prepared with grid gates on a self-dual grid.
pub fn grid_bell_standard(grid: Grid1D, delta: f64) -> Result<GridWavefunction> {
    if !grid.is_self_dual() {
        return Err(Error::GridMismatch(format!("Fourier gate needs a self-dual grid, got {grid:?}")));
    }
    let zero = sample_comb(LogicalLabel::Zero, delta, grid)?;
    let plus = fourier_mode(&zero, 0, Direction::Inverse)?;
    apply_cx_grid(&plus.product(&zero), 0, 1, 1)
}

/// `BS₁₂ |∅, ∅⟩_Δ` prepared with the grid beam splitter.
pub fn grid_bell_qunaught(grid: Grid1D, delta: f64) -> Result<GridWavefunction> {
    let c = sample_comb(LogicalLabel::Qunaught, delta, grid)?;
    apply_bs_grid(&c.product(&c), 0, 1)
}

#[cfg(test)]
mod tests {
    use super::super::{sample_1d, SupportPolicy};
    use super::*;
    use crate::gaussian::{Gaussian1D, SpikeSuperposition1D};

    fn coherent(g: Grid1D, a: f64) -> GridWavefunction {
        GridWavefunction::from_fn_1d(g, |q| C64::new((-0.5 * (q - a).powi(2)).exp(), 0.0))
    }

    #[test]
    fn kernel_matches_circuit() {
        let g = Grid1D::self_dual(64).unwrap();
        let bell = grid_bell_standard(g, 0.4).unwrap();
        let psi = GridWavefunction::from_fn_1d(g, |q| C64::new((-(q - 0.4).powi(2)).exp(), 0.2 * q));
        for (i1, i2) in [(32, 32), (35, 30), (10, 50)] {
            let c = simulate_knill_cx(&psi, &bell, i1, i2).unwrap();
            let k = simulate_knill_cx_kernel(&psi, &bell, i1, i2).unwrap();
            assert!(c.state.max_abs_diff(&k.state).unwrap() < 1e-10);
            assert_eq!((c.s1, c.s2), (k.s1, k.s2));
        }
    }

    #[test]
    fn bs_variant_differs_by_phase() {
        let g = Grid1D::self_dual(64).unwrap();
        let bell = grid_bell_standard(g, 0.4).unwrap();
        let psi = coherent(g, 0.3);
        let a = simulate_knill_cx_kernel(&psi, &bell, 36, 29).unwrap();
        let b = simulate_knill_bs(&psi, &bell, 36, 29).unwrap();
        let phase = C64::from_polar(1.0, -0.5 * a.s1 * a.s2);
        assert!(b.state.max_abs_diff(&a.state.scaled(phase)).unwrap() < 1e-12);
    }

    #[test]
    fn steane_equals_knill_with_standard_bell() {
        let g = Grid1D::self_dual(64).unwrap();
        let bell = grid_bell_standard(g, 0.4).unwrap();
        let psi = coherent(g, 0.5);
        for (i1, i2) in [(32, 32), (34, 31)] {
            let s = simulate_steane(&psi, 0.4, i1, i2).unwrap();
            let k = simulate_knill_cx(&psi, &bell, i1, i2).unwrap();
            assert!(s.state.aligned_diff(&k.state).unwrap() < 1e-10);
        }
    }

    #[test]
    fn fft_projector_matches_steane() {
        let g = Grid1D::self_dual(64).unwrap();
        let psi = coherent(g, -0.3);
        let zero = sample_comb(LogicalLabel::Zero, 0.4, g).unwrap();
        let proj = steane_fft_project(&psi, &zero).unwrap();
        let s = simulate_steane(&psi, 0.4, 32, 32).unwrap();
        assert!(proj.aligned_diff(&s.state).unwrap() < 1e-10);
    }

    #[test]
    fn fft_projector_zero_in_zero_out() {
        let g = Grid1D::self_dual(64).unwrap();
        let zero = sample_comb(LogicalLabel::Zero, 0.4, g).unwrap();
        let out = steane_fft_project(&GridWavefunction::zeros(vec![g]), &zero).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn rejects_mismatched_grids() {
        let g = Grid1D::self_dual(64).unwrap();
        let h = Grid1D::self_dual(128).unwrap();
        let bell = GridWavefunction::zeros(vec![h, h]);
        let psi = GridWavefunction::zeros(vec![g]);
        assert!(matches!(simulate_knill_cx(&psi, &bell, 0, 0), Err(Error::GridMismatch(_))));
        let psi = sample_1d(
            &SpikeSuperposition1D::new(vec![Gaussian1D::real(1.0, 0.0, 1.0).unwrap()]),
            h,
            SupportPolicy::Strict,
        )
        .unwrap();
        assert!(matches!(simulate_knill_cx(&psi, &bell, 128, 0), Err(Error::IndexOutOfRange { .. })));
    }
}
