use super::fft::{fourier_mode_to, Direction};
use super::GridWavefunction;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

fn check_pair(psi: &GridWavefunction, a: usize, b: usize) -> Result<()> {
    psi.check_mode(a)?;
    psi.check_mode(b)?;
    if a == b {
        return Err(Error::InvalidParameter(format!("two-mode gate needs distinct modes, got {a} twice")));
    }
    Ok(())
}

/// `ψ(…, q_targ, …) ↦ ψ(…, q_targ - w·q_ctrl, …)`, applied as a momentum
/// phase `e^{-i w q_ctrl p_targ}`.
pub fn apply_shear(psi: &GridWavefunction, ctrl: usize, targ: usize, w: f64) -> Result<GridWavefunction> {
    check_pair(psi, ctrl, targ)?;
    let center = psi.grids[targ].center();
    let mut out = fourier_mode_to(psi, targ, Direction::Forward, 0.0)?;
    out.multiply_pairwise(ctrl, targ, |qc, pt| C64::from_polar(1.0, -w * qc * pt));
    fourier_mode_to(&out, targ, Direction::Inverse, center)
}

/// `CX` (`sign = 1`) or `CX†` (`sign = -1`): `|q_c, q_t⟩ ↦ |q_c, q_t ± q_c⟩`.
pub fn apply_cx_grid(
    psi: &GridWavefunction,
    ctrl: usize,
    targ: usize,
    sign: i32,
) -> Result<GridWavefunction> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter(format!("CX sign must be ±1, got {sign}")));
    }
    apply_shear(psi, ctrl, targ, sign as f64)
}

/// Multiplication by `e^{i q_i q_j}`.
pub fn apply_cz_grid(psi: &GridWavefunction, i: usize, j: usize) -> Result<GridWavefunction> {
    check_pair(psi, i, j)?;
    let mut out = psi.clone();
    out.multiply_pairwise(i, j, |a, b| C64::from_polar(1.0, a * b));
    Ok(out)
}

/// `q ↦ -q` on one mode, by index reversal on the torus.
pub fn apply_parity(psi: &GridWavefunction, mode: usize) -> Result<GridWavefunction> {
    psi.check_mode(mode)?;
    let c = psi.grids[mode].center();
    if c != 0.0 {
        return Err(Error::AsymmetricGrid(c));
    }
    let n = psi.grids[mode].n();
    let mut out = psi.clone();
    out.map_lanes(mode, |lane| {
        let orig = lane.to_vec();
        for (j, v) in lane.iter_mut().enumerate() {
            *v = orig[(n - j) % n];
        }
    });
    Ok(out)
}

/// `ψ ↦ ψ ∘ R(θ)` on modes `(i, j)` with `R(θ) = [[cos θ, -sin θ], [sin θ, cos θ]]`,
/// built from three shears.
pub fn apply_rotation(psi: &GridWavefunction, i: usize, j: usize, theta: f64) -> Result<GridWavefunction> {
    check_pair(psi, i, j)?;
    if psi.grids[i] != psi.grids[j] {
        return Err(Error::GridMismatch(format!(
            "rotation needs identical grids, got {:?} and {:?}",
            psi.grids[i], psi.grids[j]
        )));
    }
    // R(θ) = [[1, -t], [0, 1]] [[1, 0], [s, 1]] [[1, -t], [0, 1]].
    let t = (0.5 * theta).tan();
    let s = theta.sin();
    let a = apply_shear(psi, j, i, t)?;
    let b = apply_shear(&a, i, j, -s)?;
    apply_shear(&b, j, i, t)
}

/// Beam splitter `|q, q'⟩ ↦ |(q+q')/√2, (q-q')/√2⟩`, i.e. `ψ ↦ ψ(Mx)` with
/// `M = [[1, 1], [1, -1]]/√2`. `M` is a 45° rotation followed by a reflection
/// of mode `j`, so the gate is its own inverse.
pub fn apply_bs_grid(psi: &GridWavefunction, i: usize, j: usize) -> Result<GridWavefunction> {
    let rotated = apply_rotation(psi, i, j, std::f64::consts::FRAC_PI_4)?;
    apply_parity(&rotated, j)
}

/// `D(s) = X(s₁) Z(s₂)`: `ψ(q) ↦ e^{i s₂ (q - s₁)} ψ(q - s₁)`.
pub fn apply_displacement(psi: &GridWavefunction, mode: usize, s1: f64, s2: f64) -> Result<GridWavefunction> {
    psi.check_mode(mode)?;
    let mut out = psi.clone();
    let xs = psi.grids[mode].points();
    out.map_lanes(mode, |lane| {
        for (v, q) in lane.iter_mut().zip(&xs) {
            *v *= C64::from_polar(1.0, s2 * q);
        }
    });
    if s1 == 0.0 {
        return Ok(out);
    }
    let center = psi.grids[mode].center();
    let mut p = fourier_mode_to(&out, mode, Direction::Forward, 0.0)?;
    let ps = p.grids[mode].points();
    p.map_lanes(mode, |lane| {
        for (v, k) in lane.iter_mut().zip(&ps) {
            *v *= C64::from_polar(1.0, -k * s1);
        }
    });
    fourier_mode_to(&p, mode, Direction::Inverse, center)
}
