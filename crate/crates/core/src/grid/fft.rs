use super::{Grid1D, GridWavefunction};
use crate::error::Result;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `ψ̃(p) = (2π)^{-1/2} ∫ e^{-ipq} ψ(q) dq`.
    Forward,
    /// `ψ(q) = (2π)^{-1/2} ∫ e^{ipq} ψ̃(p) dp`; as a gate this is `F`.
    Inverse,
}

/// Continuum Fourier transform of one mode onto the conjugate grid centred at 0.
pub fn fourier_mode(psi: &GridWavefunction, mode: usize, direction: Direction) -> Result<GridWavefunction> {
    fourier_mode_to(psi, mode, direction, 0.0)
}

/// As `fourier_mode`, with the output grid centred at `out_center`.
pub fn fourier_mode_to(
    psi: &GridWavefunction,
    mode: usize,
    direction: Direction,
    out_center: f64,
) -> Result<GridWavefunction> {
    psi.check_mode(mode)?;
    let gin = psi.grids[mode];
    // Keep self-dual grids bit-identical under the transform.
    let dp = if gin.is_self_dual() { gin.dq() } else { gin.dp() };
    let gout = Grid1D::new(gin.n(), dp, out_center)?;
    let n = gin.n();
    let s = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    // x_k y_j = c_out c_in + c_out v_j + c_in u_k + u_k v_j, with
    // u_k v_j = 2π(k - n/2)(j - n/2)/n = 2πkj/n + π(k + j) (mod 2π, n/2 even).
    let half = (n / 2) as f64;
    let pre: Vec<C64> = (0..n)
        .map(|j| {
            let v = (j as f64 - half) * gin.dq();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(sign, s * out_center * v)
        })
        .collect();
    let scale = gin.dq() / (2.0 * PI).sqrt();
    let post: Vec<C64> = (0..n)
        .map(|k| {
            let u = (k as f64 - half) * gout.dq();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(sign * scale, s * gin.center() * (u + out_center))
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut out = psi.clone();
    out.map_lanes(mode, |lane| {
        for (v, p) in lane.iter_mut().zip(&pre) {
            *v *= p;
        }
        fft.process_with_scratch(lane, &mut scratch);
        for (v, p) in lane.iter_mut().zip(&post) {
            *v *= p;
        }
    });
    out.grids[mode] = gout;
    Ok(out)
}

/// Circular convolution `(f ∗ g)(x_k) = Σ_j f(x_j) g(x_k - x_j) dq` on a
/// centre-0 grid.
pub(crate) fn convolve(f: &[C64], g: &[C64], dq: f64) -> Vec<C64> {
    let n = f.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    // Index of x_k - x_j is (k - j + n/2) mod n; re-index g so that the
    // plain cyclic convolution applies.
    let mut a = f.to_vec();
    let mut b: Vec<C64> = (0..n).map(|m| g[(m + n / 2) % n]).collect();
    fwd.process(&mut a);
    fwd.process(&mut b);
    let mut c: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    inv.process(&mut c);
    let s = dq / n as f64;
    c.iter().map(|v| v * s).collect()
}
