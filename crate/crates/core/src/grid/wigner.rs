use super::{Grid1D, GridWavefunction};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Wigner function sampled on the original q-grid and a p-grid with twice
/// as many points at half the momentum spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub q: Grid1D,
    pub p: Grid1D,
    /// Row-major, one row per q point.
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn get(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.p.n() + ip]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.q.dq() * self.p.dq()
    }

    /// `∫ W dp` at each q point.
    pub fn q_marginal(&self) -> Vec<f64> {
        self.values.chunks(self.p.n()).map(|row| row.iter().sum::<f64>() * self.p.dq()).collect()
    }
}

/// Band-limited interpolation onto a grid of half the spacing; even fine
/// indices coincide with the original points.
fn upsample(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let mut spec = values.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut padded = vec![C64::new(0.0, 0.0); 2 * n];
    padded[..n / 2].copy_from_slice(&spec[..n / 2]);
    padded[n + n / 2 + 1..].copy_from_slice(&spec[n / 2 + 1..]);
    padded[n / 2] = 0.5 * spec[n / 2];
    padded[n + n / 2] = 0.5 * spec[n / 2];
    planner.plan_fft_inverse(2 * n).process(&mut padded);
    let s = 1.0 / n as f64;
    padded.iter().map(|v| v * s).collect()
}

/// `W(q, p) = (1/π) ∫ ψ*(q + y) ψ(q - y) e^{2ipy} dy`, with `ψ = 0` off the grid.
pub fn wigner(psi: &GridWavefunction) -> Result<WignerGrid> {
    if psi.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.rank() });
    }
    let g = psi.grids()[0];
    let n = g.n();
    let m = 2 * n;
    let fine = upsample(psi.values());
    let h = 0.5 * g.dq();
    let p_grid = Grid1D::new(m, 0.5 * g.dp(), 0.0)?;
    let ifft = FftPlanner::new().plan_fft_inverse(m);
    let mut values = Vec::with_capacity(n * m);
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for j in 0..n {
        let i0 = 2 * j as isize;
        for (kk, b) in buf.iter_mut().enumerate() {
            let k = kk as isize - n as isize;
            let (a, c) = (i0 + k, i0 - k);
            *b = if a >= 0 && c >= 0 && (a as usize) < m && (c as usize) < m {
                let v = fine[a as usize].conj() * fine[c as usize];
                if kk % 2 == 0 {
                    v
                } else {
                    -v
                }
            } else {
                C64::new(0.0, 0.0)
            };
        }
        ifft.process(&mut buf);
        values.extend(buf.iter().enumerate().map(|(mm, v)| {
            let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
            sign * h / PI * v.re
        }));
    }
    Ok(WignerGrid { q: g, p: p_grid, values })
}

#[cfg(test)]
mod tests {
    use super::super::{apply_parity, coherent_state};
    use super::*;

    #[test]
    fn vacuum_peak_value() {
        let g = Grid1D::self_dual(128).unwrap();
        let w = wigner(&coherent_state(g, 0.0)).unwrap();
        let (iq, ip) = (64, 128);
        assert!(g.point(iq).abs() < 1e-15 && w.p.point(ip).abs() < 1e-15);
        assert!((w.get(iq, ip) - 1.0 / PI).abs() < 1e-6);
        let max = w.values.iter().cloned().fold(f64::MIN, f64::max);
        assert!((max - w.get(iq, ip)).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_wigner() {
        // W = (1/π) exp(-(q - q₀)² - (p - p₀)²)
        let g = Grid1D::with_extent(128, 10.0).unwrap();
        let psi = GridWavefunction::from_fn_1d(g, |q| {
            C64::from_polar(PI.powf(-0.25) * (-0.5 * (q - 1.0).powi(2)).exp(), 0.8 * q)
        });
        let w = wigner(&psi).unwrap();
        for (iq, ip) in [(64, 128), (70, 140), (60, 120)] {
            let (q, p) = (g.point(iq), w.p.point(ip));
            let expected = (-(q - 1.0).powi(2) - (p - 0.8).powi(2)).exp() / PI;
            assert!((w.get(iq, ip) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn integral_and_marginal() {
        let g = Grid1D::with_extent(128, 12.0).unwrap();
        let psi = GridWavefunction::from_fn_1d(g, |q| {
            C64::new((-(q - 1.5).powi(2)).exp() + 0.5 * (-(q + 2.0).powi(2)).exp(), 0.0)
        });
        let w = wigner(&psi).unwrap();
        assert!((w.integral() - psi.norm_sq()).abs() < 1e-6);
        for (marg, v) in w.q_marginal().iter().zip(psi.values()) {
            assert!((marg - v.norm_sqr()).abs() < 1e-6);
        }
    }

    #[test]
    fn parity_reflects_wigner() {
        let g = Grid1D::self_dual(64).unwrap();
        let psi = GridWavefunction::from_fn_1d(g, |q| C64::from_polar((-(q - 0.7).powi(2)).exp(), 0.3 * q));
        let w = wigner(&psi).unwrap();
        let wr = wigner(&apply_parity(&psi, 0).unwrap()).unwrap();
        let (n, m) = (g.n(), w.p.n());
        for iq in 1..n {
            for ip in 1..m {
                assert!((wr.get(iq, ip) - w.get(n - iq, m - ip)).abs() < 1e-10);
            }
        }
    }
}
