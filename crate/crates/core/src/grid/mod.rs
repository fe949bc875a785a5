//! Wavefunctions sampled on uniform grids, with FFT-exact gates.
//!
//! Grid points are `q_j = center + (j - n/2)·dq`. With `n/2` even the
//! continuum Fourier transform reduces to a plain DFT with `(-1)^j` sign
//! alternations, so every gate below is exact on the discrete torus.

mod circuits;
mod fft;
mod gates;
mod homodyne;
pub mod io;
mod mehler;
mod peaks;
mod wigner;

pub use circuits::{
    grid_bell_qunaught, grid_bell_standard, simulate_knill_bs, simulate_knill_cx, simulate_knill_cx_kernel,
    simulate_steane, steane_fft_project, KnillOutput,
};
pub use fft::{fourier_mode, fourier_mode_to, Direction};
pub use gates::{
    apply_bs_grid, apply_cx_grid, apply_cz_grid, apply_displacement, apply_parity, apply_rotation,
    apply_shear,
};
pub use homodyne::{homodyne_slice, Basis};
pub use mehler::{coherent_state, mehler_damp};
pub use peaks::{marginal, peak_fit, peak_fit_local, Peak};
pub use wigner::{wigner, WignerGrid};

use crate::error::{Error, Result};
use crate::gaussian::{Gaussian1D, Gaussian2D, SpikeSuperposition1D, SpikeSuperposition2D};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Uniform grid `q_j = center + (j - n/2)·dq`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    dq: f64,
    center: f64,
}

impl Grid1D {
    pub fn new(n: usize, dq: f64, center: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("grid size must be a power of two >= 16, got {n}")));
        }
        if !(dq > 0.0) || !dq.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid grid spacing {dq} or centre {center}")));
        }
        Ok(Self { n, dq, center })
    }

    /// Grid covering `[-half_width, half_width)` around 0.
    pub fn with_extent(n: usize, half_width: f64) -> Result<Self> {
        Self::new(n, 2.0 * half_width / n as f64, 0.0)
    }

    /// The grid whose momentum grid is itself: `dq = √(2π/n)`, centre 0.
    pub fn self_dual(n: usize) -> Result<Self> {
        Self::new(n, (2.0 * PI / n as f64).sqrt(), 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dq)
    }

    pub fn point(&self, j: usize) -> f64 {
        self.center + (j as f64 - (self.n / 2) as f64) * self.dq
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    pub fn lo(&self) -> f64 {
        self.point(0)
    }

    pub fn hi(&self) -> f64 {
        self.point(self.n - 1)
    }

    /// Conjugate grid with the same size, centred at 0.
    pub fn momentum_grid(&self) -> Self {
        let dq = if self.is_self_dual() { self.dq } else { self.dp() };
        Self { n: self.n, dq, center: 0.0 }
    }

    /// Index of the grid point nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let j = ((x - self.center) / self.dq + (self.n / 2) as f64).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub fn is_self_dual(&self) -> bool {
        self.center == 0.0 && (self.dq - self.dp()).abs() <= 1e-12 * self.dq
    }

    pub(crate) fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && (self.dq - other.dq).abs() <= 1e-12 * self.dq
            && (self.center - other.center).abs() <= 1e-12 * self.dq
    }
}

/// Complex amplitudes on a product grid, row-major with mode 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grids: Vec<Grid1D>,
    values: Vec<C64>,
}

impl GridWavefunction {
    pub fn new(grids: Vec<Grid1D>, values: Vec<C64>) -> Result<Self> {
        let size: usize = grids.iter().map(Grid1D::n).product();
        if grids.is_empty() || size != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for grids of total size {size}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("wavefunction values must be finite".into()));
        }
        Ok(Self { grids, values })
    }

    pub fn zeros(grids: Vec<Grid1D>) -> Self {
        let size = grids.iter().map(Grid1D::n).product();
        Self { grids, values: vec![C64::new(0.0, 0.0); size] }
    }

    pub fn from_fn_1d(grid: Grid1D, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grids: vec![grid], values }
    }

    pub fn from_fn_2d(g1: Grid1D, g2: Grid1D, f: impl Fn(f64, f64) -> C64) -> Self {
        let (x1, x2) = (g1.points(), g2.points());
        let mut values = Vec::with_capacity(x1.len() * x2.len());
        for &a in &x1 {
            for &b in &x2 {
                values.push(f(a, b));
            }
        }
        Self { grids: vec![g1, g2], values }
    }

    /// Tensor product with `other`'s modes appended after this one's.
    pub fn product(&self, other: &Self) -> Self {
        let mut values = Vec::with_capacity(self.values.len() * other.values.len());
        for a in &self.values {
            values.extend(other.values.iter().map(|b| a * b));
        }
        let mut grids = self.grids.clone();
        grids.extend_from_slice(&other.grids);
        Self { grids, values }
    }

    pub fn rank(&self) -> usize {
        self.grids.len()
    }

    pub fn grids(&self) -> &[Grid1D] {
        &self.grids
    }

    pub fn grid(&self, mode: usize) -> Result<&Grid1D> {
        self.grids.get(mode).ok_or(Error::IndexOutOfRange { index: mode, len: self.grids.len() })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.grids.iter().map(Grid1D::n).collect()
    }

    /// Distance in the flat array between neighbours along `mode`.
    pub fn stride(&self, mode: usize) -> usize {
        self.grids[mode + 1..].iter().map(Grid1D::n).product()
    }

    fn cell_volume(&self) -> f64 {
        self.grids.iter().map(Grid1D::dq).product()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(C64::norm_sqr).sum::<f64>() * self.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// L²-normalised copy; the zero state is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(C64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { grids: self.grids.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    /// `⟨self|other⟩` with the grid measure.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_grids(other)?;
        let s: C64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.cell_volume())
    }

    /// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let ov = self.inner(other)?;
        Ok(ov.norm_sqr() / (self.norm_sq() * other.norm_sq()))
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grids(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Normalises both states, aligns the global phase at the largest
    /// amplitude of `self`, and returns the maximum pointwise difference.
    pub fn aligned_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grids(other)?;
        let a = self.normalized();
        let b = other.normalized();
        let k = a.argmax();
        let phase = if b.values[k].norm() > 0.0 && a.values[k].norm() > 0.0 {
            let r = a.values[k] / b.values[k];
            r / r.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        a.max_abs_diff(&b.scaled(phase))
    }

    pub fn check_same_grids(&self, other: &Self) -> Result<()> {
        if self.grids.len() != other.grids.len()
            || self.grids.iter().zip(&other.grids).any(|(a, b)| !a.approx_eq(b))
        {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grids, other.grids)));
        }
        Ok(())
    }

    /// Index along each mode for flat index `flat`.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.grids.len()];
        for (m, g) in self.grids.iter().enumerate().rev() {
            idx[m] = flat % g.n();
            flat /= g.n();
        }
        idx
    }

    /// Applies `f` to every one-dimensional lane along `mode`.
    pub(crate) fn map_lanes(&mut self, mode: usize, mut f: impl FnMut(&mut [C64])) {
        let n = self.grids[mode].n();
        let stride = self.stride(mode);
        let outer = self.values.len() / (n * stride);
        let mut lane = vec![C64::new(0.0, 0.0); n];
        for o in 0..outer {
            let base = o * n * stride;
            for i in 0..stride {
                for (j, l) in lane.iter_mut().enumerate() {
                    *l = self.values[base + i + j * stride];
                }
                f(&mut lane);
                for (j, l) in lane.iter().enumerate() {
                    self.values[base + i + j * stride] = *l;
                }
            }
        }
    }

    /// Multiplies each value by `f(q_a, q_b)` using the coordinates of two modes.
    pub(crate) fn multiply_pairwise(&mut self, a: usize, b: usize, f: impl Fn(f64, f64) -> C64) {
        let xa = self.grids[a].points();
        let xb = self.grids[b].points();
        let (sa, sb) = (self.stride(a), self.stride(b));
        let (na, nb) = (xa.len(), xb.len());
        for (flat, v) in self.values.iter_mut().enumerate() {
            *v *= f(xa[(flat / sa) % na], xb[(flat / sb) % nb]);
        }
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: mode, len: self.rank() })
        }
    }
}

/// What `sample` does with spikes that reach past the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportPolicy {
    /// Reject spikes whose ±6σ window leaves the grid.
    #[default]
    Strict,
    /// Sample whatever part of each spike lies on the grid.
    Truncate,
}

/// Half-width, in standard deviations, of the window that must fit.
pub const SUPPORT_SIGMAS: f64 = 6.0;
/// Spikes are only evaluated within this many standard deviations.
const EVAL_SIGMAS: f64 = 10.0;

fn check_window(mode: usize, center: f64, sd: f64, grid: &Grid1D) -> Result<()> {
    let (lo, hi) = (grid.lo(), grid.hi());
    if center - SUPPORT_SIGMAS * sd < lo || center + SUPPORT_SIGMAS * sd > hi {
        return Err(Error::SupportOverflow { mode, mean: center, std_dev: sd, lo, hi });
    }
    Ok(())
}

fn index_range(grid: &Grid1D, center: f64, sd: f64) -> std::ops::Range<usize> {
    let lo = ((center - EVAL_SIGMAS * sd - grid.lo()) / grid.dq()).floor().max(0.0) as usize;
    let hi = ((center + EVAL_SIGMAS * sd - grid.lo()) / grid.dq()).ceil() + 1.0;
    let hi = hi.clamp(0.0, grid.n() as f64) as usize;
    lo.min(hi)..hi
}

fn negligible(peak: f64, max_peak: f64) -> bool {
    peak < max_peak + crate::gaussian::TRUNCATION_EPS.ln()
}

/// Centre and standard deviation of `|g|`.
fn envelope_1d(g: &Gaussian1D) -> (f64, f64) {
    let (a, b) = (g.precision.re, g.precision.im);
    (g.mean.re - b * g.mean.im / a, (1.0 / a).sqrt())
}

pub fn sample_1d(
    sup: &SpikeSuperposition1D,
    grid: Grid1D,
    policy: SupportPolicy,
) -> Result<GridWavefunction> {
    use crate::gaussian::Spike;
    let mut psi = GridWavefunction::zeros(vec![grid]);
    let max_peak = sup.spikes().iter().map(Spike::peak_log_magnitude).fold(f64::NEG_INFINITY, f64::max);
    let xs = grid.points();
    for g in sup.spikes() {
        let (c, sd) = envelope_1d(g);
        if policy == SupportPolicy::Strict && !negligible(g.peak_log_magnitude(), max_peak) {
            check_window(0, c, sd, &grid)?;
        }
        for j in index_range(&grid, c, sd) {
            psi.values[j] += g.eval(xs[j]);
        }
    }
    Ok(psi)
}

/// Centre and per-mode marginal standard deviation of `|g|`.
fn envelope_2d(g: &Gaussian2D) -> ([f64; 2], [f64; 2]) {
    let a = g.precision.re();
    let b = g.precision.im();
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let ainv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
    let nu = [g.mean[0].im, g.mean[1].im];
    let bn = [b[0][0] * nu[0] + b[0][1] * nu[1], b[1][0] * nu[0] + b[1][1] * nu[1]];
    let shift = [ainv[0][0] * bn[0] + ainv[0][1] * bn[1], ainv[1][0] * bn[0] + ainv[1][1] * bn[1]];
    ([g.mean[0].re - shift[0], g.mean[1].re - shift[1]], [ainv[0][0].sqrt(), ainv[1][1].sqrt()])
}

pub fn sample_2d(
    sup: &SpikeSuperposition2D,
    grids: [Grid1D; 2],
    policy: SupportPolicy,
) -> Result<GridWavefunction> {
    use crate::gaussian::Spike;
    let mut psi = GridWavefunction::zeros(grids.to_vec());
    let max_peak = sup.spikes().iter().map(Spike::peak_log_magnitude).fold(f64::NEG_INFINITY, f64::max);
    let x1 = grids[0].points();
    let x2 = grids[1].points();
    let n2 = grids[1].n();
    for g in sup.spikes() {
        let (c, sd) = envelope_2d(g);
        if policy == SupportPolicy::Strict && !negligible(g.peak_log_magnitude(), max_peak) {
            check_window(0, c[0], sd[0], &grids[0])?;
            check_window(1, c[1], sd[1], &grids[1])?;
        }
        let r2 = index_range(&grids[1], c[1], sd[1]);
        for i in index_range(&grids[0], c[0], sd[0]) {
            for j in r2.clone() {
                psi.values[i * n2 + j] += g.eval([x1[i], x2[j]]);
            }
        }
    }
    Ok(psi)
}

/// `make_comb(label, Δ)` sampled on `grid`, with enough spikes to cover the
/// grid and the envelope. Spikes past the grid edge are cut off.
pub fn sample_comb(label: crate::model::LogicalLabel, delta: f64, grid: Grid1D) -> Result<GridWavefunction> {
    let reach = grid.lo().abs().max(grid.hi().abs()) + EVAL_SIGMAS * delta;
    let n_max = label.default_n_max(delta).max((reach / label.spacing()).ceil() as usize + 1);
    let comb = crate::model::make_comb(label, delta, n_max)?;
    sample_1d(&comb, grid, SupportPolicy::Truncate)
}
