use super::GridWavefunction;
use crate::error::{Error, Result};
use crate::model::LatticeSpec;
use num_complex::Complex64 as C64;

/// Moments of `|ψ|²` within one lattice cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub mean: f64,
    /// Amplitude-level variance: twice the variance of `|ψ|²`.
    pub variance: f64,
    /// `∫ |ψ|²` over the cell.
    pub weight: f64,
}

/// Cells holding less than this fraction of the heaviest cell are skipped.
const MIN_RELATIVE_WEIGHT: f64 = 1e-3;
/// Outer fraction of each half-cell treated as boundary.
const BOUNDARY_FRACTION: f64 = 0.1;
const MAX_BOUNDARY_MASS: f64 = 0.01;

/// Fits one Gaussian per lattice cell `[μ_n - spacing/2, μ_n + spacing/2)`.
pub fn peak_fit(psi: &GridWavefunction, lattice: &LatticeSpec) -> Result<Vec<Peak>> {
    if psi.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.rank() });
    }
    let g = psi.grids()[0];
    let xs = g.points();
    let dens: Vec<f64> = psi.values().iter().map(C64::norm_sqr).collect();
    let half = 0.5 * lattice.spacing;
    let cells: Vec<(f64, Vec<usize>)> = lattice
        .indices()
        .map(|n| {
            let c = lattice.position(n);
            let idx = (0..xs.len()).filter(|&j| xs[j] >= c - half && xs[j] < c + half).collect();
            (c, idx)
        })
        .collect();
    let weight = |idx: &[usize]| idx.iter().map(|&j| dens[j]).sum::<f64>() * g.dq();
    let max_weight = cells.iter().map(|(_, idx)| weight(idx)).fold(0.0, f64::max);
    let mut peaks = Vec::new();
    for (c, idx) in &cells {
        let w = weight(idx);
        if w == 0.0 || w < MIN_RELATIVE_WEIGHT * max_weight {
            continue;
        }
        let edge = half * (1.0 - BOUNDARY_FRACTION);
        let boundary =
            idx.iter().filter(|&&j| (xs[j] - c).abs() > edge).map(|&j| dens[j]).sum::<f64>() * g.dq();
        if boundary > MAX_BOUNDARY_MASS * w {
            return Err(Error::OverlappingPeaks { center: *c, fraction: boundary / w });
        }
        let total: f64 = idx.iter().map(|&j| dens[j]).sum();
        let mean = idx.iter().map(|&j| xs[j] * dens[j]).sum::<f64>() / total;
        let var = idx.iter().map(|&j| (xs[j] - mean).powi(2) * dens[j]).sum::<f64>() / total;
        peaks.push(Peak { mean, variance: 2.0 * var, weight: w });
    }
    Ok(peaks)
}

/// Fits one Gaussian per lattice cell from the parabola through `ln |ψ|²` at
/// the densest grid point of the cell and its two neighbours. Exact for
/// sampled Gaussians and insensitive to tails of neighbouring peaks, so it
/// applies where `peak_fit` reports overlap.
pub fn peak_fit_local(psi: &GridWavefunction, lattice: &LatticeSpec) -> Result<Vec<Peak>> {
    if psi.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.rank() });
    }
    let g = psi.grids()[0];
    let n = g.n();
    let xs = g.points();
    let dens: Vec<f64> = psi.values().iter().map(C64::norm_sqr).collect();
    let half = 0.5 * lattice.spacing;
    let cells: Vec<(f64, Vec<usize>)> = lattice
        .indices()
        .map(|k| {
            let c = lattice.position(k);
            (c, (0..n).filter(|&j| xs[j] >= c - half && xs[j] < c + half).collect())
        })
        .collect();
    let weight = |idx: &[usize]| idx.iter().map(|&j| dens[j]).sum::<f64>() * g.dq();
    let max_weight = cells.iter().map(|(_, idx)| weight(idx)).fold(0.0, f64::max);
    let mut peaks = Vec::new();
    for (_, idx) in &cells {
        let w = weight(idx);
        if w == 0.0 || w < MIN_RELATIVE_WEIGHT * max_weight {
            continue;
        }
        let j = idx.iter().copied().max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap_or(0);
        if j == 0 || j + 1 >= n || dens[j - 1] <= 0.0 || dens[j + 1] <= 0.0 {
            continue;
        }
        let (lm, l0, lp) = (dens[j - 1].ln(), dens[j].ln(), dens[j + 1].ln());
        let h = g.dq();
        // ln|ψ|² = const - (x - μ)²/σ² for an amplitude variance σ².
        let curv = (lp + lm - 2.0 * l0) / (h * h);
        if curv >= 0.0 {
            continue;
        }
        let slope = (lp - lm) / (2.0 * h);
        peaks.push(Peak { mean: xs[j] - slope / curv, variance: -2.0 / curv, weight: w });
    }
    Ok(peaks)
}

/// Square root of the reduced density of `mode`, as a real amplitude.
pub fn marginal(psi: &GridWavefunction, mode: usize) -> Result<GridWavefunction> {
    psi.check_mode(mode)?;
    let g = psi.grids()[mode];
    let n = g.n();
    let stride = psi.stride(mode);
    let other_cell: f64 =
        psi.grids().iter().enumerate().filter(|(m, _)| *m != mode).map(|(_, g)| g.dq()).product();
    let mut dens = vec![0.0; n];
    for (flat, v) in psi.values().iter().enumerate() {
        dens[(flat / stride) % n] += v.norm_sqr();
    }
    let values = dens.into_iter().map(|d| C64::new((d * other_cell).sqrt(), 0.0)).collect();
    GridWavefunction::new(vec![g], values)
}
