use super::{Grid1D, GridWavefunction};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Applies `e^{-Δ² n̂}` through its position-space kernel
/// `e^{β/2} (2π sinh β)^{-1/2} exp(-((x² + y²) cosh β - 2xy) / (2 sinh β))`,
/// `β = Δ²`, as a dense matrix.
pub fn mehler_damp(psi: &GridWavefunction, delta: f64) -> Result<GridWavefunction> {
    if psi.rank() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.rank() });
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("damping needs delta > 0, got {delta}")));
    }
    let beta = delta * delta;
    let g = psi.grids[0];
    let xs = g.points();
    let (sh, ch) = (beta.sinh(), beta.cosh());
    let log_norm = 0.5 * beta - 0.5 * (2.0 * PI * sh).ln() + g.dq().ln();
    let support: Vec<(f64, C64)> = xs
        .iter()
        .zip(psi.values())
        .filter(|(_, v)| **v != C64::new(0.0, 0.0))
        .map(|(&y, &v)| (y, v))
        .collect();
    let out = xs
        .iter()
        .map(|&x| {
            support
                .iter()
                .map(|&(y, v)| {
                    let e = log_norm - ((x * x + y * y) * ch - 2.0 * x * y) / (2.0 * sh);
                    v * e.exp()
                })
                .sum()
        })
        .collect();
    GridWavefunction::new(vec![g], out)
}

/// Coherent state `|α⟩` for real `α`: `π^{-1/4} exp(-(q - √2α)²/2)`.
pub fn coherent_state(grid: Grid1D, alpha: f64) -> GridWavefunction {
    let c = 2f64.sqrt() * alpha;
    let norm = PI.powf(-0.25);
    GridWavefunction::from_fn_1d(grid, |q| C64::new(norm * (-0.5 * (q - c).powi(2)).exp(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_invariant() {
        let g = Grid1D::with_extent(256, 10.0).unwrap();
        let vac = coherent_state(g, 0.0);
        let out = mehler_damp(&vac, 0.3).unwrap();
        assert!(out.max_abs_diff(&vac).unwrap() < 1e-10);
    }

    #[test]
    fn damped_coherent_state() {
        let g = Grid1D::with_extent(512, 12.0).unwrap();
        let alpha = 1.0;
        let beta: f64 = 0.09;
        let out = mehler_damp(&coherent_state(g, alpha), beta.sqrt()).unwrap();
        let factor = ((alpha * alpha / 2.0) * ((-2.0 * beta).exp() - 1.0)).exp();
        let expected = coherent_state(g, alpha * (-beta).exp()).scaled(C64::new(factor, 0.0));
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let g = Grid1D::with_extent(32, 4.0).unwrap();
        assert!(mehler_damp(&coherent_state(g, 0.0), 0.0).is_err());
    }
}
