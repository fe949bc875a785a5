use super::fft::{fourier_mode, Direction};
use super::GridWavefunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Q,
    P,
}

/// Unnormalised conditional state after projecting `mode` onto the grid
/// point `outcome_index` of the chosen quadrature.
pub fn homodyne_slice(
    psi: &GridWavefunction,
    mode: usize,
    basis: Basis,
    outcome_index: usize,
) -> Result<GridWavefunction> {
    psi.check_mode(mode)?;
    if psi.rank() < 2 {
        return Err(Error::InvalidParameter("cannot slice the only mode of a state".into()));
    }
    let n = psi.grids[mode].n();
    if outcome_index >= n {
        return Err(Error::IndexOutOfRange { index: outcome_index, len: n });
    }
    let transformed;
    let src = match basis {
        Basis::Q => psi,
        Basis::P => {
            transformed = fourier_mode(psi, mode, Direction::Forward)?;
            &transformed
        }
    };
    let stride = src.stride(mode);
    let outer = src.values.len() / (n * stride);
    let mut values = Vec::with_capacity(outer * stride);
    for o in 0..outer {
        let base = o * n * stride + outcome_index * stride;
        values.extend_from_slice(&src.values[base..base + stride]);
    }
    let mut grids = src.grids.clone();
    grids.remove(mode);
    GridWavefunction::new(grids, values)
}
