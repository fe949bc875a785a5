use super::{special_integral, Gaussian1D, SpikeSuperposition1D, SpikeSuperposition2D};
use crate::error::{Error, Result};

/// `(1/√2π) ∫ dq' Φ(q', q) ψ(q')` evaluated spike by spike.
pub fn project_superposition(
    input: &SpikeSuperposition1D,
    bell: &SpikeSuperposition2D,
) -> Result<SpikeSuperposition1D> {
    if input.is_empty() || bell.is_empty() {
        return Err(Error::EmptyResult);
    }
    let mut out = Vec::with_capacity(input.len() * bell.len());
    for b in bell.spikes() {
        for g in input.spikes() {
            let r = special_integral(b, g)?;
            let log_amp = b.log_amplitude() + g.log_amplitude() + r.log_prefactor();
            out.push(Gaussian1D::from_log_amplitude(log_amp, r.nu, 1.0 / r.sigma2)?);
        }
    }
    let result = SpikeSuperposition1D::new(out);
    if result.is_empty() {
        return Err(Error::EmptyResult);
    }
    Ok(result)
}

/// Momentum-quadrature variant: input means enter with opposite sign.
pub fn project_superposition_p(
    input: &SpikeSuperposition1D,
    bell: &SpikeSuperposition2D,
) -> Result<SpikeSuperposition1D> {
    let mirrored = input
        .spikes()
        .iter()
        .map(|g| {
            let mut m = *g;
            m.mean = -m.mean;
            m
        })
        .collect();
    project_superposition(&SpikeSuperposition1D::new(mirrored), bell)
}
