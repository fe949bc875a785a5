//! Closed-form output widths and squeezing bookkeeping for Knill-type
//! correction with a Gaussian-spike Bell resource.

use crate::error::{Error, Result};
use crate::model::BellPrecision;

/// `σ_out² = (Q₁₁ + Q_in) / (det Q + Q_in Q₂₂)`.
pub fn width_out(q: &BellPrecision, q_in: f64) -> f64 {
    width_out_matrix(q.q, q_in)
}

pub fn width_out_matrix(q: [[f64; 2]; 2], q_in: f64) -> f64 {
    let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    (q[0][0] + q_in) / (det + q_in * q[1][1])
}

/// `μ_out = μ₂ + Q_in Q₁₂ / (det Q + Q_in Q₂₂) · (μ₁ - μ_in)`.
pub fn mean_out(mu1: f64, mu2: f64, mu_in: f64, q: &BellPrecision, q_in: f64) -> f64 {
    let m = q.q;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    mu2 + q_in * m[0][1] / (det + q_in * m[1][1]) * (mu1 - mu_in)
}

/// `−10 log₁₀ σ²`.
pub fn squeezing_db(sigma_sq: f64) -> f64 {
    -10.0 * sigma_sq.log10()
}

/// `e^{2r_q} e^{2r_p} = (x²y² + z²) / (1 + z²)`, `z² = 1 + 2x² + y² + x²y²`.
pub fn heisenberg_gain(x: f64, y: f64) -> f64 {
    let z2 = z_sq(x, y);
    (x * x * y * y + z2) / (1.0 + z2)
}

fn z_sq(x: f64, y: f64) -> f64 {
    1.0 + 2.0 * x * x + y * y + x * x * y * y
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthReport {
    pub delta: f64,
    pub sigma_out_q_sq: f64,
    pub sigma_out_p_sq: f64,
    pub r_q: f64,
    pub r_p: f64,
    /// `σ_in,q / Δ`.
    pub x: f64,
    /// `σ_in,p / Δ`.
    pub y: f64,
    pub z_sq: f64,
    pub gain: f64,
    pub squeezing_db_q: f64,
    pub squeezing_db_p: f64,
}

impl WidthReport {
    fn from_widths(delta: f64, x: f64, y: f64, sq: f64, sp: f64, gain: f64) -> Self {
        let d2 = delta * delta;
        Self {
            delta,
            sigma_out_q_sq: sq,
            sigma_out_p_sq: sp,
            r_q: 0.5 * (sq / d2).ln(),
            r_p: 0.5 * (sp / d2).ln(),
            x,
            y,
            z_sq: z_sq(x, y),
            gain,
            squeezing_db_q: squeezing_db(sq),
            squeezing_db_p: squeezing_db(sp),
        }
    }
}

fn standard_q(d2: f64) -> [[f64; 2]; 2] {
    [[2.0 / d2, -1.0 / d2], [-1.0 / d2, 1.0 / d2]]
}

fn standard_p(d2: f64) -> [[f64; 2]; 2] {
    [[1.0 / d2, 1.0 / d2], [1.0 / d2, 2.0 / d2]]
}

fn swap_modes(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[m[1][1], m[1][0]], [m[0][1], m[0][0]]]
}

/// Output widths for the standard Bell state `CX₁₂ |+, 0⟩_Δ`.
pub fn widths_standard(delta: f64, sigma_in_q: f64, sigma_in_p: f64) -> WidthReport {
    let d2 = delta * delta;
    let sq = width_out_matrix(standard_q(d2), 1.0 / (sigma_in_q * sigma_in_q));
    let sp = width_out_matrix(standard_p(d2), 1.0 / (sigma_in_p * sigma_in_p));
    let (x, y) = (sigma_in_q / delta, sigma_in_p / delta);
    WidthReport::from_widths(delta, x, y, sq, sp, heisenberg_gain(x, y))
}

/// As `widths_standard` with the two Bell modes exchanged.
pub fn widths_standard_swapped(delta: f64, sigma_in_q: f64, sigma_in_p: f64) -> WidthReport {
    let d2 = delta * delta;
    let sq = width_out_matrix(swap_modes(standard_q(d2)), 1.0 / (sigma_in_q * sigma_in_q));
    let sp = width_out_matrix(swap_modes(standard_p(d2)), 1.0 / (sigma_in_p * sigma_in_p));
    let (x, y) = (sigma_in_q / delta, sigma_in_p / delta);
    let gain = (sq / d2) * (sp / d2);
    WidthReport::from_widths(delta, x, y, sq, sp, gain)
}

/// Output widths for the symmetric Bell state `BS₁₂ |∅, ∅⟩_Δ`: `Δ²` in both
/// quadratures whatever the input.
pub fn widths_qunaught(delta: f64, sigma_in_q: f64, sigma_in_p: f64) -> WidthReport {
    let d2 = delta * delta;
    WidthReport::from_widths(delta, sigma_in_q / delta, sigma_in_p / delta, d2, d2, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    Qunaught,
    Standard,
}

/// Grid of `Δ` values and input-width ratios `σ_in/Δ`; every ratio is used
/// for both `x` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub deltas: Vec<f64>,
    pub ratios: Vec<f64>,
    pub kind: BellKind,
}

/// Rows ordered by `Δ`, then `x`, then `y`.
pub fn sweep(config: &SweepConfig) -> Result<Vec<WidthReport>> {
    if config.deltas.is_empty() || config.ratios.is_empty() {
        return Err(Error::EmptyConfig);
    }
    if let Some(bad) = config.deltas.iter().chain(&config.ratios).find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("sweep values must be positive, got {bad}")));
    }
    let mut rows = Vec::with_capacity(config.deltas.len() * config.ratios.len().pow(2));
    for &d in &config.deltas {
        for &x in &config.ratios {
            for &y in &config.ratios {
                rows.push(match config.kind {
                    BellKind::Qunaught => widths_qunaught(d, x * d, y * d),
                    BellKind::Standard => widths_standard(d, x * d, y * d),
                });
            }
        }
    }
    Ok(rows)
}

pub const SWEEP_HEADER: &str = "delta,x,y,sigma_q2,sigma_p2,rq,rp,gain,db_q,db_p";

/// One CSV line per report, 12 significant digits.
pub fn sweep_csv(rows: &[WidthReport]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.delta,
            r.x,
            r.y,
            r.sigma_out_q_sq,
            r.sigma_out_p_sq,
            r.r_q,
            r.r_p,
            r.gain,
            r.squeezing_db_q,
            r.squeezing_db_p,
        ];
        let line: Vec<String> = fields.iter().map(|v| format!("{v:.11e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
