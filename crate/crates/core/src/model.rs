//! Finite-energy GKP combs, Bell resources and Gaussian gate actions on
//! spike superpositions.

use crate::error::{Error, Result};
use crate::gaussian::{Gaussian1D, Gaussian2D, SpikeSuperposition1D, SpikeSuperposition2D, Sym2};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Peak positions `offset + n·spacing` for `n ∈ [-n_max, n_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub spacing: f64,
    pub offset: f64,
    pub n_max: usize,
}

impl LatticeSpec {
    pub fn new(spacing: f64, offset: f64, n_max: usize) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!("spacing must be positive, got {spacing}")));
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { spacing, offset, n_max })
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let n = self.n_max as i64;
        -n..=n
    }

    pub fn position(&self, n: i64) -> f64 {
        self.offset + n as f64 * self.spacing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalLabel {
    Zero,
    One,
    Plus,
    Minus,
    Qunaught,
}

impl LogicalLabel {
    pub fn spacing(self) -> f64 {
        match self {
            Self::Zero | Self::One => 2.0 * PI.sqrt(),
            Self::Plus | Self::Minus => PI.sqrt(),
            Self::Qunaught => (2.0 * PI).sqrt(),
        }
    }

    pub fn offset(self) -> f64 {
        match self {
            Self::One => PI.sqrt(),
            _ => 0.0,
        }
    }

    fn sign(self, n: i64) -> f64 {
        match self {
            Self::Minus if n.rem_euclid(2) == 1 => -1.0,
            _ => 1.0,
        }
    }

    /// Envelope reaches `exp(-12.5)` at the last spike.
    pub fn default_n_max(self, delta: f64) -> usize {
        ((5.0 / (delta * self.spacing())).ceil() as usize).max(1)
    }

    pub fn lattice(self, n_max: usize) -> LatticeSpec {
        LatticeSpec { spacing: self.spacing(), offset: self.offset(), n_max: n_max.max(1) }
    }
}

impl std::str::FromStr for LogicalLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" | "0" => Ok(Self::Zero),
            "one" | "1" => Ok(Self::One),
            "plus" | "+" => Ok(Self::Plus),
            "minus" | "-" => Ok(Self::Minus),
            "qunaught" | "null" => Ok(Self::Qunaught),
            _ => Err(Error::InvalidParameter(format!("unknown logical label '{s}'"))),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}

/// Comb with spike precision `Δ⁻²` and envelope `exp(-Δ²μ²/2)`, unnormalised.
pub fn make_comb(label: LogicalLabel, delta: f64, n_max: usize) -> Result<SpikeSuperposition1D> {
    check_delta(delta)?;
    let lattice = LatticeSpec::new(label.spacing(), label.offset(), n_max)?;
    let d2 = delta * delta;
    let spikes = lattice
        .indices()
        .map(|n| {
            let mu = lattice.position(n);
            let amp = C64::new(label.sign(n), 0.0);
            Gaussian1D::from_log_amplitude(amp.ln() - 0.5 * d2 * mu * mu, mu.into(), (1.0 / d2).into())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpikeSuperposition1D::new(spikes))
}

/// `make_comb` with the default truncation `ceil(5/(Δ·spacing))`.
pub fn make_comb_default(label: LogicalLabel, delta: f64) -> Result<SpikeSuperposition1D> {
    check_delta(delta)?;
    make_comb(label, delta, label.default_n_max(delta))
}

/// Comb with independent spike variance and envelope `exp(-κ²μ²/2)`.
pub fn make_custom_comb(
    lattice: &LatticeSpec,
    spike_variance: f64,
    envelope: f64,
) -> Result<SpikeSuperposition1D> {
    if !(spike_variance > 0.0) || !(envelope >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "spike variance must be positive and envelope non-negative, got {spike_variance}, {envelope}"
        )));
    }
    let k2 = envelope * envelope;
    let spikes = lattice
        .indices()
        .map(|n| {
            let mu = lattice.position(n);
            Gaussian1D::from_log_amplitude(
                C64::new(-0.5 * k2 * mu * mu, 0.0),
                mu.into(),
                (1.0 / spike_variance).into(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpikeSuperposition1D::new(spikes))
}

/// Tensor product `a ⊗ b` as a two-mode superposition.
pub fn product(a: &SpikeSuperposition1D, b: &SpikeSuperposition1D) -> Result<SpikeSuperposition2D> {
    let mut spikes = Vec::with_capacity(a.len() * b.len());
    for x in a.spikes() {
        for y in b.spikes() {
            spikes.push(Gaussian2D::from_log_amplitude(
                x.log_amplitude() + y.log_amplitude(),
                [x.mean, y.mean],
                Sym2::new(x.precision, 0.0.into(), y.precision),
            )?);
        }
    }
    Ok(SpikeSuperposition2D::new(spikes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    /// `ψ(q) ↦ ψ̃(p) = (1/√2π) ∫ e^{-ipq} ψ(q) dq`.
    Forward,
    /// `ψ̃(p) ↦ ψ(q)`, the Fourier gate `F`.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    /// `D(s) = X(s₁) Z(s₂)`.
    Displacement {
        s1: f64,
        s2: f64,
    },
    /// `(Uψ)(x) = |det M|^{-1/2} ψ(M⁻¹x)`, so positions map as `x ↦ Mx`.
    PointTransform([[f64; 2]; 2]),
    /// Multiplication by `exp(i xᵀPx / 2)`.
    QuadraticPhase([[f64; 2]; 2]),
    Fourier(FourierDirection),
}

impl GateSpec {
    pub fn cx() -> Self {
        Self::PointTransform([[1.0, 0.0], [1.0, 1.0]])
    }

    pub fn cx_inverse() -> Self {
        Self::PointTransform([[1.0, 0.0], [-1.0, 1.0]])
    }

    pub fn bs() -> Self {
        Self::PointTransform(bs_matrix())
    }

    pub fn swap() -> Self {
        Self::PointTransform([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn cz() -> Self {
        Self::QuadraticPhase([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::Displacement { .. } | Self::Fourier(_) => 1,
            Self::PointTransform(_) | Self::QuadraticPhase(_) => 2,
        }
    }
}

pub fn bs_matrix() -> [[f64; 2]; 2] {
    [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpikeState {
    One(SpikeSuperposition1D),
    Two(SpikeSuperposition2D),
}

impl SpikeState {
    pub fn arity(&self) -> usize {
        match self {
            Self::One(_) => 1,
            Self::Two(_) => 2,
        }
    }

    pub fn into_one(self) -> Result<SpikeSuperposition1D> {
        match self {
            Self::One(s) => Ok(s),
            Self::Two(_) => Err(Error::ArityMismatch { expected: 1, found: 2 }),
        }
    }

    pub fn into_two(self) -> Result<SpikeSuperposition2D> {
        match self {
            Self::Two(s) => Ok(s),
            Self::One(_) => Err(Error::ArityMismatch { expected: 2, found: 1 }),
        }
    }
}

pub fn apply_gate(state: &SpikeState, gate: &GateSpec) -> Result<SpikeState> {
    if gate.arity() != state.arity() {
        return Err(Error::ArityMismatch { expected: gate.arity(), found: state.arity() });
    }
    match (state, gate) {
        (SpikeState::One(s), GateSpec::Displacement { s1, s2 }) => {
            Ok(SpikeState::One(map_1d(s, |g| displace(g, *s1, *s2))?))
        }
        (SpikeState::One(s), GateSpec::Fourier(dir)) => Ok(SpikeState::One(map_1d(s, |g| fourier(g, *dir))?)),
        (SpikeState::Two(s), GateSpec::PointTransform(m)) => Ok(SpikeState::Two(point_transform(s, *m)?)),
        (SpikeState::Two(s), GateSpec::QuadraticPhase(p)) => Ok(SpikeState::Two(quadratic_phase(s, *p)?)),
        _ => unreachable!("arity checked above"),
    }
}

fn map_1d(
    s: &SpikeSuperposition1D,
    f: impl Fn(&Gaussian1D) -> Result<Gaussian1D>,
) -> Result<SpikeSuperposition1D> {
    Ok(SpikeSuperposition1D::new(s.spikes().iter().map(f).collect::<Result<_>>()?))
}

fn displace(g: &Gaussian1D, s1: f64, s2: f64) -> Result<Gaussian1D> {
    // e^{i s₂ (q - s₁)} G(q - s₁; μ, P), with the linear phase absorbed into
    // a complex mean.
    let p = g.precision;
    let mu = g.mean;
    let log_amp = g.log_amplitude() - s2 * s2 / (2.0 * p) + C64::i() * s2 * mu;
    Gaussian1D::from_log_amplitude(log_amp, mu + s1 + C64::i() * s2 / p, p)
}

fn fourier(g: &Gaussian1D, dir: FourierDirection) -> Result<Gaussian1D> {
    let p = g.precision;
    let mu = g.mean;
    let sign = match dir {
        FourierDirection::Forward => -1.0,
        FourierDirection::Inverse => 1.0,
    };
    let log_amp = g.log_amplitude() - 0.5 * p.ln() - 0.5 * p * mu * mu;
    Gaussian1D::from_log_amplitude(log_amp, sign * C64::i() * p * mu, 1.0 / p)
}

fn invert_real(m: [[f64; 2]; 2]) -> Result<([[f64; 2]; 2], f64)> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.abs() > 0.0) || !det.is_finite() {
        return Err(Error::InvalidParameter(format!("point transform must be invertible, det = {det}")));
    }
    Ok(([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]], det))
}

fn point_transform(s: &SpikeSuperposition2D, m: [[f64; 2]; 2]) -> Result<SpikeSuperposition2D> {
    let (m_inv, det) = invert_real(m)?;
    let log_scale = -0.5 * det.abs().ln();
    let spikes = s
        .spikes()
        .iter()
        .map(|g| {
            let mean = [m[0][0] * g.mean[0] + m[0][1] * g.mean[1], m[1][0] * g.mean[0] + m[1][1] * g.mean[1]];
            Gaussian2D::from_log_amplitude(g.log_amplitude() + log_scale, mean, g.precision.congruence(m_inv))
        })
        .collect::<Result<_>>()?;
    Ok(SpikeSuperposition2D::new(spikes))
}

fn quadratic_phase(s: &SpikeSuperposition2D, p: [[f64; 2]; 2]) -> Result<SpikeSuperposition2D> {
    if p[0][1] != p[1][0] {
        return Err(Error::InvalidParameter("quadratic phase must be symmetric".into()));
    }
    let ip = Sym2::new(C64::new(0.0, p[0][0]), C64::new(0.0, p[0][1]), C64::new(0.0, p[1][1]));
    let spikes = s
        .spikes()
        .iter()
        .map(|g| {
            let q = g.precision;
            let q_new = Sym2::new(q.a11 - ip.a11, q.a12 - ip.a12, q.a22 - ip.a22);
            let inv = q_new
                .inverse()
                .ok_or_else(|| Error::InvalidParameter("singular precision after phase".into()))?;
            let mean = inv.mul_vec(q.mul_vec(g.mean));
            let log_amp = g.log_amplitude() - 0.5 * (q.quad(g.mean) - q_new.quad(mean));
            Gaussian2D::from_log_amplitude(log_amp, mean, q_new)
        })
        .collect::<Result<_>>()?;
    Ok(SpikeSuperposition2D::new(spikes))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BellProvenance {
    QunaughtBS,
    StandardCX,
    /// Point transform applied to a product of two square-lattice combs.
    Custom {
        transform: Option<[[f64; 2]; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellPrecision {
    pub q: [[f64; 2]; 2],
    pub provenance: BellProvenance,
}

impl BellPrecision {
    pub fn det(&self) -> f64 {
        self.q[0][0] * self.q[1][1] - self.q[0][1] * self.q[1][0]
    }
}

pub fn bell_qunaught(delta: f64, n_max: usize) -> Result<(SpikeSuperposition2D, BellPrecision)> {
    let c = make_comb(LogicalLabel::Qunaught, delta, n_max)?;
    let state = point_transform(&product(&c, &c)?, bs_matrix())?;
    let d = 1.0 / (delta * delta);
    Ok((state, BellPrecision { q: [[d, 0.0], [0.0, d]], provenance: BellProvenance::QunaughtBS }))
}

pub fn bell_standard(delta: f64, n_max: usize) -> Result<(SpikeSuperposition2D, BellPrecision)> {
    let plus = make_comb(LogicalLabel::Plus, delta, 2 * n_max)?;
    let zero = make_comb(LogicalLabel::Zero, delta, n_max)?;
    let state = point_transform(&product(&plus, &zero)?, [[1.0, 0.0], [1.0, 1.0]])?;
    let d = 1.0 / (delta * delta);
    Ok((state, BellPrecision { q: [[2.0 * d, -d], [-d, d]], provenance: BellProvenance::StandardCX }))
}

/// Precision of the same Bell state in the momentum representation.
///
/// The source combs have equal widths in both quadratures, so the product
/// state's precision `Mᵀ Q M` carries over to momentum, where the point
/// transform acts with `Mᵀ` in place of `M⁻¹`.
pub fn bell_precision_p(q_rep: &BellPrecision) -> Result<BellPrecision> {
    let m = match q_rep.provenance {
        BellProvenance::QunaughtBS => bs_matrix(),
        BellProvenance::StandardCX => [[1.0, 0.0], [1.0, 1.0]],
        BellProvenance::Custom { transform: Some(m) } => m,
        BellProvenance::Custom { transform: None } => return Err(Error::UnknownProvenance),
    };
    if let BellProvenance::QunaughtBS = q_rep.provenance {
        return Ok(*q_rep);
    }
    let q = Sym2::real(q_rep.q[0][0], q_rep.q[0][1], q_rep.q[1][1]);
    let q0 = q.congruence(m);
    let mt = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
    let qp = q0.congruence(mt).re();
    Ok(BellPrecision { q: qp, provenance: q_rep.provenance })
}
