//! Complex Gaussian spikes and the algebra used to push them through the
//! error-correction projector.
//!
//! A spike is `c · exp(-½ (x - μ)ᵀ Q (x - μ))` with complex amplitude, mean
//! and precision. Amplitudes are stored as their logarithm: Fourier transforms
//! and quadratic phases move large factors like `exp(±½ Q μ²)` between the
//! amplitude and the exponent, and the plain representation would under- or
//! overflow for spikes far from the origin.

mod lemma;
mod projection;
mod superposition;

pub use lemma::{product_reduce, special_integral, ProductReduction, SpecialIntegralResult, MAX_CONDITION};
pub use projection::{project_superposition, project_superposition_p};
pub use superposition::{
    Spike, SpikeSuperposition, SpikeSuperposition1D, SpikeSuperposition2D, MEAN_MERGE_TOL,
    PRECISION_MERGE_TOL, TRUNCATION_EPS,
};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Complex symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub a11: C64,
    pub a12: C64,
    pub a22: C64,
}

impl Sym2 {
    pub fn new(a11: C64, a12: C64, a22: C64) -> Self {
        Self { a11, a12, a22 }
    }

    pub fn real(a11: f64, a12: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a22.into())
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 1.0)
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a22 * s)
    }

    pub fn add(&self, o: &Sym2) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a22 + o.a22)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.a22 / d, -self.a12 / d, self.a11 / d))
    }

    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [self.a11 * v[0] + self.a12 * v[1], self.a12 * v[0] + self.a22 * v[1]]
    }

    /// `vᵀ S v` (bilinear, no conjugation).
    pub fn quad(&self, v: [C64; 2]) -> C64 {
        self.a11 * v[0] * v[0] + 2.0 * self.a12 * v[0] * v[1] + self.a22 * v[1] * v[1]
    }

    pub fn re(&self) -> [[f64; 2]; 2] {
        [[self.a11.re, self.a12.re], [self.a12.re, self.a22.re]]
    }

    pub fn im(&self) -> [[f64; 2]; 2] {
        [[self.a11.im, self.a12.im], [self.a12.im, self.a22.im]]
    }

    /// `Mᵀ S M` for a real 2×2 `M`.
    pub fn congruence(&self, m: [[f64; 2]; 2]) -> Self {
        let s = [[self.a11, self.a12], [self.a12, self.a22]];
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, o) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    for l in 0..2 {
                        *o += m[k][i] * s[k][l] * m[l][j];
                    }
                }
            }
        }
        Self::new(out[0][0], 0.5 * (out[0][1] + out[1][0]), out[1][1])
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[self.a11, self.a12, self.a12, self.a22])
    }

    /// True when the real part is positive definite.
    pub fn re_positive_definite(&self) -> bool {
        let r = self.re();
        r[0][0] > 0.0 && r[0][0] * r[1][1] - r[0][1] * r[0][1] > 0.0
    }
}

/// One-mode spike `c · exp(-½ Q (x - μ)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1D {
    log_amp: C64,
    pub mean: C64,
    pub precision: C64,
}

impl Gaussian1D {
    pub fn new(amplitude: C64, mean: C64, precision: C64) -> Result<Self> {
        if amplitude.norm() == 0.0 || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spike amplitude must be finite and nonzero, got {amplitude}"
            )));
        }
        Self::from_log_amplitude(amplitude.ln(), mean, precision)
    }

    pub fn real(amplitude: f64, mean: f64, precision: f64) -> Result<Self> {
        Self::new(amplitude.into(), mean.into(), precision.into())
    }

    pub fn from_log_amplitude(log_amp: C64, mean: C64, precision: C64) -> Result<Self> {
        if !(precision.re > 0.0) || !precision.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spike precision must have positive real part, got {precision}"
            )));
        }
        Ok(Self { log_amp, mean, precision })
    }

    pub fn amplitude(&self) -> C64 {
        self.log_amp.exp()
    }

    pub fn log_amplitude(&self) -> C64 {
        self.log_amp
    }

    pub fn variance(&self) -> C64 {
        1.0 / self.precision
    }

    pub fn eval(&self, x: f64) -> C64 {
        let d = x - self.mean;
        (self.log_amp - 0.5 * self.precision * d * d).exp()
    }
}

/// Two-mode spike `c · exp(-½ (x - μ)ᵀ Q (x - μ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian2D {
    log_amp: C64,
    pub mean: [C64; 2],
    pub precision: Sym2,
}

impl Gaussian2D {
    pub fn new(amplitude: C64, mean: [C64; 2], precision: Sym2) -> Result<Self> {
        if amplitude.norm() == 0.0 || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spike amplitude must be finite and nonzero, got {amplitude}"
            )));
        }
        Self::from_log_amplitude(amplitude.ln(), mean, precision)
    }

    pub fn real(amplitude: f64, mean: [f64; 2], precision: [[f64; 2]; 2]) -> Result<Self> {
        if precision[0][1] != precision[1][0] {
            return Err(Error::InvalidParameter("precision must be symmetric".into()));
        }
        Self::new(
            amplitude.into(),
            [mean[0].into(), mean[1].into()],
            Sym2::real(precision[0][0], precision[0][1], precision[1][1]),
        )
    }

    pub fn from_log_amplitude(log_amp: C64, mean: [C64; 2], precision: Sym2) -> Result<Self> {
        if !precision.re_positive_definite() {
            return Err(Error::InvalidParameter(format!(
                "real part of precision must be positive definite, got {precision:?}"
            )));
        }
        if !mean[0].is_finite() || !mean[1].is_finite() {
            return Err(Error::InvalidParameter("spike mean must be finite".into()));
        }
        Ok(Self { log_amp, mean, precision })
    }

    pub fn amplitude(&self) -> C64 {
        self.log_amp.exp()
    }

    pub fn log_amplitude(&self) -> C64 {
        self.log_amp
    }

    pub fn eval(&self, x: [f64; 2]) -> C64 {
        let d = [x[0] - self.mean[0], x[1] - self.mean[1]];
        (self.log_amp - 0.5 * self.precision.quad(d)).exp()
    }
}

/// `exp(-½ (x - μ)ᵀ Q (x - μ))` for arbitrary dimension.
pub fn eval_nd(x: &DVector<C64>, mean: &DVector<C64>, precision: &DMatrix<C64>) -> C64 {
    let d = x - mean;
    let q = (d.transpose() * precision * &d)[(0, 0)];
    (-0.5 * q).exp()
}

/// Principal log of `sqrt(z)`, matching the principal square root.
pub(crate) fn ln_sqrt(z: C64) -> C64 {
    0.5 * z.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_identity_case() {
        let g = Gaussian1D::real(1.0, 0.0, 1.0).unwrap();
        assert!((g.eval(0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_unit_offset() {
        let g = Gaussian1D::real(1.0, 0.0, 1.0).unwrap();
        assert!((g.eval(1.0).re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g.eval(1.0).re - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn eval_2d_quadratic_form() {
        // xᵀQx = 2 - 2 + 1 = 1
        let g = Gaussian2D::real(1.0, [0.0, 0.0], [[2.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert!((g.eval([1.0, 1.0]).re - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn eval_at_real_mean_is_amplitude() {
        let amp = C64::new(0.3, -1.2);
        let g = Gaussian1D::new(amp, 2.5.into(), C64::new(4.0, 3.0)).unwrap();
        assert!((g.eval(2.5) - amp).norm() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_precision() {
        assert!(Gaussian1D::real(1.0, 0.0, -1.0).is_err());
        assert!(Gaussian2D::real(1.0, [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]]).is_err());
        assert!(Gaussian2D::real(1.0, [0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]]).is_err());
        assert!(Gaussian1D::real(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn congruence_matches_explicit_product() {
        // S⁻ᵀ Q S⁻¹ with S = [[1,0],[1,1]] and Q = I gives [[2,-1],[-1,1]].
        let s_inv = [[1.0, 0.0], [-1.0, 1.0]];
        let q = Sym2::identity().congruence(s_inv);
        assert_eq!(q, Sym2::real(2.0, -1.0, 1.0));
    }
}
