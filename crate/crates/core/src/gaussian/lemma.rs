use super::{ln_sqrt, Gaussian1D, Gaussian2D};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Condition number above which `A + B` is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// `G(x; δ, A) G(x; 0, B) = G(0; δ, D) G(x; α, V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductReduction {
    pub v: DMatrix<C64>,
    pub d: DMatrix<C64>,
    pub alpha: DVector<C64>,
}

pub fn product_reduce(delta: &DVector<C64>, a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<ProductReduction> {
    let n = delta.len();
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return Err(Error::InvalidParameter(format!(
            "shape mismatch: delta has {n} entries, A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let v = a + b;
    let condition = condition_number(&v);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSum { condition });
    }
    let v_inv = v.clone().try_inverse().ok_or(Error::SingularSum { condition })?;
    let d = a * &v_inv * b;
    let alpha = &v_inv * a * delta;
    Ok(ProductReduction { v, d, alpha })
}

fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Parameters of `(1/√2π) ∫ dx₁ G(𝐱; 𝛍, Q) G(x₁; μ, q)
/// = (1/N) G(0; μ₁ - μ, ρ⁻²) G(x₂; ν, σ⁻²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialIntegralResult {
    /// `√(Q₁₁ + q)`, principal branch.
    pub n: C64,
    pub rho2: C64,
    pub nu: C64,
    pub sigma2: C64,
    /// `μ₁ - μ`.
    pub offset: C64,
}

impl SpecialIntegralResult {
    /// `ln[(1/N) G(0; μ₁ - μ, ρ⁻²)]`.
    pub fn log_prefactor(&self) -> C64 {
        -0.5 * self.offset * self.offset / self.rho2 - ln_sqrt(self.n * self.n)
    }

    pub fn prefactor(&self) -> C64 {
        self.log_prefactor().exp()
    }
}

/// Integrates the first mode of `g2` against `g1`. Amplitudes of the inputs
/// are ignored; only their shapes enter.
pub fn special_integral(g2: &Gaussian2D, g1: &Gaussian1D) -> Result<SpecialIntegralResult> {
    let qm = g2.precision;
    let q = g1.precision;
    // Singularity of V = Q + diag(q, 0) is what the reduction hinges on.
    let v = DMatrix::from_row_slice(2, 2, &[qm.a11 + q, qm.a12, qm.a12, qm.a22]);
    let condition = condition_number(&v);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSum { condition });
    }
    let det = qm.det();
    let denom = det + q * qm.a22;
    let offset = g2.mean[0] - g1.mean;
    Ok(SpecialIntegralResult {
        n: (qm.a11 + q).sqrt(),
        rho2: 1.0 / q + qm.a22 / det,
        nu: g2.mean[1] + q * qm.a12 / denom * offset,
        sigma2: (qm.a11 + q) / denom,
        offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{eval_nd, Sym2};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn symmetric_scalar_case() {
        let one = DMatrix::from_element(1, 1, c(1.0));
        let r = product_reduce(&DVector::from_element(1, c(0.0)), &one, &one).unwrap();
        assert!((r.v[(0, 0)] - 2.0).norm() < 1e-15);
        assert!((r.d[(0, 0)] - 0.5).norm() < 1e-15);
        assert!(r.alpha[0].norm() < 1e-15);
    }

    #[test]
    fn zero_b_collapses_to_first() {
        let one = DMatrix::from_element(1, 1, c(1.0));
        let zero = DMatrix::from_element(1, 1, c(0.0));
        let r = product_reduce(&DVector::from_element(1, c(1.0)), &one, &zero).unwrap();
        assert!((r.v[(0, 0)] - 1.0).norm() < 1e-15);
        assert!(r.d[(0, 0)].norm() < 1e-15);
        assert!((r.alpha[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn singular_sum_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        let b = DMatrix::from_element(2, 2, c(0.0));
        let err = product_reduce(&DVector::from_element(2, c(0.0)), &a, &b).unwrap_err();
        assert!(matches!(err, Error::SingularSum { .. }));
    }

    #[test]
    fn product_identity_pointwise() {
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0), c(0.3), c(0.3), c(1.0)]);
        let b = DMatrix::from_row_slice(2, 2, &[c(0.5), c(-0.2), c(-0.2), c(1.5)]);
        let delta = DVector::from_vec(vec![c(0.7), c(-1.1)]);
        let r = product_reduce(&delta, &a, &b).unwrap();
        let zero = DVector::from_element(2, c(0.0));
        for k in 0..20 {
            let x = DVector::from_vec(vec![c(0.1 * k as f64 - 1.0), c(0.5 - 0.07 * k as f64)]);
            let lhs = eval_nd(&x, &delta, &a) * eval_nd(&x, &zero, &b);
            let rhs = eval_nd(&zero, &delta, &r.d) * eval_nd(&x, &r.alpha, &r.v);
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm());
        }
    }

    #[test]
    fn unit_special_integral() {
        let g2 = Gaussian2D::real(1.0, [0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let g1 = Gaussian1D::real(1.0, 0.0, 1.0).unwrap();
        let r = special_integral(&g2, &g1).unwrap();
        assert!((r.n - 2f64.sqrt()).norm() < 1e-15);
        assert!((r.rho2 - 2.0).norm() < 1e-15);
        assert!(r.nu.norm() < 1e-15);
        assert!((r.sigma2 - 1.0).norm() < 1e-15);
    }

    #[test]
    fn standard_bell_special_integral() {
        let sp = std::f64::consts::PI.sqrt();
        let g2 = Gaussian2D::real(1.0, [sp, 0.0], [[2.0, -1.0], [-1.0, 1.0]]).unwrap();
        let g1 = Gaussian1D::real(1.0, 0.0, 1.0).unwrap();
        let r = special_integral(&g2, &g1).unwrap();
        assert!((r.sigma2 - 1.5).norm() < 1e-15);
        assert!((r.nu + sp / 2.0).norm() < 1e-15);
        assert!((r.n - 3f64.sqrt()).norm() < 1e-15);
        assert!((r.rho2 - 2.0).norm() < 1e-15);
    }

    #[test]
    fn complex_precision_accepted() {
        let g2 = Gaussian2D::from_log_amplitude(
            c(0.0),
            [c(0.2), c(0.0)],
            Sym2::new(C64::new(1.0, 0.5), C64::new(0.0, 1.0), C64::new(2.0, 0.0)),
        )
        .unwrap();
        let g1 = Gaussian1D::real(1.0, 0.0, 1.0).unwrap();
        let r = special_integral(&g2, &g1).unwrap();
        assert!(r.sigma2.re > 0.0);
    }
}
