use super::{Gaussian1D, Gaussian2D, Sym2};
use num_complex::Complex64 as C64;

/// Spikes with peak magnitude below this fraction of the largest are dropped.
pub const TRUNCATION_EPS: f64 = 1e-12;
/// Means closer than this (quadrature units) are candidates for merging.
pub const MEAN_MERGE_TOL: f64 = 1e-9;
/// Relative precision tolerance for merging.
pub const PRECISION_MERGE_TOL: f64 = 1e-9;

/// Common interface of the one- and two-mode spikes.
pub trait Spike: Clone {
    /// Value of `x` that orders spikes for merging.
    fn sort_key(&self) -> f64;
    fn log_amp(&self) -> C64;
    fn set_log_amp(&mut self, log_amp: C64);
    /// `ln max_x |g(x)|` over real `x`.
    fn peak_log_magnitude(&self) -> f64;
    /// Same mean and precision within the merge tolerances.
    fn same_shape(&self, other: &Self) -> bool;
}

fn close(a: C64, b: C64, abs: f64) -> bool {
    (a - b).norm() < abs
}

fn close_rel(a: C64, b: C64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm())
}

impl Spike for Gaussian1D {
    fn sort_key(&self) -> f64 {
        self.mean.re
    }

    fn log_amp(&self) -> C64 {
        self.log_amp
    }

    fn set_log_amp(&mut self, log_amp: C64) {
        self.log_amp = log_amp;
    }

    fn peak_log_magnitude(&self) -> f64 {
        // With Q = a + ib and μ = m + in the log-modulus is
        // Re ln c - ½a(x-m)² + ½an² - bn(x-m), maximal at x - m = -bn/a.
        let a = self.precision.re;
        let b = self.precision.im;
        let n = self.mean.im;
        self.log_amp.re + 0.5 * a * n * n + 0.5 * b * b * n * n / a
    }

    fn same_shape(&self, other: &Self) -> bool {
        close(self.mean, other.mean, MEAN_MERGE_TOL)
            && close_rel(self.precision, other.precision, PRECISION_MERGE_TOL)
    }
}

impl Spike for Gaussian2D {
    fn sort_key(&self) -> f64 {
        self.mean[0].re
    }

    fn log_amp(&self) -> C64 {
        self.log_amp
    }

    fn set_log_amp(&mut self, log_amp: C64) {
        self.log_amp = log_amp;
    }

    fn peak_log_magnitude(&self) -> f64 {
        // Q = A + iB, ν = Im μ: maximum of -½ Re[(y - iν)ᵀQ(y - iν)] is
        // ½ νᵀ B A⁻¹ B ν + ½ νᵀ A ν.
        let a = self.precision.re();
        let b = self.precision.im();
        let nu = [self.mean[0].im, self.mean[1].im];
        let bn = [b[0][0] * nu[0] + b[0][1] * nu[1], b[1][0] * nu[0] + b[1][1] * nu[1]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let ainv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        let t1 = bn[0] * (ainv[0][0] * bn[0] + ainv[0][1] * bn[1])
            + bn[1] * (ainv[1][0] * bn[0] + ainv[1][1] * bn[1]);
        let t2 = nu[0] * (a[0][0] * nu[0] + a[0][1] * nu[1]) + nu[1] * (a[1][0] * nu[0] + a[1][1] * nu[1]);
        self.log_amp.re + 0.5 * (t1 + t2)
    }

    fn same_shape(&self, other: &Self) -> bool {
        let sym_close = |p: &Sym2, q: &Sym2| {
            let scale = p.a11.norm().max(p.a22.norm()).max(p.a12.norm());
            let tol = PRECISION_MERGE_TOL * scale;
            (p.a11 - q.a11).norm() <= tol && (p.a12 - q.a12).norm() <= tol && (p.a22 - q.a22).norm() <= tol
        };
        close(self.mean[0], other.mean[0], MEAN_MERGE_TOL)
            && close(self.mean[1], other.mean[1], MEAN_MERGE_TOL)
            && sym_close(&self.precision, &other.precision)
    }
}

/// Finite superposition of spikes, kept merged and truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeSuperposition<G> {
    spikes: Vec<G>,
}

pub type SpikeSuperposition1D = SpikeSuperposition<Gaussian1D>;
pub type SpikeSuperposition2D = SpikeSuperposition<Gaussian2D>;

impl<G: Spike> Default for SpikeSuperposition<G> {
    fn default() -> Self {
        Self { spikes: Vec::new() }
    }
}

impl<G: Spike> SpikeSuperposition<G> {
    pub fn new(spikes: Vec<G>) -> Self {
        Self::with_threshold(spikes, TRUNCATION_EPS)
    }

    /// Merges coincident spikes and drops those below `eps` times the
    /// largest peak magnitude.
    pub fn with_threshold(spikes: Vec<G>, eps: f64) -> Self {
        let mut spikes = merge(spikes);
        if let Some(max) = spikes.iter().map(Spike::peak_log_magnitude).max_by(f64::total_cmp) {
            let floor = max + eps.ln();
            spikes.retain(|s| s.peak_log_magnitude() >= floor);
        }
        Self { spikes }
    }

    pub fn spikes(&self) -> &[G] {
        &self.spikes
    }

    pub fn len(&self) -> usize {
        self.spikes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spikes.is_empty()
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: C64) -> Self {
        let l = factor.ln();
        let spikes = self
            .spikes
            .iter()
            .cloned()
            .map(|mut s| {
                s.set_log_amp(s.log_amp() + l);
                s
            })
            .collect();
        Self { spikes }
    }

    /// Sum of two superpositions, merged and truncated.
    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.spikes.clone();
        all.extend(other.spikes.iter().cloned());
        Self::new(all)
    }

    pub fn into_spikes(self) -> Vec<G> {
        self.spikes
    }
}

impl SpikeSuperposition1D {
    pub fn eval(&self, x: f64) -> C64 {
        self.spikes.iter().map(|g| g.eval(x)).sum()
    }
}

impl SpikeSuperposition2D {
    pub fn eval(&self, x: [f64; 2]) -> C64 {
        self.spikes.iter().map(|g| g.eval(x)).sum()
    }
}

fn merge<G: Spike>(mut spikes: Vec<G>) -> Vec<G> {
    spikes.retain(|s| s.log_amp().re.is_finite());
    spikes.sort_by(|a, b| a.sort_key().total_cmp(&b.sort_key()));
    let mut groups: Vec<(G, Vec<C64>)> = Vec::with_capacity(spikes.len());
    let mut window_start = 0;
    for s in spikes {
        while window_start < groups.len() && s.sort_key() - groups[window_start].0.sort_key() > MEAN_MERGE_TOL
        {
            window_start += 1;
        }
        match groups[window_start..].iter_mut().find(|(g, _)| g.same_shape(&s)) {
            Some((_, logs)) => logs.push(s.log_amp()),
            None => {
                let l = s.log_amp();
                groups.push((s, vec![l]));
            }
        }
    }
    groups
        .into_iter()
        .filter_map(|(mut g, logs)| {
            if logs.len() > 1 {
                let total = log_sum_exp(&logs)?;
                g.set_log_amp(total);
            }
            Some(g)
        })
        .collect()
}

/// `ln Σ exp(l_i)` for complex logs, `None` when the sum cancels exactly.
fn log_sum_exp(logs: &[C64]) -> Option<C64> {
    let m = logs.iter().map(|l| l.re).max_by(f64::total_cmp)?;
    let s: C64 = logs.iter().map(|l| (l - m).exp()).sum();
    if s.norm() == 0.0 {
        None
    } else {
        Some(s.ln() + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(amp: f64, mean: f64, prec: f64) -> Gaussian1D {
        Gaussian1D::real(amp, mean, prec).unwrap()
    }

    #[test]
    fn merges_coincident_spikes() {
        let s = SpikeSuperposition1D::new(vec![g(1.0, 0.0, 2.0), g(2.0, 1e-12, 2.0), g(1.0, 1.0, 2.0)]);
        assert_eq!(s.len(), 2);
        assert!((s.spikes()[0].amplitude().re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn different_precision_not_merged() {
        let s = SpikeSuperposition1D::new(vec![g(1.0, 0.0, 2.0), g(1.0, 0.0, 3.0)]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn cancelling_spikes_vanish() {
        let s = SpikeSuperposition1D::new(vec![g(1.0, 0.0, 2.0), g(-1.0, 0.0, 2.0), g(1.0, 5.0, 2.0)]);
        assert_eq!(s.len(), 1);
        assert!((s.spikes()[0].mean.re - 5.0).abs() < 1e-15);
    }

    #[test]
    fn truncates_relative_to_largest() {
        let s = SpikeSuperposition1D::new(vec![g(1.0, 0.0, 2.0), g(1e-13, 3.0, 2.0), g(1e-11, 4.0, 2.0)]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn peak_magnitude_of_shifted_phase_spike() {
        // exp(-½(x - i)² · 2) has modulus exp(-(x²) + 1), peak e¹.
        let s = Gaussian1D::from_log_amplitude(C64::new(0.0, 0.0), C64::new(0.0, 1.0), 2.0.into()).unwrap();
        assert!((s.peak_log_magnitude() - 1.0).abs() < 1e-14);
        assert!((s.eval(0.0).norm().ln() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn peak_magnitude_2d_matches_grid_scan() {
        let s = Gaussian2D::from_log_amplitude(
            C64::new(0.1, 0.4),
            [C64::new(0.2, 0.3), C64::new(-0.5, -0.7)],
            Sym2::new(C64::new(2.0, 0.5), C64::new(-0.3, 1.0), C64::new(1.5, -0.2)),
        )
        .unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in -400..400 {
            for j in -400..400 {
                let x = [i as f64 * 0.01, j as f64 * 0.01];
                best = best.max(s.eval(x).norm().ln());
            }
        }
        assert!(s.peak_log_magnitude() >= best - 1e-12);
        assert!(s.peak_log_magnitude() - best < 1e-3);
    }
}
