//! Photon-number statistics of the initial cavity field.
//!
//! Every distribution is truncated at the smallest `n_max` for which the
//! discarded probability mass stays below `tail_epsilon`. Coherent tails are
//! accumulated numerically, thermal tails are geometric and solved exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;

/// Largest deviation of a custom distribution's total mass from one that is
/// silently renormalized instead of rejected.
pub const CUSTOM_RENORMALIZE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Coherent,
    Thermal,
    Custom,
}

/// Truncated photon-number distribution `P_n`, `n = 0..=n_max`, with the
/// amplitudes `C_n` when the field is in a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    kind: FieldKind,
    weights: Vec<f64>,
    amplitudes: Option<Vec<Complex64>>,
    mean_n: f64,
    tail_epsilon: f64,
}

fn check_tail_epsilon(tail_epsilon: f64) -> Result<()> {
    if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
        return Err(Error::invalid(format!(
            "tail_epsilon must lie in (0, 1), got {tail_epsilon}"
        )));
    }
    Ok(())
}

impl PhotonDistribution {
    /// Coherent state `|alpha>` with `C_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!)`.
    ///
    /// The moduli are built from `ln|C_n|` so that large `|alpha|` does not
    /// overflow `alpha^n` or `n!`.
    pub fn coherent(alpha: Complex64, tail_epsilon: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::invalid(format!(
                "coherent amplitude must be finite, got {alpha}"
            )));
        }
        check_tail_epsilon(tail_epsilon)?;

        let mean = alpha.norm_sqr();
        if mean == 0.0 {
            return Ok(Self {
                kind: FieldKind::Coherent,
                weights: vec![1.0],
                amplitudes: Some(vec![Complex64::new(1.0, 0.0)]),
                mean_n: 0.0,
                tail_epsilon,
            });
        }

        // ln P_n = -mean + n ln(mean) - ln(n!)
        let ln_mean = mean.ln();
        let guard = tail_epsilon * 1e-3;
        let mut log_p = vec![-mean];
        let beyond = loop {
            let n = log_p.len();
            let next = log_p[n - 1] + ln_mean - (n as f64).ln();
            log_p.push(next);
            // For k > mean the ratio P_{j+1}/P_j <= mean/(k+1) bounds the
            // remaining mass by a geometric series.
            let k = n as f64;
            if k + 1.0 > mean {
                let bound = next.exp() / (1.0 - mean / (k + 1.0));
                if bound < guard {
                    break bound;
                }
            }
        };

        let weights_full: Vec<f64> = log_p.iter().map(|l| l.exp()).collect();
        // tail[n] = mass strictly above n, summed from the top for accuracy.
        let mut tail = vec![0.0; weights_full.len()];
        let mut acc = beyond;
        for n in (0..weights_full.len()).rev() {
            tail[n] = acc;
            acc += weights_full[n];
        }
        let n_max = tail
            .iter()
            .position(|&t| t < tail_epsilon)
            .unwrap_or(weights_full.len() - 1);
        let n_max = absorb_rounding(&weights_full, n_max, tail_epsilon);

        let phase = alpha.arg();
        let weights = weights_full[..=n_max].to_vec();
        let amplitudes = log_p[..=n_max]
            .iter()
            .enumerate()
            .map(|(n, l)| Complex64::from_polar((0.5 * l).exp(), n as f64 * phase))
            .collect();

        Ok(Self {
            kind: FieldKind::Coherent,
            weights,
            amplitudes: Some(amplitudes),
            mean_n: mean,
            tail_epsilon,
        })
    }

    /// Bose-Einstein distribution `P_n = m^n / (1 + m)^(n+1)` for mean photon
    /// number `m`. The field is mixed, so no amplitudes are carried.
    pub fn thermal(mean_n: f64, tail_epsilon: f64) -> Result<Self> {
        if !(mean_n.is_finite() && mean_n >= 0.0) {
            return Err(Error::invalid(format!(
                "thermal mean photon number must be finite and non-negative, got {mean_n}"
            )));
        }
        check_tail_epsilon(tail_epsilon)?;

        let cutoff = thermal_cutoff(mean_n, tail_epsilon);
        let ratio = mean_n / (1.0 + mean_n);
        // Generate past the analytic cutoff so rounding in the retained sum
        // can be absorbed by a few extra terms.
        let mut weights = Vec::with_capacity(2 * cutoff + 2);
        let mut p = 1.0 / (1.0 + mean_n);
        for _ in 0..=2 * cutoff + 1 {
            weights.push(p);
            p *= ratio;
        }
        let n_max = absorb_rounding(&weights, cutoff, tail_epsilon);
        weights.truncate(n_max + 1);

        Ok(Self {
            kind: FieldKind::Thermal,
            weights,
            amplitudes: None,
            mean_n,
            tail_epsilon,
        })
    }

    /// Vacuum field `|0>`.
    pub fn vacuum() -> Self {
        Self {
            kind: FieldKind::Coherent,
            weights: vec![1.0],
            amplitudes: Some(vec![Complex64::new(1.0, 0.0)]),
            mean_n: 0.0,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        }
    }

    /// Explicit mixed distribution given by its weights. A total mass within
    /// [`CUSTOM_RENORMALIZE_SLACK`] of one is renormalized, anything else is
    /// rejected.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("custom photon distribution is empty"));
        }
        if let Some((n, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!(
                "custom photon weight P_{n} = {w} is not a finite non-negative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        let scale = renormalization(total)?;
        let weights: Vec<f64> = weights.into_iter().map(|w| w * scale).collect();
        let mean_n = weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
        Ok(Self {
            kind: FieldKind::Custom,
            weights,
            amplitudes: None,
            mean_n,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        })
    }

    /// Explicit pure field `sum_n C_n |n>`, renormalized like [`Self::from_weights`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("custom photon amplitudes are empty"));
        }
        if let Some((n, c)) = amplitudes
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::invalid(format!("custom amplitude C_{n} = {c} is not finite")));
        }
        let total: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        let scale = renormalization(total)?.sqrt();
        let amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|c| c * scale).collect();
        let weights: Vec<f64> = amplitudes.iter().map(|c| c.norm_sqr()).collect();
        let mean_n = weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
        Ok(Self {
            kind: FieldKind::Custom,
            weights,
            amplitudes: Some(amplitudes),
            mean_n,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        self.amplitudes.as_deref()
    }

    pub fn is_pure(&self) -> bool {
        self.amplitudes.is_some()
    }

    pub fn mean_n(&self) -> f64 {
        self.mean_n
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail_epsilon
    }

    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// Retained probability mass `sum_n P_n`.
    pub fn total_weight(&self) -> f64 {
        ordered_sum(&self.weights)
    }
}

// Smallest terms first; every built-in distribution has a decreasing tail.
fn ordered_sum(weights: &[f64]) -> f64 {
    weights.iter().rev().sum()
}

/// Grow `n_max` past the analytic cutoff until the floating-point sum of the
/// retained weights also reaches `1 - tail_epsilon`, as far as `weights` goes.
fn absorb_rounding(weights: &[f64], mut n_max: usize, tail_epsilon: f64) -> usize {
    while n_max + 1 < weights.len() && ordered_sum(&weights[..=n_max]) < 1.0 - tail_epsilon && weights[n_max + 1] > 0.0
    {
        n_max += 1;
    }
    n_max
}

fn renormalization(total: f64) -> Result<f64> {
    if (total - 1.0).abs() >= CUSTOM_RENORMALIZE_SLACK {
        return Err(Error::invalid(format!(
            "custom photon distribution has total probability {total}; expected 1 within {CUSTOM_RENORMALIZE_SLACK}"
        )));
    }
    Ok(1.0 / total)
}

/// Smallest `n_max` with `(m / (1 + m))^(n_max + 1) < tail_epsilon`.
fn thermal_cutoff(mean_n: f64, tail_epsilon: f64) -> usize {
    if mean_n == 0.0 {
        return 0;
    }
    let ln_ratio = (mean_n / (1.0 + mean_n)).ln();
    let tail = |n: usize| ((n as f64 + 1.0) * ln_ratio).exp();
    let mut n = (tail_epsilon.ln() / ln_ratio).floor().max(0.0) as usize;
    while n > 0 && tail(n - 1) < tail_epsilon {
        n -= 1;
    }
    while tail(n) >= tail_epsilon {
        n += 1;
    }
    n
}

/// Mean thermal photon number `1 / (exp(nu / k_B T) - 1)` for the ratio
/// `frequency_over_kt = nu / (k_B T)`.
pub fn mean_n_from_temperature(frequency_over_kt: f64) -> Result<f64> {
    if !(frequency_over_kt > 0.0) {
        return Err(Error::invalid(format!(
            "frequency over k_B T must be positive, got {frequency_over_kt}"
        )));
    }
    Ok(1.0 / frequency_over_kt.exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_coherent_state() {
        let d = PhotonDistribution::coherent(Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(d.n_max(), 0);
        assert_eq!(d.weights(), &[1.0]);
        assert_eq!(d.mean_n(), 0.0);
    }

    #[test]
    fn coherent_alpha_five_peaks_near_mean() {
        let d = PhotonDistribution::coherent(Complex64::new(5.0, 0.0), 1e-12).unwrap();
        assert_eq!(d.mean_n(), 25.0);
        let argmax = d
            .weights()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        // Poisson mode is floor(mean) and floor(mean) - 1 for integer means.
        assert!(argmax == 24 || argmax == 25);
    }

    #[test]
    fn coherent_cutoff_matches_direct_tail_sum() {
        // Brute-force oracle: Poisson weights from factorials, tail summed
        // directly far past the cutoff.
        let eps = 1e-12;
        let d = PhotonDistribution::coherent(Complex64::new(1.0, 0.0), eps).unwrap();
        let poisson: Vec<f64> = (0..80)
            .map(|n| {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                (-1.0f64).exp() / fact
            })
            .collect();
        let tail_above = |n: usize| poisson[n + 1..].iter().rev().sum::<f64>();
        let expected = (0..70).find(|&n| tail_above(n) < eps).unwrap();
        assert_eq!(d.n_max(), expected);
        assert!(d.total_weight() >= 1.0 - eps);
        assert!(d.total_weight() <= 1.0 + 1e-15);
    }

    #[test]
    fn log_space_amplitudes_match_factorial_construction() {
        let alpha = Complex64::new(1.7, -0.9);
        let d = PhotonDistribution::coherent(alpha, 1e-14).unwrap();
        let amps = d.amplitudes().unwrap();
        let prefactor = (-alpha.norm_sqr() / 2.0).exp();
        for (n, amp) in amps.iter().enumerate().take(21) {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let direct = prefactor * alpha.powu(n as u32) / fact.sqrt();
            assert!((amp - direct).norm() <= 1e-12 * direct.norm(), "n = {n}");
        }
    }

    #[test]
    fn large_alpha_does_not_overflow() {
        let d = PhotonDistribution::coherent(Complex64::new(14.0, 0.0), 1e-12).unwrap();
        assert!(d.n_max() > 196);
        assert!(d.weights().iter().all(|w| w.is_finite()));
        assert!((d.total_weight() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn coherent_rejects_non_finite_alpha() {
        assert!(PhotonDistribution::coherent(Complex64::new(f64::NAN, 0.0), 1e-12).is_err());
        assert!(PhotonDistribution::coherent(Complex64::new(1.0, f64::INFINITY), 1e-12).is_err());
        assert!(PhotonDistribution::coherent(Complex64::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn thermal_zero_temperature_is_vacuum() {
        let d = PhotonDistribution::thermal(0.0, 1e-12).unwrap();
        assert_eq!(d.weights(), &[1.0]);
        assert!(!d.is_pure());
    }

    #[test]
    fn thermal_unit_mean_halves() {
        let d = PhotonDistribution::thermal(1.0, 1e-12).unwrap();
        for (n, w) in d.weights().iter().enumerate() {
            assert_eq!(*w, 0.5f64.powi(n as i32 + 1));
        }
    }

    #[test]
    fn thermal_cutoff_is_minimal_geometric_tail() {
        let eps = 1e-12;
        let d = PhotonDistribution::thermal(25.0, eps).unwrap();
        let q: f64 = 25.0 / 26.0;
        let n_max = d.n_max();
        assert!(q.powi(n_max as i32 + 1) < eps);
        assert!(q.powi(n_max as i32) >= eps);
        // Direct summation of the discarded tail agrees with the closed form.
        let direct: f64 = (n_max + 1..n_max + 4000).rev().map(|n| q.powi(n as i32) / 26.0).sum();
        assert_relative_eq!(direct, q.powi(n_max as i32 + 1), max_relative = 1e-9);
    }

    #[test]
    fn thermal_rejects_negative_mean() {
        assert!(PhotonDistribution::thermal(-0.1, 1e-12).is_err());
    }

    #[test]
    fn custom_distributions_renormalize_or_reject() {
        let d = PhotonDistribution::from_weights(vec![0.5, 0.5 + 5e-10]).unwrap();
        assert_relative_eq!(d.total_weight(), 1.0, epsilon = 1e-15);
        assert!(PhotonDistribution::from_weights(vec![0.5, 0.4]).is_err());
        assert!(PhotonDistribution::from_weights(vec![1.5, -0.5]).is_err());

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = PhotonDistribution::from_amplitudes(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
        assert!(d.is_pure());
        assert_relative_eq!(d.mean_n(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn temperature_to_mean_photon_number() {
        assert!(mean_n_from_temperature(50.0).unwrap() < 2e-22);
        assert_relative_eq!(
            mean_n_from_temperature(std::f64::consts::LN_2).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // 1/(e^0.01 - 1) to 20 digits: 99.500833331944449...
        assert_relative_eq!(
            mean_n_from_temperature(0.01).unwrap(),
            99.500_833_331_944_45,
            max_relative = 1e-14
        );
        assert!(mean_n_from_temperature(0.0).is_err());
        assert!(mean_n_from_temperature(-1.0).is_err());
    }
}
