//! Brute-force reference dynamics.
//!
//! Integrates `i d/dt (c_e, c_g) = lambda(t) sqrt(n + 1) (c_g, c_e)` for every
//! two-state block with a Runge-Kutta scheme. Only `lambda(t)` is sampled;
//! the coupling area and the closed-form rotation are never consulted, so
//! agreement with [`crate::dynamics`] is an independent check.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coupling::CouplingProfile;
use crate::dynamics::{AtomDensityMatrix, AtomState, JointPureState};
use crate::error::{Error, Result};
use crate::observables::atom_eigensystem;
use crate::photon::PhotonDistribution;

mod tableau;

type Pair = [Complex64; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const MINUS_I: Complex64 = Complex64 { re: 0.0, im: -1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegratorMethod {
    /// Classical fourth-order Runge-Kutta with steps no longer than
    /// `max_step`, adjusted to land on every grid time.
    FixedRk4,
    /// Dormand-Prince 8(5,3) with local error control.
    AdaptiveDormandPrince,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub method: IntegratorMethod,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.5,
            method: IntegratorMethod::AdaptiveDormandPrince,
        }
    }
}

impl IntegratorConfig {
    pub fn fixed_rk4(step: f64) -> Self {
        Self {
            max_step: step,
            method: IntegratorMethod::FixedRk4,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(Error::invalid(format!("{name} must lie in (0, 1e-3], got {tol}")));
            }
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::invalid(format!(
                "max_step must be positive, got {}",
                self.max_step
            )));
        }
        Ok(())
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::invalid("time grid is empty"));
    }
    if !(t_grid[0] >= 0.0) {
        return Err(Error::invalid(format!(
            "time grid must start at t >= 0, got {}",
            t_grid[0]
        )));
    }
    if let Some(w) = t_grid.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(Error::invalid(format!(
            "time grid must be strictly increasing and finite ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

struct Block<'a> {
    index: usize,
    rate: f64,
    profile: &'a CouplingProfile,
}

impl Block<'_> {
    fn rhs(&self, t: f64, y: &Pair) -> Result<Pair> {
        let k = MINUS_I * (self.profile.lambda_at(t)? * self.rate);
        Ok([k * y[1], k * y[0]])
    }
}

fn axpy(y: &Pair, h: f64, terms: &[(f64, &Pair)]) -> Pair {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

fn rk4_step(block: &Block, t: f64, y: &Pair, h: f64) -> Result<Pair> {
    let k1 = block.rhs(t, y)?;
    let k2 = block.rhs(t + 0.5 * h, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = block.rhs(t + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = block.rhs(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(
        y,
        h,
        &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
    ))
}

struct EmbeddedStep {
    y: Pair,
    k_last: Pair,
    error: f64,
}

fn dop853_step(block: &Block, cfg: &IntegratorConfig, t: f64, y: &Pair, k1: &Pair, h: f64) -> Result<EmbeddedStep> {
    let mut k = [[ZERO, ZERO]; tableau::STAGES + 1];
    k[0] = *k1;
    for s in 1..tableau::STAGES {
        let mut ys = *y;
        for (j, kj) in k[..s].iter().enumerate() {
            let a = tableau::A[s][j];
            if a != 0.0 {
                ys[0] += kj[0] * (h * a);
                ys[1] += kj[1] * (h * a);
            }
        }
        k[s] = block.rhs(t + tableau::C[s] * h, &ys)?;
    }
    let mut y_new = *y;
    for (kj, b) in k.iter().zip(tableau::B) {
        y_new[0] += kj[0] * (h * b);
        y_new[1] += kj[1] * (h * b);
    }
    k[tableau::STAGES] = block.rhs(t + h, &y_new)?;

    let (mut err5, mut err3) = (0.0, 0.0);
    for i in 0..2 {
        let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
        let mut e5 = ZERO;
        let mut e3 = ZERO;
        for (kj, (w5, w3)) in k.iter().zip(tableau::E5.iter().zip(tableau::E3)) {
            e5 += kj[i] * *w5;
            e3 += kj[i] * w3;
        }
        err5 += (e5.norm() / scale).powi(2);
        err3 += (e3.norm() / scale).powi(2);
    }
    let error = if err5 == 0.0 && err3 == 0.0 {
        0.0
    } else {
        h.abs() * err5 / ((err5 + 0.01 * err3) * 2.0).sqrt()
    };
    Ok(EmbeddedStep {
        y: y_new,
        k_last: k[tableau::STAGES],
        error,
    })
}

/// Integrate block `n` from `initial` at `t = 0` and sample it on `t_grid`.
pub fn integrate_block(
    n: usize,
    initial: Pair,
    profile: &CouplingProfile,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<Pair>> {
    cfg.validate()?;
    check_grid(t_grid)?;
    let block = Block {
        index: n,
        rate: ((n + 1) as f64).sqrt(),
        profile,
    };
    match cfg.method {
        IntegratorMethod::FixedRk4 => integrate_rk4(&block, initial, t_grid, cfg),
        IntegratorMethod::AdaptiveDormandPrince => integrate_adaptive(&block, initial, t_grid, cfg),
    }
}

fn integrate_rk4(block: &Block, initial: Pair, t_grid: &[f64], cfg: &IntegratorConfig) -> Result<Vec<Pair>> {
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    let mut y = initial;
    for &target in t_grid {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / cfg.max_step).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for i in 0..steps {
                y = rk4_step(block, t + i as f64 * h, &y, h)?;
            }
        }
        t = target;
        out.push(y);
    }
    Ok(out)
}

fn integrate_adaptive(block: &Block, initial: Pair, t_grid: &[f64], cfg: &IntegratorConfig) -> Result<Vec<Pair>> {
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    let mut y = initial;
    let mut k1 = block.rhs(t, &y)?;
    let scale = block.profile.amplitude() * block.rate + 1.0;
    let mut h = (0.1 / scale).min(cfg.max_step);

    for &target in t_grid {
        while t < target {
            let remaining = target - t;
            let landing = h >= remaining;
            let step = if landing { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) && !landing {
                return Err(Error::StepUnderflow {
                    block: block.index,
                    t,
                    step,
                });
            }
            let trial = dop853_step(block, cfg, t, &y, &k1, step)?;
            let factor = if trial.error == 0.0 {
                10.0
            } else {
                (0.9 * trial.error.powf(-1.0 / 8.0)).clamp(0.2, 10.0)
            };
            if trial.error <= 1.0 {
                t = if landing { target } else { t + step };
                y = trial.y;
                k1 = trial.k_last;
                // A shortened landing step says nothing about the natural
                // step size, so only grow from it.
                h = if landing { h.max(step * factor) } else { step * factor };
            } else {
                h = step * factor.min(1.0);
            }
            h = h.min(cfg.max_step);
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::StepUnderflow {
                    block: block.index,
                    t,
                    step: h,
                });
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Reference trajectory of `atom (x) field` sampled on `t_grid`.
pub fn oracle_evolve_pure(
    atom: &AtomState,
    field: &PhotonDistribution,
    profile: &CouplingProfile,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<JointPureState>> {
    cfg.validate()?;
    check_grid(t_grid)?;
    let initial = JointPureState::product(atom, field)?;
    let len = initial.amps_e.len();

    let blocks: Vec<Vec<Pair>> = (0..len - 1)
        .into_par_iter()
        .map(|n| {
            let start = [initial.amps_e[n], initial.amps_g[n + 1]];
            if start == [ZERO, ZERO] {
                Ok(vec![start; t_grid.len()])
            } else {
                integrate_block(n, start, profile, t_grid, cfg)
            }
        })
        .collect::<Result<_>>()?;

    Ok(t_grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut amps_e = vec![ZERO; len];
            let mut amps_g = vec![ZERO; len];
            amps_g[0] = initial.amps_g[0];
            for (n, block) in blocks.iter().enumerate() {
                amps_e[n] = block[k][0];
                amps_g[n + 1] = block[k][1];
            }
            JointPureState {
                amps_e,
                amps_g,
                time: t,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Default)]
struct Partial {
    ee: f64,
    gg: f64,
    eg: Complex64,
}

/// Reference reduced atomic trajectory for `atom0 (x) sum_n P_n |n><n|`.
///
/// `atom0` is split into its eigenvectors; each eigenvector times `|n>` is a
/// pure state living in blocks `n - 1` and `n`, integrated directly and
/// traced over the field.
pub fn oracle_evolve_mixed(
    atom0: &AtomDensityMatrix,
    field: &PhotonDistribution,
    profile: &CouplingProfile,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<AtomDensityMatrix>> {
    atom0.validate()?;
    cfg.validate()?;
    check_grid(t_grid)?;
    let eig = atom_eigensystem(atom0)?;
    let components: Vec<(f64, Pair)> = [(eig.values.mu_plus, eig.plus), (eig.values.mu_minus, eig.minus)]
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .collect();

    let sectors: Vec<Vec<Partial>> = field
        .weights()
        .par_iter()
        .enumerate()
        .map(|(n, &p)| -> Result<Vec<Partial>> {
            let mut acc = vec![Partial::default(); t_grid.len()];
            if p == 0.0 {
                return Ok(acc);
            }
            for &(w, phi) in &components {
                let weight = w * p;
                // phi_e |e,n> lives in block n: (|e,n>, |g,n+1>).
                let upper = integrate_block(n, [phi[0], ZERO], profile, t_grid, cfg)?;
                // phi_g |g,n> lives in block n - 1: (|e,n-1>, |g,n>).
                let lower = if n == 0 {
                    vec![[ZERO, phi[1]]; t_grid.len()]
                } else {
                    integrate_block(n - 1, [ZERO, phi[1]], profile, t_grid, cfg)?
                };
                for (slot, (u, l)) in acc.iter_mut().zip(upper.iter().zip(&lower)) {
                    slot.ee += weight * (u[0].norm_sqr() + l[0].norm_sqr());
                    slot.gg += weight * (u[1].norm_sqr() + l[1].norm_sqr());
                    slot.eg += weight * u[0] * l[1].conj();
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    Ok(t_grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            if t == 0.0 {
                return *atom0;
            }
            let mut total = Partial::default();
            for sector in &sectors {
                total.ee += sector[k].ee;
                total.gg += sector[k].gg;
                total.eg += sector[k].eg;
            }
            AtomDensityMatrix {
                rho_ee: total.ee,
                rho_gg: total.gg,
                rho_eg: total.eg,
            }
        })
        .collect())
}

/// Summary of the pointwise difference between two sampled trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    pub max_abs: f64,
    pub argmax_index: usize,
    pub argmax_time: f64,
    pub rms: f64,
}

/// Compare two trajectories row by row. Each row is a vector of observables
/// at `times[i]`; non-finite differences count as infinite deviation.
pub fn compare_trajectories(a: &[Vec<f64>], b: &[Vec<f64>], times: &[f64]) -> Result<DeviationReport> {
    if a.len() != b.len() || a.len() != times.len() {
        return Err(Error::invalid(format!(
            "trajectory lengths differ ({}, {}, {} times)",
            a.len(),
            b.len(),
            times.len()
        )));
    }
    let mut report = DeviationReport {
        max_abs: 0.0,
        argmax_index: 0,
        argmax_time: times.first().copied().unwrap_or(0.0),
        rms: 0.0,
    };
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        if ra.len() != rb.len() {
            return Err(Error::invalid(format!(
                "row {i} has mismatched widths {} and {}",
                ra.len(),
                rb.len()
            )));
        }
        for (x, y) in ra.iter().zip(rb) {
            let d = (x - y).abs();
            let d = if d.is_nan() { f64::INFINITY } else { d };
            if d > report.max_abs {
                report.max_abs = d;
                report.argmax_index = i;
                report.argmax_time = times[i];
            }
            sum_sq += d * d;
            count += 1;
        }
    }
    if count > 0 {
        report.rms = (sum_sq / count as f64).sqrt();
    }
    Ok(report)
}
