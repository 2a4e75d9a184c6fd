//! Closed-form evolution in the bare basis.
//!
//! The resonant interaction couples only the pairs `{|e,n>, |g,n+1>}`. Each
//! pair rotates by `theta_n = A(t) sqrt(n + 1)`:
//!
//! ```text
//! | cos theta_n      -i sin theta_n |
//! | -i sin theta_n    cos theta_n   |
//! ```
//!
//! and the dark state `|g,0>` does not move.

use num_complex::Complex64;

use crate::coupling::CouplingProfile;
use crate::error::{Error, Result};
use crate::photon::PhotonDistribution;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) const NORM_TOLERANCE: f64 = 1e-12;
pub(crate) const TRACE_TOLERANCE: f64 = 1e-10;
const POPULATION_SLACK: f64 = 1e-12;
const POSITIVITY_SLACK: f64 = 1e-10;

/// Pure two-level state `c_e |e> + c_g |g>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub c_e: Complex64,
    pub c_g: Complex64,
}

impl AtomState {
    pub fn new(c_e: Complex64, c_g: Complex64) -> Result<Self> {
        let norm = c_e.norm_sqr() + c_g.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::invalid(format!(
                "atomic state must be normalized, |c_e|^2 + |c_g|^2 = {norm}"
            )));
        }
        Ok(Self { c_e, c_g })
    }

    pub fn excited() -> Self {
        Self {
            c_e: Complex64::new(1.0, 0.0),
            c_g: Complex64::new(0.0, 0.0),
        }
    }

    pub fn ground() -> Self {
        Self {
            c_e: Complex64::new(0.0, 0.0),
            c_g: Complex64::new(1.0, 0.0),
        }
    }

    /// `(|e> + |g>) / sqrt(2)`, the +1 eigenstate of `sigma_x`.
    pub fn plus_x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c_e: Complex64::new(s, 0.0),
            c_g: Complex64::new(s, 0.0),
        }
    }

    /// `|psi><psi|`, divided by the squared norm so that rounding in the
    /// amplitudes (e.g. `1/sqrt(2)` squared) does not leak into the trace.
    pub fn density(&self) -> AtomDensityMatrix {
        let ee = self.c_e.norm_sqr();
        let gg = self.c_g.norm_sqr();
        let norm = ee + gg;
        AtomDensityMatrix {
            rho_ee: ee / norm,
            rho_gg: gg / norm,
            rho_eg: self.c_e * self.c_g.conj() / norm,
        }
    }
}

/// Reduced atomic state in the `{|e>, |g>}` basis. `rho_eg = <e|rho|g>`;
/// `rho_ge` is its conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomDensityMatrix {
    pub rho_ee: f64,
    pub rho_gg: f64,
    pub rho_eg: Complex64,
}

impl AtomDensityMatrix {
    pub fn new(rho_ee: f64, rho_gg: f64, rho_eg: Complex64) -> Result<Self> {
        let rho = Self { rho_ee, rho_gg, rho_eg };
        rho.validate()?;
        Ok(rho)
    }

    pub fn excited() -> Self {
        AtomState::excited().density()
    }

    pub fn ground() -> Self {
        AtomState::ground().density()
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho_ee: 0.5,
            rho_gg: 0.5,
            rho_eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho_ee + self.rho_gg
    }

    /// Checks unit trace, non-negative populations and positive
    /// semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let Self { rho_ee, rho_gg, rho_eg } = *self;
        if ![rho_ee, rho_gg, rho_eg.re, rho_eg.im].iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("density matrix has non-finite entries"));
        }
        if (rho_ee + rho_gg - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::invalid(format!("density matrix trace is {}", rho_ee + rho_gg)));
        }
        if rho_ee < -POPULATION_SLACK || rho_gg < -POPULATION_SLACK {
            return Err(Error::invalid(format!(
                "density matrix populations must be non-negative ({rho_ee}, {rho_gg})"
            )));
        }
        if rho_eg.norm_sqr() > rho_ee * rho_gg + POSITIVITY_SLACK {
            return Err(Error::invalid("density matrix is not positive semidefinite"));
        }
        Ok(())
    }
}

/// Evolved atom-field state `sum_n (C_{e,n} |e> + C_{g,n} |g>) |n>`.
///
/// Both amplitude vectors have the same length; entries past the populated
/// photon numbers are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPureState {
    pub amps_e: Vec<Complex64>,
    pub amps_g: Vec<Complex64>,
    pub time: f64,
}

impl JointPureState {
    /// Product state `atom (x) field` at `t = 0`.
    pub fn product(atom: &AtomState, field: &PhotonDistribution) -> Result<Self> {
        let amps = field
            .amplitudes()
            .ok_or_else(|| Error::invalid("pure evolution requires a field with amplitudes; use mixed evolution"))?;
        let len = amps.len() + 1;
        let mut amps_e = vec![Complex64::new(0.0, 0.0); len];
        let mut amps_g = vec![Complex64::new(0.0, 0.0); len];
        for (n, c) in amps.iter().enumerate() {
            amps_e[n] = atom.c_e * c;
            amps_g[n] = atom.c_g * c;
        }
        Ok(Self {
            amps_e,
            amps_g,
            time: 0.0,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps_e.iter().chain(self.amps_g.iter()).map(|c| c.norm_sqr()).sum()
    }

    /// Partial trace over the field.
    pub fn reduced(&self) -> AtomDensityMatrix {
        let mut rho_ee = 0.0;
        let mut rho_gg = 0.0;
        let mut rho_eg = Complex64::new(0.0, 0.0);
        for (ce, cg) in self.amps_e.iter().zip(&self.amps_g) {
            rho_ee += ce.norm_sqr();
            rho_gg += cg.norm_sqr();
            rho_eg += ce * cg.conj();
        }
        AtomDensityMatrix { rho_ee, rho_gg, rho_eg }
    }

    /// `xi = sum_n conj(C_{e,n}) C_{g,n}`, equal to `rho_ge`.
    pub fn coherence_xi(&self) -> Complex64 {
        self.amps_e
            .iter()
            .zip(&self.amps_g)
            .map(|(ce, cg)| ce.conj() * cg)
            .sum()
    }

    /// Expectation of the conserved excitation number
    /// `a^dag a + sigma_z / 2`.
    pub fn excitation_expectation(&self) -> f64 {
        self.amps_e
            .iter()
            .zip(&self.amps_g)
            .enumerate()
            .map(|(n, (ce, cg))| {
                let n = n as f64;
                (n + 0.5) * ce.norm_sqr() + (n - 0.5) * cg.norm_sqr()
            })
            .sum()
    }
}

/// Rotation angle of block `n` (states `|e,n>`, `|g,n+1>`) at coupling area `area`.
pub fn block_angle(n: usize, area: f64) -> f64 {
    area * ((n + 1) as f64).sqrt()
}

/// Apply the block rotation by `theta` to the pair `(c_e, c_g)`.
#[inline]
pub fn rotate_block(theta: f64, c_e: Complex64, c_g: Complex64) -> (Complex64, Complex64) {
    let (s, c) = theta.sin_cos();
    (c * c_e - I * s * c_g, c * c_g - I * s * c_e)
}

/// Evolve `atom (x) field` under `profile` to time `t`.
pub fn evolve_pure(
    atom: &AtomState,
    field: &PhotonDistribution,
    profile: &CouplingProfile,
    t: f64,
) -> Result<JointPureState> {
    let area = profile.area(t)?;
    evolve_pure_with_area(atom, field, area, t)
}

/// As [`evolve_pure`] with the coupling area already evaluated.
pub fn evolve_pure_with_area(
    atom: &AtomState,
    field: &PhotonDistribution,
    area: f64,
    t: f64,
) -> Result<JointPureState> {
    let mut state = JointPureState::product(atom, field)?;
    state.time = t;
    if t == 0.0 {
        return Ok(state);
    }
    // Block n mixes e-index n with g-index n + 1; g-index 0 is dark.
    let len = state.amps_e.len();
    for n in 0..len - 1 {
        let (ce, cg) = rotate_block(block_angle(n, area), state.amps_e[n], state.amps_g[n + 1]);
        state.amps_e[n] = ce;
        state.amps_g[n + 1] = cg;
    }
    Ok(state)
}

/// Reduced atomic state at time `t` for the initial state
/// `atom0 (x) sum_n P_n |n><n|`.
///
/// Only the photon-number weights of `field` enter: each `|n><n|` sector is
/// rotated independently and traced out.
pub fn evolve_mixed(
    atom0: &AtomDensityMatrix,
    field: &PhotonDistribution,
    profile: &CouplingProfile,
    t: f64,
) -> Result<AtomDensityMatrix> {
    atom0.validate()?;
    let area = profile.area(t)?;
    Ok(evolve_mixed_with_area(atom0, field, area, t))
}

/// As [`evolve_mixed`] with the coupling area already evaluated and the
/// initial state already validated.
pub fn evolve_mixed_with_area(
    atom0: &AtomDensityMatrix,
    field: &PhotonDistribution,
    area: f64,
    t: f64,
) -> AtomDensityMatrix {
    if t == 0.0 {
        return *atom0;
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut rho_ee = 0.0;
    let mut rho_gg = 0.0;
    let mut rho_eg = zero;
    for (n, &p) in field.weights().iter().enumerate() {
        // |e,n> evolves in block n into (|e,n>, |g,n+1>).
        let (e_stay, e_flip) = rotate_block(block_angle(n, area), one, zero);
        // |g,n> evolves in block n - 1 into (|e,n-1>, |g,n>); |g,0> is dark.
        let (g_flip, g_stay) = if n == 0 {
            (zero, one)
        } else {
            rotate_block(block_angle(n - 1, area), zero, one)
        };
        rho_ee += p * (atom0.rho_ee * e_stay.norm_sqr() + atom0.rho_gg * g_flip.norm_sqr());
        rho_gg += p * (atom0.rho_ee * e_flip.norm_sqr() + atom0.rho_gg * g_stay.norm_sqr());
        // Only the components sharing photon number n survive the trace.
        rho_eg += p * atom0.rho_eg * e_stay * g_stay.conj();
    }
    AtomDensityMatrix { rho_ee, rho_gg, rho_eg }
}
