//! Quantities measured on the reduced atomic state.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::coupling::CouplingProfile;
use crate::dynamics::{AtomDensityMatrix, JointPureState};
use crate::error::{Error, Result};
use crate::photon::PhotonDistribution;

/// Eigenvalues within this distance outside `[0, 1]` are clamped; larger
/// excursions are reported as numerical failures.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;

/// Eigenvalue gap below which the eigenbasis defaults to `{|e>, |g>}`.
pub const DEGENERACY_GAP: f64 = 1e-12;

/// Population inversion `W = rho_ee - rho_gg`.
pub fn population_inversion(rho: &AtomDensityMatrix) -> f64 {
    rho.rho_ee - rho.rho_gg
}

/// `W(t) = sum_n P_n cos(2 A(t) sqrt(n + 1))` for an initially excited atom.
pub fn inversion_closed_form(dist: &PhotonDistribution, profile: &CouplingProfile, t: f64) -> Result<f64> {
    let area = profile.area(t)?;
    Ok(dist
        .weights()
        .iter()
        .enumerate()
        .map(|(n, p)| p * (2.0 * area * ((n + 1) as f64).sqrt()).cos())
        .sum())
}

pub fn coherence_xi(state: &JointPureState) -> Complex64 {
    state.coherence_xi()
}

/// Eigenvalues `mu_+ >= mu_-` of the reduced atomic state, which are also the
/// squared Schmidt coefficients of a pure joint state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtData {
    pub mu_plus: f64,
    pub mu_minus: f64,
}

pub fn atom_eigenvalues(rho: &AtomDensityMatrix) -> Result<SchmidtData> {
    let w = population_inversion(rho);
    let root = (w * w + 4.0 * rho.rho_eg.norm_sqr()).sqrt();
    let mu_plus = 0.5 * (1.0 + root);
    let mu_minus = 0.5 * (1.0 - root);
    if !(mu_minus >= -EIGENVALUE_CLAMP && mu_plus <= 1.0 + EIGENVALUE_CLAMP) {
        return Err(Error::Numerical(format!(
            "reduced density matrix eigenvalues ({mu_plus}, {mu_minus}) leave [0, 1]"
        )));
    }
    Ok(SchmidtData {
        mu_plus: mu_plus.clamp(0.0, 1.0),
        mu_minus: mu_minus.clamp(0.0, 1.0),
    })
}

fn entropy_term(mu: f64) -> f64 {
    if mu > 0.0 {
        -mu * mu.log2()
    } else {
        0.0
    }
}

impl SchmidtData {
    /// `-sum_i mu_i log2 mu_i`, in bits.
    pub fn entropy(&self) -> f64 {
        entropy_term(self.mu_plus) + entropy_term(self.mu_minus)
    }
}

/// Von Neumann entropy of the atom in bits.
pub fn von_neumann_entropy(rho: &AtomDensityMatrix) -> Result<f64> {
    Ok(atom_eigenvalues(rho)?.entropy())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r_x: f64,
    pub r_y: f64,
    pub r_z: f64,
    /// Modulus, the purity measure of the atomic state.
    pub r: f64,
}

pub fn bloch_vector(rho: &AtomDensityMatrix) -> BlochVector {
    let r_x = 2.0 * rho.rho_eg.re;
    let r_y = -2.0 * rho.rho_eg.im;
    let r_z = rho.rho_ee - rho.rho_gg;
    BlochVector {
        r_x,
        r_y,
        r_z,
        r: (r_x * r_x + r_y * r_y + r_z * r_z).sqrt(),
    }
}

/// Predicted first revival time, where one is known in closed form:
/// `2 pi sqrt(<n>) / lambda0` for constant coupling and
/// `2 sqrt(pi sqrt(<n>) / (zeta1 lambda0))` for linear coupling.
pub fn revival_time(dist: &PhotonDistribution, profile: &CouplingProfile) -> Option<f64> {
    let mean = dist.mean_n();
    if !(mean > 0.0) {
        return None;
    }
    match *profile {
        CouplingProfile::Constant { lambda0 } => Some(TAU * mean.sqrt() / lambda0),
        CouplingProfile::Linear { lambda0, zeta1 } => Some(2.0 * (PI * mean.sqrt() / (zeta1 * lambda0)).sqrt()),
        _ => None,
    }
}

/// Schmidt data of a pure joint state together with the atomic Schmidt
/// vectors `[c_e, c_g]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtDecomposition {
    pub values: SchmidtData,
    pub plus: [Complex64; 2],
    pub minus: [Complex64; 2],
}

impl SchmidtDecomposition {
    /// `sum_i mu_i |v_i><v_i|` as a density matrix.
    pub fn reconstruct(&self) -> AtomDensityMatrix {
        let SchmidtData { mu_plus, mu_minus } = self.values;
        let (p, m) = (self.plus, self.minus);
        AtomDensityMatrix {
            rho_ee: mu_plus * p[0].norm_sqr() + mu_minus * m[0].norm_sqr(),
            rho_gg: mu_plus * p[1].norm_sqr() + mu_minus * m[1].norm_sqr(),
            rho_eg: mu_plus * p[0] * p[1].conj() + mu_minus * m[0] * m[1].conj(),
        }
    }
}

/// Diagonalizes the reduced atomic state of `state`.
pub fn schmidt_state(state: &JointPureState) -> Result<SchmidtDecomposition> {
    atom_eigensystem(&state.reduced())
}

/// Eigenvalues and eigenvectors of a 2x2 atomic density matrix. A degenerate
/// spectrum returns the bare basis `{|e>, |g>}`.
pub fn atom_eigensystem(rho: &AtomDensityMatrix) -> Result<SchmidtDecomposition> {
    let values = atom_eigenvalues(rho)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if values.mu_plus - values.mu_minus < DEGENERACY_GAP {
        return Ok(SchmidtDecomposition {
            values,
            plus: [one, zero],
            minus: [zero, one],
        });
    }

    // Take the eigenvector from whichever row of (rho - mu_+) is better
    // conditioned.
    let (a, d, b) = (rho.rho_ee, rho.rho_gg, rho.rho_eg);
    let mu = values.mu_plus;
    let v = if a >= d {
        [Complex64::new(mu - d, 0.0), b.conj()]
    } else {
        [b, Complex64::new(mu - a, 0.0)]
    };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let plus = [v[0] / norm, v[1] / norm];
    let minus = [-plus[1].conj(), plus[0].conj()];
    Ok(SchmidtDecomposition { values, plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_mixed, evolve_pure, AtomState};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inversion_of_basis_states() {
        assert_eq!(population_inversion(&AtomDensityMatrix::excited()), 1.0);
        assert_eq!(population_inversion(&AtomDensityMatrix::maximally_mixed()), 0.0);
    }

    #[test]
    fn sinusoidal_inversion_returns_after_one_period() {
        let field = PhotonDistribution::thermal(25.0, 1e-12).unwrap();
        let profile = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
        let rho = evolve_mixed(&AtomDensityMatrix::excited(), &field, &profile, TAU).unwrap();
        assert!((population_inversion(&rho) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn vacuum_inversion_is_cos_2t() {
        let field = PhotonDistribution::vacuum();
        let profile = CouplingProfile::constant(1.0).unwrap();
        assert!(inversion_closed_form(&field, &profile, PI / 4.0).unwrap().abs() < 1e-15);
        assert!((inversion_closed_form(&field, &profile, 0.3).unwrap() - 0.6f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let e = atom_eigenvalues(&AtomDensityMatrix::excited()).unwrap();
        assert_eq!((e.mu_plus, e.mu_minus), (1.0, 0.0));
        let m = atom_eigenvalues(&AtomDensityMatrix::maximally_mixed()).unwrap();
        assert_eq!((m.mu_plus, m.mu_minus), (0.5, 0.5));
    }

    #[test]
    fn eigenvalues_match_independent_eigensolve() {
        // Hermitian 2x2 eigenvalues via trace and determinant.
        let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
        let profile = CouplingProfile::constant(1.0).unwrap();
        let rho = evolve_pure(&AtomState::excited(), &field, &profile, 31.4)
            .unwrap()
            .reduced();
        let tr = rho.trace();
        let det = rho.rho_ee * rho.rho_gg - rho.rho_eg.norm_sqr();
        let disc = (tr * tr / 4.0 - det).sqrt();
        let e = atom_eigenvalues(&rho).unwrap();
        assert!((e.mu_plus - (tr / 2.0 + disc)).abs() < 1e-12);
        assert!((e.mu_minus - (tr / 2.0 - disc)).abs() < 1e-12);
    }

    #[test]
    fn unphysical_state_is_a_numerical_failure() {
        let rho = AtomDensityMatrix {
            rho_ee: 1.0,
            rho_gg: 0.0,
            rho_eg: c(0.1, 0.0),
        };
        assert!(matches!(atom_eigenvalues(&rho), Err(Error::Numerical(_))));
    }

    #[test]
    fn entropy_limits() {
        assert_eq!(von_neumann_entropy(&AtomDensityMatrix::excited()).unwrap(), 0.0);
        assert_eq!(von_neumann_entropy(&AtomDensityMatrix::maximally_mixed()).unwrap(), 1.0);
        let pure = AtomState::plus_x().density();
        assert!(von_neumann_entropy(&pure).unwrap() < 1e-12);
    }

    #[test]
    fn bloch_examples() {
        let b = bloch_vector(&AtomState::plus_x().density());
        assert!((b.r_x - 1.0).abs() < 1e-15 && b.r_y == 0.0 && b.r_z == 0.0);
        let b = bloch_vector(&AtomDensityMatrix::excited());
        assert_eq!((b.r_x, b.r_y, b.r_z, b.r), (0.0, 0.0, 1.0, 1.0));
        // sigma_y eigenstate (|e> + i|g>)/sqrt(2) points along +y.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = bloch_vector(&AtomState::new(c(s, 0.0), c(0.0, s)).unwrap().density());
        assert!((b.r_y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn revival_predictions() {
        let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
        let constant = CouplingProfile::constant(1.0).unwrap();
        assert!((revival_time(&field, &constant).unwrap() - 10.0 * PI).abs() < 1e-12);
        let fast = CouplingProfile::linear(1.0, 0.16).unwrap();
        assert!((revival_time(&field, &fast).unwrap() - 19.816_636_488_030_054).abs() < 1e-9);
        let slow = CouplingProfile::linear(1.0, 0.01).unwrap();
        assert!((revival_time(&field, &slow).unwrap() - 79.266_545_952_120_22).abs() < 1e-9);
        let sech = CouplingProfile::sech(1.0, 0.3).unwrap();
        assert_eq!(revival_time(&field, &sech), None);
        assert_eq!(revival_time(&PhotonDistribution::vacuum(), &constant), None);
    }

    #[test]
    fn schmidt_of_product_state_recovers_atom() {
        let field = PhotonDistribution::coherent(c(2.0, 0.0), 1e-12).unwrap();
        let atom = AtomState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let s = JointPureState::product(&atom, &field).unwrap();
        let d = schmidt_state(&s).unwrap();
        assert!((d.values.mu_plus - 1.0).abs() < 1e-12);
        // Equal up to a global phase.
        let overlap = d.plus[0].conj() * atom.c_e + d.plus[1].conj() * atom.c_g;
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_spectrum_uses_bare_basis() {
        let s = JointPureState {
            amps_e: vec![c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)],
            amps_g: vec![c(0.0, 0.0), c(std::f64::consts::FRAC_1_SQRT_2, 0.0)],
            time: 0.0,
        };
        let d = schmidt_state(&s).unwrap();
        assert_eq!(d.plus, [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(d.minus, [c(0.0, 0.0), c(1.0, 0.0)]);
    }
}
