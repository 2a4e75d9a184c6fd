//! Scenario documents: schema, parsing with path-aware errors, validation
//! and conversion into kernel inputs.

use jc_core::{AtomState, Complex64, CouplingProfile, PhotonDistribution};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Parts([f64; 2]),
}

impl ComplexValue {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexValue::Real(re) => Complex64::new(re, 0.0),
            ComplexValue::Parts([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AtomSpec {
    Excited,
    Ground,
    PlusX,
    Custom { c_e: ComplexValue, c_g: ComplexValue },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CustomField {
    Weights(Vec<f64>),
    Amplitudes(Vec<ComplexValue>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Coherent(ComplexValue),
    Thermal(f64),
    Custom(CustomField),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { lambda0: f64 },
    Linear { lambda0: f64, zeta1: f64 },
    Sech { lambda0: f64, zeta2: f64 },
    Sinusoidal { lambda0: f64, zeta3: f64, p: u32 },
    Custom { table: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    /// Number of grid points, both endpoints included.
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Inversion,
    Entropy,
    Bloch,
    Purity,
    Coherence,
    Eigenvalues,
}

impl Output {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Output::Inversion => &["W"],
            Output::Entropy => &["S"],
            Output::Bloch => &["Rx", "Ry", "Rz"],
            Output::Purity => &["R"],
            Output::Coherence => &["xi_re", "xi_im"],
            Output::Eigenvalues => &["mu_plus", "mu_minus"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    MeanN,
    Lambda0,
    Zeta1,
    Zeta2,
    Zeta3,
    P,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::MeanN => "mean_n",
            SweepParameter::Lambda0 => "lambda0",
            SweepParameter::Zeta1 => "zeta1",
            SweepParameter::Zeta2 => "zeta2",
            SweepParameter::Zeta3 => "zeta3",
            SweepParameter::P => "p",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub atom: AtomSpec,
    pub field: FieldSpec,
    pub profile: ProfileSpec,
    pub time: TimeSpec,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default = "default_tail_epsilon")]
    pub tail_epsilon: f64,
    #[serde(default)]
    pub oracle_check: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Inversion, Output::Entropy, Output::Bloch, Output::Purity]
}

fn default_tail_epsilon() -> f64 {
    jc_core::DEFAULT_TAIL_EPSILON
}

/// Kernel inputs for one trajectory (one sweep value, or the whole run).
#[derive(Debug, Clone)]
pub struct Instance {
    pub sweep_value: Option<f64>,
    pub atom: AtomState,
    pub field: PhotonDistribution,
    pub profile: CouplingProfile,
}

impl Instance {
    /// Pure runs track the joint state; anything else goes through the
    /// reduced density matrix.
    pub fn is_pure(&self) -> bool {
        self.field.is_pure()
    }
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|err| {
        let mut path = err.path().to_string();
        let message = err.inner().to_string();
        // serde reports a missing key at its parent; point at the key itself.
        if let Some(key) = missing_field(&message) {
            path = if path == "." {
                key.to_string()
            } else {
                format!("{path}.{key}")
            };
        }
        CliError::Parse { path, message }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

impl Scenario {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        let TimeSpec { t_start, t_end, steps } = self.time;
        if t_start != 0.0 {
            return Err(invalid(format!("time.t_start must be 0, got {t_start}")));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(invalid(format!("time.t_end must be finite and positive, got {t_end}")));
        }
        if steps < 2 {
            return Err(invalid(format!("time.steps must be at least 2, got {steps}")));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(invalid(format!(
                "tail_epsilon must lie in (0, 1), got {}",
                self.tail_epsilon
            )));
        }
        if self.outputs.is_empty() {
            return Err(invalid("outputs must name at least one quantity"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(invalid("sweep.values is empty"));
            }
        }
        let instances = self.instances()?;
        if self.outputs.contains(&Output::Coherence) && instances.iter().any(|i| !i.is_pure()) {
            return Err(invalid(
                "coherence is only defined for a pure field; this scenario evolves a mixed state",
            ));
        }
        Ok(())
    }

    /// Output columns in canonical order, without the time column.
    pub fn columns(&self) -> Vec<&'static str> {
        let mut outputs = self.outputs.clone();
        outputs.sort();
        outputs.dedup();
        outputs.iter().flat_map(|o| o.columns().iter().copied()).collect()
    }

    pub fn grid(&self) -> Vec<f64> {
        let TimeSpec { t_end, steps, .. } = self.time;
        let last = (steps - 1) as f64;
        let mut grid: Vec<f64> = (0..steps).map(|k| t_end * (k as f64 / last)).collect();
        grid[steps - 1] = t_end;
        grid
    }

    /// Build the kernel inputs, one per sweep value.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let atom = self.atom_state()?;
        match &self.sweep {
            None => Ok(vec![Instance {
                sweep_value: None,
                atom,
                field: self.field_with(None)?,
                profile: self.profile_with(None)?,
            }]),
            Some(sweep) => sweep
                .values
                .iter()
                .map(|&v| {
                    if !v.is_finite() {
                        return Err(invalid(format!("sweep value {v} is not finite")));
                    }
                    let (field, profile) = match sweep.parameter {
                        SweepParameter::MeanN => (self.field_with(Some(v))?, self.profile_with(None)?),
                        other => (self.field_with(None)?, self.profile_with(Some((other, v)))?),
                    };
                    Ok(Instance {
                        sweep_value: Some(v),
                        atom,
                        field,
                        profile,
                    })
                })
                .collect(),
        }
    }

    fn atom_state(&self) -> Result<AtomState> {
        Ok(match self.atom {
            AtomSpec::Excited => AtomState::excited(),
            AtomSpec::Ground => AtomState::ground(),
            AtomSpec::PlusX => AtomState::plus_x(),
            AtomSpec::Custom { c_e, c_g } => AtomState::new(c_e.value(), c_g.value())?,
        })
    }

    fn field_with(&self, mean_n: Option<f64>) -> Result<PhotonDistribution> {
        let eps = self.tail_epsilon;
        Ok(match (&self.field, mean_n) {
            (FieldSpec::Coherent(alpha), None) => PhotonDistribution::coherent(alpha.value(), eps)?,
            (FieldSpec::Coherent(alpha), Some(m)) => {
                if m < 0.0 {
                    return Err(invalid(format!("mean_n sweep value {m} is negative")));
                }
                // Keep the phase of alpha, rescale its modulus.
                let phase = alpha.value().arg();
                PhotonDistribution::coherent(Complex64::from_polar(m.sqrt(), phase), eps)?
            }
            (FieldSpec::Thermal(m), None) => PhotonDistribution::thermal(*m, eps)?,
            (FieldSpec::Thermal(_), Some(m)) => PhotonDistribution::thermal(m, eps)?,
            (FieldSpec::Custom(_), Some(_)) => {
                return Err(invalid("a mean_n sweep needs a coherent or thermal field"));
            }
            (FieldSpec::Custom(CustomField::Weights(w)), None) => PhotonDistribution::from_weights(w.clone())?,
            (FieldSpec::Custom(CustomField::Amplitudes(a)), None) => {
                PhotonDistribution::from_amplitudes(a.iter().map(|c| c.value()).collect())?
            }
        })
    }

    fn profile_with(&self, sweep: Option<(SweepParameter, f64)>) -> Result<CouplingProfile> {
        use SweepParameter as S;
        let mut spec = self.profile.clone();
        if let Some((param, v)) = sweep {
            let slot = match (&mut spec, param) {
                (ProfileSpec::Constant { lambda0 }, S::Lambda0)
                | (ProfileSpec::Linear { lambda0, .. }, S::Lambda0)
                | (ProfileSpec::Sech { lambda0, .. }, S::Lambda0)
                | (ProfileSpec::Sinusoidal { lambda0, .. }, S::Lambda0) => lambda0,
                (ProfileSpec::Linear { zeta1, .. }, S::Zeta1) => zeta1,
                (ProfileSpec::Sech { zeta2, .. }, S::Zeta2) => zeta2,
                (ProfileSpec::Sinusoidal { zeta3, .. }, S::Zeta3) => zeta3,
                (ProfileSpec::Sinusoidal { p, .. }, S::P) => {
                    if !(v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
                        return Err(invalid(format!("sweep value {v} is not a valid integer p")));
                    }
                    *p = v as u32;
                    return self.build_profile(&spec);
                }
                (_, param) => {
                    return Err(invalid(format!(
                        "sweep parameter {} does not apply to this profile",
                        param.name()
                    )))
                }
            };
            *slot = v;
        }
        self.build_profile(&spec)
    }

    fn build_profile(&self, spec: &ProfileSpec) -> Result<CouplingProfile> {
        let profile = match *spec {
            ProfileSpec::Constant { lambda0 } => CouplingProfile::constant(lambda0)?,
            ProfileSpec::Linear { lambda0, zeta1 } => CouplingProfile::linear(lambda0, zeta1)?,
            ProfileSpec::Sech { lambda0, zeta2 } => CouplingProfile::sech(lambda0, zeta2)?,
            ProfileSpec::Sinusoidal { lambda0, zeta3, p } => CouplingProfile::sinusoidal(lambda0, zeta3, p)?,
            ProfileSpec::Custom { ref table } => {
                let profile = CouplingProfile::custom(table.iter().map(|&[t, l]| (t, l)).collect())?;
                if let CouplingProfile::Custom(t) = &profile {
                    if t.end() < self.time.t_end {
                        return Err(invalid(format!(
                            "coupling table ends at t = {} before time.t_end = {}",
                            t.end(),
                            self.time.t_end
                        )));
                    }
                }
                profile
            }
        };
        Ok(profile)
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}
