//! Time-dependent atom-field coupling `lambda(t)` and its area
//! `A(t) = int_0^t lambda(s) ds`.
//!
//! On resonance the interaction commutes with itself at different times, so
//! the dynamics depend on time only through `A(t)`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::quadrature;

/// Piecewise-linear coupling sampled at strictly increasing times starting
/// at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    times: Vec<f64>,
    values: Vec<f64>,
    // Exact trapezoidal area up to each knot.
    cumulative: Vec<f64>,
}

impl CouplingTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("coupling table needs at least two samples"));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::invalid(format!(
                "coupling table must start at t = 0, starts at {}",
                samples[0].0
            )));
        }
        for (i, &(t, l)) in samples.iter().enumerate() {
            if !(t.is_finite() && l.is_finite()) {
                return Err(Error::invalid(format!("coupling table row {i} is not finite")));
            }
            if i > 0 && t <= samples[i - 1].0 {
                return Err(Error::invalid(format!(
                    "coupling table times must be strictly increasing (row {i}: {t})"
                )));
            }
        }
        let (times, values): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let mut cumulative = Vec::with_capacity(times.len());
        let mut acc = 0.0;
        cumulative.push(acc);
        for i in 1..times.len() {
            acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
            cumulative.push(acc);
        }
        Ok(Self {
            times,
            values,
            cumulative,
        })
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn end(&self) -> f64 {
        *self.times.last().expect("table has at least two samples")
    }

    fn segment(&self, t: f64) -> Result<usize> {
        if t > self.end() {
            return Err(Error::OutOfRange {
                t,
                start: 0.0,
                end: self.end(),
            });
        }
        // Index i with times[i] <= t <= times[i + 1].
        let i = self.times.partition_point(|&x| x <= t);
        Ok(i.saturating_sub(1).min(self.times.len() - 2))
    }

    fn value(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let s = (t - t0) / (t1 - t0);
        Ok(self.values[i] + s * (self.values[i + 1] - self.values[i]))
    }

    fn area(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let t0 = self.times[i];
        let l0 = self.values[i];
        let l = self.value(t)?;
        Ok(self.cumulative[i] + 0.5 * (l0 + l) * (t - t0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingProfile {
    Constant {
        lambda0: f64,
    },
    /// `lambda0 * zeta1 * t`
    Linear {
        lambda0: f64,
        zeta1: f64,
    },
    /// `lambda0 * sech(zeta2 * t)`
    Sech {
        lambda0: f64,
        zeta2: f64,
    },
    /// `lambda0 * sin(p * zeta3 * t)`: an atom crossing a standing-wave mode
    /// with `p` half-wavelengths at speed `zeta3 * L / pi`.
    Sinusoidal {
        lambda0: f64,
        zeta3: f64,
        p: u32,
    },
    Custom(CouplingTable),
}

fn positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::invalid(format!(
            "{name} must be finite and positive, got {value}"
        )));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || t.is_infinite() {
        return Err(Error::invalid(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

impl CouplingProfile {
    pub fn constant(lambda0: f64) -> Result<Self> {
        positive("lambda0", lambda0)?;
        Ok(Self::Constant { lambda0 })
    }

    pub fn linear(lambda0: f64, zeta1: f64) -> Result<Self> {
        positive("lambda0", lambda0)?;
        positive("zeta1", zeta1)?;
        Ok(Self::Linear { lambda0, zeta1 })
    }

    pub fn sech(lambda0: f64, zeta2: f64) -> Result<Self> {
        positive("lambda0", lambda0)?;
        positive("zeta2", zeta2)?;
        Ok(Self::Sech { lambda0, zeta2 })
    }

    pub fn sinusoidal(lambda0: f64, zeta3: f64, p: u32) -> Result<Self> {
        positive("lambda0", lambda0)?;
        positive("zeta3", zeta3)?;
        if p == 0 {
            return Err(Error::invalid("p must be a positive integer"));
        }
        Ok(Self::Sinusoidal { lambda0, zeta3, p })
    }

    pub fn custom(samples: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Self::Custom(CouplingTable::new(samples)?))
    }

    /// Re-checks the parameter invariants of a directly constructed variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { lambda0 } => positive("lambda0", lambda0),
            Self::Linear { lambda0, zeta1 } => {
                positive("lambda0", lambda0)?;
                positive("zeta1", zeta1)
            }
            Self::Sech { lambda0, zeta2 } => {
                positive("lambda0", lambda0)?;
                positive("zeta2", zeta2)
            }
            Self::Sinusoidal { lambda0, zeta3, p } => Self::sinusoidal(lambda0, zeta3, p).map(|_| ()),
            Self::Custom(_) => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
            Self::Sech { .. } => "sech",
            Self::Sinusoidal { .. } => "sinusoidal",
            Self::Custom(_) => "custom",
        }
    }

    /// Coupling amplitude `lambda0`; the peak absolute value for tables.
    pub fn amplitude(&self) -> f64 {
        match self {
            Self::Constant { lambda0 }
            | Self::Linear { lambda0, .. }
            | Self::Sech { lambda0, .. }
            | Self::Sinusoidal { lambda0, .. } => *lambda0,
            Self::Custom(table) => table.values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Period of `A(t)` for sinusoidal coupling, `2 pi / (p zeta3)`.
    pub fn period(&self) -> Option<f64> {
        match *self {
            Self::Sinusoidal { zeta3, p, .. } => Some(TAU / (p as f64 * zeta3)),
            _ => None,
        }
    }

    pub fn lambda_at(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match self {
            Self::Constant { lambda0 } => *lambda0,
            Self::Linear { lambda0, zeta1 } => lambda0 * zeta1 * t,
            Self::Sech { lambda0, zeta2 } => lambda0 / (zeta2 * t).cosh(),
            Self::Sinusoidal { lambda0, zeta3, p } => lambda0 * (*p as f64 * zeta3 * t).sin(),
            Self::Custom(table) => table.value(t)?,
        })
    }

    /// Coupling area `A(t)` in closed form.
    pub fn area(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let area = match self {
            Self::Constant { lambda0 } => lambda0 * t,
            Self::Linear { lambda0, zeta1 } => 0.5 * lambda0 * zeta1 * t * t,
            Self::Sech { lambda0, zeta2 } => lambda0 / zeta2 * (zeta2 * t).sinh().atan(),
            Self::Sinusoidal { lambda0, zeta3, p } => {
                let k = *p as f64 * zeta3;
                // 1 - cos(x) = 2 sin^2(x / 2), accurate near x = 0.
                let s = (0.5 * k * t).sin();
                2.0 * lambda0 * s * s / k
            }
            Self::Custom(table) => table.area(t)?,
        };
        if !area.is_finite() {
            return Err(Error::Numerical(format!(
                "coupling area at t = {t} overflowed to {area}"
            )));
        }
        Ok(area)
    }

    /// `A(t)` by adaptive quadrature of `lambda`, to absolute error `tol`.
    pub fn area_numeric(&self, t: f64, tol: f64) -> Result<f64> {
        check_time(t)?;
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(Error::invalid(format!(
                "quadrature tolerance must lie in (0, 1e-3], got {tol}"
            )));
        }
        let knots: &[f64] = match self {
            Self::Custom(table) => {
                if t > table.end() {
                    return Err(Error::OutOfRange {
                        t,
                        start: 0.0,
                        end: table.end(),
                    });
                }
                &table.times
            }
            _ => &[],
        };
        // The per-panel estimates are summed, so give the total estimate
        // headroom below the requested tolerance.
        let (value, _) = quadrature::integrate(|s| self.lambda_at(s), 0.0, t, 0.5 * tol, knots)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn lambda_examples() {
        assert_eq!(CouplingProfile::constant(1.0).unwrap().lambda_at(7.0).unwrap(), 1.0);
        let sin = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
        assert!((sin.lambda_at(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        let sech = CouplingProfile::sech(1.0, 0.3).unwrap();
        // sech(3) = 0.099327927419433...
        assert!((sech.lambda_at(10.0).unwrap() - 0.099_327_927_419_433_2).abs() < 1e-15);
    }

    #[test]
    fn area_examples() {
        assert_eq!(CouplingProfile::constant(1.0).unwrap().area(2.0).unwrap(), 2.0);
        let sin = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
        assert!((sin.area(PI).unwrap() - 2.0).abs() < 1e-15);
        assert!(sin.area(2.0 * PI).unwrap().abs() < 1e-15);
        let sech = CouplingProfile::sech(1.0, 0.3).unwrap();
        assert!((sech.area(500.0).unwrap() - PI / 0.6).abs() < 1e-12);
        assert!((sech.area(1e6).unwrap() - 5.235_987_755_982_989).abs() < 1e-12);
    }

    #[test]
    fn area_vanishes_at_origin() {
        let profiles = [
            CouplingProfile::constant(1.3).unwrap(),
            CouplingProfile::linear(0.7, 0.2).unwrap(),
            CouplingProfile::sech(2.0, 0.4).unwrap(),
            CouplingProfile::sinusoidal(1.0, 0.25, 3).unwrap(),
            CouplingProfile::custom(vec![(0.0, 1.0), (1.0, 2.0)]).unwrap(),
        ];
        for p in &profiles {
            assert_eq!(p.area(0.0).unwrap(), 0.0, "{}", p.name());
        }
    }

    #[test]
    fn numeric_area_examples() {
        let c = CouplingProfile::constant(1.0).unwrap();
        assert!((c.area_numeric(2.0, 1e-10).unwrap() - 2.0).abs() < 1e-10);
        let l = CouplingProfile::linear(1.0, 0.16).unwrap();
        assert!((l.area_numeric(10.0, 1e-10).unwrap() - 8.0).abs() < 1e-10);
        let s = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
        let closed = 1.0 - 1.3f64.cos();
        assert!((s.area_numeric(1.3, 1e-10).unwrap() - closed).abs() < 1e-10);
    }

    #[test]
    fn invalid_times_and_parameters() {
        let c = CouplingProfile::constant(1.0).unwrap();
        assert!(matches!(c.lambda_at(-1.0), Err(Error::InvalidInput(_))));
        assert!(matches!(c.area(f64::NAN), Err(Error::InvalidInput(_))));
        assert!(c.area_numeric(1.0, 0.1).is_err());
        assert!(CouplingProfile::constant(0.0).is_err());
        assert!(CouplingProfile::linear(1.0, -0.1).is_err());
        assert!(CouplingProfile::sinusoidal(1.0, 1.0, 0).is_err());
        assert!(CouplingProfile::custom(vec![(0.5, 1.0), (1.0, 1.0)]).is_err());
        assert!(CouplingProfile::custom(vec![(0.0, 1.0), (0.0, 1.0)]).is_err());
        let huge = CouplingProfile::linear(1e300, 1e10).unwrap();
        assert!(matches!(huge.area(1e10), Err(Error::Numerical(_))));
    }

    #[test]
    fn custom_table_interpolates_and_integrates_exactly() {
        let p = CouplingProfile::custom(vec![(0.0, 0.0), (1.0, 2.0), (3.0, -2.0)]).unwrap();
        assert_eq!(p.lambda_at(0.5).unwrap(), 1.0);
        assert_eq!(p.lambda_at(2.0).unwrap(), 0.0);
        assert_eq!(p.lambda_at(3.0).unwrap(), -2.0);
        assert_eq!(p.area(1.0).unwrap(), 1.0);
        assert_eq!(p.area(2.0).unwrap(), 2.0);
        assert_eq!(p.area(3.0).unwrap(), 1.0);
        assert!((p.area_numeric(2.5, 1e-12).unwrap() - p.area(2.5).unwrap()).abs() < 1e-12);
        assert!(matches!(p.lambda_at(3.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(p.area(3.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sinusoidal_period() {
        let s = CouplingProfile::sinusoidal(1.0, 0.5, 2).unwrap();
        assert_eq!(s.period(), Some(TAU));
        assert_eq!(CouplingProfile::constant(1.0).unwrap().period(), None);
    }
}
