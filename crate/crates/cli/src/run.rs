//! Trajectory evaluation: closed-form kernels, optional oracle cross-check,
//! and the resulting table.

use jc_core::{
    atom_eigenvalues, bloch_vector, evolve_mixed_with_area, evolve_pure_with_area, oracle_evolve_mixed,
    oracle_evolve_pure, population_inversion, AtomDensityMatrix, Complex64, IntegratorConfig,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::scenario::{Instance, Scenario};

/// Deviations above this fail an oracle-checked run.
pub const ORACLE_THRESHOLD: f64 = 1e-6;

/// Rows of one trajectory; the first entry of every row is `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub sweep_value: Option<f64>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub sweep_parameter: Option<&'static str>,
    /// Column names including the leading `t`.
    pub columns: Vec<String>,
    pub series: Vec<Series>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column across every series, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(
            self.series
                .iter()
                .flat_map(|s| s.rows.iter().map(move |r| r[k]))
                .collect(),
        )
    }
}

/// Largest oracle deviation found in a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub column: String,
    pub time: f64,
    pub max_abs: f64,
}

/// Atomic state at one grid point, plus the coherence when the run is pure.
#[derive(Debug, Clone, Copy)]
struct Sample {
    rho: AtomDensityMatrix,
    xi: Option<Complex64>,
}

fn observables(sample: &Sample, columns: &[&str]) -> Result<Vec<f64>> {
    let rho = &sample.rho;
    let bloch = bloch_vector(rho);
    let needs_mu = columns.iter().any(|c| matches!(*c, "S" | "mu_plus" | "mu_minus"));
    let mu = if needs_mu { Some(atom_eigenvalues(rho)?) } else { None };
    columns
        .iter()
        .map(|c| {
            Ok(match *c {
                "W" => population_inversion(rho),
                "S" => mu.expect("eigenvalues computed").entropy(),
                "Rx" => bloch.r_x,
                "Ry" => bloch.r_y,
                "Rz" => bloch.r_z,
                "R" => bloch.r,
                "xi_re" | "xi_im" => {
                    let xi = sample
                        .xi
                        .ok_or_else(|| CliError::Validation("coherence requested for a mixed run".into()))?;
                    if *c == "xi_re" {
                        xi.re
                    } else {
                        xi.im
                    }
                }
                "mu_plus" => mu.expect("eigenvalues computed").mu_plus,
                "mu_minus" => mu.expect("eigenvalues computed").mu_minus,
                other => unreachable!("unknown column {other}"),
            })
        })
        .collect()
}

fn closed_form(inst: &Instance, grid: &[f64]) -> Result<Vec<Sample>> {
    let rho0 = inst.atom.density();
    grid.par_iter()
        .map(|&t| {
            // One coupling area per time point, shared by every block.
            let area = inst.profile.area(t)?;
            if inst.is_pure() {
                let state = evolve_pure_with_area(&inst.atom, &inst.field, area, t)?;
                Ok(Sample {
                    rho: state.reduced(),
                    xi: Some(state.coherence_xi()),
                })
            } else {
                let rho = evolve_mixed_with_area(&rho0, &inst.field, area, t);
                Ok(Sample { rho, xi: None })
            }
        })
        .collect()
}

fn oracle(inst: &Instance, grid: &[f64]) -> Result<Vec<Sample>> {
    let cfg = IntegratorConfig::default();
    if inst.is_pure() {
        Ok(oracle_evolve_pure(&inst.atom, &inst.field, &inst.profile, grid, &cfg)?
            .iter()
            .map(|s| Sample {
                rho: s.reduced(),
                xi: Some(s.coherence_xi()),
            })
            .collect())
    } else {
        Ok(
            oracle_evolve_mixed(&inst.atom.density(), &inst.field, &inst.profile, grid, &cfg)?
                .into_iter()
                .map(|rho| Sample { rho, xi: None })
                .collect(),
        )
    }
}

fn rows(samples: &[Sample], grid: &[f64], columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    samples
        .par_iter()
        .zip(grid)
        .map(|(s, &t)| {
            let mut row = vec![t];
            row.extend(observables(s, columns)?);
            Ok(row)
        })
        .collect()
}

/// Evaluate every trajectory of `scenario`. With `oracle_check` set, each
/// output column gains a `<name>_dev` column holding the absolute
/// difference to the oracle integrator.
pub fn run(scenario: &Scenario) -> Result<Table> {
    let columns = scenario.columns();
    let grid = scenario.grid();
    let instances = scenario.instances()?;

    let mut names: Vec<String> = std::iter::once("t")
        .chain(columns.iter().copied())
        .map(String::from)
        .collect();
    if scenario.oracle_check {
        names.extend(columns.iter().map(|c| format!("{c}_dev")));
    }

    let mut series = Vec::with_capacity(instances.len());
    for inst in &instances {
        let mut table_rows = rows(&closed_form(inst, &grid)?, &grid, &columns)?;
        if scenario.oracle_check {
            let reference = rows(&oracle(inst, &grid)?, &grid, &columns)?;
            for (row, other) in table_rows.iter_mut().zip(&reference) {
                let dev: Vec<f64> = row[1..].iter().zip(&other[1..]).map(|(a, b)| (a - b).abs()).collect();
                row.extend(dev);
            }
        }
        series.push(Series {
            sweep_value: inst.sweep_value,
            rows: table_rows,
        });
    }

    Ok(Table {
        sweep_parameter: scenario.sweep.as_ref().map(|s| s.parameter.name()),
        columns: names,
        series,
    })
}

/// Worst entry among the `_dev` columns, if the table has any.
pub fn max_deviation(table: &Table) -> Option<Deviation> {
    let dev_columns: Vec<usize> = table
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| c.ends_with("_dev"))
        .map(|(k, _)| k)
        .collect();
    let mut worst: Option<Deviation> = None;
    for row in table.series.iter().flat_map(|s| &s.rows) {
        for &k in &dev_columns {
            if worst.as_ref().is_none_or(|w| row[k] > w.max_abs) {
                worst = Some(Deviation {
                    column: table.columns[k].trim_end_matches("_dev").to_string(),
                    time: row[0],
                    max_abs: row[k],
                });
            }
        }
    }
    worst
}

/// Fail with [`CliError::OracleDeviation`] when any deviation exceeds
/// [`ORACLE_THRESHOLD`].
pub fn check_deviation(table: &Table) -> Result<()> {
    match max_deviation(table) {
        Some(d) if !(d.max_abs <= ORACLE_THRESHOLD) => Err(CliError::OracleDeviation {
            column: d.column,
            time: d.time,
            max_abs: d.max_abs,
            threshold: ORACLE_THRESHOLD,
        }),
        _ => Ok(()),
    }
}

/// Closed-form against oracle, one report line per output column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnReport {
    pub sweep_value: Option<f64>,
    pub column: String,
    pub max_abs: f64,
    pub argmax_time: f64,
    pub rms: f64,
}

pub fn compare(scenario: &Scenario) -> Result<Vec<ColumnReport>> {
    let columns = scenario.columns();
    let grid = scenario.grid();
    let mut reports = Vec::new();
    for inst in scenario.instances()? {
        let a = rows(&closed_form(&inst, &grid)?, &grid, &columns)?;
        let b = rows(&oracle(&inst, &grid)?, &grid, &columns)?;
        for (k, name) in columns.iter().enumerate() {
            let pick = |rows: &[Vec<f64>]| rows.iter().map(|r| vec![r[k + 1]]).collect::<Vec<_>>();
            let report = jc_core::compare_trajectories(&pick(&a), &pick(&b), &grid)?;
            reports.push(ColumnReport {
                sweep_value: inst.sweep_value,
                column: name.to_string(),
                max_abs: report.max_abs,
                argmax_time: report.argmax_time,
                rms: report.rms,
            });
        }
    }
    Ok(reports)
}
