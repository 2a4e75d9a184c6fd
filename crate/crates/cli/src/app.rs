//! Command-line surface of `jcsim`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use jc_core::revival_time;

use crate::emit::{format_number, to_csv, to_svg, Selection};
use crate::error::{CliError, Result};
use crate::run::{check_deviation, compare, run, ORACLE_THRESHOLD};
use crate::scenario::{parse_scenario, Scenario};

#[derive(Debug, Parser)]
#[command(name = "jcsim", version, about = "Time-dependent Jaynes-Cummings scenario runner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a scenario and emit its table (CSV on stdout unless --csv).
    Run(RunArgs),
    /// Print the closed-form first revival time, where one exists.
    PredictRevival { scenario: PathBuf },
    /// Report closed-form against oracle deviations per output column.
    Compare { scenario: PathBuf },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub scenario: PathBuf,
    /// Directory for written files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Write `<stem>.csv` into the output directory instead of stdout.
    #[arg(long)]
    pub csv: bool,
    /// Write `<stem>.svg`, e.g. `W,S` or `parametric:Rx,Rz`.
    #[arg(long, value_name = "SELECTION")]
    pub svg: Option<String>,
    /// Cross-check against the ODE oracle (adds `<col>_dev` columns).
    #[arg(long)]
    pub oracle: bool,
    /// Override the scenario's tail_epsilon.
    #[arg(long = "tail-eps", value_name = "X")]
    pub tail_eps: Option<f64>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario(&text)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(args) => run_command(args, out),
        Command::PredictRevival { scenario } => predict_revival(&load_scenario(scenario)?, out),
        Command::Compare { scenario } => compare_command(&load_scenario(scenario)?, out),
    }
}

fn run_command(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let mut scenario = load_scenario(&args.scenario)?;
    if args.oracle {
        scenario.oracle_check = true;
    }
    if let Some(eps) = args.tail_eps {
        scenario.tail_epsilon = eps;
        scenario.validate()?;
    }
    let selection = args.svg.as_deref().map(Selection::parse).transpose()?;

    let table = run(&scenario)?;
    // Selection errors surface before anything is written.
    let svg = selection.map(|s| to_svg(&table, &s)).transpose()?;

    let name = stem(&args.scenario);
    if args.csv || svg.is_some() {
        std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    }
    let csv = to_csv(&table);
    if args.csv {
        let path = args.out.join(format!("{name}.csv"));
        write_file(&path, &csv)?;
        eprintln!("wrote {}", path.display());
    } else {
        out.write_all(csv.as_bytes()).map_err(stdout_error)?;
    }
    if let Some(svg) = svg {
        let path = args.out.join(format!("{name}.svg"));
        write_file(&path, &svg)?;
        eprintln!("wrote {}", path.display());
    }
    check_deviation(&table)
}

fn predict_revival(scenario: &Scenario, out: &mut dyn Write) -> Result<()> {
    let sweep = scenario.sweep.as_ref().map(|s| s.parameter.name());
    let mut text = String::new();
    text.push_str(if sweep.is_some() {
        "sweep_param,sweep_value,profile,t_r\n"
    } else {
        "profile,t_r\n"
    });
    for inst in scenario.instances()? {
        if let (Some(name), Some(v)) = (sweep, inst.sweep_value) {
            text.push_str(&format!("{name},{},", format_number(v)));
        }
        let t_r = match revival_time(&inst.field, &inst.profile) {
            Some(t) => format_number(t),
            None => "none".to_string(),
        };
        text.push_str(&format!("{},{t_r}\n", inst.profile.name()));
    }
    out.write_all(text.as_bytes()).map_err(stdout_error)
}

fn compare_command(scenario: &Scenario, out: &mut dyn Write) -> Result<()> {
    let reports = compare(scenario)?;
    let sweep = scenario.sweep.as_ref().map(|s| s.parameter.name());
    let mut text = String::new();
    if sweep.is_some() {
        text.push_str("sweep_param,sweep_value,");
    }
    text.push_str("column,max_abs,argmax_t,rms\n");
    for r in &reports {
        if let (Some(name), Some(v)) = (sweep, r.sweep_value) {
            text.push_str(&format!("{name},{},", format_number(v)));
        }
        text.push_str(&format!(
            "{},{},{},{}\n",
            r.column,
            format_number(r.max_abs),
            format_number(r.argmax_time),
            format_number(r.rms)
        ));
    }
    out.write_all(text.as_bytes()).map_err(stdout_error)?;
    match reports.iter().find(|r| !(r.max_abs <= ORACLE_THRESHOLD)) {
        Some(r) => Err(CliError::OracleDeviation {
            column: r.column.clone(),
            time: r.argmax_time,
            max_abs: r.max_abs,
            threshold: ORACLE_THRESHOLD,
        }),
        None => Ok(()),
    }
}
