use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padtrade::costing::{build_plan, Case};
use padtrade::optimizer::{Constraints, Model, Objective};
use padtrade::params::{load_parameters, ParameterSet};
use padtrade::reliability::{load_ratings, RatingTable};
use padtrade::report::{reliability_rows, render, Format, PhaseRow, ReportRow, SinterRow, SweepRow, Tabular};
use padtrade::sintering::{parse_decay_table, simulate_microwave_column, MaterialModel};
use padtrade::{ConfigError, Error, ModelError};

const EXIT_USAGE: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

/// Landing-pad construction trade study.
#[derive(Debug, Parser)]
#[command(name = "padtrade", version)]
struct Cli {
    /// JSON config overriding parameter defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
    Table,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
            OutFormat::Table => Format::Table,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Total,
    Appropriated,
}

#[derive(Debug, Args)]
struct ConstraintArgs {
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Total)]
    objective: ObjectiveArg,
    /// Schedule ceiling in calendar days.
    #[arg(long)]
    max_days: Option<f64>,
    #[arg(long)]
    max_power_kw: Option<f64>,
}

impl ConstraintArgs {
    fn constraints(&self) -> Result<Constraints, CliError> {
        let c = Constraints {
            max_days: self.max_days,
            max_peak_kw: self.max_power_kw,
            objective: match self.objective {
                ObjectiveArg::Total => Objective::Total,
                ObjectiveArg::Appropriated => Objective::Appropriated,
            },
        };
        c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase rows for one case, optimized unless a scale is given.
    Run {
        #[arg(long)]
        case: Case,
        /// Use the nominal process-table scales.
        #[arg(long, conflicts_with = "multiplier")]
        non_optimized: bool,
        /// Common multiplier on the nominal scales.
        #[arg(long)]
        multiplier: Option<f64>,
    },
    /// Optimize every case and sort by objective.
    Rank(ConstraintArgs),
    /// Optimize the given cases (all by default), in the order given.
    Optimize {
        #[arg(long = "case")]
        cases: Vec<Case>,
        #[command(flatten)]
        constraints: ConstraintArgs,
    },
    /// Optimize across a range of one numeric config key.
    Sweep {
        #[arg(long, default_value = "transport_cost_k_per_kg")]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long = "case")]
        cases: Vec<Case>,
        #[command(flatten)]
        constraints: ConstraintArgs,
    },
    /// One-dimensional microwave heating of a regolith column.
    SinterSim {
        #[arg(long, default_value_t = 200.0)]
        flux_kw_m2: f64,
        /// Depth whose mean temperature must reach the sinter temperature.
        #[arg(long, default_value_t = 1.0)]
        depth_cm: f64,
        /// CSV of temperature_c,decay_constant_per_m.
        #[arg(long)]
        material_table: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        dt_s: f64,
        #[arg(long, default_value_t = 1.0)]
        dz_mm: f64,
    },
    /// Reliability allocation for every case at nominal scale.
    ReliabilityReport {
        /// CSV of subsystem ratings overlaid on the defaults.
        #[arg(long)]
        ratings: Option<PathBuf>,
    },
    /// Markdown table of every config key with units and defaults.
    Keys,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(e) => e.into(),
            Error::Model(e) => e.into(),
        }
    }
}

struct Output {
    text: String,
    infeasible: Vec<String>,
}

fn emit<T: Tabular>(rows: &[T], f: OutFormat) -> Result<String, CliError> {
    Ok(render(rows, f.into())?)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn load_params(path: &Option<PathBuf>) -> Result<ParameterSet, CliError> {
    match path {
        Some(p) => Ok(load_parameters(&read(p)?)?),
        None => Ok(ParameterSet::default()),
    }
}

fn case_list(cases: &[Case]) -> Vec<Case> {
    if cases.is_empty() {
        Case::ALL.to_vec()
    } else {
        cases.to_vec()
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    if let Command::Keys = cli.command {
        return Ok(Output {
            text: ParameterSet::key_dictionary_markdown(),
            infeasible: Vec::new(),
        });
    }
    let params = load_params(&cli.config)?;
    let f = cli.format;
    let duty = params.duty_cycle;
    let mut infeasible = Vec::new();
    let text = match &cli.command {
        Command::Run {
            case,
            non_optimized,
            multiplier,
        } => {
            let model = Model::new(params)?;
            let scales = if *non_optimized {
                model.nominal_scales()
            } else if let Some(m) = multiplier {
                if m.is_nan() || *m <= 0.0 {
                    return Err(CliError::Usage(format!("--multiplier must be positive, got {m}")));
                }
                model.nominal_scales().times(*m)
            } else {
                model.optimize_scale(*case, &Constraints::default()).scales
            };
            let plan = build_plan(*case, &scales, &model.params, &model.geometry);
            let mut rows: Vec<PhaseRow> = plan
                .phases
                .iter()
                .map(|p| PhaseRow::from_phase(case.as_str(), p))
                .collect();
            rows.push(PhaseRow::total(&plan));
            emit(&rows, f)?
        }
        Command::Rank(ca) => {
            let c = ca.constraints()?;
            let model = Model::new(params)?;
            let rate = model.transport_cost_k_per_kg();
            let ranked = model.rank_cases(&c);
            infeasible.extend(
                ranked
                    .iter()
                    .filter(|o| !o.feasible)
                    .map(|o| o.case.as_str().to_string()),
            );
            let rows: Vec<ReportRow> = ranked.iter().map(|o| ReportRow::from_optimum(o, rate, duty)).collect();
            emit(&rows, f)?
        }
        Command::Optimize { cases, constraints } => {
            let c = constraints.constraints()?;
            let model = Model::new(params)?;
            let rate = model.transport_cost_k_per_kg();
            let rows: Vec<ReportRow> = case_list(cases)
                .into_iter()
                .map(|case| {
                    let o = model.optimize_scale(case, &c);
                    if !o.feasible {
                        infeasible.push(case.as_str().to_string());
                    }
                    ReportRow::from_optimum(&o, rate, duty)
                })
                .collect();
            emit(&rows, f)?
        }
        Command::Sweep {
            param,
            from,
            to,
            points,
            cases,
            constraints,
        } => {
            if *points == 0 {
                return Err(CliError::Usage("--points must be at least 1".into()));
            }
            if ParameterSet::key_spec(param).is_none() {
                return Err(CliError::Config(format!("unknown config key `{param}`")));
            }
            let c = constraints.constraints()?;
            let model = Model::new(params)?;
            let sweep = model.sweep_param(param, &case_list(cases), *from, *to, *points, &c)?;
            let mut rows = Vec::with_capacity(sweep.len());
            for pt in &sweep {
                let m = model.with_param(param, pt.value)?;
                if !pt.optimum.feasible {
                    infeasible.push(format!("{} at {param}={}", pt.optimum.case.as_str(), pt.value));
                }
                rows.push(SweepRow {
                    param: param.clone(),
                    value: pt.value,
                    row: ReportRow::from_optimum(&pt.optimum, m.transport_cost_k_per_kg(), m.params.duty_cycle),
                });
            }
            emit(&rows, f)?
        }
        Command::SinterSim {
            flux_kw_m2,
            depth_cm,
            material_table,
            dt_s,
            dz_mm,
        } => {
            let material = match material_table {
                Some(path) => {
                    let text = read(path)?;
                    let table = parse_decay_table(text.as_bytes()).map_err(|e| CliError::Config(e.to_string()))?;
                    MaterialModel::with_decay_table(table).map_err(|e| CliError::Config(e.to_string()))?
                }
                None => MaterialModel::default(),
            };
            let r = simulate_microwave_column(*flux_kw_m2, &material, depth_cm / 100.0, *dt_s, dz_mm / 1000.0)?;
            emit(&[SinterRow::new(*flux_kw_m2, *depth_cm, &r)], f)?
        }
        Command::ReliabilityReport { ratings } => {
            let table = match ratings {
                Some(path) => load_ratings(read(path)?.as_bytes()).map_err(|e| CliError::Config(e.to_string()))?,
                None => RatingTable::default(),
            };
            let model = Model::with_ratings(params, &table)?;
            emit(&reliability_rows(&model.reliability), f)?
        }
        Command::Keys => unreachable!("handled above"),
    };
    Ok(Output { text, infeasible })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if out.infeasible.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: no feasible scale for {}", out.infeasible.join(", "));
                ExitCode::from(EXIT_INFEASIBLE)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Config(_) => EXIT_CONFIG,
                CliError::Model(_) => 1,
            })
        }
    }
}
