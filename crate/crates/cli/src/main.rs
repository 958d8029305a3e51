//! `snchar`: symmetric-group characters, Kostka numbers and sampling from the
//! command line.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 resource limit,
//! 4 precision or consistency failure, 1 anything else.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use snchar::character_engine::{
    character_checked, character_row, character_table, EngineConfig, DEFAULT_HARD_BOND_CAP,
};
use snchar::combinatorics::{centralizer_size, enumerate_partitions, Partition};
use snchar::kostka_engine::{kostka, kostka_row};
use snchar::oracle::{mn_character, MnOracle};
use snchar::sampling::{self, CharacterSource};
use snchar::tensor::TruncationPolicy;
use snchar::{bench, verify, Error};

use output::{Entry, Table, TableFormat};

const CHARACTER_EPSILON: &str = "1e-10";
const KOSTKA_EPSILON: &str = "1e-11";

#[derive(Parser, Debug)]
#[command(
    name = "snchar",
    version,
    about = "Symmetric-group characters from matrix product states"
)]
struct Cli {
    /// Increase log verbosity (repeatable); RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Matrix product state contraction.
    Mps,
    /// Murnaghan–Nakayama recursion (exact, small n only).
    Mn,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SampleMode {
    /// Irreps λ with probability χ_λ(ν)² / |E_ν|.
    Row,
    /// Classes ν with probability |C_ν| χ_λ(ν)² / n!.
    Column,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SampleFormat {
    Lines,
    Json,
}

#[derive(Args, Debug)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, env = "SNCHAR_FORMAT", default_value = "csv")]
    format: TableFormat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A single character χ_λ(ν).
    Character {
        #[arg(long)]
        n: usize,
        /// Cycle type, e.g. 2,1.
        #[arg(long)]
        nu: Partition,
        /// Irrep label, e.g. 2,1.
        #[arg(long)]
        lambda: Partition,
        /// Relative truncation threshold per cut.
        #[arg(long, default_value = CHARACTER_EPSILON)]
        epsilon: f64,
        /// Cap on the retained bond dimension.
        #[arg(long)]
        max_bond: Option<usize>,
        #[arg(long, value_enum, default_value = "mps")]
        engine: Engine,
    },
    /// Every character of one conjugacy class.
    Row {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: Partition,
        #[arg(long, default_value = CHARACTER_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// The full character table, one row per conjugacy class.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "mps")]
        engine: Engine,
        #[arg(long, default_value = CHARACTER_EPSILON)]
        epsilon: f64,
        /// Worker threads for independent rows.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Kostka numbers K_{λ,μ}; all shapes λ unless one is given.
    Kostka {
        #[arg(long)]
        n: usize,
        /// Weight, e.g. 2,1,1.
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        lambda: Option<Partition>,
        #[arg(long, default_value = KOSTKA_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Seeded draws from a row or column distribution.
    Sample {
        #[arg(long, value_enum)]
        mode: SampleMode,
        #[arg(long)]
        n: usize,
        /// Fixed class (row mode).
        #[arg(long, required_if_eq("mode", "row"), conflicts_with = "lambda")]
        nu: Option<Partition>,
        /// Fixed irrep (column mode).
        #[arg(long, required_if_eq("mode", "column"))]
        lambda: Option<Partition>,
        #[arg(long)]
        shots: usize,
        /// Seed of the ChaCha8 generator.
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mps")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "lines")]
        format: SampleFormat,
    },
    /// Granularity γ = p(n) / |E_ν| of row sampling.
    Granularity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: Partition,
    },
    /// Compare both engines against the exact oracles for a range of n.
    Verify {
        #[arg(long)]
        n: usize,
        /// Last n of the range (defaults to --n).
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Runtime and bond-dimension sweep over products of 2-cycles, as CSV.
    Bench {
        #[arg(long)]
        n_start: usize,
        #[arg(long)]
        n_end: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, default_value = CHARACTER_EPSILON)]
        epsilon: f64,
    },
}

fn config(epsilon: f64, max_bond: Option<usize>) -> snchar::Result<EngineConfig> {
    Ok(EngineConfig::new(TruncationPolicy::new(epsilon, max_bond)?).with_hard_cap(DEFAULT_HARD_BOND_CAP))
}

fn source(engine: Engine) -> CharacterSource {
    match engine {
        Engine::Mps => CharacterSource::Mps(EngineConfig::default()),
        Engine::Mn => CharacterSource::Oracle,
    }
}

fn mn_table(nu: &Partition, n: usize, oracle: &mut MnOracle) -> snchar::Result<Table> {
    let entries = enumerate_partitions(n)?
        .into_iter()
        .map(|lambda| {
            let value = oracle.character(&lambda, nu)?;
            Ok(Entry {
                lambda,
                value,
                residual: 0.0,
            })
        })
        .collect::<snchar::Result<Vec<_>>>()?;
    Ok(Table::exact(nu.clone(), entries, &centralizer_size(nu)))
}

fn run(cli: Cli) -> snchar::Result<String> {
    match cli.command {
        Command::Character {
            n,
            nu,
            lambda,
            epsilon,
            max_bond,
            engine,
        } => {
            let value = match engine {
                Engine::Mps => character_checked(&lambda, &nu, n, &config(epsilon, max_bond)?)?.value,
                Engine::Mn => {
                    expect_size("irrep", &lambda, n)?;
                    expect_size("cycle type", &nu, n)?;
                    mn_character(&lambda, &nu)?
                }
            };
            Ok(format!("{value}\n"))
        }
        Command::Row { n, nu, epsilon, format } => {
            let row = character_row(&nu, n, &config(epsilon, None)?)?;
            row.certify()?;
            Ok(output::render_characters(
                &[Table::from_row(&row)],
                format.format,
                false,
            ))
        }
        Command::Table {
            n,
            engine,
            epsilon,
            jobs,
            format,
        } => {
            let tables = match engine {
                Engine::Mps => {
                    let rows = character_table(n, &config(epsilon, None)?, jobs.max(1))?;
                    for row in &rows {
                        row.certify()?;
                    }
                    rows.iter().map(Table::from_row).collect()
                }
                Engine::Mn => {
                    let mut oracle = MnOracle::new();
                    enumerate_partitions(n)?
                        .iter()
                        .map(|nu| mn_table(nu, n, &mut oracle))
                        .collect::<snchar::Result<Vec<_>>>()?
                }
            };
            Ok(output::render_characters(&tables, format.format, true))
        }
        Command::Kostka {
            n,
            mu,
            lambda,
            epsilon,
            format,
        } => {
            let cfg = config(epsilon, None)?;
            match lambda {
                Some(lambda) => {
                    let r = kostka(&lambda, &mu, n, &cfg)?;
                    if r.precision_flag {
                        return Err(Error::Precision(format!(
                            "amplitude {} cannot be rounded reliably",
                            r.amplitude
                        )));
                    }
                    Ok(format!("{}\n", r.value))
                }
                None => {
                    let row = kostka_row(&mu, n, &cfg)?;
                    row.certify()?;
                    Ok(output::render_kostka(&row, format.format))
                }
            }
        }
        Command::Sample {
            mode,
            n,
            nu,
            lambda,
            shots,
            seed,
            engine,
            format,
        } => {
            let labels: Vec<Partition> = match mode {
                SampleMode::Row => {
                    let nu = nu.ok_or_else(|| Error::InvalidArgument("row sampling needs --nu".into()))?;
                    let dist = sampling::row_distribution(&nu, n, &source(engine))?;
                    sampling::sample(&dist, shots, seed)
                }
                SampleMode::Column => {
                    let lambda =
                        lambda.ok_or_else(|| Error::InvalidArgument("column sampling needs --lambda".into()))?;
                    let dist = sampling::column_distribution(&lambda, n, &source(engine))?;
                    sampling::sample(&dist, shots, seed)
                }
            };
            Ok(output::render_samples(&labels, format == SampleFormat::Json))
        }
        Command::Granularity { n, nu } => {
            let report = sampling::granularity(&nu, n)?;
            Ok(format!("gamma={} granular={}\n", report.gamma, report.granular))
        }
        Command::Verify { n, max_n } => {
            let end = max_n.unwrap_or(n);
            if end < n {
                return Err(Error::InvalidArgument(format!("--max-n {end} is below --n {n}")));
            }
            let report = verify::run_default(n, end)?;
            let text = output::render_verify(&report);
            if report.passed() {
                Ok(text)
            } else {
                print!("{text}");
                Err(Error::InconsistentEngine("verification failed".into()))
            }
        }
        Command::Bench {
            n_start,
            n_end,
            step,
            epsilon,
        } => {
            let records = bench::run(n_start, n_end, step, &config(epsilon, None)?)?;
            Ok(output::render_bench(&records))
        }
    }
}

fn expect_size(what: &str, p: &Partition, n: usize) -> snchar::Result<()> {
    if p.size() == n {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} ({p}) has size {}, expected {n}",
            p.size()
        )))
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::Precision(_) | Error::InconsistentEngine(_) => 4,
        Error::Numerical { .. } | Error::Internal(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    // verify sweeps long weights on purpose; their performance warning is noise there
    let filter = match (&cli.command, cli.verbose) {
        (Command::Verify { .. }, 0) => format!("{level},snchar::kostka_engine=error"),
        _ => level.to_string(),
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(filter)).init();

    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
