//! `maple-bench` — benchmark CLI for the row-wise-product accelerator
//! models. Run `maple-bench --help` for usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maple_bench::{
    emit_report, parse_preset_spec, parse_synthetic_spec, report_rows, run_benchmark, InputSpec,
    OutputFormat, RunSpec,
};
use maple_sim::csr::validate_csr;
use maple_sim::error::{Error, Result};
use maple_sim::mtx::parse_matrix_market;

#[derive(Parser)]
#[command(
    name = "maple-bench",
    version,
    about = "Simulate C = A*A on row-wise-product sparse accelerator configurations \
             and report cycles, events, and energy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark across one or more configurations.
    Run(RunArgs),
    /// Check the structural invariants of a Matrix Market file.
    Validate {
        /// Matrix Market file to validate.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Matrix Market input file (the matrix must be square).
    #[arg(long, group = "source")]
    input: Option<PathBuf>,

    /// Synthetic input as `ROWS,COLS,DENSITY,SEED`.
    #[arg(long, group = "source", value_name = "R,C,D,SEED")]
    synthetic: Option<String>,

    /// Benchmark-shaped synthetic preset, e.g. `fb` or `wv:10`
    /// (`NAME[:SCALE]`, scale divides the linear dimension).
    #[arg(long, group = "source", value_name = "NAME[:SCALE]")]
    preset: Option<String>,

    /// Seed used with `--preset` (ignored for `--synthetic`, which carries
    /// its own).
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Comma-separated configuration list: preset names
    /// (baseline-matraptor, maple-matraptor, baseline-extensor,
    /// maple-extensor) or paths to JSON config files.
    #[arg(long, required = true, value_delimiter = ',')]
    configs: Vec<String>,

    /// `default` or a path to a `kind = value` energy table file.
    #[arg(long, default_value = "default")]
    energy_table: String,

    /// Report format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Report output path.
    #[arg(long)]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<()> {
    let input = match (&args.input, &args.synthetic, &args.preset) {
        (Some(path), None, None) => InputSpec::Path(path.clone()),
        (None, Some(spec), None) => parse_synthetic_spec(spec)?,
        (None, None, Some(spec)) => parse_preset_spec(spec, args.seed)?,
        _ => {
            return Err(Error::Config(
                "exactly one of --input, --synthetic, --preset is required".into(),
            ))
        }
    };
    let format = match args.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    let spec = RunSpec {
        input,
        configs: args.configs,
        energy_table: args.energy_table,
        output_format: format,
        output_path: args.out.clone(),
    };
    let results = run_benchmark(&spec)?;
    for row in report_rows(&results) {
        let pairing = match (row.energy_benefit_pct, row.speedup_pct) {
            (Some(e), Some(s)) => {
                format!("  energy benefit {:+.2}%  speedup {:+.2}%", e, s)
            }
            _ => String::new(),
        };
        println!(
            "{:<20} {}  cycles {:<10} energy {:.1}{}",
            row.config, row.matrix, row.total_cycles, row.total_energy, pairing
        );
    }
    emit_report(&results, format, &spec.output_path)?;
    println!("report written to {}", spec.output_path.display());
    Ok(())
}

fn validate(input: &PathBuf) -> Result<bool> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input.to_string_lossy(), e))?;
    let matrix = parse_matrix_market(&text)?;
    let report = validate_csr(&matrix);
    println!(
        "{}: {}x{}, {} stored entries",
        input.display(),
        matrix.rows,
        matrix.cols,
        matrix.nnz()
    );
    if report.is_clean() {
        println!("ok: all invariants hold");
    }
    for v in &report.violations {
        let sev = match v.kind.severity() {
            maple_sim::csr::Severity::Error => "error",
            maple_sim::csr::Severity::Warning => "warning",
        };
        println!("{}: {}: {}", sev, v.kind.label(), v.detail);
    }
    Ok(report.is_ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Validate { input } => validate(&input),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
