//! Benchmark harness: resolve an input matrix, run `C = A * A` across a
//! list of accelerator configurations, price the event tallies, and emit
//! machine-readable reports.
//!
//! Everything is deterministic end to end: the same [`RunSpec`] always
//! produces byte-identical output files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use maple_sim::cost::{compare_reports, compute_energy, load_energy_table, CostReport};
use maple_sim::csr::CsrMatrix;
use maple_sim::datasets::DatasetShape;
use maple_sim::error::{Error, Result};
use maple_sim::mtx::parse_matrix_market;
use maple_sim::sim::{simulate, AcceleratorConfig, SimReport};
use maple_sim::EventKind;

/// Where the benchmark matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    /// A Matrix Market file on disk.
    Path(PathBuf),
    /// A synthetic matrix with explicit shape.
    Synthetic {
        rows: usize,
        cols: usize,
        density: f64,
        seed: u64,
    },
    /// A benchmark-shaped synthetic preset, optionally at reduced linear
    /// scale.
    Preset {
        name: String,
        scale_div: usize,
        seed: u64,
    },
}

impl InputSpec {
    /// Short label used in the `matrix` report column.
    pub fn matrix_name(&self) -> String {
        match self {
            InputSpec::Path(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.to_string_lossy().into_owned()),
            InputSpec::Synthetic {
                rows,
                cols,
                density,
                seed,
            } => format!("synthetic-{}x{}-d{}-s{}", rows, cols, density, seed),
            InputSpec::Preset {
                name, scale_div, ..
            } => {
                if *scale_div > 1 {
                    format!("{}-scale{}", name, scale_div)
                } else {
                    name.clone()
                }
            }
        }
    }

    pub fn load(&self) -> Result<CsrMatrix> {
        match self {
            InputSpec::Path(path) => {
                let text =
                    fs::read_to_string(path).map_err(|e| Error::io(path.to_string_lossy(), e))?;
                parse_matrix_market(&text)
            }
            InputSpec::Synthetic {
                rows,
                cols,
                density,
                seed,
            } => {
                if *rows == 0 || *cols == 0 || !(*density > 0.0 && *density <= 1.0) {
                    return Err(Error::Config(format!(
                        "synthetic descriptor needs positive dims and density in (0, 1], \
                         got {}x{} at {}",
                        rows, cols, density
                    )));
                }
                Ok(maple_sim::generate_synthetic(*rows, *cols, *density, *seed))
            }
            InputSpec::Preset {
                name,
                scale_div,
                seed,
            } => {
                let shape = DatasetShape::by_name(name)
                    .ok_or_else(|| Error::Config(format!("unknown dataset preset {:?}", name)))?;
                Ok(shape.synthesize(*scale_div, *seed))
            }
        }
    }
}

/// Parse the CLI's `R,C,D,SEED` synthetic descriptor.
pub fn parse_synthetic_spec(spec: &str) -> Result<InputSpec> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!(
            "synthetic descriptor must be R,C,D,SEED, got {:?}",
            spec
        )));
    }
    let rows = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count {:?}", parts[0])))?;
    let cols = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count {:?}", parts[1])))?;
    let density = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad density {:?}", parts[2])))?;
    let seed = parts[3]
        .parse()
        .map_err(|_| Error::Parse(format!("bad seed {:?}", parts[3])))?;
    Ok(InputSpec::Synthetic {
        rows,
        cols,
        density,
        seed,
    })
}

/// Parse the CLI's `NAME[:SCALE]` dataset preset descriptor.
pub fn parse_preset_spec(spec: &str, seed: u64) -> Result<InputSpec> {
    let (name, scale) = match spec.split_once(':') {
        Some((name, scale)) => {
            let div: usize = scale
                .parse()
                .map_err(|_| Error::Parse(format!("bad scale divisor {:?}", scale)))?;
            if div == 0 {
                return Err(Error::Parse("scale divisor must be at least 1".into()));
            }
            (name, div)
        }
        None => (spec, 1),
    };
    if DatasetShape::by_name(name).is_none() {
        return Err(Error::Config(format!("unknown dataset preset {:?}", name)));
    }
    Ok(InputSpec::Preset {
        name: name.to_string(),
        scale_div: scale,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything one benchmark invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub input: InputSpec,
    /// Preset names or paths to JSON configuration files; non-empty.
    pub configs: Vec<String>,
    /// `"default"` or a path to an energy-table file.
    pub energy_table: String,
    pub output_format: OutputFormat,
    pub output_path: PathBuf,
}

/// One configuration's simulation plus its energy pricing.
#[derive(Debug, Clone)]
pub struct ConfigRun {
    pub config: AcceleratorConfig,
    pub sim: SimReport,
    pub cost: CostReport,
}

/// All runs of one benchmark invocation, in config order.
#[derive(Debug, Clone)]
pub struct BenchResults {
    pub matrix_name: String,
    pub rows: usize,
    pub nnz: usize,
    pub runs: Vec<ConfigRun>,
}

/// Resolve a `--configs` token: a preset name, or a path to a JSON file
/// holding an explicit configuration.
pub fn resolve_config(token: &str) -> Result<AcceleratorConfig> {
    if let Ok(config) = AcceleratorConfig::preset(token) {
        return Ok(config);
    }
    let path = Path::new(token);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::io(token, e))?;
        return AcceleratorConfig::from_json(&text);
    }
    Err(Error::Config(format!(
        "{:?} is neither a preset ({:?}) nor a config file",
        token,
        maple_sim::PRESET_NAMES
    )))
}

const BASELINE_PAIRINGS: [(&str, &str); 2] = [
    ("baseline-matraptor", "maple-matraptor"),
    ("baseline-extensor", "maple-extensor"),
];

/// Run every configuration against `A * A` and price the results.
///
/// The input must be square — the harness always multiplies a matrix by
/// itself. When a baseline preset and its Maple counterpart each appear
/// exactly once, the Maple run's report carries the pairwise comparison.
pub fn run_benchmark(spec: &RunSpec) -> Result<BenchResults> {
    if spec.configs.is_empty() {
        return Err(Error::Config(
            "at least one configuration is required".into(),
        ));
    }
    let a = spec.input.load()?;
    if a.rows != a.cols {
        return Err(Error::Shape(format!(
            "benchmark computes A*A and needs a square input, got {}x{}",
            a.rows, a.cols
        )));
    }
    let table = load_energy_table(&spec.energy_table)?;

    let mut runs = Vec::with_capacity(spec.configs.len());
    for token in &spec.configs {
        let config = resolve_config(token)?;
        let sim = simulate(&config, &a, &a)?;
        let cost = compute_energy(&sim.events, &table);
        runs.push(ConfigRun { config, sim, cost });
    }

    for (baseline_name, maple_name) in BASELINE_PAIRINGS {
        let base_idx: Vec<usize> = runs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.config.name == baseline_name)
            .map(|(i, _)| i)
            .collect();
        let maple_idx: Vec<usize> = runs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.config.name == maple_name)
            .map(|(i, _)| i)
            .collect();
        if let ([b], [m]) = (&base_idx[..], &maple_idx[..]) {
            let comparison = compare_reports(
                (&runs[*m].sim, &runs[*m].cost),
                (&runs[*b].sim, &runs[*b].cost),
            )?;
            runs[*m].cost.vs_baseline = Some(comparison);
        }
    }

    Ok(BenchResults {
        matrix_name: spec.input.matrix_name(),
        rows: a.rows,
        nnz: a.nnz(),
        runs,
    })
}

/// One emitted report line; the CSV columns and the JSON fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub config: String,
    pub matrix: String,
    pub rows: usize,
    pub nnz: usize,
    pub total_cycles: u64,
    #[serde(rename = "MacOp")]
    pub mac_op: u64,
    #[serde(rename = "CompressDecompress")]
    pub compress_decompress: u64,
    #[serde(rename = "Intersection")]
    pub intersection: u64,
    #[serde(rename = "L0Mac")]
    pub l0_mac: u64,
    #[serde(rename = "PeMac")]
    pub pe_mac: u64,
    #[serde(rename = "L1Mac")]
    pub l1_mac: u64,
    #[serde(rename = "L2Mac")]
    pub l2_mac: u64,
    pub total_energy: f64,
    pub energy_benefit_pct: Option<f64>,
    pub speedup_pct: Option<f64>,
}

pub const CSV_HEADER: &str = "config,matrix,rows,nnz,total_cycles,MacOp,CompressDecompress,Intersection,L0Mac,PeMac,L1Mac,L2Mac,total_energy,energy_benefit_pct,speedup_pct";

/// Flatten results into report rows, in config order.
pub fn report_rows(results: &BenchResults) -> Vec<ReportRow> {
    results
        .runs
        .iter()
        .map(|run| ReportRow {
            config: run.config.name.clone(),
            matrix: results.matrix_name.clone(),
            rows: results.rows,
            nnz: results.nnz,
            total_cycles: run.sim.total_cycles,
            mac_op: run.sim.events.get(EventKind::MacOp),
            compress_decompress: run.sim.events.get(EventKind::CompressDecompress),
            intersection: run.sim.events.get(EventKind::Intersection),
            l0_mac: run.sim.events.get(EventKind::L0Mac),
            pe_mac: run.sim.events.get(EventKind::PeMac),
            l1_mac: run.sim.events.get(EventKind::L1Mac),
            l2_mac: run.sim.events.get(EventKind::L2Mac),
            total_energy: run.cost.total_energy,
            energy_benefit_pct: run.cost.vs_baseline.map(|c| c.energy_benefit_pct),
            speedup_pct: run.cost.vs_baseline.map(|c| c.speedup_pct),
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Render rows as CSV text (full-precision numbers, blank optional cells).
pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.config,
            r.matrix,
            r.rows,
            r.nnz,
            r.total_cycles,
            r.mac_op,
            r.compress_decompress,
            r.intersection,
            r.l0_mac,
            r.pe_mac,
            r.l1_mac,
            r.l2_mac,
            r.total_energy,
            fmt_opt(r.energy_benefit_pct),
            fmt_opt(r.speedup_pct),
        ));
    }
    out
}

/// Write the report file in the requested format.
pub fn emit_report(results: &BenchResults, format: OutputFormat, path: &Path) -> Result<()> {
    if results.runs.is_empty() {
        return Err(Error::Config("nothing to emit: no runs".into()));
    }
    let rows = report_rows(results);
    let text = match format {
        OutputFormat::Csv => to_csv(&rows),
        OutputFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(&rows).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    fs::write(path, text).map_err(|e| Error::io(path.to_string_lossy(), e))
}
