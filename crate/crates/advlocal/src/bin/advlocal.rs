use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use advlocal::experiment::{self, ExperimentConfig, GraphSpec, Report, SchemaParams};
use advlocal::gen::generate;
use advlocal::io::{read_advice, read_graph, write_advice, write_graph};
use advlocal::{Error, Result};

/// Encode, decode and verify advice schemas on generated or stored graphs.
///
/// Exit codes: 0 pass, 1 invalid parameters, 2 constants infeasible on the
/// instance, 3 decoding or verification failed, 4 parse or I/O error.
/// `ADVLOCAL_COLORING_PROFILE` names the default coloring constants file.
#[derive(Parser)]
#[command(name = "advlocal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph, e.g. `--graph grid2d:10,10`.
    Generate {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// IDs drawn from 1..n^k.
        #[arg(long, default_value_t = 1)]
        id_exponent: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode, decode and verify; prints or writes the JSON report.
    Run {
        /// Full experiment config as JSON; other flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Graph file, or `kind:p1,p2,...` for a generator.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        schema: Option<String>,
        /// Schema parameters as a JSON object.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the encoded advice (`id bits` per line).
        #[arg(long)]
        advice_out: Option<PathBuf>,
    },
    /// Check supplied advice: decode and run every node's local check.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        advice: PathBuf,
        #[arg(long)]
        schema: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One CSV row per report file.
    Stats {
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn params_of(json: Option<&str>) -> Result<SchemaParams> {
    match json {
        Some(s) => serde_json::from_str(s).map_err(|e| Error::Parse(format!("--params: {e}"))),
        None => Ok(SchemaParams::default()),
    }
}

fn finish(report: &Report, out: Option<&Path>) -> Result<i32> {
    let mut text = report.to_json();
    text.push('\n');
    emit(&text, out)?;
    if let Some(f) = &report.failure {
        eprintln!("{}: {}", f.kind, f.message);
    }
    Ok(report.exit_code())
}

fn main_inner(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate { graph, seed, id_exponent, out } => {
            let (kind, params) = match GraphSpec::parse(&graph, seed) {
                GraphSpec::Generator { kind, params, .. } => (kind, params),
                GraphSpec::File { .. } => {
                    return Err(Error::InvalidParams(format!("{graph:?} is not of the form kind:p1,p2,...")))
                }
            };
            let g = generate(kind.parse()?, &params, seed, id_exponent)?;
            emit(&write_graph(&g.graph), out.as_deref())?;
            Ok(0)
        }
        Command::Run { config, graph, schema, params, seed, out, advice_out } => {
            let mut cfg = match &config {
                Some(p) => ExperimentConfig::from_json(&read(p)?)?,
                None => {
                    let graph = graph.clone().ok_or_else(|| Error::InvalidParams("--graph or --config is required".into()))?;
                    let schema = schema.clone().ok_or_else(|| Error::InvalidParams("--schema or --config is required".into()))?;
                    ExperimentConfig::new(GraphSpec::parse(&graph, seed.unwrap_or(0)), &schema, SchemaParams::default(), 0)
                }
            };
            if config.is_some() {
                if let Some(g) = &graph {
                    cfg.graph = GraphSpec::parse(g, seed.unwrap_or(0));
                }
                if let Some(s) = &schema {
                    cfg.schema = s.clone();
                }
            }
            if params.is_some() {
                cfg.params = params_of(params.as_deref())?;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if out.is_some() {
                cfg.out = out;
            }
            if advice_out.is_some() {
                cfg.advice_out = advice_out;
            }
            let (report, kept) = experiment::run_with_advice(&cfg);
            if let (Some(path), Some((g, advice))) = (&cfg.advice_out, &kept) {
                emit(&write_advice(g, &advice.bits), Some(path))?;
            }
            finish(&report, cfg.out.as_deref())
        }
        Command::Verify { graph, advice, schema, params, seed, out } => {
            let g = read_graph(&read(&graph)?)?;
            let bits = read_advice(&g, &read(&advice)?)?;
            let params = params_of(params.as_deref())?;
            let report = experiment::verify(&g, &bits, &schema, &params, seed);
            finish(&report, out.as_deref())
        }
        Command::Stats { reports, out } => {
            let parsed = reports.iter().map(|p| Report::from_json(&read(p)?)).collect::<Result<Vec<_>>>()?;
            emit(&experiment::stats_csv(&parsed)?, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
