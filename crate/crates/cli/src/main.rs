use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pfg_cli::corpus;
use pfg_cli::report::{emit_json, emit_table, run};
use pfg_cli::spec::RunSpec;

#[derive(Parser)]
#[command(name = "pfg", version, about = "Formal groups over p-adic rings: strictness, torsion valuations, ramification reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses requested by one or more spec files.
    Run {
        /// Spec file (JSON); may be given multiple times.
        #[arg(long, required = true)]
        spec: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file (single spec only); stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timing (breaks byte-for-byte determinism).
        #[arg(long)]
        timing: bool,
    },
    /// Run the bundled example corpus against its golden reports.
    Corpus {
        /// Regenerate the golden files into this directory instead.
        #[arg(long)]
        write_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn main_inner() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { spec, format, out, timing } => {
            if out.is_some() && spec.len() > 1 {
                anyhow::bail!("--out only applies to a single --spec");
            }
            let specs: Vec<RunSpec> = spec
                .iter()
                .map(|path| {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
                    RunSpec::parse(&text)
                        .map_err(|e| anyhow::anyhow!("in {}: {e}", path.display()))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let reports = run_batch(&specs, timing);
            let mut all_completed = true;
            for report in &reports {
                all_completed &= report.all_requested_completed();
                let text = match format {
                    Format::Json => emit_json(report),
                    Format::Table => emit_table(report),
                };
                match &out {
                    Some(path) => std::fs::write(path, text)?,
                    None => print!("{text}"),
                }
            }
            Ok(if all_completed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Corpus { write_dir } => {
            if let Some(dir) = write_dir {
                corpus::write_goldens(&dir)?;
                println!("wrote {} golden reports to {}", corpus::CORPUS.len(), dir.display());
                return Ok(ExitCode::SUCCESS);
            }
            let outcomes = corpus::check_all()?;
            let mut all = true;
            for o in &outcomes {
                println!("{} {}", if o.matches { "PASS" } else { "FAIL" }, o.name);
                all &= o.matches;
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

#[cfg(feature = "parallel")]
fn run_batch(specs: &[RunSpec], timing: bool) -> Vec<pfg_cli::report::RunReport> {
    use rayon::prelude::*;
    specs.par_iter().map(|s| run(s, timing)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_batch(specs: &[RunSpec], timing: bool) -> Vec<pfg_cli::report::RunReport> {
    specs.iter().map(|s| run(s, timing)).collect()
}
