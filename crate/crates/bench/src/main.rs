use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use emilink_bench::config::Config;
use emilink_bench::emit::{emit, write_matrix_csv, Format};
use emilink_bench::figures::{correlations_for, run, Figure};

/// Minimum transmit power of IRS and decode-and-forward links under EMI.
#[derive(Debug, Parser)]
#[command(name = "emilink", version)]
struct Cli {
    #[arg(value_enum)]
    figure: Figure,
    /// JSON scenario file; defaults to the reference setup.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write the EMI correlation matrices used by the figure.
    #[arg(long)]
    dump_corr: bool,
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => Config::default(),
    };
    std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;

    let result = run(cli.figure, &cfg)?;
    let path = cli
        .out
        .join(format!("{}.{}", cli.figure.name(), cli.format.extension()));
    emit(&result, cli.format, &path).with_context(|| format!("writing {}", path.display()))?;
    println!("{}", path.display());

    if cli.dump_corr {
        for (label, matrix) in correlations_for(cli.figure, &cfg)? {
            let path = cli
                .out
                .join(format!("{}_corr_{label}.csv", cli.figure.name()));
            let file = std::fs::File::create(&path)
                .with_context(|| format!("writing {}", path.display()))?;
            write_matrix_csv(&matrix, std::io::BufWriter::new(file))?;
            println!("{}", path.display());
        }
    }
    Ok(!result.all_infeasible())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("every sweep point is infeasible");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
