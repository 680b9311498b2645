use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lambda_elim_cli::{parse_config, run, CliError, RunMethod};

/// Exact and effective dynamics of a driven three-level lambda system.
#[derive(Parser)]
#[command(name = "lambda-elim", version)]
struct Args {
    /// exact | rough | shifted | green | compare | scaling | expansion
    method: String,
    /// Scenario file (key = value lines)
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Energy-origin shift in units of Delta (overrides the config)
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Reference energy of the displacement operator (overrides the config)
    #[arg(long, allow_hyphen_values = true)]
    e0: Option<f64>,
    /// compare: use the exact trajectory as the test trajectory too
    #[arg(long)]
    self_check: bool,
}

fn execute(args: Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    cfg.method = args.method.parse::<RunMethod>()?;
    if let Some(eta) = args.eta {
        cfg.eta = eta;
    }
    if let Some(e0) = args.e0 {
        cfg.e0 = e0;
    }
    cfg.self_check = args.self_check;
    let csv = run(&cfg)?;
    match args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => match std::io::stdout().lock().write_all(csv.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lambda-elim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
