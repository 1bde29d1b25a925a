use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spinforge::{execute, Command, RawConfig};

/// Run one spin-chain experiment and write its CSV table.
///
/// Any config key may also be given as `--key value`, overriding the file.
#[derive(Parser, Debug)]
#[command(name = "spinforge", version)]
struct Args {
    /// dispersion, chi, evolve, bell, squeeze, probe, fidelity or phase-diagram.
    command: String,
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV; the sidecar goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

const OWN_FLAGS: [&str; 3] = ["--config", "--out", "--jobs"];

/// Splits argv into what clap parses and the `--key value` overrides.
fn split_args(argv: Vec<String>) -> Result<(Vec<String>, Vec<(String, String)>), String> {
    let mut own = Vec::new();
    let mut overrides = Vec::new();
    let mut it = argv.into_iter();
    own.extend(it.next());
    while let Some(arg) = it.next() {
        let Some(body) = arg.strip_prefix("--") else {
            own.push(arg);
            continue;
        };
        let (key, inline) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => (body.to_string(), None),
        };
        if OWN_FLAGS.contains(&format!("--{key}").as_str()) || matches!(key.as_str(), "help" | "version") {
            own.push(arg);
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None => it.next().ok_or_else(|| format!("missing value for --{key}"))?,
        };
        overrides.push((key, value));
    }
    Ok((own, overrides))
}

fn main() -> ExitCode {
    let (own, overrides) = match split_args(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let args = Args::parse_from(own);
    match drive(args, overrides) {
        Ok(path) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn drive(args: Args, overrides: Vec<(String, String)>) -> Result<PathBuf, spinforge::CliError> {
    use spinforge::CliError;
    let command = Command::parse(&args.command)
        .ok_or_else(|| CliError::Config(format!("unknown command {:?}", args.command)))?;
    let mut raw = match &args.config {
        Some(p) => RawConfig::parse(&std::fs::read_to_string(p)?)?,
        None => RawConfig::default(),
    };
    for (k, v) in &overrides {
        raw.set(k, v)?;
    }
    raw.set("command", command.name())?;
    let cfg = raw.build(Some(command))?;
    let out = args
        .out
        .or_else(|| cfg.output_path.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name())));
    execute(&cfg, &out, args.jobs)?;
    Ok(out)
}
