use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qsov::exactnum::parse_scalar;
use qsov::harness::{exit_code, is_config_error, Suite, SuiteConfig};
use qsov::Error;

#[derive(Parser)]
#[command(name = "qsov", version, about = "Exact checks for quantum separation of variables")]
struct Cli {
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the deformation parameter (a rational `p/q`).
    #[arg(long, global = true)]
    q: Option<String>,
    /// Override the spectral tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Dump z-roots and w-action results per joint eigenvector.
    Spectra {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print one of B, D, Y, X at a rational point as an operator tensor.
    DumpOperator {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
    #[value(name = "Y")]
    Y,
    #[value(name = "X")]
    X,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::B => "B",
            Which::D => "D",
            Which::Y => "Y",
            Which::X => "X",
        }
    }
}

fn load(cli: &Cli, path: Option<&PathBuf>) -> qsov::Result<SuiteConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            SuiteConfig::parse(&text)?
        }
        None => SuiteConfig::default_config(),
    };
    if let Some(s) = cli.seed {
        cfg.model.seed = s;
    }
    if let Some(q) = &cli.q {
        cfg.model.q = parse_scalar(q).map_err(|e| Error::Config(format!("--q: {e}")))?;
    }
    if let Some(t) = cli.tolerance {
        if !(t > 0.0) {
            return Err(Error::Config(format!("--tolerance must be positive, got {t}")));
        }
        cfg.tolerance = t;
    }
    cfg.model.validate()?;
    Ok(cfg)
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> qsov::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> qsov::Result<i32> {
    match &cli.command {
        Command::Verify { config, report } => {
            let mut suite = Suite::new(load(cli, config.as_ref())?)?;
            let doc = suite.run()?;
            for c in &doc.checks {
                eprintln!("{:<22} {}  residual {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.residual);
            }
            write_or_print(report.as_ref(), &doc.to_json())?;
            Ok(exit_code(&doc))
        }
        Command::Spectra { config, json } => {
            let mut suite = Suite::new(load(cli, config.as_ref())?)?;
            let v = suite.spectral_report()?;
            let pass = v["pass"].as_bool().unwrap_or(false);
            write_or_print(json.as_ref(), &serde_json::to_string_pretty(&v).expect("json"))?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::DumpOperator { which, at, config } => {
            let x = parse_scalar(at).map_err(|e| Error::Config(format!("--at: {e}")))?;
            let suite = Suite::new(load(cli, config.as_ref())?)?;
            let v = suite.dump_operator(which.name(), &x)?;
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
