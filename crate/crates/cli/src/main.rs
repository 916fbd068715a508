//! `rkhs-incl`: decide, certify and refute inclusions between reproducing
//! kernel Hilbert spaces from the command line.

mod report;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kernel_inclusion::hilbert_schmidt::{hs_equiv_norm, hs_inclusion, CoefficientSequence};
use kernel_inclusion::inclusion::{decide, decide_numeric, reproduce_table, GridConfig, TableParams};
use kernel_inclusion::kernel::{parse_mini, parse_spec_file, Family, KernelSpec};
use kernel_inclusion::psd::{certify, falsify, SamplerConfig};
use kernel_inclusion::Error;

use report::{Format, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Decide,
    Certify,
    Falsify,
    RatioProfile,
    Hs,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "rkhs-incl", version, about = "Inclusion relations between reproducing kernel Hilbert spaces")]
struct Cli {
    #[arg(long, value_enum)]
    cmd: Command,
    /// Kernel K: `family:key=val,...` or a JSON spec file.
    #[arg(long)]
    k: Option<String>,
    /// Kernel G, same syntax as --k.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Falls back to $RKHS_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// λ for certify (default: the decided λ) and falsify (default 1e6).
    #[arg(long)]
    lambda: Option<f64>,
    /// Table parameters, e.g. `gamma=1,sigma1=1,sigma2=1,beta=1.5,p=4,tau=1`.
    #[arg(long)]
    params: Option<String>,
    /// Finite coefficient list a₀,a₁,… for `hs` (instead of --k).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Finite coefficient list b₀,b₁,… for `hs` (instead of --g).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn kernel_arg(name: &str, value: Option<&str>, dim: usize) -> Result<KernelSpec, Failure> {
    let text = value.ok_or_else(|| Failure::Input(format!("--{name} is required for this command")))?;
    let path = Path::new(text);
    let parsed = if path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{text}: {e}")))?;
        parse_spec_file(&body, Some(dim))
    } else {
        parse_mini(text, dim)
    };
    parsed.map_err(|e| Failure::Input(format!("--{name} {text}: {e}")))
}

fn coefficients(name: &str, text: &str) -> Result<CoefficientSequence, Failure> {
    let values = text
        .split(',')
        .enumerate()
        .map(|(i, v)| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("--{name}: entry {} `{}` is not a number", i + 1, v.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoefficientSequence::finite(values))
}

fn hs_sequence(cli: &Cli, which: &str) -> Result<CoefficientSequence, Failure> {
    let (list, spec) = if which == "k" { (&cli.a, &cli.k) } else { (&cli.b, &cli.g) };
    let list_flag = if which == "k" { "a" } else { "b" };
    if let Some(text) = list {
        return coefficients(list_flag, text);
    }
    let spec = kernel_arg(which, spec.as_deref(), cli.dim)?;
    match spec.family() {
        Family::HilbertSchmidt(hs) => Ok(hs.coeffs.clone()),
        _ => Err(Failure::Input(format!("--{which} is not a Hilbert–Schmidt kernel"))),
    }
}

fn sampler(cli: &Cli, seed: u64) -> Result<SamplerConfig, Failure> {
    let defaults = SamplerConfig::default();
    let cfg = SamplerConfig {
        n_points: cli.points.unwrap_or(defaults.n_points),
        n_trials: cli.trials.unwrap_or(defaults.n_trials),
        rng_seed: seed,
        ..defaults
    };
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_seed(cli: &Cli) -> Result<u64, Failure> {
    if let Some(s) = cli.seed {
        return Ok(s);
    }
    match std::env::var("RKHS_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("RKHS_SEED `{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let seed = resolve_seed(cli)?;
    let pair = || -> Result<(KernelSpec, KernelSpec), Failure> {
        Ok((kernel_arg("k", cli.k.as_deref(), cli.dim)?, kernel_arg("g", cli.g.as_deref(), cli.dim)?))
    };
    Ok(match cli.cmd {
        Command::Decide => {
            let (k, g) = pair()?;
            let verdict = decide(&k, &g)?;
            Report::decide(&k, &g, &verdict)
        }
        Command::RatioProfile => {
            let (k, g) = pair()?;
            let (verdict, profile) = decide_numeric(&k, &g, &GridConfig::default())?;
            Report::ratio_profile(&k, &g, &verdict, profile)
        }
        Command::Certify => {
            let (k, g) = pair()?;
            let cfg = sampler(cli, seed)?;
            let lambda = match cli.lambda {
                Some(l) => l,
                None => decide(&k, &g)?.lambda.value().ok_or_else(|| {
                    Failure::Input("no finite λ was decided for this pair; pass --lambda".into())
                })?,
            };
            let certs = certify(&k, &g, lambda, &cfg)?;
            Report::certify(&k, &g, lambda, &cfg, &certs)
        }
        Command::Falsify => {
            let (k, g) = pair()?;
            let cfg = sampler(cli, seed)?;
            let lambda = cli.lambda.unwrap_or(1e6);
            let witness = falsify(&k, &g, lambda, &cfg)?;
            Report::falsify(&k, &g, lambda, &cfg, witness)
        }
        Command::Hs => {
            let (a, b) = (hs_sequence(cli, "k")?, hs_sequence(cli, "g")?);
            Report::hs(&a, &b, &hs_inclusion(&a, &b), &hs_equiv_norm(&a, &b))
        }
        Command::Table => {
            let params = match &cli.params {
                Some(text) => TableParams::parse(text)?,
                None => TableParams::default(),
            };
            Report::table(reproduce_table(cli.dim, &params)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(cli.format).as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
    }
}
