use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kkforms::{
    emit, listing, parse_param, parse_sign, profile, CliError, Grid, RunConfig, Selection, EXIT_FAIL, EXIT_PASS,
};
use kkforms_core::catalog::Params;

/// Conformally flat Kaluza-Klein geometries: catalog, verification and kink
/// profiles.
///
/// Exit status: 0 when every residual is within tolerance, 1 when some
/// residual is not, 2 on a configuration error.
#[derive(Parser)]
#[command(name = "kkforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the catalog manifest.
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check on the selected solutions and write a JSON report.
    Verify(VerifyArgs),
    /// Print `xi1,phi,R,lambda` rows for kink2 or ckink3.
    Profile(ProfileArgs),
}

#[derive(Args)]
struct Common {
    /// Family identifier, or `all` for the default grid.
    #[arg(long)]
    family: Option<String>,
    /// Parameter assignment `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    params: Vec<String>,
    /// Extra-coordinate signature, +1 or -1.
    #[arg(long = "eps-d", value_name = "±1", allow_hyphen_values = true)]
    eps_d: Option<String>,
    /// Output file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Sample points per solution.
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

fn params_of(c: &Common) -> Result<Vec<(String, f64)>, CliError> {
    c.params.iter().map(|s| parse_param(s)).collect()
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::List { out } => {
            emit(&listing::render(), out.as_deref())?;
            Ok(EXIT_PASS)
        }
        Command::Verify(v) => {
            let cfg = RunConfig {
                selection: Selection::parse(v.common.family.as_deref().unwrap_or("all"))?,
                params: params_of(&v.common)?,
                points: v.points,
                seed: v.seed,
                tolerance: v.tol,
                eps_d: v.common.eps_d.as_deref().map(parse_sign).transpose()?,
                out: v.common.out.clone(),
            };
            let report = kkforms::verify(&cfg)?;
            emit(&report.to_json(), cfg.out.as_deref())?;
            eprint!("{}", report.summary());
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Profile(p) => {
            let family = match Selection::parse(p.common.family.as_deref().unwrap_or(""))? {
                Selection::One(f) => f,
                Selection::All => return Err(CliError::config("profile needs --family kink2 or ckink3")),
            };
            let mut params = Params::new();
            for (name, v) in params_of(&p.common)? {
                params.set(&name, v);
            }
            if let Some(e) = p.common.eps_d.as_deref() {
                params.set("eps_d", parse_sign(e)?);
            }
            let table = profile(family, &params, &Grid { from: p.from, to: p.to, step: p.step })?;
            emit(&table.to_csv(), p.common.out.as_deref())?;
            eprintln!("{}", table.summary());
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("kkforms: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
