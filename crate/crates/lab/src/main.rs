use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use normdiv::commands::{self, Context};
use normdiv::report::Report;
use normdiv::{ExperimentConfig, LabError, LabResult};

/// Divisor sums over norm forms: exact counts, local densities and the
/// asymptotic constant.
#[derive(Parser)]
#[command(name = "normdiv", version)]
struct Cli {
    /// Built-in field name or path to a field spec (overrides the config).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV and JSON output (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field data.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Decomposition of a rational prime.
    Split { p: u64 },
    /// Ideals of norm n with their densities and generators.
    Ideals { n: u64 },
    /// Coefficients of the Möbius-type expansion for norm n.
    Mu { n: u64 },
    /// Local densities.
    Density {
        #[command(subcommand)]
        cmd: DensityCmd,
    },
    /// Runs the exact identity suite.
    Identities,
    /// Lattice points of an ideal in the scaled region against the envelope.
    Count { norm: u64, x: u64 },
    /// The asymptotic constant truncated at P0, compared with 2·P0.
    Constant {
        #[arg(long)]
        p0: Option<u64>,
    },
    /// Exact divisor sum over the scaled region.
    SumExact { x: u64 },
    /// Hyperbola decomposition of τ_k(n).
    Hyperbola {
        n: u64,
        y: u64,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Sharp-cutoff decomposition over the scaled region.
    Sharp {
        x: u64,
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Exact sums against the main term for every X in the config.
    Theorem,
    /// Degree-one divisor sum over a ball of radius V.
    Wolke {
        v: u64,
        /// Also every power of two from 32 below V.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Checks the field description for consistency.
    Verify,
    /// Prints the field description as TOML.
    Show,
}

#[derive(Subcommand)]
enum DensityCmd {
    Rho { n: u64 },
    Varrho { n: u64 },
}

fn configure(cli: &Cli) -> LabResult<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(f) = &cli.field {
        cfg.field = f.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = Some(o.clone());
    }
    if let Ok(t) = std::env::var("NORMDIV_THREADS") {
        let n: usize = t
            .parse()
            .map_err(|_| LabError::Config(format!("NORMDIV_THREADS: bad value {t:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| LabError::Config(e.to_string()))?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> LabResult<bool> {
    let cfg = configure(&cli)?;
    if let Cmd::Field { cmd: FieldCmd::Show } = cli.cmd {
        print!("{}", normdiv::spec_file::spec_to_toml(&cfg.field_spec()?));
        return Ok(true);
    }
    let ctx = Context::new(cfg)?;
    let report: Report = match cli.cmd {
        Cmd::Field { cmd: FieldCmd::Verify } => commands::field_verify(&ctx),
        Cmd::Field { cmd: FieldCmd::Show } => unreachable!(),
        Cmd::Split { p } => commands::split(&ctx, p)?,
        Cmd::Ideals { n } => commands::ideals(&ctx, n)?,
        Cmd::Mu { n } => commands::mu(&ctx, n)?,
        Cmd::Density { cmd: DensityCmd::Rho { n } } => commands::density_rho(&ctx, n)?,
        Cmd::Density { cmd: DensityCmd::Varrho { n } } => commands::density_varrho(&ctx, n)?,
        Cmd::Identities => commands::identities(&ctx)?,
        Cmd::Count { norm, x } => commands::count(&ctx, norm, x)?,
        Cmd::Constant { p0 } => commands::constant(&ctx, p0.unwrap_or(ctx.cfg.p0))?,
        Cmd::SumExact { x } => commands::sum_exact(&ctx, x)?,
        Cmd::Hyperbola { n, y, k } => commands::hyperbola(&ctx, n, y, k)?,
        Cmd::Sharp { x, delta } => commands::sharp(&ctx, x, delta.unwrap_or(ctx.cfg.delta))?,
        Cmd::Theorem => commands::theorem(&ctx)?,
        Cmd::Wolke { v, sweep } => commands::wolke(&ctx, v, sweep)?,
    };
    print!("{}", report.to_text());
    if let Some(dir) = &ctx.cfg.output {
        for p in report.emit(dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(report.all_checks_pass())
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
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
