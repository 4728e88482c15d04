use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use thermospec::{acceptance, commands, Artifact, Overrides, RunConfig};
use thermospec_core::BcKind;

#[derive(Parser)]
#[command(name = "thermospec", version, about = "Heat-trace asymptotics and spectra of the thermoelastic operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form a0 and a1 for the configured domain.
    Coeffs(Common),
    /// Parametrix composition defects at seeded chart points (CSV).
    SymbolCheck(Common),
    /// Eigenvalues with multiplicities below the cutoff (CSV).
    Spectrum(Common),
    /// Heat trace on the fitting window (CSV).
    Trace(Common),
    /// Fitted expansion coefficients (JSON).
    Fit(Common),
    /// Weyl counting ratio curve (CSV).
    Weyl(Common),
    /// Ball rigidity verdict (JSON).
    Rigidity {
        #[command(flatten)]
        common: Common,
        /// Volume; with --vol-boundary skips the spectral recovery.
        #[arg(long, requires = "vol_boundary")]
        vol: Option<f64>,
        #[arg(long, requires = "vol")]
        vol_boundary: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run the acceptance suite; nonzero exit on any failure.
    Verify {
        /// Criterion ids to run (all by default).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Directory for the artifact; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    bc: Option<BcKind>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// e.g. `disk:1`, `rectangle:1x2`, `torus:2pix2pi`, `interval:pi`.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    degree: Option<usize>,
    /// Experimental: accept beta or omega nonzero.
    #[arg(long)]
    allow_coupled: bool,
    #[arg(long)]
    override_tail_guard: bool,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            bc: self.bc,
            lambda: self.lambda,
            mu: self.mu,
            alpha: self.alpha,
            domain: self.domain.clone(),
            cutoff: self.cutoff,
            degree: self.degree,
            out: self.out.clone(),
            allow_coupled: self.allow_coupled,
            override_tail_guard: self.override_tail_guard,
        };
        RunConfig::load(&self.config, &overrides)
    }
}

fn emit(cfg: &RunConfig, artifact: Artifact) -> Result<()> {
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(artifact.file_name);
            std::fs::write(&path, artifact.contents).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", artifact.contents),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let (cfg, artifact) = match cli.command {
        Command::Coeffs(c) => {
            let cfg = c.load()?;
            let a = commands::coeffs(&cfg)?;
            (cfg, a)
        }
        Command::SymbolCheck(c) => {
            let cfg = c.load()?;
            let a = commands::symbol_check(&cfg)?;
            (cfg, a)
        }
        Command::Spectrum(c) => {
            let cfg = c.load()?;
            let a = commands::spectrum(&cfg)?;
            (cfg, a)
        }
        Command::Trace(c) => {
            let cfg = c.load()?;
            let a = commands::trace(&cfg)?;
            (cfg, a)
        }
        Command::Fit(c) => {
            let cfg = c.load()?;
            let a = commands::fit(&cfg)?;
            (cfg, a)
        }
        Command::Weyl(c) => {
            let cfg = c.load()?;
            let a = commands::weyl(&cfg)?;
            (cfg, a)
        }
        Command::Rigidity {
            common,
            vol,
            vol_boundary,
            tolerance,
        } => {
            let cfg = common.load()?;
            let a = commands::rigidity(&cfg, vol.zip(vol_boundary), tolerance)?;
            (cfg, a)
        }
        Command::Verify { only } => {
            let mut all_passed = true;
            for outcome in acceptance::run(&only) {
                println!("{outcome}");
                all_passed &= outcome.passed;
            }
            return Ok(all_passed);
        }
    };
    emit(&cfg, artifact)?;
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
