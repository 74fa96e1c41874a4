use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bloch_braids::topology::Axis;
use bloch_braids::ModelSpec;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

mod config;
mod run;

use config::{parse_complex, Command, Format, RunConfig};

/// Band braids, exceptional points and winding numbers of non-Hermitian
/// Bloch Hamiltonians.
#[derive(Parser)]
#[command(name = "bloch-braids", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Model JSON, e.g. configs/models/dimer.json
    #[arg(long)]
    model: PathBuf,
    /// Output file; the artifact goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the equivalent run config instead of running
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct Sampling {
    /// Base momentum of the Brillouin-zone loop
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k0: f64,
    /// Initial samples per period
    #[arg(long, default_value_t = bloch_braids::spectrum::DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Track the complex bands over one period
    Bands {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Extract the braid word and its winding index
    Braid {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Locate exceptional points on the zone and in the z-plane
    Eps {
        #[command(flatten)]
        common: Common,
    },
    /// Spectral winding number around a reference energy
    Winding {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// Reference energy `re` or `re,im`; EP references are located when omitted
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        e_ref: Option<Complex64>,
    },
    /// Classify a two-parameter grid by braid word
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// name:lo:hi:n
        #[arg(long, allow_hyphen_values = true)]
        axis1: Axis,
        /// name:lo:hi:n
        #[arg(long, allow_hyphen_values = true)]
        axis2: Axis,
        /// Also compute the winding index of every cell
        #[arg(long)]
        index: bool,
    },
    /// Follow the eigenvalues of H(z) around |z| = r
    Riemann {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = bloch_braids::spectrum::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Execute a saved run config
    Run {
        config: PathBuf,
        /// Overrides the config's output path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(anyhow::Error),
    Numerical(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn read_model(path: &Path) -> anyhow::Result<ModelSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing model {}", path.display()))
}

/// Builds the run config for a subcommand, and whether to only print it.
fn config_of(cmd: Cmd) -> anyhow::Result<(RunConfig, bool)> {
    let (common, command) = match cmd {
        Cmd::Run { config, out } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg: RunConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
            if out.is_some() {
                cfg.out = out;
            }
            return Ok((cfg, false));
        }
        Cmd::Bands { common, sampling } => (
            common,
            Command::Bands {
                k0: sampling.k0,
                samples: sampling.samples,
            },
        ),
        Cmd::Braid { common, sampling } => (
            common,
            Command::Braid {
                k0: sampling.k0,
                samples: sampling.samples,
            },
        ),
        Cmd::Eps { common } => (common, Command::Eps),
        Cmd::Winding {
            common,
            sampling,
            e_ref,
        } => (
            common,
            Command::Winding {
                e_ref,
                k0: sampling.k0,
                samples: sampling.samples,
            },
        ),
        Cmd::PhaseDiagram {
            common,
            sampling,
            axis1,
            axis2,
            index,
        } => (
            common,
            Command::PhaseDiagram {
                axis1,
                axis2,
                k0: sampling.k0,
                samples: sampling.samples,
                index,
            },
        ),
        Cmd::Riemann { common, r, samples } => (common, Command::Riemann { r, samples }),
    };
    let cfg = RunConfig {
        model: read_model(&common.model)?,
        command,
        out: common.out,
        format: common.format,
    };
    Ok((cfg, common.dump_config))
}

#[cfg(feature = "parallel")]
fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("BLOCH_BRAIDS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("BLOCH_BRAIDS_THREADS must be a count, got `{value}`"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> anyhow::Result<()> {
    Ok(())
}

fn real_main(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (cfg, dump) = config_of(cli.command)?;
    if dump {
        println!("{}", serde_json::to_string_pretty(&cfg).map_err(anyhow::Error::from)?);
        return Ok(());
    }
    cfg.validate()?;
    let outcome = run::execute(&cfg).map_err(|e| {
        if e.is_numerical() {
            Failure::Numerical(e.into())
        } else {
            Failure::Invalid(e.into())
        }
    })?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &outcome.artifact)
                .with_context(|| format!("writing {}", path.display()))?;
            for (suffix, contents) in &outcome.side_files {
                let mut side = path.as_os_str().to_owned();
                side.push(suffix);
                std::fs::write(&side, contents)
                    .with_context(|| format!("writing {}", Path::new(&side).display()))?;
            }
            println!("{}", outcome.summary);
        }
        None => {
            print!("{}", outcome.artifact);
            eprintln!("{}", outcome.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e:#}");
            ExitCode::from(2)
        }
    }
}
