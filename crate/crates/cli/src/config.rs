//! Run configurations: what the subcommands build and `run` replays.

use std::path::PathBuf;

use bloch_braids::topology::Axis;
use bloch_braids::ModelSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn default_samples() -> usize {
    bloch_braids::spectrum::DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Bands {
        #[serde(default)]
        k0: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Braid {
        #[serde(default)]
        k0: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Eps,
    Winding {
        /// Fixed reference energy; EP references are located when absent.
        #[serde(default)]
        e_ref: Option<Complex64>,
        #[serde(default)]
        k0: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    PhaseDiagram {
        axis1: Axis,
        axis2: Axis,
        #[serde(default)]
        k0: f64,
        #[serde(default = "default_samples")]
        samples: usize,
        /// Also compute the winding index per cell.
        #[serde(default)]
        index: bool,
    },
    Riemann {
        r: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub command: Command,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        self.model.validate()?;
        let samples = match &self.command {
            Command::Bands { samples, .. }
            | Command::Braid { samples, .. }
            | Command::Winding { samples, .. }
            | Command::PhaseDiagram { samples, .. }
            | Command::Riemann { samples, .. } => *samples,
            Command::Eps => bloch_braids::spectrum::MIN_SAMPLES,
        };
        let min = bloch_braids::spectrum::MIN_SAMPLES;
        anyhow::ensure!(samples >= min, "--samples must be at least {min}, got {samples}");
        match &self.command {
            Command::PhaseDiagram { axis1, axis2, .. } => {
                for axis in [axis1, axis2] {
                    axis.validate()?;
                    self.model.param(&axis.name)?;
                }
            }
            Command::Riemann { r, .. } => {
                anyhow::ensure!(*r > 0.0 && r.is_finite(), "--r must be positive, got {r}");
            }
            Command::Eps => {
                anyhow::ensure!(
                    matches!(self.model.dim(), 2 | 3),
                    "EP search needs a two- or three-band model"
                );
            }
            _ => {}
        }
        Ok(())
    }
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}
