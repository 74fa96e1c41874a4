//! Executes a [`RunConfig`] and renders its artifact.

use std::f64::consts::TAU;

use bloch_braids::braid::extract_braid_word;
use bloch_braids::io;
use bloch_braids::models::ModelSpec;
use bloch_braids::spectrum::{riemann_loop, track_bands};
use bloch_braids::topology::{
    dimer_ep_lines, dimer_ep_zplane, find_eps_k, find_eps_z, phase_diagram, total_braid_index,
    winding_number, BoundaryScan, BraidIndex, EpLocation, ExceptionalPoint, SweepOptions,
};
use bloch_braids::Error;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Command, Format, RunConfig};

/// What a run produced: the file contents and a one-line summary.
pub struct Outcome {
    pub artifact: String,
    pub summary: String,
    /// Extra files written next to the main output, as (suffix, contents).
    pub side_files: Vec<(String, String)>,
}

fn scan_for(k0: f64, samples: usize) -> BoundaryScan {
    let mut scan = BoundaryScan {
        k0,
        ..BoundaryScan::default()
    };
    scan.track.initial_samples = samples;
    scan
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, Error> {
    let model = &cfg.model;
    match &cfg.command {
        Command::Bands { k0, samples } => {
            let t = track_bands(model, *k0, *samples)?;
            let artifact = match cfg.format {
                Format::Csv => io::trajectory_csv(&t)?,
                Format::Json => io::trajectory_json(&t, None, None)?,
            };
            Ok(Outcome {
                artifact,
                summary: format!("closure: {}", t.closure),
                side_files: Vec::new(),
            })
        }
        Command::Braid { k0, samples } => {
            let t = track_bands(model, *k0, *samples)?;
            let word = extract_braid_word(&t)?;
            let index = total_braid_index(model, &scan_for(*k0, *samples))?;
            let record = BraidRecord {
                word: word.to_string(),
                exponent_sum: word.exponent_sum(),
                nu: index.nu,
                closure: t.closure.to_string(),
                arrangement: t.closure.arrangement_label(),
                k0: t.k0,
                references: index.terms.iter().map(|w| w.reference_energy).collect(),
            };
            Ok(Outcome {
                artifact: match cfg.format {
                    Format::Csv => record.csv(),
                    Format::Json => io::to_json(&record)?,
                },
                summary: format!("word: {word}, nu: {}", index.nu),
                side_files: Vec::new(),
            })
        }
        Command::Eps => {
            let report = EpReport::build(model)?;
            Ok(Outcome {
                artifact: match cfg.format {
                    Format::Csv => report.csv(),
                    Format::Json => io::to_json(&report)?,
                },
                summary: format!(
                    "eps: {} on the zone, {} in the z-plane ({} inside the unit circle)",
                    report.momentum.len(),
                    report.zplane.len(),
                    report.inside_unit_circle()
                ),
                side_files: Vec::new(),
            })
        }
        Command::Winding { e_ref, k0, samples } => {
            let index = match e_ref {
                Some(e) => {
                    let w = winding_number(model, *e, *samples)?;
                    BraidIndex {
                        nu: w.nu,
                        terms: vec![w],
                    }
                }
                None => total_braid_index(model, &scan_for(*k0, *samples))?,
            };
            let artifact = match cfg.format {
                Format::Csv => {
                    let mut out = String::from("re_ref,im_ref,nu,raw,residual,samples\n");
                    for w in &index.terms {
                        out += &format!(
                            "{},{},{},{},{},{}\n",
                            w.reference_energy.re, w.reference_energy.im, w.nu, w.raw, w.residual, w.samples
                        );
                    }
                    out
                }
                Format::Json => io::to_json(&index)?,
            };
            Ok(Outcome {
                artifact,
                summary: format!("nu: {} ({} references)", index.nu, index.terms.len()),
                side_files: Vec::new(),
            })
        }
        Command::PhaseDiagram {
            axis1,
            axis2,
            k0,
            samples,
            index,
        } => {
            let mut opts = SweepOptions {
                k0: *k0,
                with_index: *index,
                scan: scan_for(*k0, *samples),
                ..SweepOptions::default()
            };
            opts.track.initial_samples = *samples;
            let pd = phase_diagram(model, axis1, axis2, &opts)?;
            let degenerate = pd.cells.iter().filter(|c| c.degenerate).count();
            let mut classes: Vec<&str> = pd.cells.iter().filter_map(|c| c.word.as_deref()).collect();
            classes.sort_unstable();
            classes.dedup();
            Ok(Outcome {
                artifact: match cfg.format {
                    Format::Csv => io::phase_diagram_csv(&pd)?,
                    Format::Json => io::to_json(&pd)?,
                },
                summary: format!(
                    "cells: {}, degenerate: {degenerate}, words: {}",
                    pd.cells.len(),
                    classes.join(" | ")
                ),
                side_files: Vec::new(),
            })
        }
        Command::Riemann { r, samples } => {
            let t = riemann_loop(model, *r, *samples)?;
            let eps = find_eps_z(model)?;
            let enclosed = eps
                .iter()
                .filter(|ep| matches!(ep.location, EpLocation::Z { z } if z.norm() < *r))
                .count();
            let (artifact, side_files) = match cfg.format {
                Format::Csv => (io::trajectory_csv(&t)?, vec![(".eps.json".to_string(), io::to_json(&eps)?)]),
                Format::Json => (io::trajectory_json(&t, None, Some(&eps))?, Vec::new()),
            };
            Ok(Outcome {
                artifact,
                summary: format!("closure: {}, enclosed eps: {enclosed}", t.closure),
                side_files,
            })
        }
    }
}

#[derive(Serialize)]
struct BraidRecord {
    word: String,
    exponent_sum: i64,
    nu: i64,
    closure: String,
    arrangement: String,
    k0: f64,
    references: Vec<Complex64>,
}

impl BraidRecord {
    fn csv(&self) -> String {
        format!(
            "word,exponent_sum,nu,closure,arrangement,k0\n{},{},{},{},\"{}\",{}\n",
            self.word, self.exponent_sum, self.nu, self.closure, self.arrangement, self.k0
        )
    }
}

/// Closed-form EP data, present for the dimer only.
#[derive(Serialize)]
struct DimerAnalytic {
    lines: bloch_braids::topology::DimerEpLines,
    zplane_formula: Vec<Complex64>,
}

#[derive(Serialize)]
struct EpReport {
    momentum: Vec<ExceptionalPoint>,
    zplane: Vec<ExceptionalPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<DimerAnalytic>,
}

impl EpReport {
    fn build(model: &ModelSpec) -> Result<Self, Error> {
        let analytic = match model {
            ModelSpec::Dimer(p) => Some(DimerAnalytic {
                lines: dimer_ep_lines(p.alpha, p.beta, p.m),
                zplane_formula: dimer_ep_zplane(p).unwrap_or_default(),
            }),
            _ => None,
        };
        Ok(Self {
            momentum: find_eps_k(model)?,
            zplane: find_eps_z(model)?,
            analytic,
        })
    }

    fn inside_unit_circle(&self) -> usize {
        self.zplane
            .iter()
            .filter(|ep| matches!(ep.location, EpLocation::Z { z } if z.norm() < 1.0))
            .count()
    }

    fn csv(&self) -> String {
        let mut out = String::from("kind,k,re_z,im_z,re_energy,im_energy,band_a,band_b,discriminant\n");
        for ep in self.momentum.iter().chain(&self.zplane) {
            let (kind, k, z) = match ep.location {
                EpLocation::Momentum { k } => ("momentum", k, Complex64::from_polar(1.0, k)),
                EpLocation::Z { z } => ("z", z.arg().rem_euclid(TAU), z),
            };
            out += &format!(
                "{kind},{k},{},{},{},{},{},{},{}\n",
                z.re, z.im, ep.energy.re, ep.energy.im, ep.bands[0], ep.bands[1], ep.discriminant
            );
        }
        out
    }
}
