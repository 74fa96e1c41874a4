//! Spectral winding numbers and the reference energies they are taken
//! against.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ep::{golden_min, min_discriminant, ExceptionalPoint};
use crate::braid::{extract_braid_word, BraidWord, Permutation};
use crate::exec::{map_indexed, Execution};
use crate::models::ModelSpec;
use crate::spectrum::{track, SamplePath, TrackOptions, DEFAULT_SAMPLES};
use crate::{tolerance, Error};

/// Extra points halving towards zero after the evenly spaced ones.
const TAIL_POINTS: usize = 10;

/// Upper bound on the samples used for one winding number.
pub const MAX_WINDING_SAMPLES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub nu: i64,
    /// Accumulated phase over `2π`, before rounding.
    pub raw: f64,
    pub residual: f64,
    pub reference_energy: Complex64,
    pub samples: usize,
}

/// Winding of `det(H(k) − E_ref)` around zero as `k` runs over one period.
///
/// The sample count doubles from `samples` until every phase step is below
/// `π/4` and the total lands within [`tolerance::WINDING_RESIDUAL`] of an
/// integer.
pub fn winding_number(spec: &ModelSpec, e_ref: Complex64, samples: usize) -> Result<WindingResult, Error> {
    spec.validate()?;
    let n = spec.dim() as i32;
    let mut count = samples.max(8);
    loop {
        let step = TAU / count as f64;
        let exec = if count >= 8192 {
            Execution::Parallel
        } else {
            Execution::Sequential
        };
        let dets = map_indexed(exec, count, |j| {
            let k = step * j as f64;
            let shifted = spec.at_momentum(k).shifted(e_ref);
            let scale = 1.0 + n as f64 * shifted.max_abs();
            let det = shifted.determinant();
            if det.norm() < tolerance::DEGENERACY * scale.powi(n) {
                Err(Error::ReferenceOnBand { at: k })
            } else {
                Ok(det)
            }
        });
        let dets = dets.into_iter().collect::<Result<Vec<_>, _>>()?;
        let mut total = 0.0;
        let mut widest = 0.0f64;
        for j in 0..count {
            let turn = (dets[(j + 1) % count] / dets[j]).arg();
            widest = widest.max(turn.abs());
            total += turn;
        }
        let raw = total / TAU;
        let nu = raw.round();
        let residual = (raw - nu).abs();
        if widest < FRAC_PI_4 && residual < tolerance::WINDING_RESIDUAL {
            return Ok(WindingResult {
                nu: nu as i64,
                raw,
                residual,
                reference_energy: e_ref,
                samples: count,
            });
        }
        if count * 2 > MAX_WINDING_SAMPLES {
            return Err(Error::NonConvergent { samples: count });
        }
        count *= 2;
    }
}

/// Braid word, exponent sum and closure of one parameter point: the data a
/// phase-diagram cell is classified by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(with = "word_text")]
    pub word: BraidWord,
    pub exponent_sum: i64,
    pub closure: Permutation,
}

impl Classification {
    /// Cyclically reduced word up to rotation, exponent sum and closure.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}",
            self.word.canonical_rotation(),
            self.exponent_sum,
            self.closure
        )
    }
}

mod word_text {
    use super::BraidWord;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Text {
        strands: usize,
        word: String,
    }

    pub fn serialize<S: Serializer>(w: &BraidWord, s: S) -> Result<S::Ok, S::Error> {
        Text {
            strands: w.strands(),
            word: w.to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BraidWord, D::Error> {
        let t = Text::deserialize(d)?;
        BraidWord::parse(&t.word, t.strands).map_err(serde::de::Error::custom)
    }
}

pub fn classify(spec: &ModelSpec, k0: f64, opts: &TrackOptions) -> Result<Classification, Error> {
    let trajectory = track(spec, SamplePath::Momentum, k0, opts)?;
    let word = extract_braid_word(&trajectory)?;
    Ok(Classification {
        exponent_sum: word.exponent_sum(),
        word,
        closure: trajectory.closure,
    })
}

/// How reference energies are located for models without a closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundaryScan {
    /// Parameter scanned from its current value towards zero.
    pub param: String,
    /// Coarse classification points along the scan.
    pub points: usize,
    pub k0: f64,
    pub track: TrackOptions,
}

impl Default for BoundaryScan {
    fn default() -> Self {
        Self {
            param: "gamma".into(),
            points: 24,
            k0: 0.0,
            track: TrackOptions {
                execution: Execution::Sequential,
                ..TrackOptions::default()
            },
        }
    }
}

/// EPs on the phase boundaries met when `scan.param` is taken from its
/// current value towards zero with everything else fixed.
///
/// Boundaries are bracketed by a change of [`Classification::key`] between
/// neighbouring coarse points and then pinned down by minimizing the
/// smallest discriminant over the zone. The coarse points are evenly spaced
/// with a geometric tail towards zero, where boundaries can crowd. For each
/// coalescing band pair only the first EP met is kept.
pub fn boundary_references(spec: &ModelSpec, scan: &BoundaryScan) -> Result<Vec<ExceptionalPoint>, Error> {
    let start = spec.param(&scan.param)?;
    let linear = scan.points.max(2);
    let mut values: Vec<f64> = (0..linear)
        .map(|i| start * (1.0 - i as f64 / linear as f64))
        .collect();
    let last = start / linear as f64;
    values.extend((1..=TAIL_POINTS).map(|j| last * 0.5f64.powi(j as i32)));
    let keys: Vec<Option<String>> = values
        .iter()
        .map(|&x| {
            let s = spec.with_param(&scan.param, x)?;
            Ok(classify(&s, scan.k0, &scan.track).ok().map(|c| c.key()))
        })
        .collect::<Result<_, Error>>()?;

    let gap_at = |x: f64| -> f64 {
        spec.with_param(&scan.param, x)
            .and_then(|s| min_discriminant(&s))
            .map(|(_, g)| g)
            .unwrap_or(f64::INFINITY)
    };
    let mut refs: Vec<ExceptionalPoint> = Vec::new();
    for i in 0..values.len() - 1 {
        if keys[i] == keys[i + 1] {
            continue;
        }
        let (lo, hi) = (values[i].min(values[i + 1]), values[i].max(values[i + 1]));
        let (x, g) = golden_min(gap_at, lo, hi, 1e-13);
        if g >= 1e-8 {
            continue;
        }
        let at = spec.with_param(&scan.param, x)?;
        let (k, _) = min_discriminant(&at)?;
        let ep = ExceptionalPoint::at_momentum(&at, k)?;
        if !refs.iter().any(|r| r.bands == ep.bands) {
            refs.push(ep);
        }
    }
    Ok(refs)
}

/// Sum of winding numbers over a set of reference energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidIndex {
    pub nu: i64,
    pub terms: Vec<WindingResult>,
}

/// Total winding index: the dimer winds around `E = 0`, other models
/// around the EP energies of [`boundary_references`].
pub fn total_braid_index(spec: &ModelSpec, scan: &BoundaryScan) -> Result<BraidIndex, Error> {
    let refs: Vec<Complex64> = match spec {
        ModelSpec::Dimer(_) => vec![Complex64::new(0.0, 0.0)],
        _ => boundary_references(spec, scan)?
            .into_iter()
            .map(|ep| ep.energy)
            .collect(),
    };
    let terms = refs
        .into_iter()
        .map(|e| winding_number(spec, e, DEFAULT_SAMPLES))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BraidIndex {
        nu: terms.iter().map(|t| t.nu).sum(),
        terms,
    })
}
