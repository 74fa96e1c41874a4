//! Two-parameter sweeps classified by braid word.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::winding::{classify, total_braid_index, BoundaryScan};
use crate::braid::Permutation;
use crate::exec::{map_indexed, Execution};
use crate::models::ModelSpec;
use crate::spectrum::TrackOptions;
use crate::Error;

/// Inclusive, evenly spaced values of one named parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(name: &str, lo: f64, hi: f64, n: usize) -> Result<Self, Error> {
        let axis = Self {
            name: name.to_string(),
            lo,
            hi,
            n,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad axis {self}")));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        if self.n > 1 {
            (self.hi - self.lo) / (self.n - 1) as f64
        } else {
            0.0
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n && self.n > 1 {
            self.hi
        } else {
            self.lo + self.step() * i as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    /// Axis coordinate of a doubled grid index (odd values sit between
    /// cells), clamped to the axis range.
    fn half_index(&self, twice: i64) -> f64 {
        let x = self.lo + self.step() * twice as f64 / 2.0;
        x.clamp(self.lo.min(self.hi), self.lo.max(self.hi))
    }
}

/// `name:lo:hi:n`, e.g. `beta:0:3:300`.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidArgument(format!("axis `{s}` is not name:lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, lo, hi, n] = parts[..] else {
            return Err(bad());
        };
        Axis::new(
            name,
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
            n.parse().map_err(|_| bad())?,
        )
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.lo, self.hi, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOptions {
    pub k0: f64,
    /// Tracking for each cell; its samples are evaluated sequentially.
    pub track: TrackOptions,
    /// How cells are distributed.
    pub execution: Execution,
    /// Also compute the winding index of every classified cell.
    pub with_index: bool,
    pub scan: BoundaryScan,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            k0: 0.0,
            track: TrackOptions {
                execution: Execution::Sequential,
                ..TrackOptions::default()
            },
            execution: Execution::default(),
            with_index: false,
            scan: BoundaryScan::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub word: Option<String>,
    pub exponent_sum: Option<i64>,
    pub closure: Option<Permutation>,
    /// Classification key, see [`super::Classification::key`].
    pub class: Option<String>,
    /// Winding index, when requested.
    pub index: Option<i64>,
    pub degenerate: bool,
    pub error: Option<String>,
}

impl Cell {
    pub fn is_classified(&self) -> bool {
        self.class.is_some()
    }
}

/// Staircase line along cell edges separating two classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub between: [String; 2],
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub template: ModelSpec,
    pub axis1: Axis,
    pub axis2: Axis,
    pub k0: f64,
    /// Row-major: `cells[i1 * axis2.n + i2]`.
    pub cells: Vec<Cell>,
    pub boundaries: Vec<Boundary>,
    pub notes: Vec<String>,
}

impl PhaseDiagram {
    pub fn cell(&self, i1: usize, i2: usize) -> &Cell {
        &self.cells[i1 * self.axis2.n + i2]
    }

    /// Cell closest to the given axis values.
    pub fn nearest(&self, x: f64, y: f64) -> &Cell {
        let pick = |a: &Axis, v: f64| {
            let step = a.step();
            if step == 0.0 {
                0
            } else {
                (((v - a.lo) / step).round().max(0.0) as usize).min(a.n - 1)
            }
        };
        self.cell(pick(&self.axis1, x), pick(&self.axis2, y))
    }
}

fn evaluate_cell(spec: Result<ModelSpec, Error>, x: f64, y: f64, opts: &SweepOptions) -> Cell {
    let mut cell = Cell {
        x,
        y,
        word: None,
        exponent_sum: None,
        closure: None,
        class: None,
        index: None,
        degenerate: false,
        error: None,
    };
    let outcome = spec.and_then(|s| classify(&s, opts.k0, &opts.track).map(|c| (s, c)));
    match outcome {
        Ok((spec, c)) => {
            cell.class = Some(c.key());
            cell.word = Some(c.word.to_string());
            cell.exponent_sum = Some(c.exponent_sum);
            cell.closure = Some(c.closure);
            if opts.with_index {
                match total_braid_index(&spec, &opts.scan) {
                    Ok(idx) => cell.index = Some(idx.nu),
                    Err(e) => cell.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => {
            // Every failure marks the cell; degenerate ones trace EP lines.
            cell.degenerate = true;
            cell.error = (!e.is_degenerate()).then(|| e.to_string());
        }
    }
    cell
}

/// Classifies every point of the `axis1 × axis2` grid of `template`.
/// Cells that cannot be classified are marked degenerate.
pub fn phase_diagram(
    template: &ModelSpec,
    axis1: &Axis,
    axis2: &Axis,
    opts: &SweepOptions,
) -> Result<PhaseDiagram, Error> {
    template.validate()?;
    axis1.validate()?;
    axis2.validate()?;
    template.param(&axis1.name)?;
    template.param(&axis2.name)?;

    let n2 = axis2.n;
    let cells = map_indexed(opts.execution, axis1.n * n2, |idx| {
        let (x, y) = (axis1.value(idx / n2), axis2.value(idx % n2));
        let spec = template
            .with_param(&axis1.name, x)
            .and_then(|s| s.with_param(&axis2.name, y));
        evaluate_cell(spec, x, y, opts)
    });

    let mut notes = Vec::new();
    if let Ok(delta) = template.param("delta") {
        let swept = [axis1, axis2].into_iter().any(|a| {
            a.name == "delta" && a.lo.min(a.hi) <= 0.0 && a.lo.max(a.hi) >= 0.0
        });
        if delta == 0.0 || swept {
            notes.push("delta = 0 lies outside the validated regime".to_string());
        }
    }

    let boundaries = trace_boundaries(&cells, axis1, axis2);
    Ok(PhaseDiagram {
        template: template.clone(),
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        k0: opts.k0,
        cells,
        boundaries,
        notes,
    })
}

type Corner = (i64, i64);

/// Joins the cell edges between differently classified neighbours into
/// polylines, one set per pair of classes. Degenerate cells are skipped.
fn trace_boundaries(cells: &[Cell], axis1: &Axis, axis2: &Axis) -> Vec<Boundary> {
    let (n1, n2) = (axis1.n, axis2.n);
    let class = |i: usize, j: usize| cells[i * n2 + j].class.as_deref();
    let mut groups: HashMap<(String, String), Vec<(Corner, Corner)>> = HashMap::new();
    let mut add = |a: &str, b: &str, seg: (Corner, Corner)| {
        let key = if a < b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        groups.entry(key).or_default().push(seg);
    };
    for i in 0..n1 {
        for j in 0..n2 {
            let Some(here) = class(i, j) else { continue };
            let (ci, cj) = (2 * i as i64, 2 * j as i64);
            if i + 1 < n1 {
                if let Some(right) = class(i + 1, j).filter(|c| *c != here) {
                    add(here, right, ((ci + 1, cj - 1), (ci + 1, cj + 1)));
                }
            }
            if j + 1 < n2 {
                if let Some(up) = class(i, j + 1).filter(|c| *c != here) {
                    add(here, up, ((ci - 1, cj + 1), (ci + 1, cj + 1)));
                }
            }
        }
    }

    let mut keys: Vec<_> = groups.keys().cloned().collect();
    keys.sort();
    let mut out = Vec::new();
    for key in keys {
        for chain in chain_segments(&groups[&key]) {
            out.push(Boundary {
                between: [key.0.clone(), key.1.clone()],
                points: chain
                    .into_iter()
                    .map(|(a, b)| [axis1.half_index(a), axis2.half_index(b)])
                    .collect(),
            });
        }
    }
    out
}

fn chain_segments(segments: &[(Corner, Corner)]) -> Vec<Vec<Corner>> {
    let mut at: HashMap<Corner, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(s);
        at.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let extend = |chain: &mut Vec<Corner>, used: &mut Vec<bool>| loop {
        let end = *chain.last().unwrap();
        let Some(&s) = at[&end].iter().find(|&&s| !used[s]) else {
            break;
        };
        used[s] = true;
        let (a, b) = segments[s];
        chain.push(if a == end { b } else { a });
    };
    let mut chains = Vec::new();
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        used[s] = true;
        let mut forward = vec![segments[s].0, segments[s].1];
        extend(&mut forward, &mut used);
        let mut backward = vec![segments[s].0];
        extend(&mut backward, &mut used);
        backward.reverse();
        backward.pop();
        backward.extend(forward);
        chains.push(backward);
    }
    chains
}
