//! Complex band energies and their continuation over one Brillouin-zone
//! period (or one loop around a circle in the z-plane).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braid::Permutation;
use crate::exec::{map_indexed, Execution};
use crate::linalg::{self, Solver};
use crate::matching::assign;
use crate::models::{bloch_matrix_z, DimerParams, ModelSpec};
use crate::{tolerance, Error};

/// Smallest accepted initial sample count.
pub const MIN_SAMPLES: usize = 64;
pub const DEFAULT_SAMPLES: usize = 512;
pub const MAX_SAMPLES: usize = 65_536;

/// Sample counts from which the per-sample eigen solves are fanned out.
const PARALLEL_SAMPLE_THRESHOLD: usize = 4096;

/// Both dimer bands in closed form, `E = δ sin mk ∓ √R` with
/// `R = α² + β² + 2αβ cos mk + (iγ + δ sin mk)²` and the principal root.
pub fn dimer_bands_analytic(p: &DimerParams, k: f64) -> (Complex64, Complex64) {
    let mk = p.m as f64 * k;
    let (s, c) = mk.sin_cos();
    let i = Complex64::i();
    let radicand = p.alpha * p.alpha + p.beta * p.beta + 2.0 * p.alpha * p.beta * c
        + (i * p.gamma + p.delta * s).powi(2);
    let root = radicand.sqrt();
    let mid = Complex64::from(p.delta * s);
    (mid - root, mid + root)
}

/// Raw eigenvalues at one point, in solver order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSample {
    pub k: f64,
    pub energies: Vec<Complex64>,
}

/// The loop along which bands are followed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplePath {
    /// Real momentum, `t = k`.
    Momentum,
    /// `z = r·e^{it}` in the complex plane.
    Circle { radius: f64 },
}

impl SamplePath {
    pub fn energies(&self, spec: &ModelSpec, t: f64, solver: Solver) -> Result<Vec<Complex64>, Error> {
        let matrix = match *self {
            SamplePath::Momentum => spec.at_momentum(t),
            SamplePath::Circle { radius } => bloch_matrix_z(spec, Complex64::from_polar(radius, t))?,
        };
        linalg::eigenvalues_with(&matrix, solver)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            SamplePath::Momentum => Complex64::from_polar(1.0, t),
            SamplePath::Circle { radius } => Complex64::from_polar(radius, t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackOptions {
    pub initial_samples: usize,
    pub max_samples: usize,
    pub solver: Solver,
    pub execution: Execution,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            initial_samples: DEFAULT_SAMPLES,
            max_samples: MAX_SAMPLES,
            solver: Solver::Closed,
            execution: Execution::default(),
        }
    }
}

impl TrackOptions {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            initial_samples: samples,
            max_samples: MAX_SAMPLES.max(samples),
            ..Self::default()
        }
    }
}

/// Continuous bands over one period, ordered at the base point by
/// ascending real part (ties broken by imaginary part).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandTrajectory {
    pub spec: ModelSpec,
    pub path: SamplePath,
    /// Base point actually used; differs from the request when it had to
    /// be nudged off a real-part tie.
    pub k0: f64,
    /// `K + 1` points from `k0` to `k0 + 2π` inclusive.
    pub grid: Vec<f64>,
    /// `bands[n][j]` is band `n` at `grid[j]`.
    pub bands: Vec<Vec<Complex64>>,
    /// `bands[n]` ends where band `closure.image(n)` started.
    pub closure: Permutation,
    pub solver: Solver,
}

impl BandTrajectory {
    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// Number of intervals `K`.
    pub fn samples(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn energies_at_index(&self, j: usize) -> Vec<Complex64> {
        self.bands.iter().map(|b| b[j]).collect()
    }

    pub fn sample(&self, j: usize) -> BandSample {
        BandSample {
            k: self.grid[j],
            energies: self.energies_at_index(j),
        }
    }

    /// Fresh eigenvalues at path parameter `t` (unordered).
    pub fn evaluate(&self, t: f64) -> Result<Vec<Complex64>, Error> {
        self.path.energies(&self.spec, t, self.solver)
    }

    /// Largest sample-to-sample move of any band.
    pub fn max_jump(&self) -> f64 {
        self.bands
            .iter()
            .flat_map(|b| b.windows(2).map(|w| (w[1] - w[0]).norm()))
            .fold(0.0, f64::max)
    }
}

/// Follows the bands of `spec` over `k ∈ [k0, k0 + 2π]`, starting from
/// `samples` points.
pub fn track_bands(spec: &ModelSpec, k0: f64, samples: usize) -> Result<BandTrajectory, Error> {
    track(spec, SamplePath::Momentum, k0, &TrackOptions::with_samples(samples))
}

/// Follows the eigenvalues of `H(z)` once around `|z| = radius`.
pub fn riemann_loop(spec: &ModelSpec, radius: f64, samples: usize) -> Result<BandTrajectory, Error> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    track(
        spec,
        SamplePath::Circle { radius },
        0.0,
        &TrackOptions::with_samples(samples),
    )
}

fn real_part_tie(values: &[Complex64]) -> bool {
    let scale = 1.0 + values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..values.len()).any(|i| {
        ((i + 1)..values.len()).any(|j| (values[i].re - values[j].re).abs() < tolerance::TIE * scale)
    })
}

fn initial_order(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// General tracker behind [`track_bands`] and [`riemann_loop`].
pub fn track(
    spec: &ModelSpec,
    path: SamplePath,
    t0: f64,
    opts: &TrackOptions,
) -> Result<BandTrajectory, Error> {
    spec.validate()?;
    if opts.initial_samples < MIN_SAMPLES {
        return Err(Error::InvalidSampleCount(opts.initial_samples, MIN_SAMPLES));
    }
    let energies = |t: f64| path.energies(spec, t, opts.solver);

    // Nudge the base point off real-part ties, one initial grid step at a time.
    let nudge = TAU / opts.initial_samples as f64;
    let mut base = t0;
    for _ in 0..8 {
        if !real_part_tie(&energies(base)?) {
            break;
        }
        base += nudge;
    }

    let mut k = opts.initial_samples;
    loop {
        let step = TAU / k as f64;
        let exec = if k >= PARALLEL_SAMPLE_THRESHOLD {
            opts.execution
        } else {
            Execution::Sequential
        };
        let grid: Vec<f64> = (0..=k)
            .map(|j| if j == k { base + TAU } else { base + step * j as f64 })
            .collect();
        let raw = map_indexed(exec, k + 1, |j| energies(grid[j]));
        let mut raw = raw.into_iter().collect::<Result<Vec<_>, _>>()?;

        let mut gaps = Vec::with_capacity(raw.len());
        for (j, values) in raw.iter().enumerate() {
            let gap = linalg::min_gap(values);
            let scale = 1.0 + values.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if gap < tolerance::DEGENERACY * scale {
                return Err(Error::DegeneracyEncountered { at: grid[j], gap });
            }
            gaps.push(gap);
        }

        initial_order(&mut raw[0]);
        let n = raw[0].len();
        let mut bands: Vec<Vec<Complex64>> = (0..n).map(|b| vec![raw[0][b]]).collect();
        let mut current = raw[0].clone();
        let mut worst = 0.0f64;
        for j in 1..=k {
            let a = assign(&current, &raw[j]);
            let mut jump = 0.0f64;
            for (b, &idx) in a.iter().enumerate() {
                let next = raw[j][idx];
                jump = jump.max((next - current[b]).norm());
                current[b] = next;
                bands[b].push(next);
            }
            worst = worst.max(jump / gaps[j - 1].min(gaps[j]));
        }

        if worst < tolerance::MATCH_RATIO {
            let ends: Vec<Complex64> = bands.iter().map(|b| b[k]).collect();
            let starts: Vec<Complex64> = bands.iter().map(|b| b[0]).collect();
            let closure = Permutation::from_images(assign(&ends, &starts))?;
            return Ok(BandTrajectory {
                spec: spec.clone(),
                path,
                k0: base,
                grid,
                bands,
                closure,
                solver: opts.solver,
            });
        }
        if k * 2 > opts.max_samples {
            return Err(Error::RefinementExhausted { samples: k });
        }
        k *= 2;
    }
}
