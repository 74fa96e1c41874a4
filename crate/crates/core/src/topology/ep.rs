//! Exceptional points: analytic dimer formulas and numerical discriminant
//! searches in momentum and on the complex z-plane.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, SquareMatrix};
use crate::models::{bloch_matrix_z, DimerParams, ModelSpec};
use crate::{tolerance, Error};

/// Samples per Brillouin zone in the initial discriminant scan.
pub const EP_SCAN_SAMPLES: usize = 4096;

/// Discriminant of a monic quadratic `[1, b, c]` or cubic `[1, b, c, d]`
/// (highest power first). A non-unit leading coefficient is divided out.
pub fn discriminant(coeffs: &[Complex64]) -> Result<Complex64, Error> {
    let degree = coeffs.len().saturating_sub(1);
    if !(2..=3).contains(&degree) || coeffs[0] == Complex64::new(0.0, 0.0) {
        return Err(Error::UnsupportedDegree(degree));
    }
    let lead = coeffs[0];
    let b = coeffs[1] / lead;
    let c = coeffs[2] / lead;
    if degree == 2 {
        return Ok(b * b - 4.0 * c);
    }
    let d = coeffs[3] / lead;
    Ok(18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d)
}

/// `|disc|` scaled by `(1 + N·max|H_ij|)^{N(N−1)}`, so the threshold does
/// not depend on the overall energy scale.
pub fn normalized_discriminant(m: &SquareMatrix) -> Result<f64, Error> {
    let n = m.dim();
    let disc = discriminant(&linalg::characteristic_coefficients(m))?;
    let scale = 1.0 + n as f64 * m.max_abs();
    Ok(disc.norm() / scale.powi((n * (n - 1)) as i32))
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Where an exceptional point sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EpLocation {
    Momentum { k: f64 },
    Z { z: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalPoint {
    pub location: EpLocation,
    pub energy: Complex64,
    /// 1-based labels of the coalescing pair, counting eigenvalues sorted
    /// by real then imaginary part.
    pub bands: [usize; 2],
    /// Normalized discriminant at the location.
    pub discriminant: f64,
    pub params: ModelSpec,
}

impl ExceptionalPoint {
    fn at(spec: &ModelSpec, location: EpLocation, matrix: &SquareMatrix) -> Result<Self, Error> {
        let mut values = linalg::eigenvalues(matrix);
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut pair = (0, 1);
        let mut best = f64::INFINITY;
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                let gap = (values[i] - values[j]).norm();
                if gap < best {
                    best = gap;
                    pair = (i, j);
                }
            }
        }
        Ok(Self {
            location,
            energy: 0.5 * (values[pair.0] + values[pair.1]),
            bands: [pair.0 + 1, pair.1 + 1],
            discriminant: normalized_discriminant(matrix)?,
            params: spec.clone(),
        })
    }

    /// EP of `spec` at real momentum `k`, without checking the discriminant.
    pub fn at_momentum(spec: &ModelSpec, k: f64) -> Result<Self, Error> {
        let k = k.rem_euclid(TAU);
        Self::at(spec, EpLocation::Momentum { k }, &spec.at_momentum(k))
    }

    pub fn at_z(spec: &ModelSpec, z: Complex64) -> Result<Self, Error> {
        Self::at(spec, EpLocation::Z { z }, &bloch_matrix_z(spec, z)?.matrix)
    }
}

/// One analytic EP line of the dimer: the band touching at momentum `k`
/// when the gain/loss equals `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpLine {
    pub gamma: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerEpLines {
    pub lines: [EpLine; 4],
    /// Set when `αβ = 0`: the lines at `k = 0` and `k = π/m` coincide.
    pub degenerate: bool,
}

/// `γ = ±(β − α)` at `k = π/m` and `γ = ±(β + α)` at `k = 0`, where both
/// dimer bands vanish.
pub fn dimer_ep_lines(alpha: f64, beta: f64, m: u32) -> DimerEpLines {
    let k_pi = PI / m.max(1) as f64;
    let (d, s) = (beta - alpha, beta + alpha);
    DimerEpLines {
        lines: [
            EpLine { gamma: d, k: k_pi },
            EpLine { gamma: -d, k: k_pi },
            EpLine { gamma: s, k: 0.0 },
            EpLine { gamma: -s, k: 0.0 },
        ],
        degenerate: alpha * beta == 0.0,
    }
}

/// `z_j = ρ^{1/m} e^{i(2j−1)π/m}` with `ρ = (α² + β² − γ²)/(2αβ)`, for
/// `j = 1..m`. The root of a negative `ρ` is the principal one.
///
/// These zero the dimer's square root once `cos mk` is replaced by
/// `Re z^m`. They are generally not zeros of the discriminant of `H(z)`
/// itself; [`find_eps_z`] locates those.
pub fn dimer_ep_zplane(p: &DimerParams) -> Result<Vec<Complex64>, Error> {
    if p.alpha == 0.0 || p.beta == 0.0 {
        return Err(Error::DegenerateModel);
    }
    p.validate()?;
    let m = p.m as f64;
    let rho = (p.alpha * p.alpha + p.beta * p.beta - p.gamma * p.gamma) / (2.0 * p.alpha * p.beta);
    let radius = Complex64::from(rho).powf(1.0 / m);
    Ok((1..=p.m)
        .map(|j| radius * Complex64::from_polar(1.0, (2 * j - 1) as f64 * PI / m))
        .collect())
}

fn check_degree(spec: &ModelSpec) -> Result<(), Error> {
    spec.validate()?;
    match spec.dim() {
        2 | 3 => Ok(()),
        n => Err(Error::UnsupportedDegree(n)),
    }
}

fn momentum_profile(spec: &ModelSpec, samples: usize) -> Result<Vec<f64>, Error> {
    let step = TAU / samples as f64;
    (0..samples)
        .map(|j| normalized_discriminant(&spec.at_momentum(step * j as f64)))
        .collect()
}

/// Local minima of a periodic profile, refined by golden section.
fn refined_minima(spec: &ModelSpec, profile: &[f64]) -> Vec<(f64, f64)> {
    let n = profile.len();
    let step = TAU / n as f64;
    let f = |k: f64| normalized_discriminant(&spec.at_momentum(k)).unwrap_or(f64::INFINITY);
    (0..n)
        .filter(|&j| {
            let (prev, here, next) = (profile[(j + n - 1) % n], profile[j], profile[(j + 1) % n]);
            here <= prev && here < next
        })
        .map(|j| {
            let k = step * j as f64;
            let (k, value) = golden_min(f, k - step, k + step, 1e-15);
            (k.rem_euclid(TAU), value)
        })
        .collect()
}

/// Smallest normalized discriminant over the Brillouin zone and where it
/// is attained.
pub fn min_discriminant(spec: &ModelSpec) -> Result<(f64, f64), Error> {
    check_degree(spec)?;
    let profile = momentum_profile(spec, 512)?;
    Ok(refined_minima(spec, &profile)
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0.0, profile[0])))
}

/// EPs on the real Brillouin zone: local minima of `|disc|` over a fine
/// grid, refined and kept when below [`tolerance::EP_DISCRIMINANT`].
pub fn find_eps_k(spec: &ModelSpec) -> Result<Vec<ExceptionalPoint>, Error> {
    check_degree(spec)?;
    let profile = momentum_profile(spec, EP_SCAN_SAMPLES)?;
    let mut found: Vec<ExceptionalPoint> = Vec::new();
    for (k, value) in refined_minima(spec, &profile) {
        if value >= tolerance::EP_DISCRIMINANT {
            continue;
        }
        let duplicate = found.iter().any(|ep| match ep.location {
            EpLocation::Momentum { k: other } => {
                let d = (k - other).abs();
                d.min(TAU - d) < 1e-6
            }
            EpLocation::Z { .. } => false,
        });
        if !duplicate {
            found.push(ExceptionalPoint::at_momentum(spec, k)?);
        }
    }
    Ok(found)
}

/// Laurent coefficients `d_n` of `disc(z) = Σ d_n z^n` for `|n| ≤ degree`,
/// read off by a discrete Fourier transform on the unit circle.
fn discriminant_laurent(spec: &ModelSpec, degree: usize) -> Result<Vec<Complex64>, Error> {
    let samples = 4 * degree + 4;
    let values: Vec<Complex64> = (0..samples)
        .map(|j| {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / samples as f64);
            let m = bloch_matrix_z(spec, z)?;
            discriminant(&linalg::characteristic_coefficients(&m))
        })
        .collect::<Result<_, _>>()?;
    Ok((0..=2 * degree)
        .map(|idx| {
            let n = idx as f64 - degree as f64;
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -TAU * n * j as f64 / samples as f64))
                .sum::<Complex64>()
                / samples as f64
        })
        .collect())
}

/// All EPs of `H(z)` in the punctured plane: zeros of the discriminant,
/// which is a Laurent polynomial in `z`. Sorted by `|z|`.
pub fn find_eps_z(spec: &ModelSpec) -> Result<Vec<ExceptionalPoint>, Error> {
    check_degree(spec)?;
    let n = spec.dim();
    let degree = n * (n - 1) * spec.max_harmonic().unsigned_abs() as usize;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let laurent = discriminant_laurent(spec, degree)?;
    let largest = laurent.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let significant = |c: &Complex64| c.norm() > 1e-12 * largest;
    let (Some(lo), Some(hi)) = (
        laurent.iter().position(significant),
        laurent.iter().rposition(significant),
    ) else {
        return Ok(Vec::new());
    };
    // z^{-lo'} disc(z) as an ordinary polynomial, highest power first.
    let poly: Vec<Complex64> = laurent[lo..=hi].iter().rev().copied().collect();
    let derivative: Vec<Complex64> = poly[..poly.len() - 1]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (poly.len() - 1 - i) as f64)
        .collect();
    let mut eps = Vec::new();
    for mut z in linalg::poly_roots(&poly)? {
        for _ in 0..3 {
            let slope = linalg::poly_eval(&derivative, z);
            if slope.norm() == 0.0 {
                break;
            }
            let next = z - linalg::poly_eval(&poly, z) / slope;
            if !next.is_finite() {
                break;
            }
            z = next;
        }
        if z.norm() > 0.0 {
            eps.push(ExceptionalPoint::at_z(spec, z)?);
        }
    }
    eps.sort_by(|a, b| match (a.location, b.location) {
        (EpLocation::Z { z: x }, EpLocation::Z { z: y }) => x.norm().total_cmp(&y.norm()),
        _ => std::cmp::Ordering::Equal,
    });
    Ok(eps)
}
