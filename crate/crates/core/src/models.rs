//! Bloch Hamiltonians of the gain-loss dimer and trimer chains, plus
//! user-defined finite Fourier models.
//!
//! Every model is a finite sum `Σ_n A_n φ_n` where `φ_n = e^{ink}` on the
//! Brillouin zone and `φ_n = z^n` on the complex z-plane; the dimer's
//! `2δ sin mk` is carried as `−iδ(φ_m − φ_{−m})` so both evaluations share
//! one code path.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, SquareMatrix};
use crate::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest band count the dense solvers are meant for.
pub const MAX_BANDS: usize = 8;

/// Two-site cell with gain `+iγ` and loss `−iγ`, intra-dimer hopping `α`,
/// and `m`-th neighbour hoppings `β` (off-diagonal) and `δ` (diagonal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimerParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub m: u32,
}

/// Three-site cell: gain/loss `±iγ` on the outer sites, onsite `v` in the
/// middle, intra-cell `α`, `m`-th neighbour `β` and `2m`-th neighbour `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrimerParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub v: f64,
    pub m: u32,
}

/// One term `A_n e^{ink}` of a generic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub harmonic: i32,
    /// Real parts of `A_n`, row-major rows.
    pub re: Vec<Vec<f64>>,
    /// Imaginary parts of `A_n`; omitted means zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub im: Vec<Vec<f64>>,
}

impl FourierTerm {
    pub fn new(harmonic: i32, matrix: &SquareMatrix) -> Self {
        let rows = matrix.rows();
        Self {
            harmonic,
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        }
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        let im = self.im.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0);
        Complex64::new(self.re[i][j], im)
    }

    pub fn matrix(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.re.len(), |i, j| self.entry(i, j))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericModel {
    pub dim: usize,
    pub terms: Vec<FourierTerm>,
}

/// A Bloch Hamiltonian family.
///
/// JSON form: `{"kind": "dimer" | "trimer" | "generic", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ModelSpec {
    Dimer(DimerParams),
    Trimer(TrimerParams),
    Generic(GenericModel),
}

/// Where a matrix was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPoint {
    Momentum(f64),
    Z(Complex64),
}

impl EvalPoint {
    /// `φ_n`: `e^{ink}` or `z^n`.
    #[inline]
    fn harmonic(&self, n: i32) -> Complex64 {
        match *self {
            EvalPoint::Momentum(k) => Complex64::from_polar(1.0, n as f64 * k),
            EvalPoint::Z(z) => z.powi(n),
        }
    }
}

/// `H(k)` or `H(z)` together with its evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMatrix {
    pub matrix: SquareMatrix,
    pub point: EvalPoint,
}

impl std::ops::Deref for BlochMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.matrix
    }
}

fn check_finite(values: &[(&str, f64)]) -> Result<(), Error> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::InvalidModel(format!("{name} must be finite")));
        }
    }
    Ok(())
}

impl DimerParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.m == 0 {
            return Err(Error::InvalidModel("m must be >= 1".into()));
        }
        check_finite(&[
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("gamma", self.gamma),
        ])
    }

    fn fill(&self, point: EvalPoint) -> SquareMatrix {
        let m = self.m as i32;
        let up = point.harmonic(m);
        let down = point.harmonic(-m);
        let mut h = SquareMatrix::zeros(2);
        h.set(0, 0, -I * self.delta * (up - down) + I * self.gamma);
        h.set(0, 1, self.alpha + self.beta * down);
        h.set(1, 0, self.alpha + self.beta * up);
        h.set(1, 1, -I * self.gamma);
        h
    }
}

impl TrimerParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.m == 0 {
            return Err(Error::InvalidModel("m must be >= 1".into()));
        }
        check_finite(&[
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("gamma", self.gamma),
            ("v", self.v),
        ])
    }

    fn fill(&self, point: EvalPoint) -> SquareMatrix {
        let m = self.m as i32;
        let a = Complex64::from(self.alpha);
        let mut h = SquareMatrix::zeros(3);
        // −2δ sin 2mk = iδ(φ_{2m} − φ_{−2m})
        h.set(
            0,
            0,
            I * self.delta * (point.harmonic(2 * m) - point.harmonic(-2 * m)) + I * self.gamma,
        );
        h.set(0, 1, a);
        h.set(0, 2, self.beta * point.harmonic(-m));
        h.set(1, 0, a);
        h.set(1, 1, self.v.into());
        h.set(1, 2, a);
        h.set(2, 0, self.beta * point.harmonic(m));
        h.set(2, 1, a);
        h.set(2, 2, -I * self.gamma);
        h
    }
}

impl GenericModel {
    pub fn validate(&self) -> Result<(), Error> {
        if self.dim < 2 || self.dim > MAX_BANDS {
            return Err(Error::InvalidModel(format!(
                "generic models need 2..={MAX_BANDS} bands, got {}",
                self.dim
            )));
        }
        for term in &self.terms {
            let square = |rows: &Vec<Vec<f64>>| {
                rows.len() == self.dim && rows.iter().all(|r| r.len() == self.dim)
            };
            if !square(&term.re) || !(term.im.is_empty() || square(&term.im)) {
                return Err(Error::InvalidModel(format!(
                    "term with harmonic {} is not {}x{}",
                    term.harmonic, self.dim, self.dim
                )));
            }
            if term.re.iter().chain(&term.im).flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel("non-finite Fourier coefficient".into()));
            }
        }
        Ok(())
    }

    fn fill(&self, point: EvalPoint) -> SquareMatrix {
        let mut h = SquareMatrix::zeros(self.dim);
        for term in &self.terms {
            let phase = point.harmonic(term.harmonic);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let v = h.get(i, j) + term.entry(i, j) * phase;
                    h.set(i, j, v);
                }
            }
        }
        h
    }
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::Dimer(_) => 2,
            ModelSpec::Trimer(_) => 3,
            ModelSpec::Generic(g) => g.dim,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            ModelSpec::Dimer(p) => p.validate(),
            ModelSpec::Trimer(p) => p.validate(),
            ModelSpec::Generic(g) => g.validate(),
        }
    }

    /// The model as explicit Fourier terms `A_n e^{ink}`.
    pub fn fourier_terms(&self) -> Vec<FourierTerm> {
        match self {
            ModelSpec::Generic(g) => g.terms.clone(),
            _ => {
                // Recover A_n by projecting on the harmonics present.
                let n_max = 2 * self.max_harmonic();
                let samples = 2 * n_max as usize + 1;
                (-n_max..=n_max)
                    .filter_map(|n| {
                        let dim = self.dim();
                        let mut acc = SquareMatrix::zeros(dim);
                        for s in 0..samples {
                            let k = 2.0 * std::f64::consts::PI * s as f64 / samples as f64;
                            let h = self.fill(EvalPoint::Momentum(k));
                            let w = Complex64::from_polar(1.0 / samples as f64, -(n as f64) * k);
                            for i in 0..dim {
                                for j in 0..dim {
                                    acc.set(i, j, acc.get(i, j) + h.get(i, j) * w);
                                }
                            }
                        }
                        let cleaned = SquareMatrix::from_fn(dim, |i, j| {
                            let z = acc.get(i, j);
                            Complex64::new(snap(z.re), snap(z.im))
                        });
                        (cleaned.max_abs() > 0.0).then(|| FourierTerm::new(n, &cleaned))
                    })
                    .collect()
            }
        }
    }

    /// Largest `|n|` among the harmonics of the model.
    pub fn max_harmonic(&self) -> i32 {
        match self {
            ModelSpec::Dimer(p) => p.m as i32,
            ModelSpec::Trimer(p) => 2 * p.m as i32,
            ModelSpec::Generic(g) => g.terms.iter().map(|t| t.harmonic.abs()).max().unwrap_or(0),
        }
    }

    fn has_negative_harmonics(&self) -> bool {
        match self {
            ModelSpec::Generic(g) => g.terms.iter().any(|t| t.harmonic < 0),
            _ => true,
        }
    }

    fn fill(&self, point: EvalPoint) -> SquareMatrix {
        match self {
            ModelSpec::Dimer(p) => p.fill(point),
            ModelSpec::Trimer(p) => p.fill(point),
            ModelSpec::Generic(g) => g.fill(point),
        }
    }

    /// `H(k)` on the Brillouin zone.
    pub fn at_momentum(&self, k: f64) -> BlochMatrix {
        let point = EvalPoint::Momentum(k);
        BlochMatrix {
            matrix: self.fill(point),
            point,
        }
    }

    /// Eigenvalues at real momentum `k` (closed forms for two and three bands).
    pub fn energies_at(&self, k: f64) -> Vec<Complex64> {
        linalg::eigenvalues(&self.fill(EvalPoint::Momentum(k)))
    }

    /// Names accepted by [`ModelSpec::with_param`].
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            ModelSpec::Dimer(_) => &["alpha", "beta", "delta", "gamma", "m"],
            ModelSpec::Trimer(_) => &["alpha", "beta", "delta", "gamma", "v", "m"],
            ModelSpec::Generic(_) => &[],
        }
    }

    pub fn param(&self, name: &str) -> Result<f64, Error> {
        let unknown = || Error::UnknownParameter(name.to_string());
        match self {
            ModelSpec::Dimer(p) => match name {
                "alpha" => Ok(p.alpha),
                "beta" => Ok(p.beta),
                "delta" => Ok(p.delta),
                "gamma" => Ok(p.gamma),
                "m" => Ok(p.m as f64),
                _ => Err(unknown()),
            },
            ModelSpec::Trimer(p) => match name {
                "alpha" => Ok(p.alpha),
                "beta" => Ok(p.beta),
                "delta" => Ok(p.delta),
                "gamma" => Ok(p.gamma),
                "v" => Ok(p.v),
                "m" => Ok(p.m as f64),
                _ => Err(unknown()),
            },
            ModelSpec::Generic(_) => Err(unknown()),
        }
    }

    /// Copy of the model with one named parameter replaced. `m` is rounded
    /// to the nearest integer.
    pub fn with_param(&self, name: &str, value: f64) -> Result<ModelSpec, Error> {
        let mut out = self.clone();
        let unknown = || Error::UnknownParameter(name.to_string());
        let order = || {
            if value.is_finite() && value.round() >= 1.0 {
                Ok(value.round() as u32)
            } else {
                Err(Error::InvalidModel("m must be >= 1".into()))
            }
        };
        match &mut out {
            ModelSpec::Dimer(p) => match name {
                "alpha" => p.alpha = value,
                "beta" => p.beta = value,
                "delta" => p.delta = value,
                "gamma" => p.gamma = value,
                "m" => p.m = order()?,
                _ => return Err(unknown()),
            },
            ModelSpec::Trimer(p) => match name {
                "alpha" => p.alpha = value,
                "beta" => p.beta = value,
                "delta" => p.delta = value,
                "gamma" => p.gamma = value,
                "v" => p.v = value,
                "m" => p.m = order()?,
                _ => return Err(unknown()),
            },
            ModelSpec::Generic(_) => return Err(unknown()),
        }
        Ok(out)
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

pub fn dimer_hamiltonian(p: &DimerParams, k: f64) -> BlochMatrix {
    let point = EvalPoint::Momentum(k);
    BlochMatrix {
        matrix: p.fill(point),
        point,
    }
}

pub fn trimer_hamiltonian(p: &TrimerParams, k: f64) -> BlochMatrix {
    let point = EvalPoint::Momentum(k);
    BlochMatrix {
        matrix: p.fill(point),
        point,
    }
}

/// `H(z)`: every `e^{ink}` replaced by `z^n`.
pub fn bloch_matrix_z(spec: &ModelSpec, z: Complex64) -> Result<BlochMatrix, Error> {
    if z == Complex64::new(0.0, 0.0) && spec.has_negative_harmonics() {
        return Err(Error::ZeroModulus);
    }
    let point = EvalPoint::Z(z);
    Ok(BlochMatrix {
        matrix: spec.fill(point),
        point,
    })
}

/// Coefficients of `det(E·I − M)`, highest power first.
pub fn characteristic_coefficients(m: &BlochMatrix) -> Vec<Complex64> {
    linalg::characteristic_coefficients(&m.matrix)
}
