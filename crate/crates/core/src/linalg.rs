//! Small dense complex matrices and the polynomial machinery behind the
//! band solvers.
//!
//! Two- and three-band spectra go through closed forms (quadratic formula,
//! Cardano with a Newton polish). Anything larger, and the independent
//! cross-check used by the tests, goes through a complex Schur
//! decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    /// Builds a matrix from rows. Every row must have as many entries as
    /// there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, Error> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::NotSquare);
        }
        Ok(Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// `self - shift * I`
    pub fn shifted(&self, shift: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            let d = m.get(i, i);
            m.set(i, i, d - shift);
        }
        m
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        match self.dim {
            0 => ONE,
            1 => self.entries[0],
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            3 => {
                let m = |i, j| self.get(i, j);
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => self.to_dmatrix().determinant(),
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).map(|l| self.get(i, l) * other.get(l, j)).sum()
        })
    }
}

/// Coefficients of `det(E·I − M)`, highest power first: `[1, c_{N−1}, …, c_0]`.
pub fn characteristic_coefficients(m: &SquareMatrix) -> Vec<Complex64> {
    let n = m.dim();
    match n {
        1 => vec![ONE, -m.get(0, 0)],
        2 => vec![ONE, -m.trace(), m.determinant()],
        3 => {
            let g = |i, j| m.get(i, j);
            let minors = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) + g(0, 0) * g(2, 2)
                - g(0, 2) * g(2, 0)
                + g(1, 1) * g(2, 2)
                - g(1, 2) * g(2, 1);
            vec![ONE, -m.trace(), minors, -m.determinant()]
        }
        _ => faddeev_leverrier(m),
    }
}

fn faddeev_leverrier(a: &SquareMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let mut coeffs = vec![ONE];
    let mut aux = SquareMatrix::zeros(n);
    for k in 1..=n {
        // aux_k = A·aux_{k−1} + c_{n−k+1}·I
        let mut next = a.mul(&aux);
        let c_prev = *coeffs.last().unwrap();
        for i in 0..n {
            let d = next.get(i, i);
            next.set(i, i, d + c_prev);
        }
        let c = -a.mul(&next).trace() / k as f64;
        coeffs.push(c);
        aux = next;
    }
    coeffs
}

/// Evaluates a polynomial given highest power first.
pub fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().fold(ZERO, |acc, &c| acc * x + c)
}

fn poly_eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of `E² + b·E + c`.
pub fn solve_quadratic(b: Complex64, c: Complex64) -> [Complex64; 2] {
    let s = (b * b - 4.0 * c).sqrt();
    // pick the sign that avoids cancellation in b ± s
    let q = if (b.conj() * s).re >= 0.0 {
        -0.5 * (b + s)
    } else {
        -0.5 * (b - s)
    };
    if q == ZERO {
        let r = -0.5 * b;
        [r, r]
    } else {
        [q, c / q]
    }
}

/// Roots of the monic cubic `E³ + c[0]·E² + c[1]·E + c[2]`, with multiplicity.
///
/// Cardano on the depressed cubic followed by one Newton step per root,
/// kept only when it lowers the residual.
pub fn solve_cubic(c: [Complex64; 3]) -> [Complex64; 3] {
    let [c2, c1, c0] = c;
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;

    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let plus = -q / 2.0 + s;
    let minus = -q / 2.0 - s;
    let u3 = if plus.norm() >= minus.norm() { plus } else { minus };

    let mut roots = if u3.norm() == 0.0 {
        [-shift; 3]
    } else {
        let u = u3.cbrt();
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut out = [ZERO; 3];
        let mut uk = u;
        for r in out.iter_mut() {
            *r = uk - p / (3.0 * uk) - shift;
            uk *= omega;
        }
        out
    };

    let poly = [ONE, c2, c1, c0];
    for r in roots.iter_mut() {
        let (f, df) = poly_eval_with_derivative(&poly, *r);
        if df.norm() > f64::EPSILON * (1.0 + r.norm()) {
            let candidate = *r - f / df;
            if poly_eval(&poly, candidate).norm() < f.norm() {
                *r = candidate;
            }
        }
    }
    roots
}

/// Roots of a polynomial (highest power first) via the eigenvalues of its
/// companion matrix. The leading coefficient must be non-zero.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let lead = *coeffs.first().ok_or(Error::NotSquare)?;
    if lead == ZERO {
        return Err(Error::EigenSolveFailed);
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let companion = SquareMatrix::from_fn(n, |i, j| {
        if i == 0 {
            -coeffs[j + 1] / lead
        } else if i == j + 1 {
            ONE
        } else {
            ZERO
        }
    });
    general_eigenvalues(&companion)
}

/// Which algorithm produces eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Quadratic/cubic closed forms for two and three bands, Schur otherwise.
    #[default]
    Closed,
    /// Complex Schur decomposition for every size.
    General,
}

pub fn eigenvalues(m: &SquareMatrix) -> Vec<Complex64> {
    eigenvalues_with(m, Solver::Closed).expect("closed-form eigenvalues cannot fail")
}

pub fn eigenvalues_with(m: &SquareMatrix, solver: Solver) -> Result<Vec<Complex64>, Error> {
    match (solver, m.dim()) {
        (_, 1) => Ok(vec![m.get(0, 0)]),
        (Solver::Closed, 2) => {
            let half_tr = 0.5 * m.trace();
            let half_diff = 0.5 * (m.get(0, 0) - m.get(1, 1));
            let r = (half_diff * half_diff + m.get(0, 1) * m.get(1, 0)).sqrt();
            Ok(vec![half_tr - r, half_tr + r])
        }
        (Solver::Closed, 3) => {
            let c = characteristic_coefficients(m);
            Ok(solve_cubic([c[1], c[2], c[3]]).to_vec())
        }
        _ => general_eigenvalues(m),
    }
}

fn general_eigenvalues(m: &SquareMatrix) -> Result<Vec<Complex64>, Error> {
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(vec![ZERO; m.dim()]);
    }
    m.to_dmatrix()
        .try_schur(f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .ok_or(Error::EigenSolveFailed)
}

/// Smallest pairwise distance in a set of eigenvalues.
pub fn min_gap(values: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}
