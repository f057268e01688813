//! Dense square complex matrices and the Hermitian spectral routines the rest
//! of the crate is built on.
//!
//! Arithmetic operators (`&a * &b`, `&a + &b`, ...) panic on a dimension
//! mismatch, like slice indexing. The named operations below (`frob_inner`,
//! `commutator`, ...) check dimensions and return [`Error::DimensionMismatch`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative Hermiticity tolerance used by [`hermitian_eig`] and [`psd_sqrt`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative tolerance below which negative eigenvalues are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Relative size below which an eigenvalue is treated as exactly zero.
pub const ZERO_EIG_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_TOL: f64 = 1e-14;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense `dim x dim` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix", "dimension must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::invalid(
                "matrix",
                format!("{} entries for dimension {dim}", data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix", "non-finite entry"));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from rows; fails if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix", "rows must form a square array"));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// `|row><col|` in the computational basis.
    pub fn basis_op(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(&[
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
        .unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diag(&[1.0, -1.0])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for k in 0..n {
                acc += self[(r, k)] * other[(k, r)];
            }
        }
        acc
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// `||H - H^dag||_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol * self.frobenius_norm().max(1.0)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

/// Hilbert-Schmidt inner product `Tr(a^dag b)`.
pub fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    ensure_dim(a.dim, b.dim)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_dim(a.dim, b.dim)?;
    Ok(&(a * b) - &(b * a))
}

/// `ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_dim(a.dim, b.dim)?;
    Ok(&(a * b) + &(b * a))
}

/// `([x, y] + [x^dag, y^dag]) / 2`.
pub fn sym_commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let plain = commutator(x, y)?;
    let dagger = commutator(&x.adjoint(), &y.adjoint())?;
    Ok((&plain + &dagger).scale_real(0.5))
}

/// `({x, y} + {x^dag, y^dag}) / 2`.
pub fn sym_anticommutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let plain = anticommutator(x, y)?;
    let dagger = anticommutator(&x.adjoint(), &y.adjoint())?;
    Ok((&plain + &dagger).scale_real(0.5))
}

/// Splits `k = a + i b` into Hermitian parts `a = (k + k^dag)/2`,
/// `b = (k - k^dag)/(2i)`.
pub fn cartesian_decompose(k: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let kd = k.adjoint();
    let a = (k + &kd).scale_real(0.5);
    let b = (k - &kd).scale(Complex64::new(0.0, -0.5));
    (a, b)
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `V diag(f(lambda)) V^dag`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|x| x)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each pivot `(p, q)` is first rotated to a real off-diagonal entry by a
/// diagonal phase, then annihilated with the classical real Jacobi rotation.
/// Sweeps stop once the off-diagonal Frobenius mass is at most
/// `1e-14 * ||H||_F`, with a cap of 100 sweeps.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian { residual });
    }

    // work on the exactly Hermitian part
    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);

    let off_mass = |a: &ComplexMatrix| -> f64 {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += a[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let target = OFF_DIAG_TOL * norm;
    let mut sweeps = 0;
    loop {
        let off = off_mass(&a);
        if off <= target || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| (a[(k, k)].re, phase_normalized(v.column(k))))
        .collect();
    sort_spectrum(&mut pairs, norm);

    let mut vectors = ComplexMatrix::zeros(n);
    for (k, (_, col)) in pairs.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = col[r];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues: pairs.into_iter().map(|(l, _)| l).collect(),
        eigenvectors: vectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let h = a[(p, q)];
    let habs = h.norm();
    if habs == 0.0 {
        return;
    }
    let phase = h / habs; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * habs);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase.conj() * (-s);
    let gqq = phase.conj() * c;

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A <- G^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Scales a vector so its first non-negligible component is real positive.
fn phase_normalized(mut col: Vec<Complex64>) -> Vec<Complex64> {
    if let Some(lead) = col.iter().copied().find(|z| z.norm() > 1e-12) {
        let rot = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
    col
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Ascending eigenvalues; runs of (numerically) equal eigenvalues are ordered
/// lexicographically by their phase-normalized eigenvectors, descending.
fn sort_spectrum(pairs: &mut [(f64, Vec<Complex64>)], norm: f64) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tie = 1e-12 * norm.max(1.0);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lex_cmp(&b.1, &a.1));
        start = end;
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues down to `-1e-10 * max(1, ||h||_F)` are accepted and clamped to
/// zero. Eigenvalues within `1e-14 * max(1, ||h||_F)` of zero are also taken
/// as zero, since rounding noise of order `1e-17` would otherwise become
/// `1e-9` after the root.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let scale = h.frobenius_norm().max(1.0);
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL * scale {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let floor = ZERO_EIG_TOL * scale;
    Ok(eig.map_eigenvalues(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}
