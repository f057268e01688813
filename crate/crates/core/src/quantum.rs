//! Validated states and Kraus channels.

use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix};

pub const DEFAULT_STATE_TOL: f64 = 1e-10;
pub const DEFAULT_CPTP_TOL: f64 = 1e-8;

/// A quantum state: Hermitian, positive semidefinite, unit trace.
///
/// The principal square root is computed once at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    sqrt_matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        make_density(matrix, DEFAULT_STATE_TOL)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("I/d is a valid state")
    }

    /// `|psi><psi|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() || norm_sqr == 0.0 {
            return Err(Error::invalid("state vector", "must be nonzero"));
        }
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = psi[r] * psi[c].conj() / norm_sqr;
            }
        }
        Self::new(m)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn sqrt(&self) -> &ComplexMatrix {
        &self.sqrt_matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `Tr(rho K)`.
    pub fn expectation(&self, k: &ComplexMatrix) -> Result<Complex64> {
        ensure_dim(self.dim(), k.dim())?;
        Ok(self.matrix.trace_of_product(k))
    }
}

/// Validates `m` as a density matrix and caches its square root.
pub fn make_density(m: ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let scale = m.frobenius_norm().max(1.0);
    let residual = m.hermiticity_residual();
    if residual > tol * scale {
        return Err(Error::NotHermitian { residual });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let sqrt_matrix = psd_sqrt(&m)?;
    Ok(DensityMatrix {
        matrix: m,
        sqrt_matrix,
        tolerance: tol,
    })
}

/// A completely positive trace-preserving map given by an ordered Kraus list.
///
/// Zero operators are kept as supplied.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    dim: usize,
    tolerance: f64,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        make_channel(ops, DEFAULT_CPTP_TOL)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is CPTP")
    }

    #[inline]
    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.kraus_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus_ops.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `||sum_i E_i^dag E_i - I||_F`.
    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.kraus_ops)
    }
}

fn completeness_residual(ops: &[ComplexMatrix]) -> f64 {
    let dim = ops[0].dim();
    let sum = ops.iter().fold(ComplexMatrix::zeros(dim), |acc, e| {
        &acc + &(&e.adjoint() * e)
    });
    (&sum - &ComplexMatrix::identity(dim)).frobenius_norm()
}

pub fn make_channel(ops: Vec<ComplexMatrix>, tol: f64) -> Result<KrausChannel> {
    let dim = match ops.first() {
        Some(e) => e.dim(),
        None => return Err(Error::invalid("channel", "empty Kraus list")),
    };
    for e in &ops {
        ensure_dim(dim, e.dim())?;
    }
    let residual = completeness_residual(&ops);
    if residual > tol {
        return Err(Error::NotComplete { residual });
    }
    Ok(KrausChannel {
        kraus_ops: ops,
        dim,
        tolerance: tol,
    })
}

/// `Φ(rho) = sum_i E_i rho E_i^dag`, validated with the input state's tolerance.
pub fn apply_channel(phi: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ensure_dim(phi.dim(), rho.dim())?;
    let out = phi
        .ops()
        .iter()
        .fold(ComplexMatrix::zeros(rho.dim()), |acc, e| {
            &acc + &(&(e * rho.matrix()) * &e.adjoint())
        });
    make_density(out, rho.tolerance())
}

/// `K_0 = K - Tr(rho K) I`.
pub fn center_operator(k: &ComplexMatrix, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let mean = rho.expectation(k)?;
    let mut out = k.clone();
    for d in 0..k.dim() {
        out[(d, d)] -= mean;
    }
    Ok(out)
}

/// Two Kraus lists extended with zero operators to a common length.
#[derive(Debug, Clone)]
pub struct PaddedPair {
    pub phi: Vec<ComplexMatrix>,
    pub psi: Vec<ComplexMatrix>,
    pub n_common: usize,
}

pub fn pad_channels(phi: &KrausChannel, psi: &KrausChannel) -> Result<PaddedPair> {
    ensure_dim(phi.dim(), psi.dim())?;
    let n = phi.len().max(psi.len());
    let pad = |ch: &KrausChannel| {
        let mut ops = ch.ops().to_vec();
        ops.resize(n, ComplexMatrix::zeros(ch.dim()));
        ops
    };
    Ok(PaddedPair {
        phi: pad(phi),
        psi: pad(psi),
        n_common: n,
    })
}
