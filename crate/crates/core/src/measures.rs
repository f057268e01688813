//! Scalar uncertainty quantities of operators and channels.

use serde::Serialize;

use crate::error::{clamp_nonneg, ensure_dim, Result};
use crate::linalg::{anticommutator, commutator, ComplexMatrix};
use crate::quantum::{center_operator, DensityMatrix, KrausChannel};

/// `|V_rho|(K) = Tr(rho K_0^dag K_0) = Tr(rho K^dag K) - |Tr(rho K)|^2`.
pub fn abs_variance(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    let k0 = center_operator(k, rho)?;
    let v = rho.matrix().trace_of_product(&(&k0.adjoint() * &k0)).re;
    clamp_nonneg("abs_variance", v)
}

/// `(|V_rho|(K) + |V_rho|(K^dag)) / 2`.
pub fn sym_abs_variance(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    let fwd = abs_variance(rho, k)?;
    let back = abs_variance(rho, &k.adjoint())?;
    Ok(0.5 * (fwd + back))
}

/// Modified Wigner-Yanase skew information `||[sqrt(rho), K]||_F^2 / 2`.
pub fn mwy_skew_info(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    ensure_dim(rho.dim(), k.dim())?;
    Ok(0.5 * commutator(rho.sqrt(), k)?.frobenius_norm_sqr())
}

/// Anticommutator counterpart `||{sqrt(rho), K}||_F^2 / 2`.
pub fn mwy_anti_info(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    ensure_dim(rho.dim(), k.dim())?;
    Ok(0.5 * anticommutator(rho.sqrt(), k)?.frobenius_norm_sqr())
}

/// `sqrt(|V°|^2 - (|V°| - |I|)^2)` for a single operator.
pub fn operator_u(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    let v = sym_abs_variance(rho, k)?;
    let skew = mwy_skew_info(rho, k)?;
    let c = v - skew;
    Ok((v * v - c * c).max(0.0).sqrt())
}

/// Channel-level quantities for one `(rho, Φ)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSet {
    /// `|V°|(Φ) = Σ_i |V°|(E_i)`
    pub v_sym: f64,
    /// `Ĩ(Φ) = Σ_i |I|(E_i0)`
    pub i_tilde: f64,
    /// `J̃(Φ) = Σ_i |J|(E_i0)`
    pub j_tilde: f64,
    /// `|C|(Φ) = |V°|(Φ) - Ĩ(Φ)`
    pub c_abs: f64,
    /// `|U|(Φ) = sqrt(|V°|^2 - |C|^2)`
    pub u_abs: f64,
}

pub fn channel_measures(rho: &DensityMatrix, phi: &KrausChannel) -> Result<MeasureSet> {
    ensure_dim(rho.dim(), phi.dim())?;
    let mut v_sym = 0.0;
    let mut i_tilde = 0.0;
    let mut j_tilde = 0.0;
    for e in phi.ops() {
        let e0 = center_operator(e, rho)?;
        v_sym += sym_abs_variance(rho, e)?;
        let skew = mwy_skew_info(rho, &e0)?;
        debug_assert!(
            (skew - mwy_skew_info(rho, e)?).abs() <= 1e-12 * skew.max(1.0),
            "centering changed the skew information"
        );
        i_tilde += skew;
        j_tilde += mwy_anti_info(rho, &e0)?;
    }
    let c_abs = v_sym - i_tilde;
    let u_abs = (v_sym * v_sym - c_abs * c_abs).max(0.0).sqrt();
    Ok(MeasureSet {
        v_sym,
        i_tilde,
        j_tilde,
        c_abs,
        u_abs,
    })
}
