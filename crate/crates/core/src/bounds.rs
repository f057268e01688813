//! Lower bounds for products and sums of uncertainties.
//!
//! Three families live here:
//!
//! * observable relations for Hermitian `A, B` (Robertson/Heisenberg,
//!   Schrödinger, and the skew-information refinement by Luo),
//! * their extensions to arbitrary operators `K, L` built on the symmetrized
//!   variance and symmetrized brackets,
//! * channel relations for a pair of Kraus lists `{E_i}`, `{F_j}`: two bounds
//!   on `|V°|(Φ)|V°|(Ψ)` (`thm1`, `thm2`), two on `|U|(Φ)|U|(Ψ)` (`lb_eq13`,
//!   `thm3`) and two on `|U|²(Φ) + |U|²(Ψ)` (`lb1_eq14`, `thm4`).
//!
//! Bounds that pair Kraus indices across channels or carry a `1/(4N²)`
//! prefactor use lists zero-padded to a common length `N`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{clamp_nonneg, ensure_dim, Error, Result};
use crate::linalg::{
    anticommutator, commutator, frob_inner, sym_anticommutator, sym_commutator, ComplexMatrix,
    HERMITIAN_TOL,
};
use crate::measures::{abs_variance, channel_measures, operator_u, sym_abs_variance};
use crate::quantum::{center_operator, pad_channels, DensityMatrix, KrausChannel};

/// Slack below which a bound counts as violated.
pub const VIOLATION_TOL: f64 = 1e-9;

fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    if m.is_hermitian(HERMITIAN_TOL) {
        Ok(())
    } else {
        Err(Error::NotHermitian {
            residual: m.hermiticity_residual(),
        })
    }
}

fn check_observables(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    ensure_dim(rho.dim(), a.dim())?;
    ensure_dim(rho.dim(), b.dim())?;
    ensure_hermitian(a)?;
    ensure_hermitian(b)
}

/// `|Tr(rho [A, B])|^2 / 4`.
pub fn heisenberg_bound(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_observables(rho, a, b)?;
    Ok(0.25 * rho.expectation(&commutator(a, b)?)?.norm_sqr())
}

/// Heisenberg term plus `|Tr(rho {A_0, B_0})|^2 / 4`.
pub fn schrodinger_bound(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let heis = heisenberg_bound(rho, a, b)?;
    let a0 = center_operator(a, rho)?;
    let b0 = center_operator(b, rho)?;
    let anti = rho.expectation(&anticommutator(&a0, &b0)?)?;
    Ok(heis + 0.25 * anti.norm_sqr())
}

/// Both sides of `U(A) U(B) >= |Tr(rho [A, B])|^2 / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LuoPair {
    pub lhs: f64,
    pub rhs: f64,
}

/// Wigner-Yanase skew information `-Tr([sqrt(rho), A]^2) / 2` of a Hermitian `A`.
pub fn wy_skew_info(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    ensure_dim(rho.dim(), a.dim())?;
    ensure_hermitian(a)?;
    let c = commutator(rho.sqrt(), a)?;
    clamp_nonneg("wy_skew_info", -0.5 * c.trace_of_product(&c).re)
}

/// `U(A) = sqrt(V^2 - (V - I)^2)` for a Hermitian `A`.
pub fn luo_u(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    let v = abs_variance(rho, a)?;
    let skew = wy_skew_info(rho, a)?;
    let c = v - skew;
    Ok((v * v - c * c).max(0.0).sqrt())
}

pub fn luo_bound(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<LuoPair> {
    let rhs = heisenberg_bound(rho, a, b)?;
    Ok(LuoPair {
        lhs: luo_u(rho, a)? * luo_u(rho, b)?,
        rhs,
    })
}

/// Left- and right-hand sides of the three observable relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableRelations {
    /// `V(A) V(B)`
    pub variance_product: f64,
    pub heisenberg: f64,
    pub schrodinger: f64,
    /// `U(A) U(B)`
    pub luo_product: f64,
    pub luo: f64,
}

impl ObservableRelations {
    pub fn evaluate(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let luo = luo_bound(rho, a, b)?;
        Ok(Self {
            variance_product: abs_variance(rho, a)? * abs_variance(rho, b)?,
            heisenberg: heisenberg_bound(rho, a, b)?,
            schrodinger: schrodinger_bound(rho, a, b)?,
            luo_product: luo.lhs,
            luo: luo.rhs,
        })
    }

    /// `(name, lhs - bound)` for each relation.
    pub fn slacks(&self) -> [(&'static str, f64); 3] {
        [
            ("heisenberg", self.variance_product - self.heisenberg),
            ("schrodinger", self.variance_product - self.schrodinger),
            ("luo", self.luo_product - self.luo),
        ]
    }
}

/// Operator-level relations for arbitrary (non-Hermitian) `K, L`.
///
/// `eq10` evaluates the symmetrized anticommutator on centered operators.
/// The uncentered variant is kept in `eq10_uncentered` for comparison only:
/// it is not a valid bound (take `rho = I/2`, `K = L = I`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorRelations {
    /// `|V°|(K) |V°|(L)`
    pub lhs_v: f64,
    /// `|U|(K) |U|(L)`
    pub lhs_u: f64,
    /// `|Tr(rho [K, L])|^2 / 4`
    pub eq9: f64,
    /// `(|Tr(rho [K, L]°)|^2 + |Tr(rho {K_0, L_0}°)|^2) / 4`
    pub eq10: f64,
    pub eq10_uncentered: f64,
    /// `|Tr(rho [K, L]°)|^2 / 4`, compared against `lhs_u`
    pub eq11: f64,
}

impl OperatorRelations {
    pub fn slacks(&self) -> [(&'static str, f64); 3] {
        [
            ("eq9", self.lhs_v - self.eq9),
            ("eq10", self.lhs_v - self.eq10),
            ("eq11", self.lhs_u - self.eq11),
        ]
    }
}

pub fn dou_bounds(
    rho: &DensityMatrix,
    k: &ComplexMatrix,
    l: &ComplexMatrix,
) -> Result<OperatorRelations> {
    ensure_dim(rho.dim(), k.dim())?;
    ensure_dim(rho.dim(), l.dim())?;
    let eq9 = 0.25 * rho.expectation(&commutator(k, l)?)?.norm_sqr();
    let sym_comm = 0.25 * rho.expectation(&sym_commutator(k, l)?)?.norm_sqr();
    let k0 = center_operator(k, rho)?;
    let l0 = center_operator(l, rho)?;
    let anti_centered = 0.25 * rho.expectation(&sym_anticommutator(&k0, &l0)?)?.norm_sqr();
    let anti_raw = 0.25 * rho.expectation(&sym_anticommutator(k, l)?)?.norm_sqr();
    Ok(OperatorRelations {
        lhs_v: sym_abs_variance(rho, k)? * sym_abs_variance(rho, l)?,
        lhs_u: operator_u(rho, k)? * operator_u(rho, l)?,
        eq9,
        eq10: sym_comm + anti_centered,
        eq10_uncentered: sym_comm + anti_raw,
        eq11: sym_comm,
    })
}

fn centered_all(ops: &[ComplexMatrix], rho: &DensityMatrix) -> Result<Vec<ComplexMatrix>> {
    ops.iter().map(|e| center_operator(e, rho)).collect()
}

fn check_triple(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<()> {
    ensure_dim(rho.dim(), phi.dim())?;
    ensure_dim(rho.dim(), psi.dim())
}

/// `max(|Σ Tr(rho [E_i, F_j])|^2, |Σ Tr(rho {E_i0, F_j0})|^2) / (4N^2)`.
pub fn thm1_bound(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<f64> {
    check_triple(rho, phi, psi)?;
    let pair = pad_channels(phi, psi)?;
    let e0 = centered_all(&pair.phi, rho)?;
    let f0 = centered_all(&pair.psi, rho)?;
    let mut comm = Complex64::new(0.0, 0.0);
    let mut anti = Complex64::new(0.0, 0.0);
    for (e, ec) in pair.phi.iter().zip(&e0) {
        for (f, fc) in pair.psi.iter().zip(&f0) {
            comm += rho.expectation(&commutator(e, f)?)?;
            anti += rho.expectation(&anticommutator(ec, fc)?)?;
        }
    }
    let n = pair.n_common as f64;
    Ok(comm.norm_sqr().max(anti.norm_sqr()) / (4.0 * n * n))
}

/// `(|Σ Tr(rho {E_i0, F_j0}°)|^2 + |Σ Tr(rho [E_i0, F_j0]°)|^2) / (4N^2)`.
pub fn thm2_bound(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<f64> {
    check_triple(rho, phi, psi)?;
    let pair = pad_channels(phi, psi)?;
    let e0 = centered_all(&pair.phi, rho)?;
    let f0 = centered_all(&pair.psi, rho)?;
    let mut anti = Complex64::new(0.0, 0.0);
    let mut comm = Complex64::new(0.0, 0.0);
    for e in &e0 {
        for f in &f0 {
            anti += rho.expectation(&sym_anticommutator(e, f)?)?;
            comm += rho.expectation(&sym_commutator(e, f)?)?;
        }
    }
    let n = pair.n_common as f64;
    Ok((anti.norm_sqr() + comm.norm_sqr()) / (4.0 * n * n))
}

/// `Σ_ij |Tr([F_j, E_i^dag] rho)|^2 / 4`, over the native Kraus lists.
pub fn lb_eq13(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<f64> {
    check_triple(rho, phi, psi)?;
    let mut acc = 0.0;
    for e in phi.ops() {
        let ed = e.adjoint();
        for f in psi.ops() {
            acc += commutator(f, &ed)?
                .trace_of_product(rho.matrix())
                .norm_sqr();
        }
    }
    Ok(0.25 * acc)
}

/// Sum bound on `|U|²(Φ) + |U|²(Ψ)` from the skew-information literature:
///
/// `½ Σ_ij |<[√ρ,F_i],[√ρ,E_i]> (<{√ρ,F_j},{√ρ,E_j}> - 4<F_j^dag><E_j>)|`
///
/// with `<X> = Tr(rho X)`. The first factor pairs index `i` on both channels
/// and the second pairs `j`, so the double sum factorizes.
pub fn lb1_eq14(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<f64> {
    check_triple(rho, phi, psi)?;
    let pair = pad_channels(phi, psi)?;
    let s = rho.sqrt();
    let mut first = Vec::with_capacity(pair.n_common);
    let mut second = Vec::with_capacity(pair.n_common);
    for (e, f) in pair.phi.iter().zip(&pair.psi) {
        first.push(frob_inner(&commutator(s, f)?, &commutator(s, e)?)?);
        let anti = frob_inner(&anticommutator(s, f)?, &anticommutator(s, e)?)?;
        let means = rho.expectation(&f.adjoint())? * rho.expectation(e)?;
        second.push(anti - means * 4.0);
    }
    let mut acc = 0.0;
    for a in &first {
        for b in &second {
            acc += (a * b).norm();
        }
    }
    Ok(0.5 * acc)
}

/// Sum bound
///
/// `¼ Σ_ij (|<[√ρ,F_i],{√ρ,F_j}>|² + <[√ρ,E_i],[√ρ,E_i]> (<{√ρ,E_j},{√ρ,E_j}> - 4|Tr(ρE_j)|²))`.
pub fn thm4_bound(rho: &DensityMatrix, phi: &KrausChannel, psi: &KrausChannel) -> Result<f64> {
    check_triple(rho, phi, psi)?;
    let pair = pad_channels(phi, psi)?;
    let s = rho.sqrt();
    let mut f_comm = Vec::with_capacity(pair.n_common);
    let mut f_anti = Vec::with_capacity(pair.n_common);
    let mut e_comm = Vec::with_capacity(pair.n_common);
    let mut e_anti = Vec::with_capacity(pair.n_common);
    for (e, f) in pair.phi.iter().zip(&pair.psi) {
        f_comm.push(commutator(s, f)?);
        f_anti.push(anticommutator(s, f)?);
        e_comm.push(commutator(s, e)?.frobenius_norm_sqr());
        let anti = anticommutator(s, e)?.frobenius_norm_sqr();
        e_anti.push(anti - 4.0 * rho.expectation(e)?.norm_sqr());
    }
    let mut acc = 0.0;
    for i in 0..pair.n_common {
        for j in 0..pair.n_common {
            acc += frob_inner(&f_comm[i], &f_anti[j])?.norm_sqr() + e_comm[i] * e_anti[j];
        }
    }
    clamp_nonneg("thm4_bound", 0.25 * acc)
}

/// Fine-grained Cauchy-Schwarz terms for one basis vector `|t>`.
///
/// `i0 = Ĩ(Φ) J̃(Ψ)` and `i0_tilde = Ĩ(Ψ) J̃(Φ)`; `i1` and `i1_tilde` subtract,
/// for every pair `(i, j)`, the Cauchy-Schwarz gap of the `t`-th columns of
/// `[√ρ, E_i0]` against `{√ρ, F_j0}` (resp. `[√ρ, F_j0]` against `{√ρ, E_i0}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FineGrainedTerms {
    pub i1: f64,
    pub i1_tilde: f64,
    pub i0: f64,
    pub i0_tilde: f64,
    pub basis_index: usize,
}

/// Skew/anti operators of one centered Kraus operator with their norms.
struct Brackets {
    comm: ComplexMatrix,
    anti: ComplexMatrix,
    skew: f64,
    anti_info: f64,
}

fn brackets(ops: &[ComplexMatrix], rho: &DensityMatrix) -> Result<Vec<Brackets>> {
    let s = rho.sqrt();
    ops.iter()
        .map(|e| {
            let e0 = center_operator(e, rho)?;
            let comm = commutator(s, &e0)?;
            let anti = anticommutator(s, &e0)?;
            Ok(Brackets {
                skew: 0.5 * comm.frobenius_norm_sqr(),
                anti_info: 0.5 * anti.frobenius_norm_sqr(),
                comm,
                anti,
            })
        })
        .collect()
}

/// `||x||^2 ||y||^2 - |<x, y>|^2 >= 0`.
fn cauchy_schwarz_gap(x: &[Complex64], y: &[Complex64]) -> f64 {
    let xx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let yy: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let xy: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    (xx * yy - xy.norm_sqr()).max(0.0)
}

pub fn fine_grained_terms(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    psi: &KrausChannel,
    basis_index: usize,
) -> Result<FineGrainedTerms> {
    check_triple(rho, phi, psi)?;
    if basis_index >= rho.dim() {
        return Err(Error::invalid(
            "basis index",
            format!("{basis_index} is not below dimension {}", rho.dim()),
        ));
    }
    let es = brackets(phi.ops(), rho)?;
    let fs = brackets(psi.ops(), rho)?;
    let col = |m: &ComplexMatrix| m.column(basis_index);

    let (mut i0, mut i0_tilde, mut i1, mut i1_tilde) = (0.0, 0.0, 0.0, 0.0);
    for e in &es {
        let e_comm = col(&e.comm);
        let e_anti = col(&e.anti);
        for f in &fs {
            let f_comm = col(&f.comm);
            let f_anti = col(&f.anti);

            let pair0 = e.skew * f.anti_info;
            i0 += pair0;
            i1 += pair0 - 0.25 * cauchy_schwarz_gap(&e_comm, &f_anti);

            let pair0_tilde = f.skew * e.anti_info;
            i0_tilde += pair0_tilde;
            i1_tilde += pair0_tilde - 0.25 * cauchy_schwarz_gap(&f_comm, &e_anti);
        }
    }
    Ok(FineGrainedTerms {
        i1: clamp_nonneg("i1", i1)?,
        i1_tilde: clamp_nonneg("i1_tilde", i1_tilde)?,
        i0,
        i0_tilde,
        basis_index,
    })
}

/// `sqrt(I_1 Ĩ_1)`.
pub fn thm3_bound(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    psi: &KrausChannel,
    basis_index: usize,
) -> Result<f64> {
    let t = fine_grained_terms(rho, phi, psi, basis_index)?;
    Ok((t.i1 * t.i1_tilde).max(0.0).sqrt())
}

/// The channel bounds, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    LbEq13,
    Lb1Eq14,
}

impl Bound {
    pub const ALL: [Bound; 6] = [
        Bound::Thm1,
        Bound::Thm2,
        Bound::Thm3,
        Bound::Thm4,
        Bound::LbEq13,
        Bound::Lb1Eq14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Bound::Thm1 => "thm1",
            Bound::Thm2 => "thm2",
            Bound::Thm3 => "thm3",
            Bound::Thm4 => "thm4",
            Bound::LbEq13 => "lb_eq13",
            Bound::Lb1Eq14 => "lb1_eq14",
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bound::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::invalid("bound name", s.to_string()))
    }
}

/// Every left-hand side and channel bound for one `(rho, Φ, Ψ)` triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub u_phi: f64,
    pub u_psi: f64,
    pub v_phi: f64,
    pub v_psi: f64,
    /// `|V°|(Φ) |V°|(Ψ)`
    pub lhs_product_v: f64,
    /// `|U|(Φ) |U|(Ψ)`
    pub lhs_product_u: f64,
    /// `|U|²(Φ) + |U|²(Ψ)`
    pub lhs_sum_u2: f64,
    pub thm1: f64,
    pub thm2: f64,
    pub thm3: f64,
    pub thm4: f64,
    pub lb_eq13: f64,
    pub lb1_eq14: f64,
    pub n_common: usize,
    pub basis_index: usize,
    pub slacks: BTreeMap<String, f64>,
}

impl BoundReport {
    /// Computes every quantity without checking the slacks.
    pub fn evaluate(
        rho: &DensityMatrix,
        phi: &KrausChannel,
        psi: &KrausChannel,
        basis_index: usize,
    ) -> Result<Self> {
        check_triple(rho, phi, psi)?;
        let mphi = channel_measures(rho, phi)?;
        let mpsi = channel_measures(rho, psi)?;
        let mut report = BoundReport {
            u_phi: mphi.u_abs,
            u_psi: mpsi.u_abs,
            v_phi: mphi.v_sym,
            v_psi: mpsi.v_sym,
            lhs_product_v: mphi.v_sym * mpsi.v_sym,
            lhs_product_u: mphi.u_abs * mpsi.u_abs,
            lhs_sum_u2: mphi.u_abs * mphi.u_abs + mpsi.u_abs * mpsi.u_abs,
            thm1: thm1_bound(rho, phi, psi)?,
            thm2: thm2_bound(rho, phi, psi)?,
            thm3: thm3_bound(rho, phi, psi, basis_index)?,
            thm4: thm4_bound(rho, phi, psi)?,
            lb_eq13: lb_eq13(rho, phi, psi)?,
            lb1_eq14: lb1_eq14(rho, phi, psi)?,
            n_common: phi.len().max(psi.len()),
            basis_index,
            slacks: BTreeMap::new(),
        };
        report.refresh_slacks();
        Ok(report)
    }

    pub fn value(&self, bound: Bound) -> f64 {
        match bound {
            Bound::Thm1 => self.thm1,
            Bound::Thm2 => self.thm2,
            Bound::Thm3 => self.thm3,
            Bound::Thm4 => self.thm4,
            Bound::LbEq13 => self.lb_eq13,
            Bound::Lb1Eq14 => self.lb1_eq14,
        }
    }

    pub fn value_mut(&mut self, bound: Bound) -> &mut f64 {
        match bound {
            Bound::Thm1 => &mut self.thm1,
            Bound::Thm2 => &mut self.thm2,
            Bound::Thm3 => &mut self.thm3,
            Bound::Thm4 => &mut self.thm4,
            Bound::LbEq13 => &mut self.lb_eq13,
            Bound::Lb1Eq14 => &mut self.lb1_eq14,
        }
    }

    /// The left-hand side a bound is compared against.
    pub fn lhs(&self, bound: Bound) -> f64 {
        match bound {
            Bound::Thm1 | Bound::Thm2 => self.lhs_product_v,
            Bound::Thm3 | Bound::LbEq13 => self.lhs_product_u,
            Bound::Thm4 | Bound::Lb1Eq14 => self.lhs_sum_u2,
        }
    }

    pub fn slack(&self, bound: Bound) -> f64 {
        self.lhs(bound) - self.value(bound)
    }

    /// Recomputes `slacks` from the current values.
    pub fn refresh_slacks(&mut self) {
        self.slacks = Bound::ALL
            .iter()
            .map(|&b| (b.as_str().to_string(), self.slack(b)))
            .collect();
    }

    /// Bounds whose slack falls below `-VIOLATION_TOL`.
    pub fn violations(&self) -> Vec<(Bound, f64)> {
        Bound::ALL
            .iter()
            .map(|&b| (b, self.slack(b)))
            .filter(|&(_, s)| s < -VIOLATION_TOL)
            .collect()
    }

    pub fn check(self) -> Result<Self> {
        match self.violations().first() {
            None => Ok(self),
            Some(&(bound, slack)) => Err(Error::Verification {
                bound: bound.to_string(),
                lhs: self.lhs(bound),
                rhs: self.value(bound),
                slack,
            }),
        }
    }
}

/// All bounds for `(rho, Φ, Ψ)`, failing if any bound exceeds its left-hand
/// side by more than `1e-9`.
pub fn bound_report(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    psi: &KrausChannel,
    basis_index: usize,
) -> Result<BoundReport> {
    BoundReport::evaluate(rho, phi, psi, basis_index)?.check()
}
