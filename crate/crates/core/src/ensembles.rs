//! Seeded random states, operators and channels, and the randomized
//! verification harness for the whole bound catalog.
//!
//! The generator is SplitMix64 so that draws are reproducible across
//! platforms and implementations:
//!
//! ```text
//! state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
//! z     <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//! z     <- (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out   <- z ^ (z >> 31)
//! ```
//!
//! Uniforms are `((out >> 11) + 1) * 2^-53` in `(0, 1]`. Normals come from
//! Box-Muller on consecutive uniform pairs `(u1, u2)`:
//! `sqrt(-2 ln u1) cos(2 pi u2)` then `sqrt(-2 ln u1) sin(2 pi u2)`.
//! A complex Gaussian entry is `re + i im` with both parts drawn in that
//! order.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{dou_bounds, Bound, BoundReport, ObservableRelations, VIOLATION_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{DensityMatrix, KrausChannel};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1]`.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let re = self.next_gaussian();
        let im = self.next_gaussian();
        Complex64::new(re, im)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn next_range(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

/// `rho = G G^dag / Tr(G G^dag)` with `G` a `dim x rank` complex Gaussian
/// matrix filled row by row.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::invalid("dimension", "must be positive"));
    }
    if rank == 0 || rank > dim {
        return Err(Error::invalid("rank", format!("{rank} not in [1, {dim}]")));
    }
    let mut rng = SplitMix64::new(seed);
    let g: Vec<Complex64> = (0..dim * rank)
        .map(|_| rng.next_complex_gaussian())
        .collect();
    let mut m = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            m[(r, c)] = (0..rank)
                .map(|k| g[r * rank + k] * g[c * rank + k].conj())
                .sum();
        }
    }
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr))
}

/// Orthonormalizes columns in order by modified Gram-Schmidt with one
/// re-orthogonalization pass.
fn orthonormalize(columns: &mut [Vec<Complex64>]) -> Result<()> {
    for k in 0..columns.len() {
        for _pass in 0..2 {
            for j in 0..k {
                let (done, rest) = columns.split_at_mut(k);
                let q = &done[j];
                let v = &mut rest[0];
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = columns[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::invalid("isometry", "rank-deficient Gaussian draw"));
        }
        for z in columns[k].iter_mut() {
            *z /= norm;
        }
    }
    Ok(())
}

/// Random channel from a Gaussian isometry `V: C^dim -> C^(dim * kraus_count)`.
/// Row block `i` of `V` is the Kraus operator `E_i`, so
/// `Σ E_i^dag E_i = V^dag V = I`.
pub fn random_channel(dim: usize, kraus_count: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 {
        return Err(Error::invalid("dimension", "must be positive"));
    }
    if kraus_count == 0 {
        return Err(Error::invalid("kraus count", "must be at least 1"));
    }
    let rows = dim * kraus_count;
    let mut rng = SplitMix64::new(seed);
    // column-major draw
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..rows).map(|_| rng.next_complex_gaussian()).collect())
        .collect();
    orthonormalize(&mut columns)?;
    let ops = (0..kraus_count)
        .map(|block| {
            let mut e = ComplexMatrix::zeros(dim);
            for r in 0..dim {
                for (c, col) in columns.iter().enumerate() {
                    e[(r, c)] = col[block * dim + r];
                }
            }
            e
        })
        .collect();
    KrausChannel::new(ops)
}

/// Gaussian operator, optionally replaced by its Hermitian part `(M + M^dag)/2`.
pub fn random_operator(dim: usize, seed: u64, hermitian: bool) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let data = (0..dim * dim)
        .map(|_| rng.next_complex_gaussian())
        .collect();
    let m = ComplexMatrix::new(dim, data).expect("finite Gaussian entries");
    if hermitian {
        (&m + &m.adjoint()).scale_real(0.5)
    } else {
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub dim: usize,
    /// Largest Kraus count; each trial draws `1..=kraus_count` per channel.
    pub kraus_count: usize,
    /// Fixed state rank, or a per-trial draw in `1..=dim` when `None`.
    pub rank: Option<usize>,
    pub seed: u64,
    pub trials: usize,
}

impl EnsembleConfig {
    pub fn new(dim: usize, kraus_count: usize, seed: u64, trials: usize) -> Result<Self> {
        let cfg = Self {
            dim,
            kraus_count,
            rank: None,
            seed,
            trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.dim) {
            return Err(Error::OutOfRange {
                name: "dim",
                value: self.dim as f64,
                range: "[2, 8]",
            });
        }
        if self.kraus_count == 0 {
            return Err(Error::OutOfRange {
                name: "kraus_count",
                value: 0.0,
                range: ">= 1",
            });
        }
        if let Some(rank) = self.rank {
            if rank == 0 || rank > self.dim {
                return Err(Error::OutOfRange {
                    name: "rank",
                    value: rank as f64,
                    range: "[1, dim]",
                });
            }
        }
        if self.trials == 0 {
            return Err(Error::OutOfRange {
                name: "trials",
                value: 0.0,
                range: ">= 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub bound: String,
    pub seed: u64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: EnsembleConfig,
    pub trials_run: usize,
    pub violations: Vec<Violation>,
    pub min_slack_per_bound: BTreeMap<String, f64>,
    #[serde(serialize_with = "as_secs")]
    pub elapsed: Duration,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Test fixture: scales one channel bound before slacks are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrokenBound {
    pub bound: Bound,
    pub factor: f64,
}

/// One trial's objects, all derived from `seed`.
pub struct TrialDraw {
    pub rho: DensityMatrix,
    pub phi: KrausChannel,
    pub psi: KrausChannel,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub k: ComplexMatrix,
    pub l: ComplexMatrix,
}

pub fn draw_trial(cfg: &EnsembleConfig, seed: u64) -> Result<TrialDraw> {
    let mut rng = SplitMix64::new(seed);
    let rank = cfg.rank.unwrap_or_else(|| rng.next_range(1, cfg.dim));
    let n_phi = rng.next_range(1, cfg.kraus_count);
    let n_psi = rng.next_range(1, cfg.kraus_count);
    let d = cfg.dim;
    Ok(TrialDraw {
        rho: random_density(d, rank, rng.next_u64())?,
        phi: random_channel(d, n_phi, rng.next_u64())?,
        psi: random_channel(d, n_psi, rng.next_u64())?,
        a: random_operator(d, rng.next_u64(), true),
        b: random_operator(d, rng.next_u64(), true),
        k: random_operator(d, rng.next_u64(), false),
        l: random_operator(d, rng.next_u64(), false),
    })
}

type TrialSlacks = Vec<(String, f64)>;

fn run_trial(
    cfg: &EnsembleConfig,
    seed: u64,
    broken: Option<BrokenBound>,
) -> Result<TrialSlacks> {
    let t = draw_trial(cfg, seed)?;
    let mut report = BoundReport::evaluate(&t.rho, &t.phi, &t.psi, 0)?;
    if let Some(fix) = broken {
        *report.value_mut(fix.bound) *= fix.factor;
    }
    let mut slacks: Vec<(String, f64)> = Bound::ALL
        .iter()
        .map(|&b| (b.as_str().to_string(), report.slack(b)))
        .collect();
    let obs = ObservableRelations::evaluate(&t.rho, &t.a, &t.b)?;
    slacks.extend(obs.slacks().iter().map(|&(n, s)| (n.to_string(), s)));
    let ops = dou_bounds(&t.rho, &t.k, &t.l)?;
    slacks.extend(ops.slacks().iter().map(|&(n, s)| (n.to_string(), s)));
    Ok(slacks)
}

pub fn verify_suite(config: &EnsembleConfig) -> Result<VerificationReport> {
    verify_suite_with(config, None)
}

/// Runs `config.trials` independent trials with seeds `seed + t`. Trials are
/// evaluated in parallel and aggregated in trial order.
pub fn verify_suite_with(
    config: &EnsembleConfig,
    broken: Option<BrokenBound>,
) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let results: Vec<(u64, Result<TrialSlacks>)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let seed = config.seed.wrapping_add(t as u64);
            (seed, run_trial(config, seed, broken))
        })
        .collect();

    let mut violations = Vec::new();
    let mut min_slack: BTreeMap<String, f64> = BTreeMap::new();
    for (seed, result) in results {
        let slacks = result.map_err(|e| Error::invalid("trial", format!("seed {seed}: {e}")))?;
        for (name, slack) in slacks {
            let entry = min_slack.entry(name.clone()).or_insert(f64::INFINITY);
            *entry = entry.min(slack);
            if slack < -VIOLATION_TOL {
                violations.push(Violation {
                    bound: name,
                    seed,
                    slack,
                });
            }
        }
    }
    Ok(VerificationReport {
        config: config.clone(),
        trials_run: config.trials,
        violations,
        min_slack_per_bound: min_slack,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_stream() {
        // published SplitMix64 outputs for seed 0
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniforms_in_half_open_unit_interval() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..10_000 {
            let u = rng.next_uniform();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = SplitMix64::new(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn pure_states_from_rank_one() {
        for seed in 0..20 {
            let rho = random_density(3, 1, seed).unwrap();
            let eig = crate::linalg::hermitian_eig(rho.matrix()).unwrap();
            assert!((eig.eigenvalues[2] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn density_seeds() {
        let a = random_density(4, 4, 1).unwrap();
        let b = random_density(4, 4, 2).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) > 1e-3);
        let c = random_density(4, 4, 1).unwrap();
        assert_eq!(a.matrix(), c.matrix());
        assert!(random_density(3, 0, 1).is_err());
        assert!(random_density(3, 4, 1).is_err());
    }

    // Frozen from an independent Python reimplementation of the generator
    // (SplitMix64 + Box-Muller + G G^dag / Tr).
    #[test]
    fn density_golden_seed_42() {
        let rho = random_density(2, 2, 42).unwrap();
        let m = rho.matrix();
        for (k, (re, im)) in GOLDEN_42.iter().enumerate() {
            let z = m.entries()[k];
            assert!(
                (z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14,
                "{k}: {z}"
            );
        }
    }

    const GOLDEN_42: [(f64, f64); 4] = [
        (0.24764915135966964, 0.0),
        (-0.25102691445401426, 0.09078578622986598),
        (-0.25102691445401426, -0.09078578622986598),
        (0.7523508486403303, 0.0),
    ];

    #[test]
    fn channel_unitary_and_complete() {
        let ch = random_channel(3, 1, 11).unwrap();
        let u = &ch.ops()[0];
        assert!((&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        for seed in 0..100 {
            let ch =
                random_channel(1 + (seed as usize % 4) + 1, 1 + seed as usize % 3, seed).unwrap();
            assert!(ch.completeness_residual() <= 1e-10);
        }
        let a = random_channel(2, 2, 5).unwrap();
        let b = random_channel(2, 2, 5).unwrap();
        assert_eq!(a.ops(), b.ops());
        assert!(random_channel(2, 0, 5).is_err());
    }

    #[test]
    fn operators() {
        let h = random_operator(4, 9, true);
        assert!(h.max_abs_diff(&h.adjoint()) <= 1e-14);
        let a = random_operator(3, 1, false);
        let b = random_operator(3, 2, false);
        assert!(a.max_abs_diff(&b) > 1e-3);
        assert_eq!(random_operator(3, 1, false), a);
    }

    #[test]
    fn config_validation() {
        assert!(EnsembleConfig::new(3, 2, 0, 0).is_err());
        assert!(EnsembleConfig::new(1, 2, 0, 5).is_err());
        assert!(EnsembleConfig::new(9, 2, 0, 5).is_err());
        assert!(EnsembleConfig::new(3, 0, 0, 5).is_err());
        let mut cfg = EnsembleConfig::new(3, 2, 0, 5).unwrap();
        cfg.rank = Some(4);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn suite_is_clean_and_deterministic() {
        let cfg = EnsembleConfig::new(3, 3, 1234, 50).unwrap();
        let a = verify_suite(&cfg).unwrap();
        let b = verify_suite(&cfg).unwrap();
        assert!(a.passed(), "{:?}", a.violations);
        assert_eq!(a.min_slack_per_bound, b.min_slack_per_bound);
        assert_eq!(a.min_slack_per_bound.len(), 12);
    }

    #[test]
    fn suite_detects_broken_bound() {
        let cfg = EnsembleConfig::new(2, 2, 99, 30).unwrap();
        let broken = BrokenBound {
            bound: Bound::Thm4,
            factor: 10.0,
        };
        let report = verify_suite_with(&cfg, Some(broken)).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().all(|v| v.bound == "thm4"));
    }
}
