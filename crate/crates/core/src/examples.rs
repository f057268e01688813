//! Two-qubit reference instances: the Werner family `rho_w(theta)`, the
//! block state `rho_theta`, the channel pair `E(p)`, `F(q)`, and closed-form
//! expressions for the bounds at `theta = 1` (Werner) and `theta = 0`
//! (block state).
//!
//! Closed forms are evaluated term by term as written, with no algebraic
//! simplification, so a transcription error shows up as a disagreement with
//! the numeric bounds instead of being hidden.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Werner,
    RhoTheta,
}

impl ExampleId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Werner => "werner",
            ExampleId::RhoTheta => "rho_theta",
        }
    }

    /// The `theta` at which the closed forms apply.
    pub fn closed_form_theta(self) -> f64 {
        match self {
            ExampleId::Werner => 1.0,
            ExampleId::RhoTheta => 0.0,
        }
    }

    /// The `theta` at which `sqrt(rho)` is proportional to the identity.
    pub fn incoherent_theta(self) -> f64 {
        match self {
            ExampleId::Werner => 0.75,
            ExampleId::RhoTheta => 0.5,
        }
    }

    pub fn state(self, theta: f64) -> Result<DensityMatrix> {
        match self {
            ExampleId::Werner => werner_state(theta),
            ExampleId::RhoTheta => rho_theta_state(theta),
        }
    }

    pub fn closed_forms(self, p: f64, q: f64) -> Result<ClosedFormValues> {
        match self {
            ExampleId::Werner => example1_closed_forms(p, q),
            ExampleId::RhoTheta => example2_closed_forms(p, q),
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(ExampleId::Werner),
            "rho_theta" => Ok(ExampleId::RhoTheta),
            other => Err(Error::invalid(
                "example id",
                format!("{other:?} (expected werner or rho_theta)"),
            )),
        }
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: x,
            range: "[0, 1]",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleConfig {
    pub example_id: ExampleId,
    pub theta: f64,
    pub p: f64,
    pub q: f64,
}

impl ExampleConfig {
    pub fn new(example_id: ExampleId, theta: f64, p: f64, q: f64) -> Result<Self> {
        check_unit("theta", theta)?;
        check_unit("p", p)?;
        check_unit("q", q)?;
        Ok(Self {
            example_id,
            theta,
            p,
            q,
        })
    }

    pub fn report(&self, basis_index: usize) -> Result<BoundReport> {
        let rho = self.example_id.state(self.theta)?;
        BoundReport::evaluate(&rho, &channel_e(self.p)?, &channel_f(self.q)?, basis_index)
    }
}

/// Werner state on `C^4`; `theta = 3/4` gives `I/4`.
pub fn werner_state(theta: f64) -> Result<DensityMatrix> {
    check_unit("theta", theta)?;
    let d = theta / 3.0;
    let mid = (3.0 - 2.0 * theta) / 6.0;
    let off = (4.0 * theta - 3.0) / 6.0;
    let m = ComplexMatrix::from_real_rows(&[
        vec![d, 0.0, 0.0, 0.0],
        vec![0.0, mid, off, 0.0],
        vec![0.0, off, mid, 0.0],
        vec![0.0, 0.0, 0.0, d],
    ])?;
    DensityMatrix::new(m)
}

/// Block-diagonal state with `1/4` on the diagonal and `(2 theta - 1)/4`
/// coupling `|00>,|01>` and `|10>,|11>`; `theta = 1/2` gives `I/4`.
pub fn rho_theta_state(theta: f64) -> Result<DensityMatrix> {
    check_unit("theta", theta)?;
    let off = (2.0 * theta - 1.0) / 4.0;
    let m = ComplexMatrix::from_real_rows(&[
        vec![0.25, off, 0.0, 0.0],
        vec![off, 0.25, 0.0, 0.0],
        vec![0.0, 0.0, 0.25, off],
        vec![0.0, 0.0, off, 0.25],
    ])?;
    DensityMatrix::new(m)
}

/// `E_1 = diag(1, √(1-p), 1, √(1-p))`, `E_2 = diag(0, √p, 0, √p)`.
///
/// At `p = 0` the zero operator `E_2` is kept.
pub fn channel_e(p: f64) -> Result<KrausChannel> {
    check_unit("p", p)?;
    let a = (1.0 - p).sqrt();
    let s = p.sqrt();
    KrausChannel::new(vec![
        ComplexMatrix::from_real_diag(&[1.0, a, 1.0, a]),
        ComplexMatrix::from_real_diag(&[0.0, s, 0.0, s]),
    ])
}

/// `F_1 = diag(√(1-q), 1, √(1-q), 1)`, `F_2 = √q (|1><0| + |3><2|)`.
pub fn channel_f(q: f64) -> Result<KrausChannel> {
    check_unit("q", q)?;
    let b = (1.0 - q).sqrt();
    let mut f2 = ComplexMatrix::zeros(4);
    f2[(1, 0)] = c64(q.sqrt(), 0.0);
    f2[(3, 2)] = c64(q.sqrt(), 0.0);
    KrausChannel::new(vec![ComplexMatrix::from_real_diag(&[b, 1.0, b, 1.0]), f2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormValues {
    pub thm3_closed: f64,
    pub lb_closed: f64,
    pub lb1_closed: f64,
    pub lb2_closed: f64,
}

fn checked_root(name: &'static str, argument: f64) -> Result<f64> {
    if argument >= 0.0 {
        Ok(argument.sqrt())
    } else if argument >= -1e-12 {
        Ok(0.0)
    } else {
        Err(Error::ClosedFormDomain { name, argument })
    }
}

/// Werner state at `theta = 1`.
pub fn example1_closed_forms(p: f64, q: f64) -> Result<ClosedFormValues> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let a = (1.0 - p).sqrt();
    let b = (1.0 - q).sqrt();
    let arg =
        (10.0 * a + 5.0 * p - 10.0) * (40.0 * (b - 1.0) + 4.0 * q * (1.0 + 4.0 * b) - 3.0 * q * q);
    Ok(ClosedFormValues {
        thm3_closed: checked_root("thm3_closed", arg)? / 72.0,
        lb_closed: 0.0,
        lb1_closed: 5.0 / 72.0 * (a - 1.0).powi(2) * (b - 1.0).powi(2),
        lb2_closed: 5.0 / 144.0 * ((a - 1.0).powi(2) + p).powi(2),
    })
}

/// Block state at `theta = 0`.
///
/// `lb1_closed` does not agree with the numeric sum bound (it reaches 1/2 at
/// `p = q = 1` where the sum evaluates to 1/8); it is reported as given.
pub fn example2_closed_forms(p: f64, q: f64) -> Result<ClosedFormValues> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let a = (1.0 - p).sqrt();
    let b = (1.0 - q).sqrt();
    let arg = (2.0 * a + p - 2.0) * (1800.0 * (b - 1.0) + 60.0 * q * (14.0 + b) - q * q);
    Ok(ClosedFormValues {
        thm3_closed: checked_root("thm3_closed", arg)? / 128.0,
        lb_closed: q / 8.0 * (1.0 - a),
        lb1_closed: 1.0 / 8.0 * (1.0 - a) * (1.0 - b + (p * q).sqrt()).powi(2),
        lb2_closed: 1.0 / 16.0
            * ((1.0 - a).powi(4)
                + p * p
                + 2.0 * (p * (p - 2.0 + 2.0 * a) + q * (q - 2.0 + 2.0 * b)).abs()),
    })
}

/// `steps` equally spaced points covering `[0, 1]` inclusive.
pub fn grid_points(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::OutOfRange {
            name: "grid_steps",
            value: steps as f64,
            range: ">= 2",
        });
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 / last).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub q: f64,
    pub report: BoundReport,
    pub closed: Option<ClosedFormValues>,
}

/// Bound reports over the `(p, q)` grid in row-major order (`p` outer).
///
/// Closed forms are attached only when `theta` is the value they were
/// derived for.
pub fn sweep_grid(
    example: ExampleId,
    theta: f64,
    steps: usize,
    basis_index: usize,
) -> Result<Vec<SweepRow>> {
    let rho = example.state(theta)?;
    let grid = grid_points(steps)?;
    let with_closed = theta == example.closed_form_theta();
    let points: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&p| grid.iter().map(move |&q| (p, q)))
        .collect();
    points
        .into_par_iter()
        .map(|(p, q)| {
            let report = BoundReport::evaluate(&rho, &channel_e(p)?, &channel_f(q)?, basis_index)?;
            let closed = if with_closed {
                Some(example.closed_forms(p, q)?)
            } else {
                None
            };
            Ok(SweepRow {
                p,
                q,
                report,
                closed,
            })
        })
        .collect()
}
