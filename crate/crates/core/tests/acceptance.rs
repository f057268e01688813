//! Acceptance run. Prints one PASS/FAIL line per criterion followed by
//! indented diagnostics, and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use channel_uncertainty::bounds::{Bound, VIOLATION_TOL};
use channel_uncertainty::ensembles::{
    random_channel, random_density, random_operator, verify_suite, verify_suite_with, BrokenBound,
    EnsembleConfig, SplitMix64,
};
use channel_uncertainty::examples::{grid_points, sweep_grid, ExampleId, SweepRow};
use channel_uncertainty::linalg::{cartesian_decompose, hermitian_eig, psd_sqrt};
use channel_uncertainty::measures::{abs_variance, channel_measures, mwy_skew_info};
use channel_uncertainty::{examples, DensityMatrix};

const GRID: usize = 21;
const CLOSED_TOL: f64 = 1e-8;
const ORDER_TOL: f64 = 1e-9;

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn criterion(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        out.require(
            elapsed <= limit,
            format!(
                "runtime {:.3} s exceeds {:.0} s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            ),
        );
    }
    let passed = out.failures.is_empty();
    println!(
        "[{}] {id}. {name} ({:.3} s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    for f in &out.failures {
        println!("      failed: {f}");
    }
    for n in &out.notes {
        println!("      note: {n}");
    }
    passed
}

fn grid(example: ExampleId) -> Vec<SweepRow> {
    sweep_grid(example, example.closed_form_theta(), GRID, 0).expect("grid evaluates")
}

fn min_slack(rows: &[SweepRow]) -> (f64, String) {
    rows.iter()
        .flat_map(|r| {
            r.report
                .slacks
                .iter()
                .map(move |(k, &v)| (v, format!("{k} at p={}, q={}", r.p, r.q)))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty grid")
}

fn degenerate_nullity() -> Outcome {
    let mut out = Outcome::default();
    let pts = grid_points(5).unwrap();
    for ex in [ExampleId::Werner, ExampleId::RhoTheta] {
        let rho = ex.state(ex.incoherent_theta()).unwrap();
        let mut worst = 0.0f64;
        for &p in &pts {
            let u_phi = channel_measures(&rho, &examples::channel_e(p).unwrap())
                .unwrap()
                .u_abs;
            for &q in &pts {
                let u_psi = channel_measures(&rho, &examples::channel_f(q).unwrap())
                    .unwrap()
                    .u_abs;
                worst = worst.max(u_phi.abs()).max(u_psi.abs());
            }
        }
        out.require(worst <= 1e-12, format!("{ex}: max |U| = {worst:e}"));
        out.note(format!(
            "{ex} at theta = {}: max |U| = {worst:e}",
            ex.incoherent_theta()
        ));
    }
    out
}

struct Pairing {
    label: &'static str,
    numeric: fn(&SweepRow) -> f64,
    closed: fn(&SweepRow) -> f64,
    corner: f64,
}

fn dual_evaluation(example: ExampleId, pairings: &[Pairing]) -> Outcome {
    let mut out = Outcome::default();
    let rows = grid(example);
    let corner = rows.last().unwrap();
    assert_eq!((corner.p, corner.q), (1.0, 1.0));

    let (slack, at) = min_slack(&rows);
    let slacks_ok = slack >= -VIOLATION_TOL;
    out.require(slacks_ok, format!("min slack {slack:e} ({at})"));
    out.note(format!(
        "min inequality slack over the grid: {slack:e} ({at})"
    ));

    for pair in pairings {
        let diffs: Vec<f64> = rows
            .iter()
            .map(|r| ((pair.numeric)(r) - (pair.closed)(r)).abs())
            .collect();
        let mismatched = diffs.iter().filter(|&&d| d > CLOSED_TOL).count();
        let max_diff = diffs.iter().copied().fold(0.0, f64::max);
        let num_corner = (pair.numeric)(corner);
        let closed_corner = (pair.closed)(corner);
        if mismatched == 0 {
            out.require(
                (num_corner - pair.corner).abs() <= CLOSED_TOL,
                format!(
                    "{}: corner value {num_corner} != {}",
                    pair.label, pair.corner
                ),
            );
            out.note(format!(
                "{}: agrees at all {} points (max diff {max_diff:e})",
                pair.label,
                rows.len()
            ));
        } else if 2 * mismatched > rows.len() {
            // systematic disagreement: the numeric definition stands
            out.require(
                slacks_ok,
                format!("{}: disagrees and slacks are negative", pair.label),
            );
            out.require(
                (closed_corner - pair.corner).abs() <= 1e-12,
                format!(
                    "{}: closed form corner {closed_corner} != {}",
                    pair.label, pair.corner
                ),
            );
            out.note(format!(
                "DISCREPANCY {}: closed form disagrees at {mismatched}/{} points, max diff {max_diff:e}; \
                 at p=q=1 numeric {num_corner} vs closed {closed_corner}; numeric value retained",
                pair.label,
                rows.len()
            ));
        } else {
            out.require(
                false,
                format!(
                    "{}: disagrees at {mismatched}/{} points (max diff {max_diff:e})",
                    pair.label,
                    rows.len()
                ),
            );
        }
    }
    out
}

fn werner_closed_forms() -> Outcome {
    let rows = grid(ExampleId::Werner);
    let worst_lb = rows
        .iter()
        .map(|r| r.report.lb_eq13.abs())
        .fold(0.0, f64::max);
    let mut out = dual_evaluation(
        ExampleId::Werner,
        &[
            Pairing {
                label: "lb1_eq14",
                numeric: |r| r.report.lb1_eq14,
                closed: |r| r.closed.unwrap().lb1_closed,
                corner: 5.0 / 72.0,
            },
            Pairing {
                label: "thm4",
                numeric: |r| r.report.thm4,
                closed: |r| r.closed.unwrap().lb2_closed,
                corner: 5.0 / 36.0,
            },
            Pairing {
                label: "thm3 (basis 0)",
                numeric: |r| r.report.thm3,
                closed: |r| r.closed.unwrap().thm3_closed,
                corner: 195f64.sqrt() / 72.0,
            },
        ],
    );
    out.require(worst_lb <= 1e-12, format!("lb_eq13 reaches {worst_lb:e}"));
    out.note(format!("max |lb_eq13| = {worst_lb:e}"));
    out
}

fn rho_theta_closed_forms() -> Outcome {
    dual_evaluation(
        ExampleId::RhoTheta,
        &[
            Pairing {
                label: "lb_eq13",
                numeric: |r| r.report.lb_eq13,
                closed: |r| r.closed.unwrap().lb_closed,
                corner: 0.125,
            },
            Pairing {
                label: "lb1_eq14",
                numeric: |r| r.report.lb1_eq14,
                closed: |r| r.closed.unwrap().lb1_closed,
                corner: 0.5,
            },
            Pairing {
                label: "thm4",
                numeric: |r| r.report.thm4,
                closed: |r| r.closed.unwrap().lb2_closed,
                corner: 0.375,
            },
            Pairing {
                label: "thm3 (basis 0)",
                numeric: |r| r.report.thm3,
                closed: |r| r.closed.unwrap().thm3_closed,
                corner: 31.0 / 128.0,
            },
        ],
    )
}

fn orderings() -> Outcome {
    let mut out = Outcome::default();
    let werner = grid(ExampleId::Werner);
    let rho_theta = grid(ExampleId::RhoTheta);

    for (ex, rows) in [
        (ExampleId::Werner, &werner),
        (ExampleId::RhoTheta, &rho_theta),
    ] {
        let below = rows
            .iter()
            .filter(|r| r.report.thm3 < r.report.lb_eq13 - ORDER_TOL)
            .count();
        out.require(
            below == 0,
            format!("{ex}: thm3 < lb_eq13 at {below} points"),
        );
        out.note(format!(
            "{ex}: thm3 >= lb_eq13 at {}/{} points",
            rows.len() - below,
            rows.len()
        ));
    }

    let below = werner
        .iter()
        .filter(|r| r.report.thm4 < r.report.lb1_eq14 - ORDER_TOL)
        .count();
    out.require(
        below == 0,
        format!("werner: thm4 < lb1_eq14 at {below} points"),
    );
    out.note(format!(
        "werner: thm4 >= lb1_eq14 at {}/{} points",
        werner.len() - below,
        werner.len()
    ));

    let above = rho_theta
        .iter()
        .filter(|r| r.report.thm4 > r.report.lb1_eq14 + ORDER_TOL)
        .count();
    let below = rho_theta
        .iter()
        .filter(|r| r.report.thm4 < r.report.lb1_eq14 - ORDER_TOL)
        .count();
    out.require(above > 0, "rho_theta: no point with thm4 > lb1_eq14");
    out.require(below > 0, "rho_theta: no point with thm4 < lb1_eq14");
    out.note(format!(
        "rho_theta numeric: thm4 > lb1_eq14 at {above}, thm4 < lb1_eq14 at {below}, tied at {}",
        rho_theta.len() - above - below
    ));
    let (c_above, c_below) = rho_theta.iter().fold((0, 0), |(a, b), r| {
        let c = r.closed.unwrap();
        (
            a + usize::from(c.lb2_closed > c.lb1_closed + ORDER_TOL),
            b + usize::from(c.lb2_closed < c.lb1_closed - ORDER_TOL),
        )
    });
    out.note(format!(
        "rho_theta closed forms: lb2 > lb1 at {c_above}, lb2 < lb1 at {c_below} \
         (the crossing exists only against the printed lb1 expression)"
    ));
    out
}

fn edge_vanishing() -> Outcome {
    let mut out = Outcome::default();
    for ex in [ExampleId::Werner, ExampleId::RhoTheta] {
        let rows = grid(ex);
        for (edge, on_edge) in [
            (
                "p = 0",
                (|r: &SweepRow| r.p == 0.0) as fn(&SweepRow) -> bool,
            ),
            ("q = 0", |r| r.q == 0.0),
        ] {
            let edge_rows: Vec<&SweepRow> = rows.iter().filter(|r| on_edge(r)).collect();
            for bound in Bound::ALL {
                let (worst, at) = edge_rows
                    .iter()
                    .map(|r| (r.report.value(bound), (r.p, r.q)))
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .unwrap();
                out.require(
                    worst <= 1e-12,
                    format!("{ex}, {edge}: {bound} reaches {worst:e} at (p, q) = {at:?}"),
                );
            }
            let lb2 = edge_rows
                .iter()
                .map(|r| r.closed.unwrap().lb2_closed)
                .fold(0.0, f64::max);
            out.note(format!(
                "{ex}, {edge}: max closed-form lb2 on the edge = {lb2:e}"
            ));
        }
    }
    out
}

fn randomized_validity() -> Outcome {
    let mut out = Outcome::default();
    for dim in 2..=4 {
        let cfg = EnsembleConfig::new(dim, 3, 0, 1000).unwrap();
        let report = verify_suite(&cfg).unwrap();
        out.require(
            report.passed(),
            format!(
                "dim {dim}: {} violations, first {:?}",
                report.violations.len(),
                report.violations.first()
            ),
        );
        let (name, slack) = report
            .min_slack_per_bound
            .iter()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        out.require(
            report.min_slack_per_bound.len() == 12,
            "slack table incomplete",
        );
        out.note(format!(
            "dim {dim}: {} trials, {} relations, smallest slack {slack:e} ({name})",
            report.trials_run,
            report.min_slack_per_bound.len()
        ));
    }
    let cfg = EnsembleConfig::new(3, 3, 0, 50).unwrap();
    let broken = verify_suite_with(
        &cfg,
        Some(BrokenBound {
            bound: Bound::Thm4,
            factor: 10.0,
        }),
    )
    .unwrap();
    out.require(!broken.passed(), "inflated thm4 went undetected");
    out.note(format!(
        "sensitivity check: inflated thm4 flagged in {} of 50 trials",
        broken.violations.len()
    ));
    out
}

fn identity_suite() -> Outcome {
    let mut out = Outcome::default();
    let mut rng = SplitMix64::new(7);

    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let dim = rng.next_range(2, 4);
        let rank = rng.next_range(1, dim);
        let n = rng.next_range(1, 3);
        let rho = random_density(dim, rank, rng.next_u64()).unwrap();
        let phi = random_channel(dim, n, rng.next_u64()).unwrap();
        let m = channel_measures(&rho, &phi).unwrap();
        let scale = m.v_sym.max(f64::MIN_POSITIVE);
        worst.0 = worst
            .0
            .max((m.u_abs * m.u_abs - m.i_tilde * m.j_tilde).abs() / (scale * scale));
        worst.1 = worst
            .1
            .max((m.i_tilde + m.j_tilde - 2.0 * m.v_sym).abs() / scale);
    }
    out.require(
        worst.0 <= 1e-9,
        format!("u^2 vs product: relative error {:e}", worst.0),
    );
    out.require(
        worst.1 <= 1e-9,
        format!("skew + anti vs 2 V: relative error {:e}", worst.1),
    );
    out.note(format!(
        "500 channel draws: max rel. errors {:e}, {:e}",
        worst.0, worst.1
    ));

    let mut worst_split = 0.0f64;
    for _ in 0..500 {
        let dim = rng.next_range(2, 4);
        let rho = random_density(dim, rng.next_range(1, dim), rng.next_u64()).unwrap();
        let k = random_operator(dim, rng.next_u64(), false);
        let (a, b) = cartesian_decompose(&k);
        let lhs = rho.expectation(&k).unwrap().norm_sqr();
        let rhs = rho.expectation(&a).unwrap().norm_sqr() + rho.expectation(&b).unwrap().norm_sqr();
        worst_split = worst_split.max((lhs - rhs).abs());
    }
    out.require(
        worst_split <= 1e-12,
        format!("modulus split error {worst_split:e}"),
    );
    out.note(format!(
        "500 operator draws: max modulus split error {worst_split:e}"
    ));

    let mut worst_pure = 0.0f64;
    for _ in 0..200 {
        let dim = rng.next_range(2, 4);
        let v: Vec<_> = (0..dim).map(|_| rng.next_complex_gaussian()).collect();
        let rho = DensityMatrix::pure(&v).unwrap();
        let k = random_operator(dim, rng.next_u64(), true);
        let diff = (mwy_skew_info(&rho, &k).unwrap() - abs_variance(&rho, &k).unwrap()).abs();
        worst_pure = worst_pure.max(diff);
    }
    out.require(
        worst_pure <= 1e-10,
        format!("pure-state skew vs variance {worst_pure:e}"),
    );
    out.note(format!(
        "200 pure states: max |skew - variance| = {worst_pure:e}"
    ));
    out
}

fn linalg_kernel() -> Outcome {
    let mut out = Outcome::default();
    let mut rng = SplitMix64::new(11);
    let (mut worst_eig, mut worst_sqrt) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let dim = rng.next_range(2, 8);
        let h = random_operator(dim, rng.next_u64(), true);
        let d = hermitian_eig(&h).unwrap();
        worst_eig =
            worst_eig.max((&d.reconstruct() - &h).frobenius_norm() / h.frobenius_norm().max(1.0));

        let g = random_operator(dim, rng.next_u64(), false);
        let p = &g * &g.adjoint();
        let s = psd_sqrt(&p).unwrap();
        worst_sqrt =
            worst_sqrt.max((&(&s * &s) - &p).frobenius_norm() / p.frobenius_norm().max(1.0));
    }
    out.require(
        worst_eig <= 1e-9,
        format!("eigen reconstruction {worst_eig:e}"),
    );
    out.require(
        worst_sqrt <= 1e-9,
        format!("square root residual {worst_sqrt:e}"),
    );
    out.note(format!(
        "500 draws, dims 2-8: reconstruction {worst_eig:e}, square root {worst_sqrt:e}"
    ));

    let rho = examples::werner_state(1.0).unwrap();
    let ev = hermitian_eig(rho.matrix()).unwrap().eigenvalues;
    let expected = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
    let err = ev
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.require(err <= 1e-10, format!("werner spectrum {ev:?}"));
    out.note(format!("werner(1) spectrum {ev:?}"));
    out
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        criterion(
            1,
            "incoherent states have zero |U|",
            secs(1),
            degenerate_nullity,
        ),
        criterion(
            2,
            "werner closed forms (theta = 1)",
            secs(10),
            werner_closed_forms,
        ),
        criterion(
            3,
            "rho_theta closed forms (theta = 0)",
            secs(10),
            rho_theta_closed_forms,
        ),
        criterion(4, "bound orderings on the example grids", None, orderings),
        criterion(
            5,
            "bounds vanish for identity channels",
            None,
            edge_vanishing,
        ),
        criterion(
            6,
            "randomized validity of every relation",
            secs(60),
            randomized_validity,
        ),
        criterion(7, "measure identities", None, identity_suite),
        criterion(8, "linear-algebra kernel", None, linalg_kernel),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
