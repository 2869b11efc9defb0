//! Subcommand bodies. Each returns a [`Table`]; rows are computed in parallel and kept in grid order.

use rayon::prelude::*;
use serde_json::{json, Value};
use ueplab::divergence::{
    df_bound, j_lower, j_upper, kl_gaussian_studentt, kl_radial_with_error, kl_studentr_gaussian, tv_radial,
};
use ueplab::entropy::{renyi_bound, renyi_entropy_radial, usum, usum_order, usum_quadrature, EntropyOrder};
use ueplab::montecarlo::{mc_kl, mc_power_integral, radial_gof, MCEstimate};
use ueplab::radial::{
    conj_radial_pdf, existence_threshold, matched_gaussian, moment, radial_pdf, EllipticalLaw, Family, Side,
};
use ueplab::{Error, Result};

use crate::args::{make_law, FamilyArg, MRule, Order};
use crate::table::{Cell, Table};

/// Tables plus per-row diagnostics, printed to stderr in row order.
pub struct Outcome {
    pub table: Table,
    pub notes: Vec<String>,
    pub meta: Value,
}

impl Outcome {
    fn new(table: Table, notes: Vec<String>, meta: Value) -> Self {
        Self { table, notes, meta }
    }
}

type RowResult = (Vec<Cell>, Option<String>);

fn par_rows<T: Sync>(jobs: &[T], f: impl Fn(&T) -> RowResult + Sync + Send) -> (Vec<Vec<Cell>>, Vec<String>) {
    let out: Vec<RowResult> = jobs.par_iter().map(f).collect();
    let mut notes = Vec::new();
    let rows = out
        .into_iter()
        .map(|(row, note)| {
            notes.extend(note);
            row
        })
        .collect();
    (rows, notes)
}

/// Row status and, for undefined orders, the violated threshold.
fn failure(e: &Error) -> (&'static str, Cell) {
    match e {
        Error::Undefined { threshold, .. } => ("undefined", Cell::Real(*threshold)),
        Error::Domain(_) => ("error", Cell::Empty),
        Error::NonConvergence(_) => ("nonconverged", Cell::Empty),
    }
}

fn family_cell(f: FamilyArg) -> Cell {
    Cell::text(Family::from(f).to_string())
}

fn m_cell(f: FamilyArg, m: Option<f64>) -> Cell {
    if f == FamilyArg::Gaussian {
        Cell::Empty
    } else {
        Cell::opt(m)
    }
}

fn p_of(o: Order) -> Result<EntropyOrder> {
    match o {
        Order::P(p) => EntropyOrder::from_p(p),
        Order::Q(q) => EntropyOrder::from_q(q),
    }
}

pub fn bound(orders: &[Order]) -> Outcome {
    let mut t = Table::new(&["p", "q", "bound", "status"]);
    let mut notes = Vec::new();
    for &o in orders {
        match p_of(o).and_then(|e| Ok((e, renyi_bound(e.p)?))) {
            Ok((e, b)) => t.push(vec![Cell::Real(e.p), Cell::Real(e.q), Cell::Real(b), Cell::text("ok")]),
            Err(err) => {
                let (p, q) = match o {
                    Order::P(p) => (Cell::Real(p), Cell::Empty),
                    Order::Q(q) => (Cell::Empty, Cell::Real(q)),
                };
                notes.push(err.to_string());
                t.push(vec![p, q, Cell::Empty, Cell::text(failure(&err).0)]);
            }
        }
    }
    Outcome::new(t, notes, json!({}))
}

pub struct SweepJob {
    pub family: FamilyArg,
    pub rules: Vec<Option<MRule>>,
    pub ns: Vec<usize>,
    pub orders: Vec<Order>,
    pub tol: f64,
    pub quadrature: bool,
}

pub const SWEEP_COLUMNS: &[&str] =
    &["family", "n", "m", "p", "q", "U", "bound", "gap", "method", "err", "status", "threshold"];

pub fn sweep(job: &SweepJob) -> Outcome {
    let mut points = Vec::new();
    for rule in &job.rules {
        for &o in &job.orders {
            for &n in &job.ns {
                points.push((n, rule.map(|r| r.m(n)), o));
            }
        }
    }
    let (rows, notes) = par_rows(&points, |&(n, m, o)| {
        let head = [family_cell(job.family), Cell::Int(n as i64), m_cell(job.family, m)];
        let res = p_of(o).and_then(|eo| {
            let law = make_law(job.family, n, m)?;
            if job.quadrature {
                usum_quadrature(&law, eo.p, job.tol)
            } else {
                usum_order(&law, eo, job.tol)
            }
        });
        match res {
            Ok(u) => {
                let mut row = head.to_vec();
                row.extend([
                    Cell::Real(u.order.p),
                    Cell::Real(u.order.q),
                    Cell::Real(u.value),
                    Cell::Real(u.bound),
                    Cell::Real(u.gap),
                    Cell::text(u.method.to_string()),
                    Cell::Real(u.error_estimate),
                    Cell::text("ok"),
                    Cell::Empty,
                ]);
                (row, None)
            }
            Err(e) => {
                let (status, thr) = failure(&e);
                let (p, q) = match p_of(o) {
                    Ok(eo) => (Cell::Real(eo.p), Cell::Real(eo.q)),
                    Err(_) => match o {
                        Order::P(p) => (Cell::Real(p), Cell::Empty),
                        Order::Q(q) => (Cell::Empty, Cell::Real(q)),
                    },
                };
                let mut row = head.to_vec();
                row.extend([
                    p,
                    q,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::text(status),
                    thr,
                ]);
                let note = (status != "undefined").then(|| format!("n={n}{}: {e}", at_m(m)));
                (row, note)
            }
        }
    });
    let mut t = Table::new(SWEEP_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    let rules: Vec<String> = job.rules.iter().flatten().map(|r| r.to_string()).collect();
    Outcome::new(t, notes, json!({ "tol": job.tol, "m_rules": rules, "quadrature": job.quadrature }))
}

fn at_m(m: Option<f64>) -> String {
    m.map_or(String::new(), |m| format!(" m={m}"))
}

fn grid_points(ns: &[usize], rule: Option<MRule>) -> Vec<(usize, Option<f64>)> {
    ns.iter().map(|&n| (n, rule.map(|r| r.m(n)))).collect()
}

fn exp_err(r: &ueplab::quadrature::LogQuadResult) -> f64 {
    r.log_abs_error.exp()
}

fn radial_kl(a: &EllipticalLaw, b: &EllipticalLaw) -> Result<(f64, f64)> {
    let r = kl_radial_with_error(&radial_pdf(a)?, &radial_pdf(b)?)?;
    Ok((r.to_f64(), exp_err(&r)))
}

pub fn kl(family: FamilyArg, ns: &[usize], rule: Option<MRule>, quadrature: bool) -> Outcome {
    const COLS: &[&str] = &[
        "family",
        "n",
        "m",
        "forward",
        "reverse",
        "rate_forward",
        "rate_reverse",
        "asymptotic",
        "j",
        "j_lower",
        "j_upper",
        "forward_quad",
        "reverse_quad",
        "method",
        "err",
        "status",
    ];
    let points = grid_points(ns, rule);
    let (rows, notes) = par_rows(&points, |&(n, m)| {
        let res = (|| {
            let law = make_law(family, n, m)?;
            let rep = match family {
                FamilyArg::StudentT => kl_gaussian_studentt(n, law.m())?,
                FamilyArg::StudentR => kl_studentr_gaussian(n, law.m())?,
                FamilyArg::Gaussian => return Err(Error::Domain("the Gaussian is its own matched Gaussian".into())),
            };
            let quad = if quadrature {
                let g = matched_gaussian(&law)?;
                let (f, fe) = radial_kl(&law, &g)?;
                let (r, re) = radial_kl(&g, &law)?;
                Some((f, r, fe.max(re)))
            } else {
                None
            };
            Ok((rep, quad))
        })();
        let mut row = vec![family_cell(family), Cell::Int(n as i64), m_cell(family, m)];
        match res {
            Ok((rep, quad)) => {
                let reverse = rep.reverse.or(match family {
                    // the Gaussian puts mass outside the compact support
                    FamilyArg::StudentR => Some(f64::INFINITY),
                    _ => None,
                });
                let rate_reverse = rep.rate_reverse.or(reverse.map(|v| v / n as f64));
                row.extend([
                    Cell::Real(rep.forward),
                    Cell::opt(reverse),
                    Cell::Real(rep.rate_forward),
                    Cell::opt(rate_reverse),
                    Cell::opt(rep.asymptotic),
                    Cell::opt(rep.j_integral),
                    Cell::opt(rep.j_lower),
                    Cell::opt(rep.j_upper),
                    Cell::opt(quad.map(|q| q.0)),
                    Cell::opt(quad.map(|q| q.1)),
                    Cell::text(if quad.is_some() { "closed-form+quadrature" } else { "closed-form" }),
                    Cell::opt(quad.map(|q| q.2)),
                    Cell::text("ok"),
                ]);
                (row, None)
            }
            Err(e) => {
                row.extend(vec![Cell::Empty; COLS.len() - 4]);
                row.push(Cell::text(failure(&e).0));
                (row, Some(format!("n={n}{}: {e}", at_m(m))))
            }
        }
    });
    let mut t = Table::new(COLS);
    rows.into_iter().for_each(|r| t.push(r));
    Outcome::new(t, notes, json!({}))
}

pub fn tv(family: FamilyArg, ns: &[usize], rule: Option<MRule>) -> Outcome {
    const COLS: &[&str] = &["family", "n", "m", "tv", "df_bound", "method", "status"];
    let points = grid_points(ns, rule);
    let (rows, notes) = par_rows(&points, |&(n, m)| {
        let res = (|| {
            let law = make_law(family, n, m)?;
            let g = matched_gaussian(&law)?;
            tv_radial(&radial_pdf(&law)?, &radial_pdf(&g)?)
        })();
        let mut row = vec![family_cell(family), Cell::Int(n as i64), m_cell(family, m)];
        let bound = m.filter(|_| family != FamilyArg::Gaussian).and_then(|m| df_bound(n, m).ok());
        match res {
            Ok(v) => {
                row.extend([Cell::Real(v), Cell::opt(bound), Cell::text("quadrature"), Cell::text("ok")]);
                (row, None)
            }
            Err(e) => {
                row.extend([Cell::Empty, Cell::opt(bound), Cell::Empty, Cell::text(failure(&e).0)]);
                (row, Some(format!("n={n}{}: {e}", at_m(m))))
            }
        }
    });
    let mut t = Table::new(COLS);
    rows.into_iter().for_each(|r| t.push(r));
    Outcome::new(t, notes, json!({}))
}

/// |Δ| ≤ 4σ (plus a relative floor for zero-variance summands) counts as agreement.
fn agrees(est: &MCEstimate, want: f64) -> bool {
    (est.mean - want).abs() <= 4.0 * est.stderr + 1e-12 * want.abs()
}

pub struct McJob {
    pub family: FamilyArg,
    pub ns: Vec<usize>,
    pub rule: Option<MRule>,
    pub lambdas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
}

struct McRow {
    name: &'static str,
    lambda: Option<f64>,
    mean: f64,
    stderr: Option<f64>,
    reference: Option<f64>,
    status: &'static str,
}

fn mc_status(est: &MCEstimate, want: f64) -> &'static str {
    if est.unreliable {
        "unreliable"
    } else if agrees(est, want) {
        "ok"
    } else {
        "mismatch"
    }
}

#[derive(Clone, Copy)]
enum McQuantity {
    Power(f64),
    Gof,
    KlForward,
    KlReverse,
}

pub fn mc_verify(job: &McJob) -> Outcome {
    const COLS: &[&str] =
        &["family", "n", "m", "quantity", "lambda", "mc", "stderr", "reference", "z", "method", "status"];
    let mut points = Vec::new();
    for (n, m) in grid_points(&job.ns, job.rule) {
        for &l in &job.lambdas {
            points.push((n, m, McQuantity::Power(l)));
        }
        points.push((n, m, McQuantity::Gof));
        if job.family != FamilyArg::Gaussian {
            points.push((n, m, McQuantity::KlForward));
            if job.family == FamilyArg::StudentT {
                points.push((n, m, McQuantity::KlReverse));
            }
        }
    }
    let (rows, notes) = par_rows(&points, |&(n, m, q)| {
        // one seed per row so that rows do not share draws
        let seed = job.seed.wrapping_add((n as u64) << 8);
        let mut row = vec![family_cell(job.family), Cell::Int(n as i64), m_cell(job.family, m)];
        let res: Result<McRow> = (|| {
            let law = make_law(job.family, n, m)?;
            match q {
                McQuantity::Power(l) => {
                    let est = mc_power_integral(&law, l, job.samples, seed ^ l.to_bits())?;
                    let h = renyi_entropy_radial(&radial_pdf(&law)?, l)?;
                    let want = if l == 1.0 { h } else { ((1.0 - l) * h).exp() };
                    let name = if l == 1.0 { "entropy" } else { "power_integral" };
                    let status = mc_status(&est, want);
                    Ok(McRow {
                        name,
                        lambda: Some(l),
                        mean: est.mean,
                        stderr: Some(est.stderr),
                        reference: Some(want),
                        status,
                    })
                }
                McQuantity::Gof => {
                    let g = radial_gof(&law, job.samples, seed ^ 0x9E37, job.bins)?;
                    let status = if g.p_value > 1e-3 { "ok" } else { "mismatch" };
                    Ok(McRow {
                        name: "gof_p_value",
                        lambda: None,
                        mean: g.p_value,
                        stderr: None,
                        reference: None,
                        status,
                    })
                }
                McQuantity::KlForward | McQuantity::KlReverse => {
                    let g = matched_gaussian(&law)?;
                    let (a, b, name) = match q {
                        McQuantity::KlForward => (&law, &g, "kl_forward"),
                        _ => (&g, &law, "kl_reverse"),
                    };
                    let est = mc_kl(a, b, job.samples, seed ^ 0x5851)?;
                    let rep = match job.family {
                        FamilyArg::StudentT => kl_gaussian_studentt(n, law.m())?,
                        _ => kl_studentr_gaussian(n, law.m())?,
                    };
                    let want = match q {
                        McQuantity::KlForward => rep.forward,
                        _ => rep.reverse.unwrap_or(f64::INFINITY),
                    };
                    let status = mc_status(&est, want);
                    Ok(McRow {
                        name,
                        lambda: None,
                        mean: est.mean,
                        stderr: Some(est.stderr),
                        reference: Some(want),
                        status,
                    })
                }
            }
        })();
        match res {
            Ok(McRow { name, lambda, mean, stderr, reference: want, status }) => {
                let z = match (stderr, want) {
                    (Some(s), Some(w)) if s > 0.0 => Some((mean - w).abs() / s),
                    _ => None,
                };
                row.extend([
                    Cell::text(name),
                    Cell::opt(lambda),
                    Cell::Real(mean),
                    Cell::opt(stderr),
                    Cell::opt(want),
                    Cell::opt(z),
                    Cell::text("mc"),
                    Cell::text(status),
                ]);
                (row, None)
            }
            Err(e) => {
                let (name, lambda) = match q {
                    McQuantity::Power(l) => ("power_integral", Some(l)),
                    McQuantity::Gof => ("gof_p_value", None),
                    McQuantity::KlForward => ("kl_forward", None),
                    McQuantity::KlReverse => ("kl_reverse", None),
                };
                row.extend([Cell::text(name), Cell::opt(lambda)]);
                row.extend(vec![Cell::Empty; 4]);
                row.extend([Cell::text("mc"), Cell::text(failure(&e).0)]);
                (row, Some(format!("n={n}{} {name}: {e}", at_m(m))))
            }
        }
    });
    let mut t = Table::new(COLS);
    rows.into_iter().for_each(|r| t.push(r));
    Outcome::new(t, notes, json!({ "samples": job.samples, "seed": job.seed, "bins": job.bins }))
}

pub struct MarginalJob {
    pub family: FamilyArg,
    pub ns: Vec<usize>,
    pub rule: Option<MRule>,
    pub k: usize,
    pub standardize: bool,
    pub xmax: f64,
    pub points: usize,
}

pub const MARGINAL_COLUMNS: &[&str] = &["family", "n", "m", "k", "x", "y", "density", "gaussian", "status"];

/// Rescales to unit variance per component.
fn standardized(law: &EllipticalLaw) -> Result<EllipticalLaw> {
    let var = moment(law, Side::Direct, 2.0)? / law.n() as f64;
    if !(var.is_finite() && var > 0.0) {
        return Err(Error::Domain("the law has no finite covariance".into()));
    }
    law.clone().with_scale(law.scale() / var.sqrt())
}

pub fn marginal(job: &MarginalJob) -> Outcome {
    let axis: Vec<f64> = match job.points {
        0 => Vec::new(),
        1 => vec![0.0],
        p => (0..p).map(|i| (2 * i) as f64 - (p - 1) as f64).map(|j| job.xmax * j / (p - 1) as f64).collect(),
    };
    let mut table = Table::new(MARGINAL_COLUMNS);
    let mut notes = Vec::new();
    for (n, m) in grid_points(&job.ns, job.rule) {
        let head = [family_cell(job.family), Cell::Int(n as i64), m_cell(job.family, m), Cell::Int(job.k as i64)];
        let laws = (|| {
            if job.k > n {
                return Err(Error::Domain(format!("marginal dimension {} exceeds n = {n}", job.k)));
            }
            let mut law = make_law(job.family, n, m)?;
            if job.standardize {
                law = standardized(&law)?;
            }
            let gauss = matched_gaussian(&law).and_then(|g| g.with_dimension(job.k)).ok();
            Ok((law.with_dimension(job.k)?, gauss))
        })();
        let (marg, gauss) = match laws {
            Ok(v) => v,
            Err(e) => {
                notes.push(format!("n={n}{}: {e}", at_m(m)));
                let mut row = head.to_vec();
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::text(failure(&e).0)]);
                table.push(row);
                continue;
            }
        };
        let pts: Vec<Vec<f64>> = if job.k == 1 {
            axis.iter().map(|&x| vec![x]).collect()
        } else {
            axis.iter().flat_map(|&x| axis.iter().map(move |&y| vec![x, y])).collect()
        };
        let (rows, more) = par_rows(&pts, |x| {
            let mut row = head.to_vec();
            row.push(Cell::Real(x[0]));
            row.push(x.get(1).copied().map_or(Cell::Empty, Cell::Real));
            let g = gauss.as_ref().and_then(|g| g.log_density(x).ok()).map(f64::exp);
            match marg.log_density(x) {
                Ok(l) => {
                    row.extend([Cell::Real(l.exp()), Cell::opt(g), Cell::text("ok")]);
                    (row, None)
                }
                Err(e) => {
                    row.extend([Cell::Empty, Cell::opt(g), Cell::text(failure(&e).0)]);
                    (row, Some(format!("n={n} x={x:?}: {e}")))
                }
            }
        });
        notes.extend(more);
        rows.into_iter().for_each(|r| table.push(r));
    }
    Outcome::new(table, notes, json!({ "k": job.k, "standardize": job.standardize }))
}

/// Uniform vectors (m = n): one-dimensional marginals for n = 1, 2, 5, 10 and the two-dimensional one for n = 10.
pub fn fig4() -> Outcome {
    let rule = Some(MRule::Times(1.0));
    let mut one = marginal(&MarginalJob {
        family: FamilyArg::StudentR,
        ns: vec![1, 2, 5, 10],
        rule,
        k: 1,
        standardize: true,
        xmax: 3.0,
        points: 121,
    });
    let two = marginal(&MarginalJob {
        family: FamilyArg::StudentR,
        ns: vec![10],
        rule,
        k: 2,
        standardize: true,
        xmax: 3.0,
        points: 61,
    });
    one.table.extend(two.table);
    one.notes.extend(two.notes);
    one.meta = json!({ "standardize": true, "m_rule": "times:1" });
    one
}

struct Probe {
    name: &'static str,
    run: fn() -> Result<(bool, String)>,
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

fn t(n: usize, m: f64) -> Result<EllipticalLaw> {
    EllipticalLaw::student_t(n, m)
}

fn r(n: usize, m: f64) -> Result<EllipticalLaw> {
    EllipticalLaw::student_r(n, m)
}

const PROBES: &[Probe] = &[
    Probe {
        name: "bound at p = 2 equals 1 + ln pi",
        run: || {
            let b = renyi_bound(2.0)?;
            Ok((close(b, 1.0 + std::f64::consts::PI.ln(), 1e-15), format!("B(2) = {b}")))
        },
    },
    Probe {
        name: "bound is symmetric in p and q",
        run: || {
            let (a, b) = (renyi_bound(3.0)?, renyi_bound(1.5)?);
            Ok((close(a, b, 1e-14), format!("B(3) = {a}, B(1.5) = {b}")))
        },
    },
    Probe {
        name: "gaussian attains the bound",
        run: || {
            let mut worst: f64 = 0.0;
            for p in [1.2, 2.0, 3.0, 10.0] {
                worst = worst.max(usum(&EllipticalLaw::gaussian(4)?, p, 1e-10)?.gap.abs());
            }
            Ok((worst < 1e-12, format!("max |gap| = {worst:e}")))
        },
    },
    Probe {
        name: "closed forms match generic quadrature",
        run: || {
            let cases = [(t(3, 1.0)?, 2.0), (t(2, 5.0)?, 3.0), (r(3, 3.0)?, 1.5), (r(2, 2.0)?, 2.0), (r(4, 6.0)?, 1.8)];
            let mut worst: f64 = 0.0;
            for (law, p) in &cases {
                let a = usum(law, *p, 1e-10)?.value;
                let b = usum_quadrature(law, *p, 1e-10)?.value;
                worst = worst.max((a - b).abs() / b.abs());
            }
            Ok((worst < 1e-8, format!("max relative difference {worst:e}")))
        },
    },
    Probe {
        name: "uncertainty sums exceed the bound",
        run: || {
            let mut worst = f64::INFINITY;
            for n in [1usize, 2, 5, 16] {
                let nf = n as f64;
                for (law, p) in [(t(n, 1.0)?, 2.0), (t(n, nf + 2.0)?, 3.0), (r(n, nf)?, 1.5), (r(n, 2.0 * nf)?, 2.0)] {
                    worst = worst.min(usum(&law, p, 1e-10)?.gap);
                }
            }
            Ok((worst >= 0.0, format!("smallest gap {worst:e}")))
        },
    },
    Probe {
        name: "cauchy gap decreases with n",
        run: || {
            let gaps: Vec<f64> = (1..=16).map(|n| Ok(usum(&t(n, 1.0)?, 2.0, 1e-10)?.gap)).collect::<Result<_>>()?;
            let ok = gaps.windows(2).all(|w| w[1] < w[0]);
            Ok((ok, format!("gap(1) = {:.6}, gap(16) = {:.6}", gaps[0], gaps[15])))
        },
    },
    Probe {
        name: "radial densities integrate to one",
        run: || {
            let mut worst: f64 = 0.0;
            for law in [t(3, 1.0)?, t(5, 4.5)?, r(2, 2.0)?, r(6, 9.0)?] {
                worst = worst.max((radial_pdf(&law)?.mass(0.0, f64::INFINITY, 1e-10)? - 1.0).abs());
                worst = worst.max((conj_radial_pdf(&law)?.mass(0.0, f64::INFINITY, 1e-10)? - 1.0).abs());
            }
            Ok((worst < 1e-8, format!("max |mass - 1| = {worst:e}")))
        },
    },
    Probe {
        name: "existence threshold is sharp",
        run: || {
            let law = t(4, 1.0)?;
            let thr = existence_threshold(&law).p_min;
            let below = usum(&law, thr - 1e-3, 1e-10);
            let above = usum(&law, thr + 1e-3, 1e-10)?;
            let ok = matches!(below, Err(Error::Undefined { .. })) && above.value.is_finite();
            Ok((ok, format!("p_min = {thr}")))
        },
    },
    Probe {
        name: "kl closed forms match quadrature",
        run: || {
            let mut worst: f64 = 0.0;
            for law in [t(3, 5.0)?, r(3, 4.0)?] {
                let g = matched_gaussian(&law)?;
                let rep = match law.family() {
                    Family::StudentT => kl_gaussian_studentt(3, law.m())?,
                    _ => kl_studentr_gaussian(3, law.m())?,
                };
                worst = worst.max((radial_kl(&law, &g)?.0 - rep.forward).abs());
                if let Some(rev) = rep.reverse {
                    worst = worst.max((radial_kl(&g, &law)?.0 - rev).abs());
                }
            }
            Ok((worst < 1e-8, format!("max |difference| = {worst:e}")))
        },
    },
    Probe {
        name: "j lies between its bounds",
        run: || {
            let mut ok = true;
            for n in 1..=32usize {
                for m in [2.5, 3.0, 5.0, 10.0] {
                    let j = kl_gaussian_studentt(n, m)?.j_integral.unwrap_or(f64::NAN);
                    ok &= j_lower(n, m) <= j && j <= j_upper(n, m);
                }
            }
            Ok((ok, "n = 1..32, m in {2.5, 3, 5, 10}".into()))
        },
    },
    Probe {
        name: "diaconis-freedman bound holds",
        run: || {
            let mut worst = f64::INFINITY;
            for (n, m) in [(1usize, 3.0), (2, 10.0), (4, 20.0), (8, 64.0)] {
                let law = r(n, m)?;
                let tv = tv_radial(&radial_pdf(&law)?, &radial_pdf(&matched_gaussian(&law)?)?)?;
                worst = worst.min(df_bound(n, m)? - tv);
            }
            Ok((worst >= 0.0, format!("smallest slack {worst:e}")))
        },
    },
    Probe {
        name: "monte-carlo agrees with quadrature",
        run: || {
            let law = t(3, 5.0)?;
            let est = mc_power_integral(&law, 2.0, 200_000, 11)?;
            let want = (-renyi_entropy_radial(&radial_pdf(&law)?, 2.0)?).exp();
            let gof = radial_gof(&r(2, 4.0)?, 200_000, 12, 20)?;
            let ok = !est.unreliable && agrees(&est, want) && gof.p_value > 1e-3;
            Ok((ok, format!("z = {:.2}, gof p = {:.3}", est.z_score(want), gof.p_value)))
        },
    },
];

pub fn selftest() -> Outcome {
    let (rows, notes) = par_rows(PROBES, |p| {
        let (verdict, detail) = match (p.run)() {
            Ok((true, d)) => ("PASS", d),
            Ok((false, d)) => ("FAIL", d),
            Err(e) => ("FAIL", e.to_string()),
        };
        (vec![Cell::text(p.name), Cell::text(verdict), Cell::text(detail)], None)
    });
    let mut t = Table::new(&["check", "result", "detail"]);
    rows.into_iter().for_each(|r| t.push(r));
    Outcome::new(t, notes, json!({}))
}
