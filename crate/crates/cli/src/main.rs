mod args;
mod commands;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use serde_json::{json, Value};

use args::{Cli, Command, FamilyArg, Grid, MRule, Order, Output, Preset};
use commands::{MarginalJob, McJob, Outcome, SweepJob};

const EXIT_USAGE: u8 = 64;

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n");
    let _ = Cli::command().write_help(&mut io::stderr());
    ExitCode::from(EXIT_USAGE)
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("UEPLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("UEPLAB_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("UEPLAB_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn check_grid(g: &Grid) -> Result<(), String> {
    if g.family != FamilyArg::Gaussian && g.m.is_none() {
        return Err(format!("--m is required for --family {}", ueplab::radial::Family::from(g.family)));
    }
    Ok(())
}

/// Worst row status: non-convergence beats domain errors and failed checks.
fn exit_status(o: &Outcome) -> u8 {
    let mut code = 0;
    for name in ["status", "result"] {
        let Some(col) = o.table.column(name) else { continue };
        for row in &o.table.rows {
            match &row[col] {
                table::Cell::Text(s) if s == "nonconverged" => return 2,
                table::Cell::Text(s) if s == "error" || s == "mismatch" || s == "FAIL" => code = 1,
                _ => {}
            }
        }
    }
    code
}

fn emit(o: &Outcome, out: &Output, tol: Option<f64>) -> io::Result<()> {
    let mut meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "invocation": std::env::args().collect::<Vec<_>>(),
    });
    let mut extra = o.meta.clone();
    if let (Some(t), Value::Object(m)) = (tol, &mut extra) {
        m.insert("tol".into(), json!(t));
    }
    meta["tolerances"] = extra;
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            o.table.write(&mut w, out.format.into(), meta)?;
            w.flush()
        }
        None => {
            let mut w = io::stdout().lock();
            o.table.write(&mut w, out.format.into(), meta)?;
            w.flush()
        }
    }
}

fn preset(p: &Preset, family: FamilyArg, rules: &[MRule], orders: Vec<Order>) -> Outcome {
    commands::sweep(&SweepJob {
        family,
        rules: rules.iter().copied().map(Some).collect(),
        ns: (1..=p.nmax.max(1)).collect(),
        orders,
        tol: p.tol,
        quadrature: false,
    })
}

fn run(cli: Cli) -> Result<(Outcome, Output, Option<f64>), String> {
    let qs = |v: &[f64]| v.iter().map(|&q| Order::Q(q)).collect::<Vec<_>>();
    Ok(match cli.command {
        Command::Bound { orders, out } => (commands::bound(&orders.list()), out, None),
        Command::Usum { grid, orders, quadrature, tol, out } => {
            check_grid(&grid)?;
            let job = SweepJob {
                family: grid.family,
                rules: vec![grid.m],
                ns: grid.n,
                orders: orders.list(),
                tol,
                quadrature,
            };
            (commands::sweep(&job), out, Some(tol))
        }
        Command::Sweep { family, n, m, orders, tol, out } => {
            if family != FamilyArg::Gaussian && m.is_empty() {
                return Err(format!("--m is required for --family {}", ueplab::radial::Family::from(family)));
            }
            let rules = if m.is_empty() { vec![None] } else { m.into_iter().map(Some).collect() };
            let job = SweepJob { family, rules, ns: n, orders: orders.list(), tol, quadrature: false };
            (commands::sweep(&job), out, Some(tol))
        }
        Command::Kl { grid, quadrature, out } => {
            check_grid(&grid)?;
            (commands::kl(grid.family, &grid.n, grid.m, quadrature), out, None)
        }
        Command::Tv { grid, out } => {
            check_grid(&grid)?;
            (commands::tv(grid.family, &grid.n, grid.m), out, None)
        }
        Command::McVerify { grid, lambda, samples, seed, bins, out } => {
            check_grid(&grid)?;
            let job = McJob { family: grid.family, ns: grid.n, rule: grid.m, lambdas: lambda, samples, seed, bins };
            (commands::mc_verify(&job), out, None)
        }
        Command::Marginal { grid, k, standardize, xmax, points, out } => {
            check_grid(&grid)?;
            let job =
                MarginalJob { family: grid.family, ns: grid.n, rule: grid.m, k: k as usize, standardize, xmax, points };
            (commands::marginal(&job), out, None)
        }
        Command::Selftest { out } => (commands::selftest(), out, None),
        Command::Fig1(p) => {
            let o = preset(
                &p,
                FamilyArg::StudentT,
                &[MRule::Fixed(1.0)],
                vec![Order::P(2.0), Order::P(3.0), Order::P(10.0)],
            );
            (o, p.out.clone(), Some(p.tol))
        }
        Command::Fig2(p) => {
            let o = preset(&p, FamilyArg::StudentR, &[MRule::Times(1.0)], qs(&[2.1, 3.0, 10.0]));
            (o, p.out.clone(), Some(p.tol))
        }
        Command::Fig3(p) => {
            let o = preset(&p, FamilyArg::StudentR, &[MRule::NPlus(2.0), MRule::Times(2.0)], qs(&[2.1, 3.0, 10.0]));
            (o, p.out.clone(), Some(p.tol))
        }
        Command::Fig4 { out } => (commands::fig4(), out, None),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            eprintln!();
            let _ = Cli::command().write_help(&mut io::stderr());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(e) = init_threads() {
        return usage_error(&e);
    }
    let (outcome, out, tol) = match run(cli) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    if let Err(e) = emit(&outcome, &out, tol) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(exit_status(&outcome))
}
