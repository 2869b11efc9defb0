//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ueplab::radial::{EllipticalLaw, Family};

use crate::table::Format;

#[derive(Parser, Debug)]
#[command(
    name = "ueplab",
    version,
    about = "Entropic uncertainty sums, divergences and Monte-Carlo checks for elliptical laws"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower bound B(p) of the uncertainty sum.
    Bound {
        #[command(flatten)]
        orders: Orders,
        #[command(flatten)]
        out: Output,
    },
    /// Uncertainty sums U_p for one law family over a grid of dimensions.
    Usum {
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        orders: Orders,
        /// Integrate both radial entropies numerically instead of using the per-family formulas.
        #[arg(long)]
        quadrature: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Like `usum`, accepting several --m rules; rows come out grouped by rule, then order, then n.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        /// Degrees-of-freedom rule, repeatable.
        #[arg(long = "m", value_parser = parse_m_rule)]
        m: Vec<MRule>,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Kullback-Leibler divergences between a Student law and the Gaussian with the same covariance.
    Kl {
        #[command(flatten)]
        grid: Grid,
        /// Also integrate the divergences over the norm densities.
        #[arg(long)]
        quadrature: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Total-variation distance to the Gaussian with the same covariance.
    Tv {
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        out: Output,
    },
    /// Monte-Carlo estimates next to their quadrature and closed-form counterparts.
    McVerify {
        #[command(flatten)]
        grid: Grid,
        /// Rényi orders λ of ∫f^λ to estimate (1 means Shannon).
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0])]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bins of the radial goodness-of-fit test.
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Marginal densities of the first k components on a grid.
    Marginal {
        #[command(flatten)]
        grid: Grid,
        /// Marginal dimension, 1 or 2.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
        /// Rescale the law to unit variance per component.
        #[arg(long)]
        standardize: bool,
        /// Grid half-width.
        #[arg(long, default_value_t = 3.0)]
        xmax: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 121)]
        points: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the invariant suite and prints a pass/fail table.
    Selftest {
        #[command(flatten)]
        out: Output,
    },
    /// Cauchy uncertainty sums, p = 2, 3, 10, n = 1..64.
    Fig1(Preset),
    /// Uniform (Student-r, m = n) uncertainty sums, q = 2.1, 3, 10.
    Fig2(Preset),
    /// Student-r uncertainty sums for m = n + 2 and m = 2n, q = 2.1, 3, 10.
    Fig3(Preset),
    /// Standardized one- and two-dimensional marginals of uniform vectors.
    Fig4 {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
pub struct Preset {
    /// Largest dimension.
    #[arg(long, default_value_t = 64)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct Grid {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Dimensions: a list and/or inclusive ranges, e.g. `1..64`, `1..64:4`, `2,5,10`.
    #[arg(long, value_parser = parse_n_list)]
    pub n: NList,
    /// Degrees of freedom: `fixed:V`, `nplus:C`, `times:C` or a bare number.
    #[arg(long = "m", value_parser = parse_m_rule)]
    pub m: Option<MRule>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Orders {
    /// Orders p (q = p/(p−1)).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Orders q (p = q/(q−1)).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    Gaussian,
    StudentT,
    StudentR,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Gaussian => Family::Gaussian,
            FamilyArg::StudentT => Family::StudentT,
            FamilyArg::StudentR => Family::StudentR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    P(f64),
    Q(f64),
}

impl Orders {
    pub fn list(&self) -> Vec<Order> {
        if self.p.is_empty() {
            self.q.iter().map(|&q| Order::Q(q)).collect()
        } else {
            self.p.iter().map(|&p| Order::P(p)).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MRule {
    Fixed(f64),
    NPlus(f64),
    Times(f64),
}

impl MRule {
    pub fn m(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            MRule::Fixed(v) => v,
            MRule::NPlus(c) => n + c,
            MRule::Times(c) => c * n,
        }
    }
}

impl std::fmt::Display for MRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MRule::Fixed(v) => write!(f, "fixed:{v}"),
            MRule::NPlus(c) => write!(f, "nplus:{c}"),
            MRule::Times(c) => write!(f, "times:{c}"),
        }
    }
}

pub fn parse_m_rule(s: &str) -> Result<MRule, String> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}"));
    let rule = match s.split_once(':') {
        None => MRule::Fixed(num(s)?),
        Some(("fixed", v)) => MRule::Fixed(num(v)?),
        Some(("nplus", v)) => MRule::NPlus(num(v)?),
        Some(("times", v)) => MRule::Times(num(v)?),
        Some((k, _)) => return Err(format!("unknown m rule {k:?}; expected fixed, nplus or times")),
    };
    let v = match rule {
        MRule::Fixed(v) | MRule::NPlus(v) | MRule::Times(v) => v,
    };
    if !v.is_finite() {
        return Err(format!("m rule needs a finite value, got {v}"));
    }
    Ok(rule)
}

pub type NList = Vec<usize>;

pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let int = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("not a dimension: {v:?}"));
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            None => out.push(int(part)?),
            Some((a, rest)) => {
                let (b, step) = match rest.split_once(':') {
                    Some((b, st)) => (int(b)?, int(st)?),
                    None => (int(rest)?, 1),
                };
                let a = int(a)?;
                if step == 0 || b < a {
                    return Err(format!("bad range {part:?}"));
                }
                out.extend((a..=b).step_by(step));
            }
        }
    }
    if out.is_empty() {
        return Err("empty dimension list".into());
    }
    if out.contains(&0) {
        return Err("dimensions start at 1".into());
    }
    Ok(out)
}

/// Builds the law for one grid point; `m` is ignored for the Gaussian.
pub fn make_law(family: FamilyArg, n: usize, m: Option<f64>) -> ueplab::Result<EllipticalLaw> {
    match family {
        FamilyArg::Gaussian => EllipticalLaw::gaussian(n),
        _ => {
            let m = m.ok_or_else(|| ueplab::Error::Domain(format!("--m is required for {}", Family::from(family))))?;
            EllipticalLaw::new(family.into(), n, m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n_list("1..9:4,20").unwrap(), vec![1, 5, 9, 20]);
        assert_eq!(parse_n_list("2,5,10").unwrap(), vec![2, 5, 10]);
        assert!(parse_n_list("0..3").is_err());
        assert!(parse_n_list("5..3").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn m_rules() {
        assert_eq!(parse_m_rule("fixed:1").unwrap().m(7), 1.0);
        assert_eq!(parse_m_rule("nplus:2").unwrap().m(7), 9.0);
        assert_eq!(parse_m_rule("times:2").unwrap().m(7), 14.0);
        assert_eq!(parse_m_rule("3.5").unwrap(), MRule::Fixed(3.5));
        assert!(parse_m_rule("plus:1").is_err());
    }

    #[test]
    fn grammar() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        assert!(Cli::try_parse_from(["ueplab", "bound", "--p", "2", "--q", "2"]).is_err());
        assert!(Cli::try_parse_from(["ueplab", "bound"]).is_err());
        assert!(Cli::try_parse_from(["ueplab", "bound", "--q", "2.1,3"]).is_ok());
    }
}
