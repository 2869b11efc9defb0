use std::f64::consts::PI;

use super::adaptive::{integrate_nodes, Node, NodeFn};
use super::logvalue::{log_sum, LogValue};
use super::{DomainSpec, LogQuadResult};
use crate::error::{Error, Result};
use crate::specfun::{lgamma_unchecked, log_abs_bessel_j, BesselJZeros};

const MAX_ARCHES: usize = 400_000;

/// An integral ∫_start^∞ f over a Bessel-oscillatory integrand, split at the zeros of J_ν.
pub(crate) struct ArchProblem<'a> {
    pub nu: f64,
    pub f: &'a NodeFn<'a>,
    pub start: f64,
    pub left_power: Option<f64>,
    /// f behaves like |r − j_{ν,k}|^zero_power near every zero.
    pub zero_power: f64,
    /// Model of ∫_R^∞ f for R at a zero of J_ν.
    pub tail: &'a dyn Fn(f64) -> LogValue,
    pub r_min: f64,
}

pub(crate) fn integrate_arches(p: &ArchProblem<'_>, rel_tol: f64) -> Result<LogQuadResult> {
    let inner = (0.1 * rel_tol).max(1e-13);
    let mut zeros = BesselJZeros::new(p.nu)?;
    let mut z = zeros.next().unwrap()?;
    while z <= p.start {
        z = zeros.next().unwrap()?;
    }
    let head = integrate_nodes(
        p.f,
        &DomainSpec::finite(p.start, z).with_left_power_opt(p.left_power).with_right_power(p.zero_power),
        inner,
    )?;
    let mut evals = head.evaluations;
    let mut sum = head.value();
    let mut err = vec![LogValue::positive(head.log_abs_error)];
    let mut target = p.r_min.max(2.0 * z);
    let mut half: Option<LogValue> = None;
    let mut arches = 0usize;
    loop {
        let zn = zeros.next().unwrap()?;
        let arch = integrate_nodes(
            p.f,
            &DomainSpec::finite(z, zn).with_left_power(p.zero_power).with_right_power(p.zero_power),
            inner,
        )?;
        evals += arch.evaluations;
        sum = sum.add(arch.value());
        err.push(LogValue::positive(arch.log_abs_error));
        z = zn;
        arches += 1;
        if half.is_none() && z >= 0.5 * target {
            half = Some(sum.add((p.tail)(z)));
        }
        if z >= target {
            let total = sum.add((p.tail)(z));
            let spread = total.sub(half.unwrap_or(total)).abs();
            let e = log_sum(err.iter().cloned()).add(spread);
            let ok = e.ln_abs <= rel_tol.ln() + total.ln_abs || e.is_zero();
            if ok || arches >= MAX_ARCHES {
                return Ok(LogQuadResult::from_parts(total, e.ln_abs, evals, ok));
            }
            half = Some(total);
            target *= 2.0;
        }
    }
}

/// Mean of |cos θ|^q over a period.
pub(crate) fn cos_power_mean(q: f64) -> f64 {
    (lgamma_unchecked(0.5 * (q + 1.0)) - 0.5 * PI.ln() - lgamma_unchecked(0.5 * q + 1.0)).exp()
}

/// ∫_{−π/2}^{π/2} t² (cos^q t − c_q) dt, the curvature coefficient of the arch-midpoint rule.
fn curvature_coefficient(q: f64) -> Result<f64> {
    let f = move |n: Node| {
        if n.x <= 0.0 {
            return (f64::NEG_INFINITY, 0);
        }
        (2.0 * n.x.ln() + q * n.gap.sin().ln(), 1)
    };
    let r = integrate_nodes(&f, &DomainSpec::finite(0.0, 0.5 * PI).with_right_power(q), 1e-13)?;
    Ok(2.0 * r.to_f64() - cos_power_mean(q) * PI.powi(3) / 12.0)
}

/// Remainder model for ∫_R^∞ r^α |J_ν(r)|^q dr: the phase-averaged envelope with two modulus
/// corrections, plus the leading midpoint-rule correction.
pub(crate) struct PowerTail {
    s: f64,
    cq: f64,
    a2: f64,
    a4: f64,
    k2: f64,
    ln_pref: f64,
}

impl PowerTail {
    pub fn new(alpha: f64, nu: f64, q: f64) -> Result<Self> {
        let s = alpha - 0.5 * q + 1.0;
        if s >= 0.0 {
            return Err(Error::domain(format!(
                "r^{alpha}|J|^{q} is not integrable at infinity (need alpha - q/2 < -1)"
            )));
        }
        let mu = 4.0 * nu * nu;
        let a = (mu - 1.0) / 8.0;
        let b = 3.0 * (mu - 1.0) * (mu - 9.0) / 128.0;
        let h = 0.5 * q;
        Ok(Self {
            s,
            cq: cos_power_mean(q),
            a2: h * a,
            a4: h * b + h * (h - 1.0) * 0.5 * a * a,
            k2: curvature_coefficient(q)?,
            ln_pref: h * (2.0 / PI).ln(),
        })
    }

    fn bracket(&self, r: f64) -> f64 {
        let s = self.s;
        let r2 = r * r;
        self.cq * (1.0 / -s + self.a2 / (r2 * (2.0 - s)) + self.a4 / (r2 * r2 * (4.0 - s)))
            - self.k2 * (s - 1.0) / (2.0 * PI * r2)
    }

    fn ln_scale(&self, r: f64) -> f64 {
        self.ln_pref + self.s * r.ln()
    }

    pub fn eval(&self, r: f64) -> LogValue {
        LogValue::from_f64(self.bracket(r)).shift(self.ln_scale(r))
    }
}

/// Power-tail models at α ± h, ± 2h or q ± h, ± 2h for a fourth-order derivative stencil.
struct TailStencil {
    h: f64,
    models: [PowerTail; 4],
}

impl TailStencil {
    const H: f64 = 1e-3;

    fn new(alpha: f64, nu: f64, q: f64, along_q: bool) -> Result<Self> {
        let h = Self::H;
        let at = |k: f64| {
            if along_q {
                PowerTail::new(alpha, nu, q + k * h)
            } else {
                PowerTail::new(alpha + k * h, nu, q)
            }
        };
        Ok(Self { h, models: [at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?] })
    }

    fn d_bracket(&self, r: f64) -> f64 {
        let b: Vec<f64> = self.models.iter().map(|m| m.bracket(r)).collect();
        (8.0 * (b[2] - b[1]) - (b[3] - b[0])) / (12.0 * self.h)
    }
}

/// Remainder of ∫ r^α |J|^q (c0 + b ln r + ln|J|^q) past r, from the α- and q-derivatives of the
/// power-tail model. The ln r factors of the prefactor are differentiated exactly.
struct LogTail {
    base: PowerTail,
    d_alpha: TailStencil,
    d_q: TailStencil,
    q: f64,
    c0: f64,
    b: f64,
}

impl LogTail {
    fn new(alpha: f64, nu: f64, q: f64, c0: f64, b: f64) -> Result<Self> {
        Ok(Self {
            base: PowerTail::new(alpha, nu, q)?,
            d_alpha: TailStencil::new(alpha, nu, q, false)?,
            d_q: TailStencil::new(alpha, nu, q, true)?,
            q,
            c0,
            b,
        })
    }

    fn eval(&self, r: f64) -> LogValue {
        let b0 = self.base.bracket(r);
        let lr = r.ln();
        // T = exp(L)·B with ∂_α L = ln r and ∂_q L = ½ ln(2/π) − ½ ln r
        let da = lr * b0 + self.d_alpha.d_bracket(r);
        let dq = (0.5 * (2.0 / PI).ln() - 0.5 * lr) * b0 + self.d_q.d_bracket(r);
        LogValue::from_f64(self.c0 * b0 + self.b * da + self.q * dq).shift(self.base.ln_scale(r))
    }
}

/// ∫₀^∞ r^α |J_ν(r)|^q dr.
pub fn integrate_oscillatory(alpha: f64, nu: f64, q: f64, rel_tol: f64) -> Result<LogQuadResult> {
    super::check_tol(rel_tol)?;
    if !(q > 0.0) {
        return Err(Error::domain("power q must be positive"));
    }
    let tail = PowerTail::new(alpha, nu, q)?;
    let origin = alpha + nu * q;
    if origin <= -1.0 {
        return Err(Error::domain(format!("r^{alpha}|J_{nu}|^{q} is not integrable at the origin")));
    }
    let f = move |n: Node| -> (f64, i8) {
        match log_abs_bessel_j(nu, n.x) {
            Ok((l, s)) if s != 0 => (alpha * n.x.ln() + q * l, 1),
            Ok(_) => (f64::NEG_INFINITY, 0),
            Err(_) => (f64::NAN, 0),
        }
    };
    let tail_fn = |r: f64| tail.eval(r);
    integrate_arches(
        &ArchProblem {
            nu,
            f: &f,
            start: 0.0,
            left_power: Some(origin),
            zero_power: q,
            tail: &tail_fn,
            r_min: (25.0 * nu).max(100.0),
        },
        rel_tol,
    )
}

/// ∫₀^∞ r^α |J_ν(r)|^q (c0 + b·ln r + ln|J_ν(r)|^q) dr, a signed integral.
///
/// The remainder beyond the last arch is the α- and q-derivative of the power-tail model.
pub(crate) fn integrate_oscillatory_log(
    alpha: f64,
    nu: f64,
    q: f64,
    c0: f64,
    b: f64,
    rel_tol: f64,
) -> Result<LogQuadResult> {
    super::check_tol(rel_tol)?;
    let origin = alpha + nu * q;
    if origin <= -1.0 {
        return Err(Error::domain(format!("r^{alpha}|J_{nu}|^{q} log-weighted is not integrable at the origin")));
    }
    let tail = LogTail::new(alpha, nu, q, c0, b)?;
    let tail_fn = |r: f64| tail.eval(r);
    let f = move |n: Node| -> (f64, i8) {
        match log_abs_bessel_j(nu, n.x) {
            Ok((l, s)) if s != 0 => {
                let w = c0 + b * n.x.ln() + q * l;
                if w == 0.0 {
                    return (f64::NEG_INFINITY, 0);
                }
                (alpha * n.x.ln() + q * l + w.abs().ln(), if w > 0.0 { 1 } else { -1 })
            }
            Ok(_) => (f64::NEG_INFINITY, 0),
            Err(_) => (f64::NAN, 0),
        }
    };
    integrate_arches(
        &ArchProblem {
            nu,
            f: &f,
            start: 0.0,
            left_power: Some(origin),
            zero_power: q,
            tail: &tail_fn,
            r_min: (25.0 * nu).max(100.0),
        },
        rel_tol,
    )
}

/// ∫_a^∞ f where f ≈ A·r^α|J_ν(r)|^q for large r with an unknown constant A.
pub(crate) fn integrate_enveloped(
    f: &NodeFn<'_>,
    a: f64,
    nu: f64,
    q: f64,
    alpha: f64,
    left_power: Option<f64>,
    rel_tol: f64,
) -> Result<LogQuadResult> {
    let tail = PowerTail::new(alpha, nu, q)?;
    let tail_fn = |r: f64| {
        // amplitude read off at the crest following the zero r
        let x = r + 0.5 * PI;
        let (lf, _) = f(Node { x, gap: f64::INFINITY });
        match log_abs_bessel_j(nu, x) {
            Ok((lj, s)) if s != 0 => tail.eval(r).shift(lf - alpha * x.ln() - q * lj),
            _ => LogValue::ZERO,
        }
    };
    integrate_arches(
        &ArchProblem { nu, f, start: a, left_power, zero_power: q, tail: &tail_fn, r_min: (25.0 * nu).max(100.0) },
        rel_tol,
    )
}
