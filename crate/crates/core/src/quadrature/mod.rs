//! Log-domain adaptive quadrature.
//!
//! Integrands are supplied as ln|f| (plus a sign where needed) and every panel is summed after
//! subtracting its own maximum, so integrands whose range spans thousands of orders of magnitude
//! are handled without overflow.

mod accel;
mod adaptive;
mod logvalue;
mod oscillatory;
mod rule;

pub use accel::wynn_epsilon;
pub use adaptive::Node;
pub use logvalue::{log_sum, LogValue};
pub use oscillatory::integrate_oscillatory;

pub(crate) use adaptive::{integrate_nodes, NodeFn};
pub(crate) use oscillatory::{integrate_enveloped, integrate_oscillatory_log};

use crate::error::{Error, Result};

/// Result of a log-domain integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogQuadResult {
    pub log_abs_value: f64,
    pub sign: i8,
    /// ln of the absolute error estimate.
    pub log_abs_error: f64,
    /// Error estimate relative to the value.
    pub rel_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl LogQuadResult {
    pub(crate) fn from_parts(total: LogValue, ln_err: f64, evaluations: usize, converged: bool) -> Self {
        let rel_error = if total.is_zero() {
            if ln_err == f64::NEG_INFINITY {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (ln_err - total.ln_abs).exp()
        };
        Self { log_abs_value: total.ln_abs, sign: total.sign, log_abs_error: ln_err, rel_error, evaluations, converged }
    }

    pub fn value(&self) -> LogValue {
        LogValue::new(self.log_abs_value, self.sign)
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    /// Absolute error estimate on the linear scale.
    pub fn abs_error(&self) -> f64 {
        self.log_abs_error.exp()
    }

    /// Turn a non-converged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::nonconv(format!(
                "quadrature stopped at relative error {:.3e} after {} evaluations",
                self.rel_error, self.evaluations
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    Finite {
        a: f64,
        b: f64,
    },
    /// [a, ∞) with an integrand decaying faster than any power.
    ExponentialTail {
        a: f64,
    },
    /// [a, ∞) with an integrand behaving like r^exponent, exponent < −1.
    PowerTail {
        a: f64,
        exponent: f64,
    },
    /// [a, ∞) with an integrand behaving like A·r^α |J_ν(r)|^q.
    OscillatoryPowerTail {
        a: f64,
        nu: f64,
        q: f64,
        alpha: f64,
    },
}

/// Integration domain plus optional endpoint behaviour hints.
///
/// `left_power` / `right_power` state that the integrand behaves like |r − endpoint|^β there;
/// the endpoint panel is then integrated after a polynomial change of variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub left_power: Option<f64>,
    pub right_power: Option<f64>,
    /// Length scale used to place the initial breakpoints on half-lines.
    pub scale: f64,
}

impl DomainSpec {
    fn with_kind(kind: DomainKind) -> Self {
        Self { kind, left_power: None, right_power: None, scale: 1.0 }
    }

    pub fn finite(a: f64, b: f64) -> Self {
        Self::with_kind(DomainKind::Finite { a, b })
    }

    pub fn exponential_tail(a: f64) -> Self {
        Self::with_kind(DomainKind::ExponentialTail { a })
    }

    pub fn power_tail(a: f64, exponent: f64) -> Self {
        Self::with_kind(DomainKind::PowerTail { a, exponent })
    }

    pub fn oscillatory_power_tail(a: f64, nu: f64, q: f64, alpha: f64) -> Self {
        Self::with_kind(DomainKind::OscillatoryPowerTail { a, nu, q, alpha })
    }

    pub fn with_left_power(mut self, beta: f64) -> Self {
        self.left_power = Some(beta);
        self
    }

    pub fn with_left_power_opt(mut self, beta: Option<f64>) -> Self {
        self.left_power = beta;
        self
    }

    pub fn with_right_power(mut self, beta: f64) -> Self {
        self.right_power = Some(beta);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            DomainKind::Finite { a, b } if !(a < b) || !a.is_finite() || !b.is_finite() => {
                Err(Error::domain(format!("finite domain needs a < b, got [{a}, {b}]")))
            }
            DomainKind::ExponentialTail { a }
            | DomainKind::PowerTail { a, .. }
            | DomainKind::OscillatoryPowerTail { a, .. }
                if !(a >= 0.0) =>
            {
                Err(Error::domain(format!("half-line domains need a >= 0, got {a}")))
            }
            DomainKind::OscillatoryPowerTail { q, alpha, .. } if !(alpha - 0.5 * q < -1.0) => {
                Err(Error::domain(format!("envelope r^{alpha}|J|^{q} is not integrable")))
            }
            _ if !(self.scale > 0.0) => Err(Error::domain("scale must be positive")),
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_tol(rel_tol: f64) -> Result<()> {
    if !(1e-13..=1e-2).contains(&rel_tol) {
        return Err(Error::domain(format!("rel_tol must lie in [1e-13, 1e-2], got {rel_tol}")));
    }
    Ok(())
}

pub(crate) fn integrate_node_fn(f: &NodeFn<'_>, domain: &DomainSpec, rel_tol: f64) -> Result<LogQuadResult> {
    check_tol(rel_tol)?;
    domain.validate()?;
    match domain.kind {
        DomainKind::OscillatoryPowerTail { a, nu, q, alpha } => {
            integrate_enveloped(f, a, nu, q, alpha, domain.left_power, rel_tol)
        }
        _ => integrate_nodes(f, domain, rel_tol),
    }
}

/// ∫ exp(f_log(r)) dr over `domain`.
pub fn integrate_log<F>(f_log: F, domain: &DomainSpec, rel_tol: f64) -> Result<LogQuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let f = |n: Node| (f_log(n.x), 1i8);
    integrate_node_fn(&f, domain, rel_tol)
}

/// ∫ sign(r)·exp(f_log(r)) dr over `domain`.
pub fn integrate_log_signed<F, S>(f_log: F, sign: S, domain: &DomainSpec, rel_tol: f64) -> Result<LogQuadResult>
where
    F: Fn(f64) -> f64 + Sync,
    S: Fn(f64) -> i8 + Sync,
{
    let f = |n: Node| (f_log(n.x), sign(n.x));
    integrate_node_fn(&f, domain, rel_tol)
}

#[cfg(test)]
mod tests;
