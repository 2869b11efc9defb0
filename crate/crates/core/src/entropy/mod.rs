//! Rényi and Shannon entropies of elliptical vectors and the entropic uncertainty sum U_p.

mod formulas;

use std::f64::consts::PI;

pub use formulas::{asymptotic_bound_m, usum_closed_exppower};

use crate::error::{Error, Result};
use crate::radial::{
    conj_radial_pdf, existence_threshold, moment, radial_pdf, EllipticalLaw, Family, RadialDensity, Side,
};
use crate::specfun::lgamma_unchecked as lg;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Entropy order p with its conjugate q = p/(p−1); the direct side uses λ = p/2, the conjugate λ = q/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOrder {
    pub p: f64,
    pub q: f64,
    pub lambda_direct: f64,
    pub lambda_conj: f64,
}

impl EntropyOrder {
    pub fn from_p(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("order p must be a finite real > 1, got {p}")));
        }
        let q = if p == 2.0 { 2.0 } else { p / (p - 1.0) };
        Ok(Self { p, q, lambda_direct: 0.5 * p, lambda_conj: 0.5 * q })
    }

    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain(format!("order q must be a finite real > 1, got {q}")));
        }
        let p = if q == 2.0 { 2.0 } else { q / (q - 1.0) };
        let mut o = Self::from_p(p)?;
        o.q = q;
        o.lambda_conj = 0.5 * q;
        Ok(o)
    }

    pub fn is_shannon(&self) -> bool {
        self.p == 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    TrivialGaussian,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
            Method::TrivialGaussian => "exact",
        })
    }
}

#[derive(Debug, Clone)]
pub struct UncertaintySum {
    pub law: EllipticalLaw,
    pub order: EntropyOrder,
    /// U_p in nats per dimension.
    pub value: f64,
    pub bound: f64,
    pub gap: f64,
    pub method: Method,
    pub error_estimate: f64,
}

impl UncertaintySum {
    fn new(law: &EllipticalLaw, order: EntropyOrder, value: f64, method: Method, error_estimate: f64) -> Result<Self> {
        let bound = renyi_bound(order.p)?;
        Ok(Self { law: law.clone(), order, value, bound, gap: value - bound, method, error_estimate })
    }

    /// ln h(n, p) / n with h = exp(n(2−p)(U_p − B(p))/(2p)).
    pub fn h_diagnostic(&self) -> f64 {
        let p = self.order.p;
        (2.0 - p) * self.gap / (2.0 * p)
    }
}

/// (1+t)·ln(1+t)/t, equal to 1 at t = 0.
fn h_ratio(t: f64) -> f64 {
    if t.abs() < 1e-7 {
        1.0 + 0.5 * t - t * t / 6.0
    } else {
        (1.0 + t) * t.ln_1p() / t
    }
}

/// B(p) = ln 2π + ln p/(p−2) + ln q/(q−2), with the limit 1 + ln π at p = 2.
pub fn renyi_bound(p: f64) -> Result<f64> {
    if !(p > 1.0) || p.is_nan() {
        return Err(Error::domain(format!("order p must exceed 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok((2.0 * PI).ln());
    }
    Ok((2.0 * PI).ln() - p.ln() + h_ratio(p - 2.0))
}

/// ln(2π^{n/2}/Γ(n/2)), the log-area of the unit sphere in n dimensions.
pub(crate) fn ln_sphere_area(n: usize) -> f64 {
    let nf = n as f64;
    2f64.ln() + 0.5 * nf * PI.ln() - lg(0.5 * nf)
}

/// Entropy and its absolute error estimate.
fn renyi_with_error(d: &RadialDensity, lambda: f64, rel_tol: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be a finite positive real, got {lambda}")));
    }
    let n = d.n();
    let nm1 = n as f64 - 1.0;
    if lambda == 1.0 {
        let r = d.unit_shannon_integral(rel_tol)?.require_converged()?;
        let h = ln_sphere_area(n) - r.to_f64() + n as f64 * d.scale().ln();
        return Ok((h, r.abs_error()));
    }
    let r = d.power_integral(nm1 * (1.0 - lambda), lambda, rel_tol)?.require_converged()?;
    let c = 1.0 / (1.0 - lambda);
    Ok((ln_sphere_area(n) + c * r.log_abs_value, c.abs() * r.rel_error))
}

/// H_λ of the n-dimensional vector whose norm has density `d`, in nats.
pub fn renyi_entropy_radial(d: &RadialDensity, lambda: f64) -> Result<f64> {
    renyi_with_error(d, lambda, DEFAULT_TOL).map(|v| v.0)
}

/// Same as [`renyi_entropy_radial`] with an explicit quadrature tolerance.
pub fn renyi_entropy_radial_tol(d: &RadialDensity, lambda: f64, rel_tol: f64) -> Result<f64> {
    renyi_with_error(d, lambda, rel_tol).map(|v| v.0)
}

const STUDENT_T_MAX_N: usize = 512;
const STUDENT_R_MAX_N: usize = 64;

fn check_size(law: &EllipticalLaw) -> Result<()> {
    let (limit, name) = match law.family() {
        Family::StudentT => (STUDENT_T_MAX_N, "student-t"),
        Family::StudentR => (STUDENT_R_MAX_N, "student-r"),
        _ => return Ok(()),
    };
    if law.n() > limit {
        return Err(Error::domain(format!(
            "{name} entropy sums are supported up to n = {limit}; use the closed-form bounds beyond"
        )));
    }
    Ok(())
}

/// U_p = [H_{p/2}(X) + H_{q/2}(X̃)]/n.
///
/// Student laws use the closed-form gamma/digamma terms plus one remaining integral.
pub fn usum(law: &EllipticalLaw, p: f64, rel_tol: f64) -> Result<UncertaintySum> {
    usum_order(law, EntropyOrder::from_p(p)?, rel_tol)
}

pub fn usum_order(law: &EllipticalLaw, order: EntropyOrder, rel_tol: f64) -> Result<UncertaintySum> {
    existence_threshold(law).check_p(order.p)?;
    check_size(law)?;
    let (value, err) = match law.family() {
        Family::Gaussian => {
            let v = formulas::gaussian_usum(order.p);
            return UncertaintySum::new(law, order, v, Method::TrivialGaussian, 4.0 * f64::EPSILON * v);
        }
        Family::StudentT => formulas::student_t(law.n(), law.m(), order, rel_tol)?,
        Family::StudentR => formulas::student_r(law.n(), law.m(), order, rel_tol)?,
        Family::Custom => return Err(Error::domain("custom laws have no closed-form conjugate; use usum_quadrature")),
    };
    UncertaintySum::new(law, order, value, Method::ClosedForm, err)
}

/// U_p assembled from two radial entropy integrals over D and E, honouring the law's scale.
pub fn usum_quadrature(law: &EllipticalLaw, p: f64, rel_tol: f64) -> Result<UncertaintySum> {
    let order = EntropyOrder::from_p(p)?;
    existence_threshold(law).check_p(p)?;
    check_size(law)?;
    let d = radial_pdf(law)?;
    let e = conj_radial_pdf(law)?;
    let (hd, ed) = renyi_with_error(&d, order.lambda_direct, rel_tol)?;
    let (he, ee) = renyi_with_error(&e, order.lambda_conj, rel_tol)?;
    let n = law.n() as f64;
    UncertaintySum::new(law, order, (hd + he) / n, Method::Quadrature, (ed + ee) / n)
}

/// ln C_{p,q} = −ln(2π/p)/(2p) + ln(2π/q)/(2q) for p ∈ (1, 2].
pub fn babenko_log_constant(p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::domain(format!("Babenko constant needs p in (1, 2], got {p}")));
    }
    let q = p / (p - 1.0);
    Ok(-(2.0 * PI / p).ln() / (2.0 * p) + (2.0 * PI / q).ln() / (2.0 * q))
}

/// N = exp(2H/n)/(2πe).
pub fn entropy_power(h: f64, n: usize) -> f64 {
    (2.0 * h / n as f64).exp() / (2.0 * PI * std::f64::consts::E)
}

/// √(E‖X‖²·E‖X̃‖²)/n, at least 1/2.
pub fn heisenberg_product(law: &EllipticalLaw) -> Result<f64> {
    let a = moment(law, Side::Direct, 2.0)?;
    let b = moment(law, Side::Conjugate, 2.0)?;
    Ok((a * b).sqrt() / law.n() as f64)
}

#[cfg(test)]
mod tests;
