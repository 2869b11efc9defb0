use crate::error::{Error, OrderSide, Result};
use crate::specfun::lgamma_unchecked as lg;

use super::{hankel_conjugate, radial_pdf, EllipticalLaw, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Direct,
    Conjugate,
}

/// Range of entropy orders for which U_p is finite: p ∈ (p_min, p_max), q ∈ (q_min, q_max).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceThreshold {
    pub p_min: f64,
    pub q_min: f64,
    pub p_max: f64,
    pub q_max: f64,
}

fn conj(p: f64) -> f64 {
    if p <= 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

impl ExistenceThreshold {
    /// Ok when the order p (with q = p/(p−1)) lies inside the admissible range.
    pub fn check_p(&self, p: f64) -> Result<()> {
        if !(p > self.p_min) {
            return Err(Error::Undefined { side: OrderSide::P, value: p, threshold: self.p_min });
        }
        let q = conj(p);
        if !(q > self.q_min) {
            return Err(Error::Undefined { side: OrderSide::Q, value: q, threshold: self.q_min });
        }
        Ok(())
    }
}

pub fn existence_threshold(law: &EllipticalLaw) -> ExistenceThreshold {
    let n = law.n() as f64;
    let m = law.m();
    match law.family() {
        Family::StudentT => {
            let p_min = (2.0 * n / (n + m)).max(1.0);
            ExistenceThreshold { p_min, q_min: 1.0, p_max: f64::INFINITY, q_max: conj(p_min) }
        }
        Family::StudentR => {
            let q_min = (4.0 * n / (m + n + 2.0)).max(1.0);
            ExistenceThreshold { p_min: 1.0, q_min, p_max: conj(q_min), q_max: f64::INFINITY }
        }
        _ => ExistenceThreshold { p_min: 1.0, q_min: 1.0, p_max: f64::INFINITY, q_max: f64::INFINITY },
    }
}

/// E‖X‖^k (Direct) or E‖X̃‖^k (Conjugate).
pub fn moment(law: &EllipticalLaw, side: Side, k: f64) -> Result<f64> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("moment order must be a non-negative real, got {k}")));
    }
    if k == 0.0 {
        return Ok(1.0);
    }
    let n = law.n() as f64;
    let m = law.m();
    let ln_unit = match (law.family(), side) {
        (Family::Gaussian, _) => lg(0.5 * (n + k)) - lg(0.5 * n),
        (Family::StudentT, Side::Direct) => {
            if k >= m {
                return Err(Error::domain(format!("student-t moment of order {k} diverges (needs k < m = {m})")));
            }
            lg(0.5 * (n + k)) + lg(0.5 * (m - k)) - lg(0.5 * n) - lg(0.5 * m)
        }
        (Family::StudentT, Side::Conjugate) => {
            let h = 0.5 * (n + m);
            lg(0.5 * (n + k)) + lg(0.5 * (m + k)) + lg(0.5 * (h + k)) + lg(0.5 * (h + 1.0))
                - lg(0.5 * n)
                - lg(0.5 * m)
                - lg(0.5 * h)
                - lg(0.5 * (h + k + 1.0))
        }
        (Family::StudentR, Side::Direct) => {
            lg(0.5 * (n + k)) + lg(0.5 * m + 1.0) - lg(0.5 * n) - lg(0.5 * (m + k) + 1.0)
        }
        (Family::StudentR, Side::Conjugate) => {
            let e = 0.5 * (m - n);
            if k >= e + 1.0 {
                return Err(Error::domain(format!(
                    "student-r conjugate moment of order {k} diverges (needs k < (m-n)/2 + 1 = {})",
                    e + 1.0
                )));
            }
            let nu = 0.25 * (m + n);
            let lam = e + 1.0 - k;
            let ln_c = (e + 1.0) * 2f64.ln() + lg(0.5 * m + 1.0) + 2.0 * lg(0.5 * e + 1.0) - lg(0.5 * n) - lg(e + 1.0);
            let ln_ws = lg(lam) + lg(nu + 0.5 * (1.0 - lam))
                - lam * 2f64.ln()
                - 2.0 * lg(0.5 * (1.0 + lam))
                - lg(nu + 0.5 * (1.0 + lam));
            ln_c + ln_ws
        }
        (Family::Custom, Side::Direct) => {
            let d = radial_pdf(&law.clone().with_scale(1.0)?)?;
            let r = d.power_integral(k, 1.0, 1e-10)?.require_converged()?;
            r.log_abs_value
        }
        (Family::Custom, Side::Conjugate) => {
            let d = hankel_conjugate(&radial_pdf(&law.clone().with_scale(1.0)?)?)?;
            let r = d.power_integral(k, 1.0, 1e-8)?.require_converged()?;
            r.log_abs_value
        }
    };
    let s = match side {
        Side::Direct => law.scale(),
        Side::Conjugate => 1.0 / law.scale(),
    };
    Ok((ln_unit + k * s.ln()).exp())
}

/// ln-density of the k-dimensional marginal at x (−∞ outside the support).
pub fn marginal_log_pdf(law: &EllipticalLaw, k: usize, x: &[f64]) -> Result<f64> {
    if !matches!(law.family(), Family::StudentT | Family::StudentR) {
        return Err(Error::domain(format!(
            "marginals are implemented for student-t and student-r, not {}",
            law.family()
        )));
    }
    if k == 0 || k >= law.n() {
        return Err(Error::domain(format!("marginal dimension must satisfy 1 <= k < n = {}, got {k}", law.n())));
    }
    law.with_dimension(k)?.log_density(x)
}

/// Gaussian law with the same covariance matrix.
pub fn matched_gaussian(law: &EllipticalLaw) -> Result<EllipticalLaw> {
    let n = law.n() as f64;
    let var = match law.family() {
        Family::Gaussian => return Ok(law.clone()),
        Family::StudentT if law.m() <= 2.0 => {
            return Err(Error::domain(format!("student-t with m = {} <= 2 has no covariance", law.m())))
        }
        _ => moment(law, Side::Direct, 2.0)? / n,
    };
    EllipticalLaw::gaussian(law.n())?.with_scale((2.0 * var).sqrt())
}
