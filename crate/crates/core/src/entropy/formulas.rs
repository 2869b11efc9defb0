use std::f64::consts::{LN_2, PI};

use super::EntropyOrder;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_log_signed, integrate_oscillatory, integrate_oscillatory_log, DomainSpec, LogQuadResult,
};
use crate::specfun::{digamma_unchecked as psi, lgamma_unchecked as lg, log_bessel_k_scaled, log_gamma};

/// ln(1+t)/t with the value 1 at t = 0.
fn log1p_ratio(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - 0.5 * t
    } else {
        t.ln_1p() / t
    }
}

pub(super) fn gaussian_usum(p: f64) -> f64 {
    let q = if p == 2.0 { 2.0 } else { p / (p - 1.0) };
    PI.ln() + 0.5 * (log1p_ratio(0.5 * p - 1.0) + log1p_ratio(0.5 * q - 1.0))
}

fn lks(nu: f64, r: f64) -> f64 {
    log_bessel_k_scaled(nu, r).unwrap_or(f64::NAN)
}

/// ∫₀^∞ r^a K_ν(r)^q dr.
fn k_power_integral(a: f64, nu: f64, q: f64, rel_tol: f64) -> Result<LogQuadResult> {
    let origin = a - q * nu.abs();
    let dom = DomainSpec::exponential_tail(0.0).with_left_power(origin).with_scale(((a + 1.0) / q).max(1.0));
    integrate_log_signed(|r| a * r.ln() + q * (lks(nu, r) - r), |_| 1, &dom, rel_tol)?.require_converged()
}

/// ln of the Student-t conjugate density constant.
fn ln_c_t(n: f64, m: f64) -> f64 {
    let h = 0.5 * (n + m);
    (3.0 - h) * LN_2 + lg(h) - lg(0.5 * n) - lg(0.5 * m) - 2.0 * lg(0.25 * (n + m))
}

/// ln of the Student-r conjugate density constant.
fn ln_c_r(n: f64, m: f64) -> f64 {
    let e = 0.5 * (m - n);
    (e + 1.0) * LN_2 + lg(0.5 * m + 1.0) + 2.0 * lg(0.5 * e + 1.0) - lg(0.5 * n) - lg(e + 1.0)
}

/// (U_p, absolute error) for the Student-t law.
pub(super) fn student_t(n: usize, m: f64, o: EntropyOrder, rel_tol: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let nu = 0.25 * (nf - m);
    if o.is_shannon() {
        // ∫ r^{h−1} K² ln K², with ln K² = 2(ln(e^r K) − r)
        let h = 0.5 * (nf + m);
        let dom = DomainSpec::exponential_tail(0.0).with_left_power(nf.min(m) - 1.0).with_scale(0.5 * h.max(2.0));
        let lk2 = move |r: f64| 2.0 * (lks(nu, r) - r);
        let i = integrate_log_signed(
            |r| {
                let l = lk2(r);
                (h - 1.0) * r.ln() + l + l.abs().ln()
            },
            |r| if lk2(r) < 0.0 { -1 } else { 1 },
            &dom,
            rel_tol,
        )?
        .require_converged()?;
        let c = ln_c_t(nf, m).exp();
        let v = PI.ln()
            + (nf - 2.0) / nf * LN_2
            + 2.0 / nf * (lg(0.5 * m) - lg(h) + lg(0.5 * h))
            + (nf - m) / (4.0 * nf) * (psi(0.5 * nf) + 2.0 * psi(0.5 * h))
            + m / nf * psi(h)
            - (nf + 3.0 * m) / (4.0 * nf) * psi(0.5 * m)
            - c / nf * i.to_f64();
        return Ok((v, c / nf * i.abs_error()));
    }
    let (p, q) = (o.p, o.q);
    let i = k_power_integral((m - nf) * q / 4.0 + nf - 1.0, nu, q, rel_tol)?;
    let g = (p - 1.0) * lg(0.5 * nf) + lg(((nf + m) * p - 2.0 * nf) / 4.0) - lg((nf + m) * p / 4.0)
        + p * lg((nf + m) / 4.0);
    let ci = 2.0 / (nf * (2.0 - q));
    let v = PI.ln()
        + (4.0 + q * (4.0 - nf - m)) * LN_2 / (2.0 * nf * (2.0 - q))
        + 2.0 / (nf * (2.0 - p)) * g
        + ci * i.log_abs_value;
    Ok((v, ci.abs() * i.rel_error))
}

/// (U_p, absolute error) for the Student-r law.
pub(super) fn student_r(n: usize, m: f64, o: EntropyOrder, rel_tol: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let nu = 0.25 * (m + nf);
    let e = 0.5 * (m - nf);
    if o.is_shannon() {
        let i = integrate_oscillatory_log(-e - 1.0, nu, 2.0, 0.0, 0.0, rel_tol)?.require_converged()?;
        let c = ln_c_r(nf, m).exp();
        let v = (2.0 * PI).ln()
            + 2.0 / nf * (lg(e + 1.0) - lg(0.5 * m + 1.0) - lg(0.5 * e + 1.0))
            + (m + nf) / (4.0 * nf) * (psi(0.5 * nf) + 2.0 * psi(0.5 * e + 1.0))
            - m / nf * psi(e + 1.0)
            + (3.0 * m - nf) / (4.0 * nf) * psi(0.5 * m + 1.0)
            - c / nf * i.to_f64();
        return Ok((v, c / nf * i.abs_error()));
    }
    let (p, q) = (o.p, o.q);
    let i = integrate_oscillatory(-(m + nf) * q / 4.0 + nf - 1.0, nu, q, rel_tol)?.require_converged()?;
    let g = (p - 1.0) * lg(0.5 * nf) + lg((m - nf) * p / 4.0 + 1.0)
        - lg(((m - nf) * p + 2.0 * nf) / 4.0 + 1.0)
        - p * lg((m - nf) / 4.0 + 1.0);
    let ci = 2.0 / (nf * (2.0 - q));
    let v = PI.ln()
        + (4.0 + (m - nf) * q) * LN_2 / (2.0 * nf * (2.0 - q))
        + 2.0 / (nf * (2.0 - p)) * g
        + ci * i.log_abs_value;
    Ok((v, ci.abs() * i.rel_error))
}

/// Fully analytic U_p for the Student-t law with m = n + 2, whose conjugate is exponential-power.
pub fn usum_closed_exppower(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    let o = EntropyOrder::from_p(p)?;
    let nf = n as f64;
    if o.is_shannon() {
        return Ok(1.0 + (0.5 * PI).ln() + (nf + 1.0) / nf * (psi(nf) - psi(0.5 * nf) - 1.0 / nf));
    }
    let q = o.q;
    let g = LN_2 + lg(nf) - lg(0.5 * nf) + lg(((nf + 1.0) * p - nf) / 2.0) - lg((nf + 1.0) * p / 2.0);
    Ok(PI.ln() + (2.0 * q.ln() - q * LN_2) / (q - 2.0) + 2.0 / (nf * (2.0 - p)) * g)
}

/// Upper bound M(n, m, p) on the Student-t uncertainty sum, tight as n → ∞.
pub fn asymptotic_bound_m(n: usize, m: f64, p: f64) -> Result<f64> {
    if n == 0 || !(m > 0.0) {
        return Err(Error::domain(format!("need n >= 1 and m > 0, got n = {n}, m = {m}")));
    }
    let o = EntropyOrder::from_p(p)?;
    let nf = n as f64;
    let l = |x: f64| {
        log_gamma(x).map_err(|_| {
            Error::domain(format!("M({n}, {m}, {p}) needs positive gamma arguments (existence condition fails)"))
        })
    };
    if o.is_shannon() {
        return Ok((2.0 * PI).ln()
            + 2.0 / nf * (l(nf / 4.0)? - l(nf / 2.0)? + l(m / 4.0)? - l((nf + m) / 4.0)?)
            + 0.5 * psi(0.5 * nf)
            - m / (2.0 * nf) * psi(0.5 * m)
            + (m - nf) / (2.0 * nf) * psi(0.5 * (m + nf))
            + psi(0.25 * (m + nf)));
    }
    let q = o.q;
    let a = nf * (p - 2.0) + m * p;
    let b = 2.0 * nf * (p - 2.0) + (nf + m) * p;
    let g = (p - 1.0) * l(nf / 2.0)? + l(((nf + m) * p - 2.0 * nf) / 4.0)? - l((nf + m) * p / 4.0)?
        + p * l((nf + m) / 4.0)?
        + (2.0 - p) * l(a / (4.0 * p))?
        - 2.0 * l(b / (4.0 * p))?
        - l(a / (2.0 * p))?
        + l(b / (2.0 * p))?;
    Ok((2.0 * PI).ln()
        + 2.0 / (nf * (2.0 - p)) * g
        + 2.0 / nf * l(nf / (2.0 * q))?
        + 2.0 * (q - 1.0) / (nf * (2.0 - q)) * l(nf / q)?)
}
