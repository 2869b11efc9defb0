use std::f64::consts::PI;

use super::gamma::lgamma_unchecked;
use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const NU_MAX: f64 = 512.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 2_000_000;
const BIG: f64 = 1e250;

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || nu > NU_MAX || !nu.is_finite() {
        return Err(Error::domain(format!("bessel_j order must lie in [0, {NU_MAX}], got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_j argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// J_ν(x) for real ν ∈ [0, NU_MAX] and x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    let (l, s) = log_abs_bessel_j(nu, x)?;
    Ok(s as f64 * l.exp())
}

/// (ln|J_ν(x)|, sign J_ν(x)).
pub fn log_abs_bessel_j(nu: f64, x: f64) -> Result<(f64, i8)> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { (0.0, 1) } else { (f64::NEG_INFINITY, 0) });
    }
    if nu == 0.5 {
        let s = x.sin();
        return Ok(signed_log(s, 0.5 * (2.0 / (PI * x)).ln()));
    }
    let y = 0.25 * x * x;
    if y <= nu + 1.0 {
        return Ok(series(nu, x));
    }
    if x >= hankel_threshold(nu) {
        if let Some(v) = hankel(nu, x) {
            return Ok(v);
        }
    }
    if x >= 25.0 && x >= 1.2 * nu + 10.0 {
        if let Some(v) = upward(nu, x) {
            return Ok(v);
        }
    }
    steed(nu, x)
}

/// Hankel values at the fractional orders followed by upward recurrence, stable while ν < x.
fn upward(nu: f64, x: f64) -> Option<(f64, i8)> {
    let n = nu.floor();
    let mu = nu - n;
    let lin = |(l, s): (f64, i8)| s as f64 * l.exp();
    let mut j0 = lin(hankel(mu, x)?);
    if n == 0.0 {
        return Some(signed_log(j0, 0.0));
    }
    let mut j1 = lin(hankel(mu + 1.0, x)?);
    for k in 1..(n as usize) {
        let j2 = 2.0 * (mu + k as f64) / x * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    Some(signed_log(j1, 0.0))
}

fn signed_log(v: f64, shift: f64) -> (f64, i8) {
    if v == 0.0 {
        (f64::NEG_INFINITY, 0)
    } else {
        (v.abs().ln() + shift, if v > 0.0 { 1 } else { -1 })
    }
}

fn hankel_threshold(nu: f64) -> f64 {
    (0.5 * nu * nu).max(25.0)
}

fn series(nu: f64, x: f64) -> (f64, i8) {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -y / (k * (nu + k));
        sum += term;
        if term.abs() < EPS * sum.abs() || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    signed_log(sum, nu * (0.5 * x).ln() - lgamma_unchecked(nu + 1.0))
}

/// Large-argument Hankel expansion; `None` if the asymptotic series stalls before reaching full precision.
fn hankel(nu: f64, x: f64) -> Option<(f64, i8)> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    let mut k = 1.0;
    loop {
        term *= (mu - (2.0 * k - 1.0f64).powi(2)) / (k * 8.0 * x);
        let a = term.abs();
        if a > last && a > 1e-17 {
            return None;
        }
        match (k as i64) % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if a < 1e-17 * (p.abs() + q.abs()) || term == 0.0 {
            break;
        }
        last = a;
        k += 1.0;
        if k > 200.0 {
            return None;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let v = p * chi.cos() - q * chi.sin();
    Some(signed_log(v, 0.5 * (2.0 / (PI * x)).ln()))
}

/// Continued-fraction evaluation (CF1 for J'/J, downward recurrence, complex CF2) for x ≥ 2.
fn steed(nu: f64, x: f64) -> Result<(f64, i8)> {
    let nl = (nu - x + 1.5).floor().max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign: i8 = 1;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut ok = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::nonconv(format!("bessel_j CF1 failed at nu={nu}, x={x}")));
    }

    let mut rjl = isign as f64;
    let mut rjpl = h * rjl;
    let mut fact = nu * xi;
    let mut log_scale = 0.0;
    for _ in 0..nl {
        let t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
        if rjl.abs() > BIG || rjpl.abs() > BIG {
            rjl /= BIG;
            rjpl /= BIG;
            log_scale += BIG.ln();
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut t = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = t;
    let mut ok = false;
    for i in 1..MAXIT {
        a += 2.0 * i as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        t = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = t;
        if (dlr - 1.0).abs() + dli.abs() <= EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::nonconv(format!("bessel_j CF2 failed at nu={nu}, x={x}")));
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt();
    let ln = rjmu.ln() - rjl.abs().ln() - log_scale;
    Ok((ln, isign))
}
