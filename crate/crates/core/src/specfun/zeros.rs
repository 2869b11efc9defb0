use std::f64::consts::PI;

use super::bessel_j::bessel_j;
use crate::error::{Error, Result};

/// Brent's method on a sign-changing bracket [a, b].
pub(crate) fn brent<F>(f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::nonconv(format!("root not bracketed in [{a}, {b}]")));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::nonconv("root polishing did not converge"))
}

fn polish(nu: f64, a: f64, b: f64, fa: f64, fb: f64) -> Result<f64> {
    brent(|x| bessel_j(nu, x), a, b, fa, fb, 1e-15 * b)
}

/// Successive positive zeros of J_ν in increasing order.
#[derive(Debug, Clone)]
pub struct BesselJZeros {
    nu: f64,
    last: Option<f64>,
}

impl BesselJZeros {
    pub fn new(nu: f64) -> Result<Self> {
        bessel_j(nu, 1.0)?;
        Ok(Self { nu, last: None })
    }

    fn next_zero(&mut self) -> Result<f64> {
        // consecutive zeros are never closer than 3.1
        let (mut x, step) = match self.last {
            None => (self.nu.max(1.0), 1.0),
            Some(z) => (z + 2.9, 1.0),
        };
        let mut fx = bessel_j(self.nu, x)?;
        for _ in 0..100_000 {
            let y = x + step;
            let fy = bessel_j(self.nu, y)?;
            if fx == 0.0 {
                self.last = Some(x);
                return Ok(x);
            }
            if fx.signum() != fy.signum() {
                let z = polish(self.nu, x, y, fx, fy)?;
                self.last = Some(z);
                return Ok(z);
            }
            x = y;
            fx = fy;
        }
        Err(Error::nonconv(format!("no zero of J_{} found", self.nu)))
    }
}

impl Iterator for BesselJZeros {
    type Item = Result<f64>;
    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_zero())
    }
}

fn mcmahon(nu: f64, k: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let b = (k as f64 + 0.5 * nu - 0.25) * PI;
    let b8 = 8.0 * b;
    b - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

/// The k-th positive zero j_{ν,k} of J_ν.
pub fn bessel_j_zero(nu: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("zero index starts at 1"));
    }
    bessel_j(nu, 1.0)?;
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    if beta > (4.0 * nu * nu).max(10.0) {
        let g = mcmahon(nu, k);
        let (a, b) = (g - 1.2, g + 1.2);
        let fa = bessel_j(nu, a)?;
        let fb = bessel_j(nu, b)?;
        if fa.signum() != fb.signum() {
            return polish(nu, a, b, fa, fb);
        }
    }
    let mut it = BesselJZeros::new(nu)?;
    let mut z = 0.0;
    for _ in 0..k {
        z = it.next_zero()?;
    }
    Ok(z)
}
