use std::f64::consts::PI;

use super::gamma::temme_gammas;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAXIT: usize = 100_000;

/// ln(e^x K_ν(x)) for x > 0 and any real ν.
///
/// Only the scaled logarithm is exposed; K itself underflows for moderate x.
pub fn log_bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_bessel_k_scaled requires finite x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::domain(format!("log_bessel_k_scaled requires finite order, got {nu}")));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let xmu = nu - nl;
    let (mut kmu, mut k1, mut log_scale) = if x < 2.0 { temme(xmu, x)? } else { steed(xmu, x)? };
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        // 2/x can be ~1e300, so keep k1 near 1 before each multiplication
        if k1 > 1.0 {
            kmu /= k1;
            log_scale += k1.ln();
            k1 = 1.0;
        }
        let t = (xmu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = t;
    }
    Ok(kmu.ln() + log_scale)
}

/// Small-argument series for K_μ, K_{μ+1} with |μ| ≤ 1/2, returned scaled by e^x.
fn temme(xmu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut ok = false;
    for i in 1..MAXIT {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - xmu * xmu);
        c *= dd / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::nonconv(format!("bessel_k series failed at mu={xmu}, x={x}")));
    }
    let ex = x.exp();
    Ok((sum * ex, sum1 * (2.0 / x) * ex, 0.0))
}

/// Steed's continued fraction for x ≥ 2, returned scaled by e^x.
fn steed(xmu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let xmu2 = xmu * xmu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut ok = false;
    for i in 1..MAXIT {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() <= EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::nonconv(format!("bessel_k continued fraction failed at mu={xmu}, x={x}")));
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (xmu + x + 0.5 - h) / x;
    Ok((kmu, k1, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lk(nu: f64, x: f64) -> f64 {
        log_bessel_k_scaled(nu, x).unwrap()
    }

    #[test]
    fn half_integer_closed_forms() {
        assert!((lk(0.5, 1.0) - 0.225_791_352_644_727_4).abs() < 1e-14);
        let mut r = 0.01;
        while r <= 50.0 {
            let exact = (PI / (2.0 * r)).sqrt();
            assert!((lk(0.5, r).exp() - exact).abs() < 1e-12 * exact.max(1.0), "r={r}");
            let k32 = exact * (1.0 + 1.0 / r);
            assert!((lk(1.5, r) - k32.ln()).abs() < 1e-13, "r={r}");
            r *= 1.11;
        }
    }

    #[test]
    fn symmetric_in_order() {
        for &nu in &[0.25, 0.5, 1.3, 4.75, 30.0] {
            for &x in &[0.05, 1.0, 2.0, 7.0, 300.0] {
                assert!((lk(nu, x) - lk(-nu, x)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tiny_argument() {
        // K_ν(x) ≈ ½Γ(ν)(2/x)^ν
        for &nu in &[1.0f64, 1.875, 2.0, 8.0, 40.5] {
            for &x in &[1e-200f64, 1e-100, 1e-30] {
                let want = (0.5 * crate::specfun::log_gamma(nu).unwrap().exp()).ln() + nu * (2.0 / x).ln();
                assert!((lk(nu, x) - want).abs() < 1e-12 * want, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn large_argument() {
        let v = lk(2.0, 700.0);
        let lead = (PI / 1400.0).sqrt().ln();
        // K_ν(x) e^x ≈ sqrt(π/2x)(1 + (4ν²−1)/(8x))
        let corr = (1.0 + 15.0 / 5600.0 + 15.0 * 7.0 / (2.0 * 5600.0f64.powi(2))).ln();
        assert!((v - lead - corr).abs() < 1e-9);
        assert!(lk(3.0, 1e5).is_finite());
    }

    #[test]
    fn frozen_values() {
        // mpmath log(besselk(nu,x)) + x at 30 digits
        let cases = [
            (0.0, 1e-3, 1.950_288_550_192_198_7),
            (0.0, 1.0, 0.134_935_601_093_211_9),
            (0.25, 2.0, -0.159_539_184_908_210_42),
            (1.0, 0.5, 1.004_671_397_304_651_2),
            (7.3, 1.5, 9.966_270_951_087_432),
            (30.0, 10.0, 31.431_423_697_690_057),
            (2.7, 45.0, -1.600_189_327_132_692_5),
            (128.0, 3.0, 441.943_051_914_762_84),
        ];
        for (nu, x, v) in cases {
            let got = lk(nu, x);
            assert!((got - v).abs() < 1e-12 * v.abs().max(1.0), "nu={nu} x={x} got={got} want={v}");
        }
    }

    #[test]
    fn recurrence_identity() {
        for &nu in &[0.3, 1.0, 2.5, 11.0] {
            for &x in &[0.2, 1.9, 2.1, 9.0, 60.0] {
                // K_{ν+1} = K_{ν−1} + (2ν/x) K_ν, all scaled by the same e^x
                let kp = lk(nu + 1.0, x).exp();
                let km = lk(nu - 1.0, x).exp();
                let k0 = lk(nu, x).exp();
                assert!((kp - km - 2.0 * nu / x * k0).abs() < 1e-12 * kp, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn domain() {
        assert!(log_bessel_k_scaled(1.0, 0.0).is_err());
        assert!(log_bessel_k_scaled(1.0, -2.0).is_err());
    }
}

#[cfg(test)]
mod table {
    use super::*;

    #[test]
    fn frozen_table() {
        let data = include_str!("testdata/bessel_k.csv");
        for line in data.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
            let got = log_bessel_k_scaled(v[0], v[1]).unwrap();
            assert!((got - v[2]).abs() < 1e-12 * v[2].abs().max(1.0), "nu={} x={} got={got} want={}", v[0], v[1], v[2]);
        }
    }
}
