use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_node_fn, wynn_epsilon, DomainSpec, LogValue, Node};
use crate::specfun::{log_abs_bessel_j, BesselJZeros};

use super::{RadialDensity, Support, TailClass, UnitLogPdf};

const MAX_ARCHES: usize = 800;
const ARCH_TOL: f64 = 1e-12;

/// Kernel t ↦ t^{1/2} J_{n/2−1}(t), with n = 1 handled as √(2/π)·cos t.
struct Kernel {
    nu: f64,
    zeros: Vec<f64>,
}

impl Kernel {
    fn new(n: usize) -> Result<Self> {
        let nu = 0.5 * n as f64 - 1.0;
        let zeros = if n == 1 {
            (1..=MAX_ARCHES).map(|k| (k as f64 - 0.5) * PI).collect()
        } else {
            BesselJZeros::new(nu)?.take(MAX_ARCHES).collect::<Result<Vec<_>>>()?
        };
        Ok(Self { nu, zeros })
    }

    /// ln|t^{1/2} J_ν(t)|.
    fn log_abs(&self, t: f64) -> f64 {
        if self.nu < 0.0 {
            0.5 * (2.0 / PI).ln() + t.cos().abs().ln()
        } else {
            match log_abs_bessel_j(self.nu, t) {
                Ok((l, _)) => 0.5 * t.ln() + l,
                Err(_) => f64::NAN,
            }
        }
    }

    /// Behaviour t^β of the kernel at the origin.
    fn origin_power(&self) -> f64 {
        if self.nu < 0.0 {
            0.0
        } else {
            self.nu + 0.5
        }
    }
}

/// Squared Hankel transform of √D: r ↦ (∫ (ρr)^{1/2} D(ρ)^{1/2} J_{n/2−1}(ρr) dρ)².
///
/// The returned density evaluates one oscillatory integral per query point.
pub fn hankel_conjugate(d: &RadialDensity) -> Result<RadialDensity> {
    let n = d.n();
    let kernel = Arc::new(Kernel::new(n)?);
    let src = d.clone();
    let edge = src.edge_power().unwrap_or(0.0);
    let (tail, origin) = match src.support() {
        Support::HalfLine => (TailClass::ExponentialLike, n as f64 - 1.0),
        Support::Interval { .. } => (TailClass::PowerLaw { exponent: -edge - 2.0 }, n as f64 - 1.0),
    };
    let bs = 1.0 / (src.breakpoint_scale * src.scale());
    let unit: UnitLogPdf = Arc::new(move |r: f64, _| match transform(&src, &kernel, r) {
        Ok(v) if v.is_zero() => f64::NEG_INFINITY,
        Ok(v) => 2.0 * v.ln_abs,
        Err(_) => f64::NAN,
    });
    Ok(RadialDensity::from_parts(n, 1.0, unit, Support::HalfLine, tail, origin, None, bs))
}

fn transform(d: &RadialDensity, k: &Kernel, r: f64) -> Result<LogValue> {
    if !(r > 0.0) {
        return Ok(LogValue::ZERO);
    }
    let upper = match d.support() {
        Support::HalfLine => f64::INFINITY,
        Support::Interval { upper } => upper,
    };
    let half_origin = 0.5 * d.origin_power();
    let arch = |idx: usize, a: f64, b: f64| -> Result<LogValue> {
        let last = b >= upper;
        let b = b.min(upper);
        let f = |node: Node| {
            let gap = if last { node.gap } else { upper - node.x };
            let ld = d.log_pdf_node(Node { x: node.x, gap });
            if ld == f64::NEG_INFINITY {
                return (ld, 0);
            }
            (0.5 * ld + k.log_abs(node.x * r), 1)
        };
        let mut dom = DomainSpec::finite(a, b);
        if idx == 0 {
            dom = dom.with_left_power(half_origin + k.origin_power());
        }
        if last {
            if let Some(e) = d.edge_power() {
                dom = dom.with_right_power(0.5 * e);
            }
        }
        let res = integrate_node_fn(&f, &dom, ARCH_TOL)?;
        let sign = if idx % 2 == 0 { 1 } else { -1 };
        Ok(LogValue::new(res.log_abs_value, sign * res.sign))
    };

    let mut pieces: Vec<LogValue> = Vec::new();
    let mut a = 0.0;
    let mut partial: Vec<f64> = Vec::new();
    let mut reference = f64::NAN;
    for (idx, z) in k.zeros.iter().enumerate() {
        let b = z / r;
        let p = arch(idx, a, b)?;
        pieces.push(p);
        if reference.is_nan() && !p.is_zero() {
            reference = p.ln_abs;
        }
        if b >= upper {
            return Ok(crate::quadrature::log_sum(pieces));
        }
        let scaled = if reference.is_nan() { 0.0 } else { p.shift(-reference).to_f64() };
        let acc = partial.last().copied().unwrap_or(0.0) + scaled;
        partial.push(acc);
        let big = partial.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // exponentially small arches: the plain sum has converged
        if idx >= 2 && scaled.abs() < 1e-17 * big {
            return Ok(LogValue::from_f64(acc).shift(reference));
        }
        if partial.len() >= 8 {
            if let Some((est, spread)) = wynn_epsilon(&partial[partial.len().saturating_sub(40)..], 30) {
                if spread < 1e-11 * est.abs().max(1e-13 * big) {
                    return Ok(LogValue::from_f64(est).shift(reference));
                }
            }
        }
        a = b;
    }
    Err(Error::nonconv(format!("Hankel transform at r = {r} did not converge within {MAX_ARCHES} arches")))
}
