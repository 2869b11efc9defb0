//! Laws of the norm of elliptical vectors and of their conjugates.

mod hankel;
mod law;
mod moments;

use std::fmt;
use std::sync::Arc;

pub use hankel::hankel_conjugate;
pub use law::{CustomProfile, EllipticalLaw, Family};
pub use moments::{existence_threshold, marginal_log_pdf, matched_gaussian, moment, ExistenceThreshold, Side};

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_node_fn, integrate_oscillatory, integrate_oscillatory_log, DomainKind, DomainSpec, LogQuadResult, Node,
};
use crate::specfun::{lgamma_unchecked as lg, ln1p_sq, log_abs_bessel_j, log_bessel_k_scaled};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    HalfLine,
    Interval { upper: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    ExponentialLike,
    /// D(r) ~ r^exponent.
    PowerLaw {
        exponent: f64,
    },
    Compact,
    /// D(r) = A·r^envelope·J_order(r)^power.
    OscillatoryPower {
        order: f64,
        power: f64,
        envelope: f64,
    },
}

pub(crate) type UnitLogPdf = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Density of ‖X‖ on the half-line or on a bounded interval.
#[derive(Clone)]
pub struct RadialDensity {
    n: usize,
    scale: f64,
    unit: UnitLogPdf,
    support: Support,
    tail: TailClass,
    origin_power: f64,
    edge_power: Option<f64>,
    breakpoint_scale: f64,
    /// ln A for oscillatory densities D = A·r^envelope·J²
    ln_amp: f64,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("n", &self.n)
            .field("scale", &self.scale)
            .field("support", &self.support())
            .field("tail", &self.tail)
            .finish()
    }
}

impl RadialDensity {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        n: usize,
        scale: f64,
        unit: UnitLogPdf,
        support: Support,
        tail: TailClass,
        origin_power: f64,
        edge_power: Option<f64>,
        breakpoint_scale: f64,
    ) -> Self {
        Self { n, scale, unit, support, tail, origin_power, edge_power, breakpoint_scale, ln_amp: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tail(&self) -> TailClass {
        self.tail
    }

    /// Support in the scaled variable.
    pub fn support(&self) -> Support {
        match self.support {
            Support::HalfLine => Support::HalfLine,
            Support::Interval { upper } => Support::Interval { upper: upper * self.scale },
        }
    }

    pub(crate) fn origin_power(&self) -> f64 {
        self.origin_power
    }

    /// Typical length scale of the density in the scaled variable.
    pub(crate) fn length_scale(&self) -> f64 {
        self.breakpoint_scale * self.scale
    }

    pub(crate) fn edge_power(&self) -> Option<f64> {
        self.edge_power
    }

    /// ln D at unit scale given r and the distance to the support edge.
    pub(crate) fn unit_log_pdf(&self, r: f64, gap: f64) -> f64 {
        if r < 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.unit)(r, gap)
    }

    /// ln D(r), −∞ outside the support.
    pub fn log_pdf(&self, r: f64) -> f64 {
        self.log_pdf_node(Node { x: r, gap: self.gap(r) })
    }

    pub(crate) fn gap(&self, r: f64) -> f64 {
        match self.support() {
            Support::HalfLine => f64::INFINITY,
            Support::Interval { upper } => upper - r,
        }
    }

    /// ln D at a node given in the scaled variable.
    pub(crate) fn log_pdf_node(&self, node: Node) -> f64 {
        if node.gap <= 0.0 || node.x < 0.0 {
            return f64::NEG_INFINITY;
        }
        let s = self.scale;
        self.unit_log_pdf(node.x / s, node.gap / s) - s.ln()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        self.log_pdf(r).exp()
    }

    /// Integration domain in the scaled variable for an integrand behaving like r^origin at 0,
    /// like r^tail_exponent at infinity (power-law tails), and like (edge − r)^edge at a finite edge.
    pub(crate) fn domain(&self, origin: f64, tail_exponent: f64, edge: Option<f64>) -> Result<DomainSpec> {
        let s = self.scale;
        if origin <= -1.0 {
            return Err(Error::domain(format!("integrand ~ r^{origin} diverges at the origin")));
        }
        let d = match (self.support, self.tail) {
            (Support::Interval { upper }, _) => {
                let d = DomainSpec::finite(0.0, upper * s).with_left_power(origin);
                match edge {
                    Some(e) if e <= -1.0 => {
                        return Err(Error::domain(format!("integrand ~ (1 - r)^{e} diverges at the edge")))
                    }
                    Some(e) => d.with_right_power(e),
                    None => d,
                }
            }
            (Support::HalfLine, TailClass::PowerLaw { .. }) => {
                if tail_exponent >= -1.0 {
                    return Err(Error::domain(format!("integrand ~ r^{tail_exponent} diverges at infinity")));
                }
                DomainSpec::power_tail(0.0, tail_exponent).with_left_power(origin).with_scale(self.breakpoint_scale * s)
            }
            (Support::HalfLine, TailClass::OscillatoryPower { .. }) => {
                return Err(Error::domain("oscillatory densities are integrated through the arch integrator"))
            }
            (Support::HalfLine, _) => {
                DomainSpec::exponential_tail(0.0).with_left_power(origin).with_scale(self.breakpoint_scale * s)
            }
        };
        Ok(d)
    }

    /// ∫ r^a D(r)^λ dr.
    pub fn power_integral(&self, a: f64, lambda: f64, rel_tol: f64) -> Result<LogQuadResult> {
        if !(lambda > 0.0) {
            return Err(Error::domain("lambda must be positive"));
        }
        let shift = (a + 1.0 - lambda) * self.scale.ln();
        if let TailClass::OscillatoryPower { order, power, envelope } = self.tail {
            let alpha = a + lambda * envelope;
            let mut r = integrate_oscillatory(alpha, order, power * lambda, rel_tol)?;
            r.log_abs_value += lambda * self.ln_amp + shift;
            r.log_abs_error += lambda * self.ln_amp + shift;
            return Ok(r);
        }
        let te = match self.tail {
            TailClass::PowerLaw { exponent } => a + lambda * exponent,
            _ => f64::NEG_INFINITY,
        };
        let s = self.scale;
        let dom = self.domain(a + lambda * self.origin_power, te, self.edge_power.map(|e| lambda * e))?;
        let dom = rescale(dom, 1.0 / s);
        let f = |n: Node| {
            let l = self.unit_log_pdf(n.x, n.gap);
            if l == f64::NEG_INFINITY {
                return (l, 0);
            }
            (xlnr(a, n.x) + lambda * l, 1)
        };
        let mut r = integrate_node_fn(&f, &dom, rel_tol)?;
        r.log_abs_value += shift;
        r.log_abs_error += shift;
        Ok(r)
    }
}

impl RadialDensity {
    /// ∫ D ln(D / r^{n−1}) dr at unit scale, a signed integral.
    pub(crate) fn unit_shannon_integral(&self, rel_tol: f64) -> Result<LogQuadResult> {
        let nm1 = self.n as f64 - 1.0;
        if let TailClass::OscillatoryPower { order, power, envelope } = self.tail {
            let c = self.ln_amp;
            let mut r = integrate_oscillatory_log(envelope, order, power, c, envelope - nm1, rel_tol)?;
            r.log_abs_value += c;
            r.log_abs_error += c;
            return Ok(r);
        }
        let te = match self.tail {
            TailClass::PowerLaw { exponent } => exponent,
            _ => f64::NEG_INFINITY,
        };
        let dom = rescale(self.domain(self.origin_power, te, self.edge_power)?, 1.0 / self.scale);
        let f = |n: Node| {
            let l = self.unit_log_pdf(n.x, n.gap);
            let phi = l - xlnr(nm1, n.x);
            if l == f64::NEG_INFINITY || phi == 0.0 {
                return (f64::NEG_INFINITY, 0);
            }
            (l + phi.abs().ln(), if phi > 0.0 { 1 } else { -1 })
        };
        integrate_node_fn(&f, &dom, rel_tol)
    }
}

impl RadialDensity {
    /// P(a < ‖X‖ < b); `b` may be infinite.
    pub fn mass(&self, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
        if !(a >= 0.0) || !(b > a) {
            return Err(Error::domain(format!("mass needs 0 <= a < b, got [{a}, {b}]")));
        }
        if matches!(self.tail, TailClass::OscillatoryPower { .. }) {
            if a == 0.0 && b.is_infinite() {
                return Ok(self.power_integral(0.0, 1.0, rel_tol)?.require_converged()?.to_f64());
            }
            return Err(Error::domain("partial mass of oscillatory densities is not supported"));
        }
        let edge = match self.support() {
            Support::HalfLine => f64::INFINITY,
            Support::Interval { upper } => upper,
        };
        let b = b.min(edge);
        if a >= b {
            return Ok(0.0);
        }
        let dom = if b.is_infinite() {
            let base = self.domain(
                self.origin_power,
                match self.tail {
                    TailClass::PowerLaw { exponent } => exponent,
                    _ => f64::NEG_INFINITY,
                },
                None,
            )?;
            let kind = match base.kind {
                DomainKind::PowerTail { exponent, .. } => DomainKind::PowerTail { a, exponent },
                _ => DomainKind::ExponentialTail { a },
            };
            DomainSpec { kind, left_power: if a == 0.0 { base.left_power } else { None }, ..base }
        } else {
            let mut d = DomainSpec::finite(a, b);
            if a == 0.0 {
                d = d.with_left_power(self.origin_power);
            }
            if b == edge {
                if let Some(e) = self.edge_power {
                    d = d.with_right_power(e);
                }
            }
            d
        };
        let f = |n: Node| {
            let gap = if b == edge { n.gap } else { edge - n.x };
            let l = self.log_pdf_node(Node { x: n.x, gap });
            (l, if l == f64::NEG_INFINITY { 0 } else { 1 })
        };
        Ok(integrate_node_fn(&f, &dom, rel_tol)?.require_converged()?.to_f64())
    }
}

/// Map a domain built for the scaled variable back to the unit variable.
fn rescale(d: DomainSpec, f: f64) -> DomainSpec {
    use crate::quadrature::DomainKind::*;
    let kind = match d.kind {
        Finite { a, b } => Finite { a: a * f, b: b * f },
        ExponentialTail { a } => ExponentialTail { a: a * f },
        PowerTail { a, exponent } => PowerTail { a: a * f, exponent },
        k => k,
    };
    DomainSpec { kind, scale: d.scale * f, ..d }
}

/// a·ln r with the convention 0·ln 0 = 0.
pub(crate) fn xlnr(a: f64, r: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * r.ln()
    }
}

fn gaussian_radial(n: usize, scale: f64) -> RadialDensity {
    let nf = n as f64;
    let c = 2f64.ln() - lg(0.5 * nf);
    let unit: UnitLogPdf = Arc::new(move |r: f64, _| c + xlnr(nf - 1.0, r) - r * r);
    RadialDensity::from_parts(
        n,
        scale,
        unit,
        Support::HalfLine,
        TailClass::ExponentialLike,
        nf - 1.0,
        None,
        (0.5 * nf).sqrt().max(0.5),
    )
}

/// Closed-form density of ‖X‖.
pub fn radial_pdf(law: &EllipticalLaw) -> Result<RadialDensity> {
    let n = law.n();
    let nf = n as f64;
    let m = law.m();
    let s = law.scale();
    Ok(match law.family() {
        Family::Gaussian => gaussian_radial(n, s),
        Family::StudentT => {
            let c = 2f64.ln() + lg(0.5 * (nf + m)) - lg(0.5 * nf) - lg(0.5 * m);
            let unit: UnitLogPdf = Arc::new(move |r: f64, _| c + xlnr(nf - 1.0, r) - 0.5 * (nf + m) * ln1p_sq(r));
            let bs = (nf / (m + 1.0)).sqrt().max(0.5);
            RadialDensity::from_parts(
                n,
                s,
                unit,
                Support::HalfLine,
                TailClass::PowerLaw { exponent: -m - 1.0 },
                nf - 1.0,
                None,
                bs,
            )
        }
        Family::StudentR => {
            let e = 0.5 * (m - nf);
            let c = 2f64.ln() + lg(0.5 * m + 1.0) - lg(0.5 * nf) - lg(e + 1.0);
            let unit: UnitLogPdf = Arc::new(move |r: f64, gap: f64| {
                if gap <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let edge = if e == 0.0 { 0.0 } else { e * (gap * (2.0 - gap)).ln() };
                c + xlnr(nf - 1.0, r) + edge
            });
            RadialDensity::from_parts(
                n,
                s,
                unit,
                Support::Interval { upper: 1.0 },
                TailClass::Compact,
                nf - 1.0,
                Some(e),
                0.5,
            )
        }
        Family::Custom => {
            let p = law.custom_profile().unwrap().clone();
            let c = 2f64.ln() + 0.5 * nf * std::f64::consts::PI.ln() - lg(0.5 * nf);
            let prof = p.log_profile.clone();
            let unit: UnitLogPdf = Arc::new(move |r: f64, _| c + xlnr(nf - 1.0, r) + prof(r));
            let tail = match p.tail {
                TailClass::PowerLaw { exponent } => TailClass::PowerLaw { exponent },
                t => t,
            };
            RadialDensity::from_parts(n, s, unit, p.support, tail, nf - 1.0, p.edge_power, 1.0)
        }
    })
}

/// Closed-form density of the conjugate norm ‖X̃‖.
pub fn conj_radial_pdf(law: &EllipticalLaw) -> Result<RadialDensity> {
    let n = law.n();
    let nf = n as f64;
    let m = law.m();
    let s = 1.0 / law.scale();
    Ok(match law.family() {
        Family::Gaussian => gaussian_radial(n, s),
        Family::StudentT => {
            let h = 0.5 * (nf + m);
            let nu = 0.25 * (nf - m);
            let c = (3.0 - h) * 2f64.ln() + lg(h) - lg(0.5 * nf) - lg(0.5 * m) - 2.0 * lg(0.25 * (nf + m));
            let unit: UnitLogPdf = Arc::new(move |r: f64, _| {
                if r <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                match log_bessel_k_scaled(nu, r) {
                    Ok(k) => c + (h - 1.0) * r.ln() + 2.0 * (k - r),
                    Err(_) => f64::NAN,
                }
            });
            let origin = nf.min(m) - 1.0;
            RadialDensity::from_parts(
                n,
                s,
                unit,
                Support::HalfLine,
                TailClass::ExponentialLike,
                origin,
                None,
                (0.25 * (nf + m)).max(1.0),
            )
        }
        Family::StudentR => {
            let e = 0.5 * (m - nf);
            let nu = 0.25 * (m + nf);
            if nu > crate::specfun::NU_MAX {
                return Err(Error::domain(format!("Bessel order (m+n)/4 = {nu} exceeds the supported maximum")));
            }
            let c = (e + 1.0) * 2f64.ln() + lg(0.5 * m + 1.0) + 2.0 * lg(0.5 * e + 1.0) - lg(0.5 * nf) - lg(e + 1.0);
            let env = -e - 1.0;
            let unit: UnitLogPdf = Arc::new(move |r: f64, _| {
                if r <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                match log_abs_bessel_j(nu, r) {
                    Ok((l, _)) => c + env * r.ln() + 2.0 * l,
                    Err(_) => f64::NAN,
                }
            });
            let mut d = RadialDensity::from_parts(
                n,
                s,
                unit,
                Support::HalfLine,
                TailClass::OscillatoryPower { order: nu, power: 2.0, envelope: env },
                nf - 1.0,
                None,
                nu.max(1.0),
            );
            d.ln_amp = c;
            d
        }
        Family::Custom => return Err(Error::domain("custom laws have no closed-form conjugate; use hankel_conjugate")),
    })
}
