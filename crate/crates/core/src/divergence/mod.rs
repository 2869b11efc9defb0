//! KL and total-variation divergences between elliptical laws with a common characteristic matrix.
//!
//! For such pairs the divergence between the n-dimensional laws equals the divergence between the
//! laws of their norms, so everything here is a one-dimensional integral.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_node_fn, DomainSpec, LogQuadResult, Node};
use crate::radial::{RadialDensity, Support, TailClass};
use crate::specfun::{digamma_unchecked as psi, lgamma_unchecked as lg};

const KL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KLReport {
    /// D(X‖G).
    pub forward: f64,
    /// D(G‖X).
    pub reverse: Option<f64>,
    pub j_integral: Option<f64>,
    pub j_lower: Option<f64>,
    pub j_upper: Option<f64>,
    pub asymptotic: Option<f64>,
    pub rate_forward: f64,
    pub rate_reverse: Option<f64>,
}

impl KLReport {
    fn forward(n: usize, forward: f64, asymptotic: Option<f64>) -> Self {
        Self {
            forward,
            reverse: None,
            j_integral: None,
            j_lower: None,
            j_upper: None,
            asymptotic,
            rate_forward: forward / n as f64,
            rate_reverse: None,
        }
    }
}

fn same_dimension(a: &RadialDensity, b: &RadialDensity) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::domain(format!("dimensions differ: {} vs {}", a.n(), b.n())));
    }
    if matches!(a.tail(), TailClass::OscillatoryPower { .. }) || matches!(b.tail(), TailClass::OscillatoryPower { .. })
    {
        return Err(Error::domain("divergences between oscillatory conjugate densities are not supported"));
    }
    Ok(())
}

fn upper(d: &RadialDensity) -> f64 {
    match d.support() {
        Support::HalfLine => f64::INFINITY,
        Support::Interval { upper } => upper,
    }
}

fn infinite() -> LogQuadResult {
    LogQuadResult {
        log_abs_value: f64::INFINITY,
        sign: 1,
        log_abs_error: f64::NEG_INFINITY,
        rel_error: 0.0,
        evaluations: 0,
        converged: true,
    }
}

/// D(Y‖Z) computed from the norm densities, with the integral's error estimate.
pub fn kl_radial_with_error(dy: &RadialDensity, dz: &RadialDensity) -> Result<LogQuadResult> {
    same_dimension(dy, dz)?;
    if upper(dy) > upper(dz) {
        return Ok(infinite());
    }
    let te = match (dy.tail(), dz.tail()) {
        // ln(dy/dz) grows like ln r against another power law, like r² otherwise
        (TailClass::PowerLaw { exponent }, TailClass::PowerLaw { .. }) => exponent,
        (TailClass::PowerLaw { exponent }, _) if exponent + 2.0 >= -1.0 => return Ok(infinite()),
        (TailClass::PowerLaw { exponent }, _) => exponent + 2.0,
        _ => f64::NEG_INFINITY,
    };
    let dom = dy.domain(dy.origin_power(), te, dy.edge_power().map(|e| e.max(0.0)))?;
    let (uy, uz) = (upper(dy), upper(dz));
    let f = |node: Node| {
        let ly = dy.log_pdf_node(node);
        if ly == f64::NEG_INFINITY {
            return (ly, 0);
        }
        let lz = dz.log_pdf_node(shifted(node, uy, uz));
        let d = ly - lz;
        if d == 0.0 {
            return (f64::NEG_INFINITY, 0);
        }
        (ly + d.abs().ln(), if d > 0.0 { 1 } else { -1 })
    };
    integrate_node_fn(&f, &dom, KL_TOL)
}

/// D(Y‖Z) from the norm densities; +∞ when Y puts mass outside the support of Z.
pub fn kl_radial(dy: &RadialDensity, dz: &RadialDensity) -> Result<f64> {
    let r = kl_radial_with_error(dy, dz)?;
    if r.log_abs_value == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(r.require_converged()?.to_f64())
}

/// Re-express a node whose gap is measured to `from` as one measured to `to`.
fn shifted(node: Node, from: f64, to: f64) -> Node {
    let gap = if to.is_infinite() {
        f64::INFINITY
    } else if from == to {
        node.gap
    } else {
        (to - from) + node.gap
    };
    Node { x: node.x, gap }
}

/// ln|e^a − e^b|.
fn log_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

/// ∫|dy − dz| over the union of the supports (between 0 and 2).
pub fn tv_radial(dy: &RadialDensity, dz: &RadialDensity) -> Result<f64> {
    same_dimension(dy, dz)?;
    let (uy, uz) = (upper(dy), upper(dz));
    let u = uy.min(uz);
    let diff = |node: Node| {
        let ly = dy.log_pdf_node(shifted(node, u, uy));
        let lz = dz.log_pdf_node(shifted(node, u, uz));
        let l = log_abs_diff(ly, lz);
        (l, if l == f64::NEG_INFINITY { 0 } else { 1 })
    };
    let origin = dy.origin_power().min(dz.origin_power());
    let heavy = |a: &RadialDensity, b: &RadialDensity| match (a.tail(), b.tail()) {
        (TailClass::PowerLaw { exponent: x }, TailClass::PowerLaw { exponent: y }) => x.max(y),
        (TailClass::PowerLaw { exponent }, _) | (_, TailClass::PowerLaw { exponent }) => exponent,
        _ => f64::NEG_INFINITY,
    };
    let total = if uy.is_infinite() && uz.is_infinite() {
        let te = heavy(dy, dz);
        let base = if te.is_finite() { DomainSpec::power_tail(0.0, te) } else { DomainSpec::exponential_tail(0.0) };
        let dom = base.with_left_power(origin).with_scale(dy.length_scale().max(dz.length_scale()));
        integrate_node_fn(&diff, &dom, KL_TOL)?.require_converged()?.to_f64()
    } else {
        // common part [0, u] where u is the smaller support edge, then the single density beyond
        let outer = if uy <= uz { dz } else { dy };
        let inner_edge = if uy <= uz { dy.edge_power() } else { dz.edge_power() };
        let mut dom = DomainSpec::finite(0.0, u).with_left_power(origin);
        if let Some(e) = inner_edge.filter(|e| *e < 0.0) {
            dom = dom.with_right_power(e);
        }
        let inner = integrate_node_fn(&diff, &dom, KL_TOL)?.require_converged()?.to_f64();
        let uo = upper(outer);
        if uo == u {
            return Ok(inner.clamp(0.0, 2.0));
        }
        let f = |node: Node| {
            let l = outer.log_pdf_node(if uo.is_finite() { node } else { Node { x: node.x, gap: f64::INFINITY } });
            (l, if l == f64::NEG_INFINITY { 0 } else { 1 })
        };
        let od = match outer.support() {
            Support::Interval { upper } => {
                let d = DomainSpec::finite(u, upper);
                match outer.edge_power() {
                    Some(e) => d.with_right_power(e),
                    None => d,
                }
            }
            Support::HalfLine => {
                let te = heavy(outer, outer);
                let d = if te.is_finite() { DomainSpec::power_tail(u, te) } else { DomainSpec::exponential_tail(u) };
                d.with_scale(outer.length_scale())
            }
        };
        inner + integrate_node_fn(&f, &od, KL_TOL)?.require_converged()?.to_f64()
    };
    Ok(total.clamp(0.0, 2.0))
}

/// Diaconis–Freedman bound 2(n+3)/(m−n−1) on the total variation, for n ≤ m − 2.
pub fn df_bound(n: usize, m: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || !(nf <= m - 2.0) {
        return Err(Error::domain(format!("the Diaconis-Freedman bound needs 1 <= n <= m - 2, got n = {n}, m = {m}")));
    }
    Ok(2.0 * (nf + 3.0) / (m - nf - 1.0))
}

fn check_t(n: usize, m: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    if !(m > 2.0) || !m.is_finite() {
        return Err(Error::domain(format!("student-t with m = {m} <= 2 has no covariance, so no matched Gaussian")));
    }
    Ok(())
}

/// Large-m threshold above which the joint n, m → ∞ expansion is reported instead of the m = O(1) form.
const LARGE_M: f64 = 10.0;

/// D(X‖G) for a Student-t vector X and the Gaussian G with the same covariance.
pub fn kl_studentt_gaussian(n: usize, m: f64) -> Result<KLReport> {
    check_t(n, m)?;
    let nf = n as f64;
    let h = 0.5 * (nf + m);
    let forward =
        0.5 * nf * (2.0 * std::f64::consts::E / (m - 2.0)).ln() + lg(h) - lg(0.5 * m) + h * (psi(0.5 * m) - psi(h));
    let asym = if m >= LARGE_M {
        0.5 * nf * (m / (m - 2.0)).ln() + 0.5 * (m / (nf + m)).ln()
            - nf / (2.0 * m)
            - nf * (nf + 2.0 * m) / (6.0 * m * m * (nf + m))
    } else {
        0.5 * nf * ((2.0 / (m - 2.0)).ln() + psi(0.5 * m))
    };
    Ok(KLReport::forward(n, forward, Some(asym)))
}

/// J(n) = ∫ r^{n−1} ln(1+r²) e^{−(m−2)r²/2} dr / (2^{n/2−1}(m−2)^{−n/2}Γ(n/2)).
pub fn j_integral(n: usize, m: f64) -> Result<f64> {
    check_t(n, m)?;
    let nf = n as f64;
    let a = 0.5 * (m - 2.0);
    let dom = DomainSpec::exponential_tail(0.0)
        .with_left_power(nf + 1.0)
        .with_scale((nf / (m - 2.0)).sqrt().max(0.2 / a.sqrt()));
    let f = |node: Node| {
        let r = node.x;
        ((nf - 1.0) * r.ln() + (r * r).ln_1p().ln() - a * r * r, 1)
    };
    let res = integrate_node_fn(&f, &dom, 1e-12)?.require_converged()?;
    let ln_norm = (0.5 * nf - 1.0) * 2f64.ln() - 0.5 * nf * (m - 2.0).ln() + lg(0.5 * nf);
    Ok((res.log_abs_value - ln_norm).exp())
}

pub fn j_lower(n: usize, m: f64) -> f64 {
    let nf = n as f64;
    let ratio = (lg(0.5 * nf) - lg(0.5 * (nf + 1.0))).exp();
    psi(0.5 * nf) - (0.5 * (m - 2.0)).ln() + (0.5 * (m - 2.0) * ratio * ratio).ln_1p()
}

pub fn j_upper(n: usize, m: f64) -> f64 {
    let nf = n as f64;
    (nf / m).ln_1p() + 2.0 * nf / ((nf + m) * (m - 2.0))
}

/// D(G‖X) for the Gaussian G matched to a Student-t X, together with the forward divergence.
pub fn kl_gaussian_studentt(n: usize, m: f64) -> Result<KLReport> {
    let mut rep = kl_studentt_gaussian(n, m)?;
    let nf = n as f64;
    let h = 0.5 * (nf + m);
    let j = j_integral(n, m)?;
    let reverse = -0.5 * nf * (2.0 * std::f64::consts::E / (m - 2.0)).ln() - lg(h) + lg(0.5 * m) + h * j;
    rep.reverse = Some(reverse);
    rep.j_integral = Some(j);
    rep.j_lower = Some(j_lower(n, m));
    rep.j_upper = Some(j_upper(n, m));
    rep.rate_reverse = Some(reverse / nf);
    Ok(rep)
}

/// D(X‖G) for a Student-r vector X and the Gaussian G with the same covariance.
pub fn kl_studentr_gaussian(n: usize, m: f64) -> Result<KLReport> {
    let nf = n as f64;
    if n == 0 || !(m > nf - 2.0) || !m.is_finite() {
        return Err(Error::domain(format!("student-r needs n >= 1 and m > n - 2, got n = {n}, m = {m}")));
    }
    let e = 0.5 * (m - nf);
    let diff = if e == 0.0 { 0.0 } else { e * (psi(e + 1.0) - psi(0.5 * m + 1.0)) };
    let forward = 0.5 * nf * (2.0 * std::f64::consts::E / (m + 2.0)).ln() + lg(0.5 * m + 1.0) - lg(e + 1.0) + diff;
    let asym = 0.5 * ((m + 2.0) / (m - nf + 2.0)).ln() - nf * (m - nf) / (2.0 * (m + 2.0) * (m - nf + 2.0));
    Ok(KLReport::forward(n, forward, Some(asym)))
}
