use std::collections::BinaryHeap;

use super::logvalue::{log_sum, LogValue};
use super::rule;
use super::{DomainKind, DomainSpec, LogQuadResult};
use crate::error::{Error, Result};

const PANEL_LIMIT: usize = 4000;
/// End exponents below this get an analytic end piece.
const NEAR_DIVERGENT: f64 = 0.5;

/// An abscissa together with its distance to the right end of the whole domain.
///
/// Integrands with a singular factor at a finite right end should compute that factor from
/// `gap` rather than from `x`, which may round onto the endpoint.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub gap: f64,
}

pub(crate) type NodeFn<'a> = dyn Fn(Node) -> (f64, i8) + Sync + 'a;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Map {
    Linear {
        a: f64,
        b: f64,
    },
    /// r = a + w·u^k
    PowLeft {
        a: f64,
        w: f64,
        k: f64,
    },
    /// r = b − w·u^k
    PowRight {
        b: f64,
        w: f64,
        k: f64,
    },
    /// r = a + s·u/(1−u)
    TailExp {
        a: f64,
        s: f64,
    },
    /// r = a·u^(−1/d)
    TailPow {
        a: f64,
        d: f64,
    },
}

impl Map {
    fn eval(&self, u: f64, end: f64) -> (Node, f64) {
        match *self {
            Map::Linear { a, b } => {
                let x = a + (b - a) * u;
                (Node { x, gap: end - x }, (b - a).ln())
            }
            Map::PowLeft { a, w, k } => {
                let x = a + w * u.powf(k);
                (Node { x, gap: end - x }, (w * k).ln() + (k - 1.0) * u.ln())
            }
            Map::PowRight { b, w, k } => {
                let d = w * u.powf(k);
                (Node { x: b - d, gap: (end - b) + d }, (w * k).ln() + (k - 1.0) * u.ln())
            }
            Map::TailExp { a, s } => {
                let x = a + s * u / (1.0 - u);
                (Node { x, gap: end - x }, s.ln() - 2.0 * (1.0 - u).ln())
            }
            Map::TailPow { a, d } => {
                let x = a * u.powf(-1.0 / d);
                (Node { x, gap: end - x }, (a / d).ln() + (-1.0 / d - 1.0) * u.ln())
            }
        }
    }
}

/// Exponent of the polynomial substitution used at an endpoint where the integrand behaves like |r − r0|^β.
pub(crate) fn endpoint_exponent(beta: Option<f64>) -> Option<f64> {
    match beta {
        Some(b) if b > -1.0 && b < 8.0 => Some(3.0 / (b + 1.0)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    map: Map,
    u0: f64,
    u1: f64,
    val: LogValue,
    err: f64,
    resabs: f64,
}

#[derive(PartialEq)]
struct Key(f64, usize);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&o.0).unwrap_or(std::cmp::Ordering::Equal).then(o.1.cmp(&self.1))
    }
}

pub(crate) struct Engine<'a> {
    f: &'a NodeFn<'a>,
    end: f64,
    panels: Vec<Panel>,
    pub evaluations: usize,
    xs: [f64; 21],
    wk: [f64; 21],
    wg: [f64; 21],
}

impl<'a> Engine<'a> {
    pub fn new(f: &'a NodeFn<'a>, end: f64) -> Self {
        let (wk, wg) = rule::weights();
        Self { f, end, panels: Vec::new(), evaluations: 0, xs: rule::nodes(), wk, wg }
    }

    fn eval(&mut self, map: Map, u0: f64, u1: f64) -> Result<Panel> {
        let c = 0.5 * (u0 + u1);
        let h = 0.5 * (u1 - u0);
        let mut g = [f64::NEG_INFINITY; 21];
        let mut s = [0i8; 21];
        for i in 0..21 {
            let u = c + h * self.xs[i];
            let (node, lj) = map.eval(u, self.end);
            let (lf, sg) = (self.f)(node);
            if lf.is_nan() || lf == f64::INFINITY {
                return Err(Error::nonconv(format!("integrand is not finite at r = {}", node.x)));
            }
            if sg != 0 && lf != f64::NEG_INFINITY {
                g[i] = lf + lj;
                s[i] = sg;
            }
        }
        self.evaluations += 21;
        let m = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY || m.is_nan() {
            return Ok(Panel { map, u0, u1, val: LogValue::ZERO, err: f64::NEG_INFINITY, resabs: f64::NEG_INFINITY });
        }
        let mut e = [0.0; 21];
        for i in 0..21 {
            e[i] = s[i] as f64 * (g[i] - m).exp();
        }
        let k: f64 = (0..21).map(|i| self.wk[i] * e[i]).sum();
        let gs: f64 = (0..21).map(|i| self.wg[i] * e[i]).sum();
        let resabs: f64 = (0..21).map(|i| self.wk[i] * e[i].abs()).sum();
        let mean = 0.5 * k;
        let resasc: f64 = (0..21).map(|i| self.wk[i] * (e[i] - mean).abs()).sum();
        let mut err = (k - gs).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        err = err.max(50.0 * f64::EPSILON * resabs);
        let lh = h.ln();
        Ok(Panel {
            map,
            u0,
            u1,
            val: LogValue::from_f64(k).shift(m + lh),
            err: err.ln() + m + lh,
            resabs: resabs.ln() + m + lh,
        })
    }

    /// Covers [a, a + w] for an integrand behaving like (r − a)^β near a = 0.
    ///
    /// When β is close to −1 the substitution would place nodes that underflow onto the endpoint,
    /// so the innermost piece comes from the local form r^β(c0 + c1 ln r).
    pub fn push_left(&mut self, a: f64, w: f64, k: f64, beta: f64) -> Result<LogValue> {
        let map = Map::PowLeft { a, w, k };
        if a != 0.0 || 1.0 + beta >= NEAR_DIVERGENT {
            return self.push(map, 0.0, 1.0);
        }
        let cut = self.end_piece(
            map,
            |c| {
                let x = w * c;
                [x, x * 1e10, x * 1e20]
            },
            1.0 + beta,
        )?;
        self.push(map, cut.powf(1.0 / k), 1.0)
    }

    /// Covers [a, ∞) for an integrand decaying like r^(−1−d), possibly times a power of ln r.
    pub fn push_power_tail(&mut self, a: f64, d: f64) -> Result<LogValue> {
        let map = Map::TailPow { a, d };
        if d >= NEAR_DIVERGENT {
            return self.push(map, 0.0, 1.0);
        }
        let cut = self.end_piece(
            map,
            |c| {
                let x = a / c;
                [x, x * 1e-10, x * 1e-20]
            },
            -d,
        )?;
        self.push(map, cut.powf(d), 1.0)
    }

    /// Analytic piece ∫ r^(γ−1)(c0 + c1 ln r) over [0, x₀] (γ > 0) or [x₀, ∞) (γ < 0).
    ///
    /// c0 and c1 are fitted at xs[0], xs[1]; xs[2] checks the fit and sets the error estimate.
    ///
    /// The cut starts at 1e−200 relative and is relaxed while the integrand is not finite there;
    /// the cut actually used is returned.
    fn end_piece<P>(&mut self, map: Map, points: P, gamma: f64) -> Result<f64>
    where
        P: Fn(f64) -> [f64; 3],
    {
        let mut lg = [0.0; 3];
        let mut sg = [0i8; 3];
        let mut xs = [0.0; 3];
        let mut cut = 0.0;
        for c in [1e-200, 1e-100, 1e-50, 1e-25] {
            xs = points(c);
            let mut ok = xs.iter().all(|x| x.is_finite() && *x > 0.0);
            for i in 0..3 {
                if !ok {
                    break;
                }
                let (lf, s) = (self.f)(Node { x: xs[i], gap: self.end - xs[i] });
                self.evaluations += 1;
                ok = !(lf.is_nan() || lf == f64::INFINITY);
                lg[i] = if s == 0 { f64::NEG_INFINITY } else { lf - (gamma - 1.0) * xs[i].ln() };
                sg[i] = s;
            }
            if ok {
                cut = c;
                break;
            }
        }
        if cut == 0.0 {
            return Err(Error::nonconv(format!("integrand is not finite near r = {}", xs[0])));
        }
        let top = lg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Ok(cut);
        }
        let g: Vec<f64> = (0..3).map(|i| sg[i] as f64 * (lg[i] - top).exp()).collect();
        let (l0, l1, l2) = (xs[0].ln(), xs[1].ln(), xs[2].ln());
        let c1 = (g[1] - g[0]) / (l1 - l0);
        let miss = (g[0] + c1 * (l2 - l0) - g[2]).abs();
        // ∫ r^(γ−1)(c0 + c1 ln r) = x₀^γ [g(x₀)/γ − c1/γ²] toward the origin, minus that toward infinity
        let v = if gamma > 0.0 { g[0] / gamma - c1 / (gamma * gamma) } else { c1 / (gamma * gamma) - g[0] / gamma };
        let scale = top + gamma * l0;
        let val = LogValue::from_f64(v).shift(scale);
        let err = (miss / gamma.abs()).max(1e-15 * v.abs()).ln() + scale;
        let resabs = val.ln_abs.max(err);
        self.panels.push(Panel { map, u0: 0.0, u1: 0.0, val, err, resabs });
        Ok(cut)
    }

    pub fn push(&mut self, map: Map, u0: f64, u1: f64) -> Result<LogValue> {
        let p = self.eval(map, u0, u1)?;
        self.panels.push(p);
        Ok(p.val)
    }

    pub fn total(&self) -> LogValue {
        log_sum(self.panels.iter().map(|p| p.val))
    }

    pub fn abs_total(&self) -> f64 {
        log_sum(self.panels.iter().map(|p| LogValue::positive(p.resabs))).ln_abs
    }

    /// Refine the panel with the largest error until the relative tolerance is met.
    pub fn run(mut self, rel_tol: f64) -> Result<LogQuadResult> {
        let mut heap: BinaryHeap<Key> = self.panels.iter().enumerate().map(|(i, p)| Key(p.err, i)).collect();
        let ltol = rel_tol.ln();
        let lfloor = (50.0 * f64::EPSILON).ln();
        loop {
            let total = self.total();
            let err = log_sum(self.panels.iter().map(|p| LogValue::positive(p.err))).ln_abs;
            let abs_total = self.abs_total();
            let converged = err <= ltol + total.ln_abs || err <= lfloor + abs_total || err == f64::NEG_INFINITY;
            let stuck = heap.is_empty();
            if converged || self.panels.len() >= PANEL_LIMIT || stuck {
                return Ok(LogQuadResult::from_parts(total, err, self.evaluations, converged));
            }
            let Key(_, idx) = heap.pop().unwrap();
            let p = self.panels[idx];
            let mid = 0.5 * (p.u0 + p.u1);
            if !(mid > p.u0 && mid < p.u1) || (p.u1 - p.u0) < 1e-15 * p.u1.abs().max(1e-300) {
                continue;
            }
            let left = self.eval(p.map, p.u0, mid)?;
            let right = self.eval(p.map, mid, p.u1)?;
            self.panels[idx] = left;
            self.panels.push(right);
            heap.push(Key(left.err, idx));
            heap.push(Key(right.err, self.panels.len() - 1));
        }
    }
}

/// Adaptive integration of a node integrand over a non-oscillatory domain.
pub(crate) fn integrate_nodes(f: &NodeFn<'_>, domain: &DomainSpec, rel_tol: f64) -> Result<LogQuadResult> {
    let kl = endpoint_exponent(domain.left_power);
    let kr = endpoint_exponent(domain.right_power);
    match domain.kind {
        DomainKind::Finite { a, b } => {
            let mut e = Engine::new(f, b);
            let mid = 0.5 * (a + b);
            match kl {
                Some(k) => e.push_left(a, mid - a, k, domain.left_power.unwrap())?,
                None => e.push(Map::Linear { a, b: mid }, 0.0, 1.0)?,
            };
            match kr {
                Some(k) => e.push(Map::PowRight { b, w: b - mid, k }, 0.0, 1.0)?,
                None => e.push(Map::Linear { a: mid, b }, 0.0, 1.0)?,
            };
            e.run(rel_tol)
        }
        DomainKind::ExponentialTail { a } => half_line(f, a, domain.scale, kl.zip(domain.left_power), None, rel_tol),
        DomainKind::PowerTail { a, exponent } => {
            if exponent >= -1.0 {
                return Err(Error::domain(format!("power tail r^{exponent} is not integrable")));
            }
            half_line(f, a, domain.scale, kl.zip(domain.left_power), Some(-exponent - 1.0), rel_tol)
        }
        DomainKind::OscillatoryPowerTail { .. } => {
            Err(Error::domain("oscillatory domains are handled by the arch integrator"))
        }
    }
}

fn half_line(
    f: &NodeFn<'_>,
    a: f64,
    scale: f64,
    kl: Option<(f64, f64)>,
    power_decay: Option<f64>,
    rel_tol: f64,
) -> Result<LogQuadResult> {
    let mut e = Engine::new(f, f64::INFINITY);
    let ratio = 2f64.powf(0.25);
    let mut x = a + scale / 16.0;
    let first = match kl {
        Some((k, beta)) => e.push_left(a, x - a, k, beta)?,
        None => e.push(Map::Linear { a, b: x }, 0.0, 1.0)?,
    };
    let mut prev = first;
    let mut quiet = 0;
    let cut = rel_tol.ln() - 7.0;
    loop {
        let y = a + (x - a) * ratio;
        let v = e.push(Map::Linear { a: x, b: y }, 0.0, 1.0)?;
        x = y;
        let decreasing = v.ln_abs < prev.ln_abs || v.is_zero();
        prev = v;
        if x - a < 4.0 * scale {
            continue;
        }
        let tot = e.abs_total();
        let small = match power_decay {
            None => v.is_zero() || v.ln_abs < tot + cut,
            Some(_) => x - a >= 8.0 * scale && v.ln_abs < tot - 4.0,
        };
        quiet = if small && decreasing { quiet + 1 } else { 0 };
        if quiet >= 2 || x - a > 1e12 * scale {
            break;
        }
    }
    match power_decay {
        None => e.push(Map::TailExp { a: x, s: x - a }, 0.0, 1.0)?,
        Some(d) => {
            if x <= 0.0 {
                return Err(Error::domain("power tail requires a positive breakpoint"));
            }
            e.push_power_tail(x, d)?
        }
    };
    e.run(rel_tol)
}
