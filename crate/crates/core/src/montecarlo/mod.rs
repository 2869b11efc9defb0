//! Exact samplers and Monte-Carlo estimators used as independent checks of the quadrature results.
//!
//! Draws are generated in fixed blocks of `BLOCK` samples. Block k uses a ChaCha8 generator seeded
//! with the user seed and switched to stream k, so results do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::radial::{radial_pdf, EllipticalLaw, Family, Support};

pub const BLOCK: usize = 1 << 14;

/// Kurtosis above which an estimate is marked unreliable.
pub const KURTOSIS_LIMIT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Heavy-tailed summand: the standard error should not be trusted.
    pub unreliable: bool,
}

impl MCEstimate {
    /// |mean − x| in units of the standard error.
    pub fn z_score(&self, x: f64) -> f64 {
        if self.mean == x {
            return 0.0;
        }
        (self.mean - x).abs() / self.stderr
    }
}

/// One-pass mean and central moments up to order four, mergeable across blocks.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
    infinite: bool,
}

impl Moments {
    fn push(&mut self, x: f64) {
        if x.is_infinite() && x > 0.0 {
            self.infinite = true;
            return;
        }
        let n1 = self.n;
        self.n += 1.0;
        let n = self.n;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let t1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += t1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += t1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += t1;
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0.0 {
            return Self { infinite: a.infinite || b.infinite, ..b };
        }
        if b.n == 0.0 {
            return Self { infinite: a.infinite || b.infinite, ..a };
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let d2 = d * d;
        let (na, nb) = (a.n, b.n);
        let m2 = a.m2 + b.m2 + d2 * na * nb / n;
        let m3 = a.m3 + b.m3 + d * d2 * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * b.m2 - nb * a.m2) / n;
        let m4 = a.m4
            + b.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * b.m2 + nb * nb * a.m2) / (n * n)
            + 4.0 * d * (na * b.m3 - nb * a.m3) / n;
        Self { n, mean: a.mean + d * nb / n, m2, m3, m4, infinite: a.infinite || b.infinite }
    }

    fn kurtosis(&self) -> f64 {
        if self.m2 == 0.0 {
            return 0.0;
        }
        self.n * self.m4 / (self.m2 * self.m2)
    }

    fn estimate(&self, seed: u64, flagged: bool) -> MCEstimate {
        let samples = self.n as usize;
        if self.infinite {
            return MCEstimate { mean: f64::INFINITY, stderr: 0.0, samples, seed, unreliable: false };
        }
        let var = if self.n > 1.0 { self.m2 / (self.n - 1.0) } else { f64::INFINITY };
        MCEstimate {
            mean: self.mean,
            stderr: (var / self.n).sqrt(),
            samples,
            seed,
            unreliable: flagged || self.kurtosis() > KURTOSIS_LIMIT,
        }
    }
}

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Per-law draw routine.
struct Sampler {
    family: Family,
    n: usize,
    scale: f64,
    mix: Option<Gamma<f64>>,
}

impl Sampler {
    fn new(law: &EllipticalLaw) -> Result<Self> {
        let n = law.n();
        let m = law.m();
        let mix = match law.family() {
            Family::Gaussian => None,
            // 1/A ~ χ²_m
            Family::StudentT => Some(Gamma::new(0.5 * m, 2.0).map_err(|e| Error::domain(e.to_string()))?),
            // B ~ χ²_{m−n+2}
            Family::StudentR => {
                Some(Gamma::new(0.5 * (m - n as f64 + 2.0), 2.0).map_err(|e| Error::domain(e.to_string()))?)
            }
            Family::Custom => return Err(Error::domain("no sampler for custom laws")),
        };
        Ok(Self { family: law.family(), n, scale: law.scale(), mix })
    }

    /// Fills `out` with one draw and returns 1 − (‖x‖/scale)², exact for Student-r (NaN otherwise).
    fn draw<R: Rng>(&self, rng: &mut R, out: &mut [f64]) -> f64 {
        let mut ss = 0.0;
        for v in out.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *v = g;
            ss += g * g;
        }
        let mut compl = f64::NAN;
        let factor = match self.family {
            Family::Gaussian => std::f64::consts::FRAC_1_SQRT_2,
            Family::StudentT => 1.0 / self.mix.as_ref().unwrap().sample(rng).sqrt(),
            Family::StudentR => {
                let b = self.mix.as_ref().unwrap().sample(rng);
                compl = b / (ss + b);
                1.0 / (ss + b).sqrt()
            }
            Family::Custom => unreachable!(),
        } * self.scale;
        for v in out.iter_mut() {
            *v *= factor;
        }
        compl
    }

    /// ln f_law(x) for a point produced by this sampler, with `compl` its return value.
    ///
    /// Near the edge of a Student-r support ‖x‖ rounds to the edge, so the distance to it is
    /// rebuilt from `compl` whenever `law` shares the sampled scale.
    fn log_density(&self, law: &EllipticalLaw, x: &[f64], compl: f64) -> f64 {
        if law.family() == Family::StudentR && compl.is_finite() && law.scale() == self.scale {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt() / self.scale;
            return law.unit_log_profile(r, compl / (1.0 + r)) - self.n as f64 * self.scale.ln();
        }
        law.log_density(x).unwrap_or(f64::NAN)
    }
}

/// `count` independent draws, deterministic in `seed`.
pub fn sample(law: &EllipticalLaw, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let s = Sampler::new(law)?;
    let blocks = count.div_ceil(BLOCK);
    let out: Vec<Vec<Vec<f64>>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(count - b * BLOCK);
            (0..len)
                .map(|_| {
                    let mut x = vec![0.0; s.n];
                    s.draw(&mut rng, &mut x);
                    x
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Mean of g(X) over `count` draws of `law`, streamed block by block.
fn mc_mean<G>(law: &EllipticalLaw, count: usize, seed: u64, g: G) -> Result<Moments>
where
    G: Fn(&Sampler, &[f64], f64) -> f64 + Sync,
{
    if count < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let s = Sampler::new(law)?;
    let blocks = count.div_ceil(BLOCK);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(count - b * BLOCK);
            let mut x = vec![0.0; s.n];
            let mut acc = Moments::default();
            for _ in 0..len {
                let c = s.draw(&mut rng, &mut x);
                acc.push(g(&s, &x, c));
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge))
}

/// Whether ∫ f^a converges for the law (used to decide finiteness of ∫f^λ and of the estimator variance).
fn power_integrable(law: &EllipticalLaw, a: f64) -> bool {
    let n = law.n() as f64;
    match law.family() {
        Family::Gaussian => a > 0.0,
        Family::StudentT => a > 0.0 && a * (n + law.m()) > n,
        Family::StudentR => a * 0.5 * (law.m() - n) > -1.0,
        Family::Custom => true,
    }
}

/// Estimates ∫ f^λ as E_f[f^{λ−1}]; for λ = 1 estimates the Shannon entropy E_f[−ln f].
pub fn mc_power_integral(law: &EllipticalLaw, lambda: f64, count: usize, seed: u64) -> Result<MCEstimate> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be a finite positive real, got {lambda}")));
    }
    if !power_integrable(law, lambda) {
        return Err(Error::domain(format!("the integral of f^{lambda} diverges for this law")));
    }
    if lambda == 1.0 {
        let m = mc_mean(law, count, seed, |s, x, c| -s.log_density(law, x, c))?;
        return Ok(m.estimate(seed, false));
    }
    let infinite_variance = !power_integrable(law, 2.0 * lambda - 1.0);
    let m = mc_mean(law, count, seed, |s, x, c| ((lambda - 1.0) * s.log_density(law, x, c)).exp())?;
    Ok(m.estimate(seed, infinite_variance))
}

/// Estimates D(A‖B) = E_A[ln f_A − ln f_B]; +∞ when a draw of A falls outside the support of B.
pub fn mc_kl(a: &EllipticalLaw, b: &EllipticalLaw, count: usize, seed: u64) -> Result<MCEstimate> {
    if a.n() != b.n() {
        return Err(Error::domain(format!("dimensions differ: {} vs {}", a.n(), b.n())));
    }
    if b.family() == Family::Custom {
        return Err(Error::domain("custom laws are not supported"));
    }
    let m = mc_mean(a, count, seed, |s, x, c| {
        let la = s.log_density(a, x, c);
        let lb = s.log_density(b, x, c);
        if lb == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            la - lb
        }
    })?;
    Ok(m.estimate(seed, false))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of the sampled norms against `radial_pdf(law)`.
///
/// Bin edges are equiprobable under the Beta law of ‖X‖²/(1+‖X‖²) (Student-t), the Beta law of ‖X‖²
/// (Student-r) or the Gamma law of ‖X‖² (Gaussian); expected counts come from quadrature of the
/// radial density over each bin.
pub fn radial_gof(law: &EllipticalLaw, count: usize, seed: u64, bins: usize) -> Result<GofReport> {
    if bins < 2 {
        return Err(Error::domain("need at least two bins"));
    }
    let n = law.n() as f64;
    let s = law.scale();
    let quantile: Box<dyn Fn(f64) -> f64> = match law.family() {
        Family::Gaussian => {
            let g = statrs::distribution::Gamma::new(0.5 * n, 1.0).map_err(|e| Error::domain(e.to_string()))?;
            Box::new(move |u| g.inverse_cdf(u).sqrt())
        }
        Family::StudentT => {
            let b = Beta::new(0.5 * n, 0.5 * law.m()).map_err(|e| Error::domain(e.to_string()))?;
            Box::new(move |u| {
                let t = b.inverse_cdf(u);
                (t / (1.0 - t)).sqrt()
            })
        }
        Family::StudentR => {
            let b = Beta::new(0.5 * n, 0.5 * (law.m() - n) + 1.0).map_err(|e| Error::domain(e.to_string()))?;
            Box::new(move |u| b.inverse_cdf(u).sqrt())
        }
        Family::Custom => return Err(Error::domain("no sampler for custom laws")),
    };
    let mut edges: Vec<f64> = (1..bins).map(|k| s * quantile(k as f64 / bins as f64)).collect();
    edges.insert(0, 0.0);
    edges.push(match radial_pdf(law)?.support() {
        Support::HalfLine => f64::INFINITY,
        Support::Interval { upper } => upper,
    });
    let d = radial_pdf(law)?;
    let probs: Vec<f64> = edges.windows(2).map(|w| d.mass(w[0], w[1], 1e-10)).collect::<Result<Vec<_>>>()?;
    let draws = sample(law, count, seed)?;
    let mut obs = vec![0usize; bins];
    for x in &draws {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let k = edges[1..bins].partition_point(|e| *e <= r);
        obs[k] += 1;
    }
    let c = count as f64;
    let statistic: f64 = obs.iter().zip(&probs).map(|(&o, &p)| (o as f64 - c * p).powi(2) / (c * p)).sum();
    let dof = bins - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::domain(e.to_string()))?;
    Ok(GofReport { statistic, dof, p_value: chi.sf(statistic) })
}
