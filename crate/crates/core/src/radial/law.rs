use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specfun::{lgamma_unchecked as lg, ln1p_sq};

use super::{Support, TailClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    StudentT,
    StudentR,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gaussian => "gaussian",
            Family::StudentT => "student-t",
            Family::StudentR => "student-r",
            Family::Custom => "custom",
        })
    }
}

/// A user-supplied density profile: the n-dimensional density is x ↦ exp(log_profile(‖x‖)).
#[derive(Clone)]
pub struct CustomProfile {
    pub log_profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub support: Support,
    pub tail: TailClass,
    /// Exponent β with profile(r) ~ (1 − r)^β at a finite support edge.
    pub edge_power: Option<f64>,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile").field("support", &self.support).field("tail", &self.tail).finish()
    }
}

/// An elliptical law with characteristic matrix scale²·I.
///
/// The Gaussian member has variance 1/2 per component at unit scale, which makes it its own
/// conjugate.
#[derive(Debug, Clone)]
pub struct EllipticalLaw {
    family: Family,
    n: usize,
    m: f64,
    scale: f64,
    custom: Option<CustomProfile>,
}

impl EllipticalLaw {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::domain("dimension n must be at least 1"));
        }
        Ok(())
    }

    pub fn gaussian(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self { family: Family::Gaussian, n, m: f64::NAN, scale: 1.0, custom: None })
    }

    pub fn student_t(n: usize, m: f64) -> Result<Self> {
        Self::check_n(n)?;
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain(format!("student-t needs m > 0, got {m}")));
        }
        Ok(Self { family: Family::StudentT, n, m, scale: 1.0, custom: None })
    }

    pub fn student_r(n: usize, m: f64) -> Result<Self> {
        Self::check_n(n)?;
        if !(m > n as f64 - 2.0) || !m.is_finite() {
            return Err(Error::domain(format!("student-r needs m > n - 2 = {}, got {m}", n as f64 - 2.0)));
        }
        Ok(Self { family: Family::StudentR, n, m, scale: 1.0, custom: None })
    }

    pub fn custom(n: usize, profile: CustomProfile) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self { family: Family::Custom, n, m: f64::NAN, scale: 1.0, custom: Some(profile) })
    }

    /// Build a law from a family tag; `m` is ignored for the Gaussian.
    pub fn new(family: Family, n: usize, m: f64) -> Result<Self> {
        match family {
            Family::Gaussian => Self::gaussian(n),
            Family::StudentT => Self::student_t(n, m),
            Family::StudentR => Self::student_r(n, m),
            Family::Custom => Err(Error::domain("custom laws need a profile")),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain(format!("scale must be positive, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degrees of freedom (NaN for Gaussian and custom laws).
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn custom_profile(&self) -> Option<&CustomProfile> {
        self.custom.as_ref()
    }

    /// Same family and parameters in another dimension.
    pub fn with_dimension(&self, k: usize) -> Result<Self> {
        let law = match self.family {
            Family::Gaussian => Self::gaussian(k)?,
            Family::StudentT => Self::student_t(k, self.m)?,
            Family::StudentR => Self::student_r(k, self.m)?,
            Family::Custom => return Err(Error::domain("custom laws have no canonical lower-dimensional version")),
        };
        law.with_scale(self.scale)
    }

    /// ln of the density profile at unit scale, as a function of ‖x‖ (and the distance to the
    /// support edge, for compact laws).
    pub(crate) fn unit_log_profile(&self, r: f64, gap: f64) -> f64 {
        let n = self.n as f64;
        let m = self.m;
        let lpi = std::f64::consts::PI.ln();
        match self.family {
            Family::Gaussian => -0.5 * n * lpi - r * r,
            Family::StudentT => lg(0.5 * (n + m)) - 0.5 * n * lpi - lg(0.5 * m) - 0.5 * (n + m) * ln1p_sq(r),
            Family::StudentR => {
                if gap <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let e = 0.5 * (m - n);
                let c = lg(0.5 * m + 1.0) - 0.5 * n * lpi - lg(e + 1.0);
                if e == 0.0 {
                    c
                } else {
                    c + e * (gap * (2.0 - gap)).ln()
                }
            }
            Family::Custom => (self.custom.as_ref().unwrap().log_profile)(r),
        }
    }

    /// ln f(x) for the n-dimensional density.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::domain(format!("point has {} coordinates, law has dimension {}", x.len(), self.n)));
        }
        let s = self.scale;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt() / s;
        Ok(self.log_density_at_radius(r) - self.n as f64 * s.ln())
    }

    /// ln f at unit scale for a point of norm r.
    pub(crate) fn log_density_at_radius(&self, r: f64) -> f64 {
        let gap = match self.support() {
            Support::HalfLine => f64::INFINITY,
            Support::Interval { upper } => upper - r,
        };
        self.unit_log_profile(r, gap)
    }

    /// Support of the norm at unit scale.
    pub(crate) fn support(&self) -> Support {
        match self.family {
            Family::StudentR => Support::Interval { upper: 1.0 },
            Family::Custom => self.custom.as_ref().unwrap().support,
            _ => Support::HalfLine,
        }
    }
}
