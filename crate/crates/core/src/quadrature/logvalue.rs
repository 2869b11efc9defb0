use std::cmp::Ordering;

/// A signed real stored as (ln|v|, sign) so that very large or very small magnitudes survive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { ln_abs: 0.0, sign: 1 };

    pub fn new(ln_abs: f64, sign: i8) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { ln_abs, sign: sign.signum() }
        }
    }

    pub fn positive(ln_abs: f64) -> Self {
        Self::new(ln_abs, 1)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self { ln_abs: v.abs().ln(), sign: if v > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self { ln_abs: self.ln_abs, sign: 1 }
        }
    }

    pub fn neg(self) -> Self {
        Self { ln_abs: self.ln_abs, sign: -self.sign }
    }

    /// Multiply by e^c.
    pub fn shift(self, c: f64) -> Self {
        Self::new(self.ln_abs + c, self.sign)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.ln_abs + o.ln_abs, self.sign * o.sign)
    }

    pub fn add(self, o: Self) -> Self {
        if o.sign == 0 {
            return self;
        }
        if self.sign == 0 {
            return o;
        }
        let m = self.ln_abs.max(o.ln_abs);
        let v = self.sign as f64 * (self.ln_abs - m).exp() + o.sign as f64 * (o.ln_abs - m).exp();
        Self::from_f64(v).shift(m)
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    /// Ordering on magnitudes.
    pub fn cmp_abs(self, o: Self) -> Ordering {
        self.ln_abs.partial_cmp(&o.ln_abs).unwrap_or(Ordering::Equal)
    }
}

/// Sum of many signed log values with a single max-shift.
pub fn log_sum<I: IntoIterator<Item = LogValue>>(items: I) -> LogValue {
    let v: Vec<LogValue> = items.into_iter().filter(|x| x.sign != 0).collect();
    let m = v.iter().map(|x| x.ln_abs).fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return LogValue::ZERO;
    }
    let s: f64 = v.iter().map(|x| x.sign as f64 * (x.ln_abs - m).exp()).sum();
    LogValue::from_f64(s).shift(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = LogValue::from_f64(3.0);
        let b = LogValue::from_f64(-5.0);
        assert!((a.add(b).to_f64() + 2.0).abs() < 1e-15);
        assert!((a.mul(b).to_f64() + 15.0).abs() < 1e-13);
        assert!(a.sub(a).is_zero());
        let huge = LogValue::positive(2000.0);
        let s = huge.add(huge);
        assert!((s.ln_abs - 2000.0 - 2f64.ln()).abs() < 1e-12);
        let t = log_sum([LogValue::positive(-1000.0), LogValue::positive(-1000.0), LogValue::ZERO]);
        assert!((t.ln_abs + 1000.0 - 2f64.ln()).abs() < 1e-12);
    }
}
