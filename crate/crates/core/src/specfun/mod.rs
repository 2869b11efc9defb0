//! Special functions in log-safe form.

mod bessel_j;
mod bessel_k;
mod gamma;
mod zeros;

pub use bessel_j::{bessel_j, log_abs_bessel_j, NU_MAX};
pub use bessel_k::log_bessel_k_scaled;
pub use gamma::{digamma, log_gamma};
pub use zeros::{bessel_j_zero, BesselJZeros};

pub(crate) use gamma::{digamma_unchecked, lgamma_unchecked};

/// ln(1 + r²) without overflow of r².
pub(crate) fn ln1p_sq(r: f64) -> f64 {
    let r = r.abs();
    if r > 1e8 {
        2.0 * r.ln() + (1.0 / r).powi(2).ln_1p()
    } else {
        (r * r).ln_1p()
    }
}
