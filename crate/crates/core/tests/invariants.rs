//! Randomised invariants over the public API.

use proptest::prelude::*;
use ueplab::divergence::{kl_radial, tv_radial};
use ueplab::entropy::{renyi_bound, usum, EntropyOrder};
use ueplab::montecarlo::{mc_power_integral, sample};
use ueplab::quadrature::{integrate_log, DomainSpec};
use ueplab::radial::{existence_threshold, matched_gaussian, radial_pdf, EllipticalLaw};
use ueplab::specfun::{bessel_j, bessel_j_zero, digamma, log_bessel_k_scaled, log_gamma};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn gamma_recurrences(x in 0.1f64..1000.0) {
        let big = log_gamma(x + 1.0).unwrap();
        let d = big - log_gamma(x).unwrap() - x.ln();
        // beyond x ≈ 100 a few ulps of ln Γ itself exceed 1e-12
        let tol = 1e-12 + 4.0 * f64::EPSILON * big.abs();
        prop_assert!(d.abs() < tol, "x={} d={}", x, d);
        let e = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(e.abs() < 1e-11, "x={} e={}", x, e);
    }

    #[test]
    fn bessel_k_even_in_order(nu in 0.0f64..40.0, r in 1e-3f64..500.0) {
        let a = log_bessel_k_scaled(nu, r).unwrap();
        let b = log_bessel_k_scaled(-nu, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn half_order_closed_forms(r in 0.01f64..50.0) {
        let j = bessel_j(0.5, r).unwrap();
        prop_assert!((j - (2.0 / (std::f64::consts::PI * r)).sqrt() * r.sin()).abs() < 1e-12);
        let k = log_bessel_k_scaled(0.5, r).unwrap().exp();
        prop_assert!((k - (std::f64::consts::PI / (2.0 * r)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zeros_are_bracketed(nu in 0.0f64..30.0, k in 1usize..60) {
        let z = bessel_j_zero(nu, k).unwrap();
        let d = 1e-4 * z;
        prop_assert!(bessel_j(nu, z - d).unwrap() * bessel_j(nu, z + d).unwrap() < 0.0);
    }

    #[test]
    fn bound_orders_are_symmetric(p in 1.01f64..50.0) {
        let o = EntropyOrder::from_p(p).unwrap();
        let b = renyi_bound(p).unwrap();
        prop_assert!((renyi_bound(o.q).unwrap() - b).abs() < 1e-12 * b.abs().max(1.0));
        prop_assert!(b <= 1.0 + std::f64::consts::PI.ln() + 1e-12);
        prop_assert!(b > (2.0 * std::f64::consts::PI).ln());
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn quadrature_shift_invariance(c in -700.0f64..700.0, a in 0.2f64..3.0) {
        let f = move |r: f64| -a * r * r + (1.0 + r).ln();
        let base = integrate_log(f, &DomainSpec::exponential_tail(0.0), 1e-11).unwrap();
        let shifted = integrate_log(move |r: f64| f(r) + c, &DomainSpec::exponential_tail(0.0), 1e-11).unwrap();
        prop_assert!((shifted.log_abs_value - base.log_abs_value - c).abs() < 1e-12 * c.abs().max(1.0));
    }

    #[test]
    fn radial_densities_are_normalised(n in 1usize..12, dm in 0.1f64..20.0, fam in 0u8..3) {
        let law = match fam {
            0 => EllipticalLaw::gaussian(n),
            1 => EllipticalLaw::student_t(n, dm),
            _ => EllipticalLaw::student_r(n, n as f64 - 2.0 + dm),
        }.unwrap();
        let d = radial_pdf(&law).unwrap();
        let total = d.mass(0.0, f64::INFINITY, 1e-10).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-7, "{:?}: {}", law, total);
    }

    #[test]
    fn usum_respects_bound_and_scale(n in 1usize..9, m in 1.0f64..20.0, p in 1.2f64..6.0, s in 0.1f64..10.0, student_r in any::<bool>()) {
        let law = if student_r {
            EllipticalLaw::student_r(n, n as f64 + m - 1.0)
        } else {
            EllipticalLaw::student_t(n, m)
        }.unwrap();
        if existence_threshold(&law).check_p(p).is_err() {
            prop_assert!(usum(&law, p, 1e-10).is_err());
            return Ok(());
        }
        let u = usum(&law, p, 1e-10).unwrap();
        prop_assert!(u.value >= u.bound - 10.0 * u.error_estimate);
        let v = usum(&law.clone().with_scale(s).unwrap(), p, 1e-10).unwrap();
        prop_assert!((u.value - v.value).abs() < 1e-9, "{} vs {}", u.value, v.value);
    }

    #[test]
    fn divergences_are_nonnegative(n in 1usize..8, dm in 0.5f64..30.0, student_r in any::<bool>()) {
        let law = if student_r {
            EllipticalLaw::student_r(n, n as f64 + dm)
        } else {
            EllipticalLaw::student_t(n, 2.0 + dm)
        }.unwrap();
        let g = matched_gaussian(&law).unwrap();
        let (dy, dz) = (radial_pdf(&law).unwrap(), radial_pdf(&g).unwrap());
        prop_assert!(kl_radial(&dy, &dz).unwrap() >= -1e-12);
        let tv = tv_radial(&dy, &dz).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&tv));
    }
}

proptest! {
    #![proptest_config(cfg(16))]

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), n in 1usize..6) {
        let law = EllipticalLaw::student_t(n, 2.5).unwrap();
        prop_assert_eq!(sample(&law, 100, seed).unwrap(), sample(&law, 100, seed).unwrap());
        let a = mc_power_integral(&law, 1.0, 40_000, seed).unwrap();
        let b = mc_power_integral(&law, 1.0, 40_000, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
