use super::oscillatory::cos_power_mean;
use super::*;
use crate::specfun::{bessel_j, lgamma_unchecked};

fn lg(x: f64) -> f64 {
    lgamma_unchecked(x)
}

#[test]
fn exponential_examples() {
    let r = integrate_log(|r| -r, &DomainSpec::exponential_tail(0.0), 1e-10).unwrap();
    assert!(r.converged);
    assert!(r.log_abs_value.abs() < 1e-12);
    let r = integrate_log(|r: f64| r.ln() - r, &DomainSpec::exponential_tail(0.0).with_left_power(1.0), 1e-10).unwrap();
    assert!(r.log_abs_value.abs() < 1e-12);
    // Γ(0.3) via a singular endpoint
    let r = integrate_log(|r: f64| -0.7 * r.ln() - r, &DomainSpec::exponential_tail(0.0).with_left_power(-0.7), 1e-12)
        .unwrap();
    assert!((r.log_abs_value - lg(0.3)).abs() < 1e-12);
}

#[test]
fn student_t_radial_normalisation() {
    // n = 3, m = 1
    let (n, m) = (3.0, 1.0);
    let c = 2f64.ln() + lg(0.5 * (n + m)) - lg(0.5 * n) - lg(0.5 * m);
    let f = |r: f64| c + (n - 1.0) * r.ln() - 0.5 * (n + m) * (r * r).ln_1p();
    let r = integrate_log(f, &DomainSpec::power_tail(0.0, -m - 1.0).with_left_power(n - 1.0), 1e-10).unwrap();
    assert!(r.converged);
    assert!(r.log_abs_value.abs() < 1e-10, "{:?}", r);
}

#[test]
fn huge_dynamic_range() {
    // chi density with n = 600 and unit variance per component, peak value ~ e^{-3}, tails below e^{-2000}
    let n = 600.0;
    let c = 2f64.ln() - lg(0.5 * n) - 0.5 * n * 2f64.ln();
    let f = |r: f64| c + (n - 1.0) * r.ln() - 0.5 * r * r;
    let r = integrate_log(f, &DomainSpec::exponential_tail(0.0).with_scale(24.0), 1e-12).unwrap();
    assert!(r.log_abs_value.abs() < 1e-11, "{:?}", r);
    // unnormalised: the value itself is far outside f64 range
    let g = |r: f64| (n - 1.0) * r.ln() - 0.5 * r * r;
    let r = integrate_log(g, &DomainSpec::exponential_tail(0.0).with_scale(24.0), 1e-12).unwrap();
    assert!((r.log_abs_value + c).abs() < 1e-10 * c.abs());
}

#[test]
fn shift_invariance() {
    for &c in &[-800.0, -3.0, 0.0, 5.5, 700.0] {
        let base = integrate_log(|r: f64| -r * r + r.sin(), &DomainSpec::exponential_tail(0.0), 1e-11).unwrap();
        let shifted = integrate_log(|r: f64| -r * r + r.sin() + c, &DomainSpec::exponential_tail(0.0), 1e-11).unwrap();
        assert!((shifted.log_abs_value - base.log_abs_value - c).abs() < 1e-12 * c.abs().max(1.0));
    }
}

#[test]
fn additivity() {
    let f = |r: f64| (1.0 + r * r).ln() * 0.5 - r;
    let whole = integrate_log(f, &DomainSpec::finite(0.0, 7.0), 1e-11).unwrap();
    let a = integrate_log(f, &DomainSpec::finite(0.0, 2.2), 1e-11).unwrap();
    let b = integrate_log(f, &DomainSpec::finite(2.2, 7.0), 1e-11).unwrap();
    let d = (a.to_f64() + b.to_f64() - whole.to_f64()).abs();
    assert!(d <= a.abs_error() + b.abs_error() + whole.abs_error() + 1e-15);
}

#[test]
fn signed_integrals() {
    // ∫_0^{3π/2} sin = 1
    let r = integrate_log_signed(
        |r: f64| r.sin().abs().ln(),
        |r: f64| if r.sin() >= 0.0 { 1 } else { -1 },
        &DomainSpec::finite(0.0, 1.5 * std::f64::consts::PI),
        1e-10,
    )
    .unwrap();
    assert!((r.to_f64() - 1.0).abs() < 1e-12);
    // ∫_0^∞ ln r e^{-r} dr = −γ
    let r = integrate_log_signed(
        |r: f64| r.ln().abs().ln() - r,
        |r: f64| if r < 1.0 { -1 } else { 1 },
        &DomainSpec::exponential_tail(0.0).with_left_power(0.0),
        1e-11,
    )
    .unwrap();
    assert!((r.to_f64() + 0.577_215_664_901_532_9).abs() < 1e-11, "{:?}", r);
}

#[test]
fn right_endpoint_singularity_uses_gap() {
    // ∫_0^1 (1 − r²)^{-0.9} dr = √π Γ(0.1) / (2 Γ(0.6))
    let f = |n: Node| (-0.9 * (n.gap * (2.0 - n.gap)).ln(), 1i8);
    let r = integrate_node_fn(&f, &DomainSpec::finite(0.0, 1.0).with_right_power(-0.9), 1e-12).unwrap();
    let exact = (0.5 * std::f64::consts::PI.ln() + lg(0.1) - lg(0.6)).exp() / 2.0;
    assert!(((r.to_f64() - exact) / exact).abs() < 1e-12, "{} {}", r.to_f64(), exact);
}

#[test]
fn error_estimates_are_honest() {
    // battery of closed forms; true error must stay within 10x of the estimate
    type Case = (Box<dyn Fn(f64) -> f64 + Sync>, DomainSpec, f64);
    let pi = std::f64::consts::PI;
    let cases: Vec<Case> = vec![
        (Box::new(|r: f64| -r * r), DomainSpec::exponential_tail(0.0), 0.5 * pi.sqrt()),
        (Box::new(|r: f64| -(1.0 + r * r).ln()), DomainSpec::power_tail(0.0, -2.0), 0.5 * pi),
        (Box::new(|r: f64| -0.5 * r.ln()), DomainSpec::finite(0.0, 1.0).with_left_power(-0.5), 2.0),
        (Box::new(|r: f64| 2.5 * r.ln() - r), DomainSpec::exponential_tail(0.0).with_left_power(2.5), lg(3.5).exp()),
        (Box::new(|r: f64| r.cos().ln()), DomainSpec::finite(0.0, 1.5), 1.5f64.sin()),
        (Box::new(|r: f64| -1.5 * (1.0 + r * r).ln()), DomainSpec::power_tail(0.0, -3.0), 1.0),
        (Box::new(|r: f64| -(r.exp() + 1.0).ln()), DomainSpec::exponential_tail(0.0), 2f64.ln()),
        (
            Box::new(|r: f64| 0.5 * (1.0 - r * r).max(0.0).ln()),
            DomainSpec::finite(0.0, 1.0).with_right_power(0.5),
            pi / 4.0,
        ),
    ];
    let mut bad = 0;
    let mut total = 0;
    for (f, d, exact) in &cases {
        for &tol in &[1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
            let r = integrate_log(f, d, tol).unwrap();
            let true_err = (r.to_f64() - exact).abs();
            total += 1;
            if true_err > 10.0 * r.abs_error() + 4.0 * f64::EPSILON * exact {
                bad += 1;
            }
            if r.converged {
                assert!(true_err <= 100.0 * tol * exact + 1e-15, "tol={tol} exact={exact} got={}", r.to_f64());
            }
        }
    }
    assert!(bad * 100 <= total, "{bad} of {total} estimates too optimistic");
}

#[test]
fn oscillatory_matches_brute_force() {
    use std::f64::consts::PI;
    for &nu in &[0.0, 1.0, 2.5, 5.0] {
        for &q in &[2.0, 3.0] {
            let alpha = -0.5;
            let osc = integrate_oscillatory(alpha, nu, q, 1e-10).unwrap();
            assert!(osc.converged);
            let f = |r: f64| alpha * r.ln() + q * bessel_j(nu, r).unwrap().abs().ln();
            let mut sum = 0.0;
            let mut a = 0.0;
            while a < 1e4 {
                let b = a + 10.0;
                let d = if a == 0.0 {
                    DomainSpec::finite(a, b).with_left_power(alpha + nu * q)
                } else {
                    DomainSpec::finite(a, b)
                };
                sum += integrate_log(f, &d, 1e-10).unwrap().to_f64();
                a = b;
            }
            // phase-averaged envelope beyond 1e4
            let s = alpha - 0.5 * q + 1.0;
            let tail = cos_power_mean(q) * (2.0 / PI).powf(0.5 * q) * 1e4f64.powf(s) / -s;
            let brute = sum + tail;
            let rel = (osc.to_f64() - brute).abs() / brute;
            assert!(rel < 1e-6, "nu={nu} q={q} osc={} brute={brute}", osc.to_f64());
        }
    }
}

#[test]
fn enveloped_domain() {
    // 3·r^{-2}J_1(r)² through the generic oscillatory domain kind
    let f = |r: f64| 3f64.ln() - 2.0 * r.ln() + 2.0 * bessel_j(1.0, r).unwrap().abs().ln();
    let r =
        integrate_log(f, &DomainSpec::oscillatory_power_tail(0.0, 1.0, 2.0, -2.0).with_left_power(0.0), 1e-9).unwrap();
    // ∫ J_1² t^{-2} = 4/(3π)
    let exact = 3.0 * 4.0 / (3.0 * std::f64::consts::PI);
    assert!(((r.to_f64() - exact) / exact).abs() < 1e-9, "{}", r.to_f64());
}

#[test]
fn validation() {
    assert!(integrate_log(|r| -r, &DomainSpec::finite(1.0, 0.0), 1e-8).is_err());
    assert!(integrate_log(|r| -r, &DomainSpec::exponential_tail(-1.0), 1e-8).is_err());
    assert!(integrate_log(|r| -r, &DomainSpec::exponential_tail(0.0), 1e-15).is_err());
    assert!(integrate_log(|r| -r, &DomainSpec::oscillatory_power_tail(0.0, 1.0, 2.0, 0.0), 1e-8).is_err());
}

#[test]
fn nearly_divergent_endpoints() {
    // ∫ r^(2b−1)(1+r²)^(−b−e) = ½B(b, e), with both ends barely integrable
    for (b, e) in [(0.0025, 0.3), (1.5, 0.0005), (0.004, 0.002)] {
        let f = move |r: f64| (2.0 * b - 1.0) * r.ln() - (b + e) * crate::specfun::ln1p_sq(r);
        let dom = DomainSpec::power_tail(0.0, -1.0 - 2.0 * e).with_left_power(2.0 * b - 1.0);
        let r = integrate_log(f, &dom, 1e-10).unwrap();
        let want = 0.5f64.ln() + lg(b) + lg(e) - lg(b + e);
        assert!(r.converged && (r.log_abs_value - want).abs() < 1e-9, "b={b} e={e}: {} vs {want}", r.log_abs_value);
    }
    // a logarithmic factor at both ends
    let f = |r: f64| -0.99 * r.ln() - 0.02 * crate::specfun::ln1p_sq(r) + r.ln().abs().ln_1p();
    let sign = |_: f64| 1;
    let a = integrate_log_signed(f, sign, &DomainSpec::power_tail(0.0, -1.01).with_left_power(-0.99), 1e-10).unwrap();
    let b1 = integrate_log(f, &DomainSpec::finite(0.0, 1.0).with_left_power(-0.99), 1e-10).unwrap();
    let b2 = integrate_log(f, &DomainSpec::power_tail(1.0, -1.01), 1e-10).unwrap();
    let d = (a.to_f64() - b1.to_f64() - b2.to_f64()).abs();
    assert!(d < 1e-8 * a.to_f64(), "{} vs {}", a.to_f64(), b1.to_f64() + b2.to_f64());
}
