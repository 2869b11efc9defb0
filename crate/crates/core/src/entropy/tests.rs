use super::*;

#[test]
fn bound_values() {
    assert!((renyi_bound(2.0).unwrap() - (1.0 + PI.ln())).abs() < 1e-15);
    assert!((renyi_bound(4.0).unwrap() - 2.0995012).abs() < 1e-7);
    let want = (2.0 * PI).ln() + 4f64.ln() / 2.0 - 1.5 * (4.0f64 / 3.0).ln();
    assert!((renyi_bound(4.0).unwrap() - want).abs() < 1e-14);
    assert!((renyi_bound(f64::INFINITY).unwrap() - (2.0 * PI).ln()).abs() < 1e-15);
    assert!((renyi_bound(1e12).unwrap() - (2.0 * PI).ln()).abs() < 1e-10);
    for &t in &[1e-6, -1e-6, 1e-9, 3e-8] {
        assert!((renyi_bound(2.0 + t).unwrap() - renyi_bound(2.0).unwrap()).abs() < 1e-6);
    }
    assert!(renyi_bound(1.0).is_err());
}

#[test]
fn entropy_order() {
    let o = EntropyOrder::from_p(3.0).unwrap();
    assert!((1.0 / o.p + 1.0 / o.q - 1.0).abs() < 1e-15);
    assert!(EntropyOrder::from_q(2.0).unwrap().is_shannon());
    let o = EntropyOrder::from_q(2.1).unwrap();
    assert_eq!(o.q, 2.1);
    assert!((o.p - 2.1 / 1.1).abs() < 1e-15);
}

#[test]
fn radial_entropy_examples() {
    let g = radial_pdf(&EllipticalLaw::gaussian(1).unwrap()).unwrap();
    assert!((renyi_entropy_radial(&g, 1.0).unwrap() - 0.5 * (PI.ln() + 1.0)).abs() < 1e-10);
    let c = radial_pdf(&EllipticalLaw::student_t(1, 1.0).unwrap()).unwrap();
    assert!((renyi_entropy_radial(&c, 1.0).unwrap() - (4.0 * PI).ln()).abs() < 1e-9);
    // Cauchy, λ = 2: ∫ f² = 1/(2π)
    assert!((renyi_entropy_radial(&c, 2.0).unwrap() - (2.0 * PI).ln()).abs() < 1e-9);
}

#[test]
fn gaussian_renyi_closed_form() {
    for &n in &[1usize, 3, 8] {
        let d = radial_pdf(&EllipticalLaw::gaussian(n).unwrap().with_scale(1.7).unwrap()).unwrap();
        for &l in &[0.5f64, 1.0, 1.5, 4.0] {
            let want = 0.5 * n as f64 * ((PI * 1.7f64.powi(2)).ln() + if l == 1.0 { 1.0 } else { l.ln() / (l - 1.0) });
            let got = renyi_entropy_radial(&d, l).unwrap();
            assert!((got - want).abs() < 1e-9, "n={n} l={l}: {got} vs {want}");
        }
    }
}

#[test]
fn gaussian_equality() {
    for n in 1..=50 {
        let law = EllipticalLaw::gaussian(n).unwrap();
        for &p in &[1.1, 1.5, 2.0, 3.0, 10.0] {
            let u = usum(&law, p, 1e-10).unwrap();
            assert!(u.gap.abs() < 1e-10, "n={n} p={p}: {}", u.gap);
        }
    }
    let u = usum_quadrature(&EllipticalLaw::gaussian(4).unwrap(), 3.0, 1e-10).unwrap();
    assert!(u.gap.abs() < 1e-9);
}

#[test]
fn closed_forms_match_radial_quadrature() {
    let mut laws = Vec::new();
    for &n in &[1usize, 2, 3, 6] {
        let nf = n as f64;
        for &m in &[1.0, nf, nf + 2.0, 2.0 * nf + 1.0] {
            laws.push(EllipticalLaw::student_t(n, m).unwrap());
            if let Ok(l) = EllipticalLaw::student_r(n, m) {
                laws.push(l);
            }
        }
    }
    for law in laws {
        for &p in &[1.3, 2.0, 3.0, 10.0] {
            let Ok(a) = usum(&law, p, 1e-10) else {
                assert!(existence_threshold(&law).check_p(p).is_err(), "{law:?} p={p}");
                continue;
            };
            let b = usum_quadrature(&law, p, 1e-10).unwrap();
            assert!((a.value - b.value).abs() < 1e-8, "{law:?} p={p}: {} vs {}", a.value, b.value);
        }
    }
}

#[test]
fn exppower_examples() {
    let v = usum_closed_exppower(1, 2.0).unwrap();
    assert!((v - (PI.ln() + 3.0 * LN2 - 1.0)).abs() < 1e-13);
    assert!((v - 2.2241714).abs() < 1e-7);
    assert!((usum_closed_exppower(10_000, 2.0).unwrap() - (1.0 + PI.ln())).abs() < 1e-3);
    let a = usum_closed_exppower(2, 3.0).unwrap();
    let b = usum(&EllipticalLaw::student_t(2, 4.0).unwrap(), 3.0, 1e-10).unwrap().value;
    assert!((a - b).abs() < 1e-8);
    let u = usum(&EllipticalLaw::student_t(1, 3.0).unwrap(), 2.0, 1e-10).unwrap();
    assert!((u.value - v).abs() < 1e-8);
}

const LN2: f64 = std::f64::consts::LN_2;

#[test]
fn exppower_agrees_with_quadrature_path() {
    for n in (1..=30).step_by(4) {
        for &p in &[1.5, 2.0, 4.0] {
            let a = usum_closed_exppower(n, p).unwrap();
            let b = usum(&EllipticalLaw::student_t(n, n as f64 + 2.0).unwrap(), p, 1e-10).unwrap().value;
            assert!(((a - b) / a).abs() < 1e-8, "n={n} p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn existence_failure_reports_threshold() {
    let e = usum(&EllipticalLaw::student_t(3, 1.0).unwrap(), 1.4, 1e-10).unwrap_err();
    match e {
        Error::Undefined { threshold, .. } => assert!((threshold - 1.5).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

#[test]
fn upper_bound_m() {
    let m = asymptotic_bound_m(5, 1.0, 3.0).unwrap();
    let u = usum(&EllipticalLaw::student_t(5, 1.0).unwrap(), 3.0, 1e-10).unwrap();
    assert!(m >= u.value - 1e-8);
    assert!((asymptotic_bound_m(10_000, 1.0, 2.0).unwrap() - (1.0 + PI.ln())).abs() < 0.05);
    let c = asymptotic_bound_m(2, 2.0, 2.0).unwrap();
    for &t in &[1e-5, -1e-5] {
        assert!((asymptotic_bound_m(2, 2.0, 2.0 + t).unwrap() - c).abs() < 1e-4);
    }
    for &n in &[1usize, 2, 4, 9, 20] {
        for &mm in &[1.0, 3.0, n as f64 + 2.0] {
            for &p in &[1.5, 2.0, 3.0, 10.0] {
                let law = EllipticalLaw::student_t(n, mm).unwrap();
                let Ok(u) = usum(&law, p, 1e-10) else { continue };
                let b = asymptotic_bound_m(n, mm, p).unwrap();
                assert!(u.value <= b + 1e-8, "n={n} m={mm} p={p}: {} > {b}", u.value);
            }
        }
    }
}

#[test]
fn shannon_continuity() {
    for law in [
        EllipticalLaw::student_t(3, 1.0).unwrap(),
        EllipticalLaw::student_t(2, 5.0).unwrap(),
        EllipticalLaw::student_r(2, 2.0).unwrap(),
        EllipticalLaw::student_r(4, 9.0).unwrap(),
    ] {
        let c = usum(&law, 2.0, 1e-10).unwrap().value;
        for &t in &[1e-4, -1e-4] {
            let v = usum(&law, 2.0 + t, 1e-10).unwrap().value;
            assert!((v - c).abs() < 1e-3, "{law:?}: {v} vs {c}");
        }
    }
}

#[test]
fn scale_invariance() {
    for law in [EllipticalLaw::student_t(3, 2.0).unwrap(), EllipticalLaw::student_r(2, 3.0).unwrap()] {
        for &p in &[2.0, 3.0] {
            let a = usum_quadrature(&law, p, 1e-10).unwrap().value;
            let b = usum_quadrature(&law.clone().with_scale(5.0).unwrap(), p, 1e-10).unwrap().value;
            assert!((a - b).abs() < 1e-9, "{law:?} p={p}");
            let c = usum(&law.clone().with_scale(5.0).unwrap(), p, 1e-10).unwrap().value;
            assert!((a - c).abs() < 1e-8);
        }
    }
}

#[test]
fn babenko() {
    assert_eq!(babenko_log_constant(2.0).unwrap(), 0.0);
    let want = -(4.0 * PI / 3.0).ln() / 3.0 + (2.0 * PI / 3.0).ln() / 6.0;
    assert!((babenko_log_constant(1.5).unwrap() - want).abs() < 1e-15);
    assert!(babenko_log_constant(1.0001).unwrap().is_finite());
    assert!(babenko_log_constant(2.5).is_err());
}

#[test]
fn entropy_power_examples() {
    assert!((entropy_power(0.5 * (PI.ln() + 1.0), 1) - 0.5).abs() < 1e-15);
    for n in [1usize, 4] {
        let h = 0.5 * n as f64 * (2.0 * PI * std::f64::consts::E).ln();
        assert!((entropy_power(h, n) - 1.0).abs() < 1e-14);
    }
    assert!((entropy_power((4.0 * PI).ln(), 1) - 8.0 * PI / std::f64::consts::E).abs() < 1e-12);
}

#[test]
fn entropy_power_product() {
    for law in [
        EllipticalLaw::student_t(1, 1.0).unwrap(),
        EllipticalLaw::student_r(3, 4.0).unwrap(),
        EllipticalLaw::gaussian(2).unwrap(),
    ] {
        let n = law.n();
        let h1 = renyi_entropy_radial(&radial_pdf(&law).unwrap(), 1.0).unwrap();
        let h2 = renyi_entropy_radial(&conj_radial_pdf(&law).unwrap(), 1.0).unwrap();
        assert!((entropy_power(h1, n) * entropy_power(h2, n)).sqrt() >= 0.5 - 1e-10);
    }
}

#[test]
fn heisenberg() {
    for n in [1usize, 5] {
        assert!((heisenberg_product(&EllipticalLaw::gaussian(n).unwrap()).unwrap() - 0.5).abs() < 1e-14);
    }
    assert!(heisenberg_product(&EllipticalLaw::student_t(2, 1.0).unwrap()).is_err());
    // the conjugate variance of the uniform disc is infinite
    assert!(heisenberg_product(&EllipticalLaw::student_r(2, 2.0).unwrap()).is_err());
    assert!(heisenberg_product(&EllipticalLaw::student_r(2, 8.0).unwrap()).unwrap() >= 0.5);
    assert!(heisenberg_product(&EllipticalLaw::student_t(3, 5.0).unwrap()).unwrap() >= 0.5);
}

#[test]
fn closed_forms_hold_next_to_threshold() {
    let cases = [
        (EllipticalLaw::student_t(2, 1.0).unwrap(), 4.0 / 3.0 + 1e-3),
        (EllipticalLaw::student_t(8, 0.5).unwrap(), 16.0 / 8.5 + 1e-3),
        (EllipticalLaw::student_t(64, 1.0).unwrap(), 128.0 / 65.0 + 1e-3),
        (EllipticalLaw::student_r(4, 4.0).unwrap(), 1.6 / 0.6 - 1e-3),
    ];
    for (law, p) in cases {
        let a = usum(&law, p, DEFAULT_TOL).unwrap().value;
        let b = usum_quadrature(&law, p, DEFAULT_TOL).unwrap().value;
        assert!((a - b).abs() < 1e-9 * a.abs(), "{law:?} p={p}: {a} vs {b}");
    }
}
