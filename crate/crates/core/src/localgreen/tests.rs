use super::*;
use crate::exact::scalar::{parse_rat, rat_from_i64 as q};
use crate::ffheight::stabilize;
use crate::henon::InitialPoint;

fn quad() -> HenonFamily {
    HenonFamily::quadratic()
}

fn origin() -> InitialPoint {
    InitialPoint::constant(q(0), q(0))
}

fn consts_arch(kappa: i64) -> FiltrationConsts {
    filtration_consts(&quad(), &origin(), &Place::Arch, &q(kappa)).unwrap()
}

#[test]
fn filtration_constants_examples() {
    // Archimedean, kappa = 12: [3d] * cap = 6 <= L^(m+1) forces a finite L.
    let c = consts_arch(12);
    assert_eq!(c.m, 1);
    assert_eq!(c.bracket_3d, q(6));
    assert_eq!(c.delta_cap, q(1));
    assert!(c.bracket_3d.clone() * c.delta_cap.clone() <= c.l_pow_m1());
    assert_eq!(c.l, q(4));

    // p-adic with integral data and unit delta: everything collapses to L = 1.
    let c5 = filtration_consts(&quad(), &origin(), &Place::Prime(5), &q(2)).unwrap();
    assert_eq!(c5.l, q(1));
    assert_eq!(c5.bracket_3d, q(1));
    assert_eq!(c5.delta_cap, q(1));
    assert_eq!(c5.big_c, q(1));
    assert_eq!(c5.step_log_bound, 0.0);
}

#[test]
fn vl_membership_and_coverage() {
    let fam = quad();
    let c = consts_arch(2);
    // Small points are in both regions by the first clause.
    let small = (q(1), q(-2));
    assert!(in_vl(&fam, &c, &q(0), &small, VlSign::Plus).unwrap());
    assert!(in_vl(&fam, &c, &q(0), &small, VlSign::Minus).unwrap());
    // A huge x lands in the forward region via the growth clause.
    let big = (q(1_000_000), q(0));
    assert!(in_vl(&fam, &c, &q(0), &big, VlSign::Plus).unwrap());
    // Outside the bounded region the filtration is undefined.
    assert!(matches!(
        in_vl(&fam, &c, &q(100), &small, VlSign::Plus),
        Err(Error::OutsideBoundedRegion { .. })
    ));
    // Coverage: sampled points lie in the union.
    let mut misses = 0;
    for i in -12i64..=12 {
        for j in -12i64..=12 {
            let pt = (q(i * 7) / q(3), q(j * 5) / q(2));
            let plus = in_vl(&fam, &c, &q(1), &pt, VlSign::Plus).unwrap();
            let minus = in_vl(&fam, &c, &q(1), &pt, VlSign::Minus).unwrap();
            if !(plus || minus) {
                misses += 1;
            }
        }
    }
    assert_eq!(misses, 0);
}

#[test]
fn forward_invariance_on_samples() {
    let fam = quad();
    let c = consts_arch(2);
    let t = q(1) / q(2);
    let spec = fam.specialize(&t).unwrap();
    for i in -10i64..=10 {
        for j in -10i64..=10 {
            let pt = (q(i * 3) / q(2), q(j * 3) / q(2));
            if in_vl(&fam, &c, &t, &pt, VlSign::Plus).unwrap() {
                let img = spec.step_forward(&pt);
                assert!(in_vl(&fam, &c, &t, &img, VlSign::Plus).unwrap());
            }
            if in_vl(&fam, &c, &t, &pt, VlSign::Minus).unwrap() {
                let img = spec.step_backward(&pt);
                assert!(in_vl(&fam, &c, &t, &img, VlSign::Minus).unwrap());
            }
        }
    }
}

#[test]
fn norm_growth_sandwich_exact() {
    // Exact rational M_n checks of the bounded-region growth inequalities.
    let fam = quad();
    let pt = origin();
    let c = consts_arch(2);
    let d = 2u32;
    for tnum in [-7i64, -3, 0, 2, 5] {
        let t = q(tnum) / q(2); // |t| <= L = 4 region
        let ms = exact_norm_table(&fam, &pt, &t, &Place::Arch, 8).unwrap();
        for n in 1..8 {
            let mnd = pow_rat(&ms[n], d);
            let upper = q(2 + 2) * c.delta_cap.clone() * c.l_pow_m1() * mnd.clone();
            let lower = mnd / pow_rat(&c.big_c, d);
            assert!(ms[n + 1] <= upper, "upper failed at t={t} n={n}");
            assert!(ms[n + 1] >= lower, "lower failed at t={t} n={n}");
        }
    }
}

#[test]
fn unbounded_region_sandwich_exact() {
    // Outside the region: M_{n+1} within kappa*cap of M_n^d, for n >= 5.
    let fam = quad();
    let pt = origin();
    let kappa = q(2);
    let c = filtration_consts(&fam, &pt, &Place::Arch, &kappa).unwrap();
    for t in [q(5), q(-6), q(17) / q(2), q(100)] {
        assert!(Place::Arch.abs(&t) > c.l);
        let ms = exact_norm_table(&fam, &pt, &t, &Place::Arch, 8).unwrap();
        for n in 5..8 {
            let mnd = pow_rat(&ms[n], 2);
            assert!(ms[n + 1] <= c.delta_cap.clone() * kappa.clone() * mnd.clone());
            assert!(ms[n + 1] >= mnd / (c.delta_cap.clone() * kappa.clone()));
        }
    }
}

#[test]
fn green_fixed_point_is_zero() {
    let g = green_at_param(&quad(), &origin(), &q(0), &Place::Arch, 1e-9).unwrap();
    assert_eq!(g.green.value, 0.0);
    assert_eq!(g.green.tail_bound, 0.0);
    let p2 = InitialPoint::constant(q(-1), q(1));
    let g = green_at_param(&quad(), &p2, &q(-1), &Place::Arch, 1e-9).unwrap();
    assert_eq!(g.green.value, 0.0);
}

#[test]
fn green_padic_benchmark() {
    // G_{P,5}(1/5) = (1/2) log 5 exactly, both directions.
    let t = parse_rat("1/5").unwrap();
    let g = green_at_param(&quad(), &origin(), &t, &Place::Prime(5), 1e-12).unwrap();
    let expect = 0.5 * 5f64.ln();
    assert!((g.plus.value - expect).abs() < 1e-12);
    assert!((g.minus.value - expect).abs() < 1e-12);
    assert!((g.green.value - expect).abs() < 1e-12);
    assert_eq!(g.green.tail_bound, 0.0);

    // Good reduction: exact zero.
    let g = green_at_param(&quad(), &origin(), &q(3), &Place::Prime(7), 1e-12).unwrap();
    assert_eq!(g.green.value, 0.0);
    assert_eq!(g.green.tail_bound, 0.0);
}

#[test]
fn green_escaping_positive_with_tail() {
    let g = green_at_param(&quad(), &origin(), &q(2), &Place::Arch, 1e-8).unwrap();
    assert!(g.green.value > 0.1);
    assert!(g.green.tail_bound < 1e-8);
    assert!(g.plus.escaped_at.is_some());
}

#[test]
fn green_large_parameter_asymptotic() {
    // G(t) - (1/2) log|t| approaches the stabilized constant (zero here).
    let g = green_at_param(&quad(), &origin(), &q(100), &Place::Arch, 1e-10).unwrap();
    let drift = g.green.value - 0.5 * 100f64.ln();
    assert!(drift.abs() < 5e-3, "drift {drift}");
    let stab = stabilize(&quad(), &origin(), 8).unwrap();
    let cert = stab.certificate().unwrap();
    let c = asymptotic_constant(cert, &Place::Arch);
    assert!((c - 0.0).abs() < 1e-12);
    // Monotone shrinking band across growing |t|.
    let mut prev = f64::INFINITY;
    for t in [q(100), q(1000), q(10000)] {
        let g = green_at_param(&quad(), &origin(), &t, &Place::Arch, 1e-10).unwrap();
        let drift = (g.green.value - 0.5 * rat_log_abs(&t) - c).abs();
        assert!(drift < prev + 1e-12);
        prev = drift;
    }
}

#[test]
fn green_functional_equation() {
    // |G+(H(Q)) - d G+(Q)| small on escaping points.
    let fam = quad();
    let tau = q(1);
    let spec = fam.specialize(&tau).unwrap();
    let pt = (q(2), q(1));
    let image = spec.step_forward(&pt);
    let g0 = green(&fam, &tau, &pt, &Place::Arch, 1e-10).unwrap();
    let g1 = green(&fam, &tau, &image, &Place::Arch, 1e-10).unwrap();
    assert!((g1.plus.value - 2.0 * g0.plus.value).abs() < 1e-8);
    // Involution (x, y) -> (-y, -x) preserves G for delta = 1.
    let flipped = (-pt.1.clone(), -pt.0.clone());
    let g2 = green(&fam, &tau, &flipped, &Place::Arch, 1e-10).unwrap();
    assert!((g2.green.value - g0.green.value).abs() < 1e-6);
}

#[test]
fn classify_examples() {
    let fam = quad();
    let pt = origin();
    assert_eq!(
        classify(&fam, &pt, &q(0), &Place::Arch, 256).unwrap(),
        KwClass::Bounded {
            heuristic: false,
            period: Some(1)
        }
    );
    match classify(&fam, &pt, &q(3), &Place::Arch, 256).unwrap() {
        KwClass::Escaping { at } => assert!(at <= 10),
        other => panic!("expected escape, got {other:?}"),
    }
    assert_eq!(
        classify(&fam, &pt, &q(2), &Place::Prime(3), 256).unwrap(),
        KwClass::Bounded {
            heuristic: false,
            period: None
        }
    );
    // A trapped, non-periodic rational parameter: heuristic verdict.
    let inside = parse_rat("-1/8").unwrap();
    assert_eq!(
        classify(&fam, &pt, &inside, &Place::Arch, 256).unwrap(),
        KwClass::Bounded {
            heuristic: true,
            period: None
        }
    );
}

#[test]
fn metric_norm_examples() {
    let fam = quad();
    let pt = origin();
    let stab = stabilize(&fam, &pt, 12).unwrap();
    let cert = stab.certificate().unwrap().clone();
    let consts = consts_arch(6);
    // Gap bound holds at sampled parameters for n = 5..9.
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    for &(re, im) in &[(0.3, 0.1), (-1.0, 0.4), (3.5, 0.0), (50.0, 20.0)] {
        let t = Complex64::new(re, im);
        for n in 5..9u32 {
            let a = log_metric_norm_n(&fam, &pt, &cert, one, zero, t, n).unwrap();
            let b = log_metric_norm_n(&fam, &pt, &cert, one, zero, t, n + 1).unwrap();
            assert!((a - b).abs() <= convergence_gap(&cert, &consts, n) + 1e-12);
        }
    }
    // Before stabilization the metric is refused.
    assert!(matches!(
        log_metric_norm_n(&fam, &pt, &cert, one, zero, Complex64::new(0.5, 0.0), 1),
        Err(Error::BeforeStabilization(_))
    ));
    // At infinity: leading coefficients are units here, so the value is
    // log|a0| - 0.
    let v = log_metric_norm_at_infinity(&cert, Complex64::new(2.0, 0.0));
    assert!((v - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn padic_good_reduction_metric() {
    // p-adic metric with integral data: all M_n = 1 for |t| <= 1, so the
    // Green value is 0 and |t|_p-level metric facts are trivial.
    let g = green_at_param(&quad(), &origin(), &q(7), &Place::Prime(5), 1e-10).unwrap();
    assert_eq!(g.green.value, 0.0);
    let ms = exact_norm_table(&quad(), &origin(), &q(7), &Place::Prime(5), 6).unwrap();
    assert!(ms.iter().all(|m| *m == Rat::one()));
}

#[test]
fn delta_with_denominator_padic() {
    // delta = 3/2 makes 2 and 3 bad places; the 2-adic backward side is
    // integral (|1/delta| <= 1) but forward escapes or stays unresolved,
    // and the mixed case must never silently return zero.
    let fam = HenonFamily::new(
        2,
        parse_rat("3/2").unwrap(),
        vec![crate::QPoly::zero(), crate::QPoly::var()],
    )
    .unwrap();
    let pt = origin();
    let r = green_at_param(&fam, &pt, &q(1), &Place::Prime(2), 1e-9);
    match r {
        Ok(g) => assert!(g.green.tail_bound == 0.0),
        Err(Error::Unresolved(_)) => {}
        Err(e) => panic!("unexpected error {e}"),
    }
}
