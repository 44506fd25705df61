use std::f64::consts::TAU;

use hopf3::exactalg::{Jet, Rational};
use hopf3::lyapcore::lyapunov_constants;
use hopf3::numoracle::{
    displacement_estimate, displacement_with, integrate_fixed, integrate_orbit, sign_check, sign_check_with,
    write_csv, NumericSystem, OracleConfig, OracleError, Verdict, ORDER,
};
use hopf3::sysmodel::{apply_quadratic_perturbation, catalog, catalog_instantiate, HopfSystem};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn moonrand(a: Rational) -> HopfSystem {
    catalog_instantiate("moonrand", &[("mu", q(1, 1)), ("b", q(2, 1)), ("c", q(1, 1)), ("a", a)]).unwrap()
}

#[test]
fn linear_rotation_returns_to_start() {
    let tol = 1e-10;
    let orbit = integrate_orbit(&NumericSystem::linear(1.0), [1.0, 0.0, 0.0], TAU, tol).unwrap();
    let (t, x) = orbit.last();
    assert_eq!(t, TAU);
    assert!((x[0] - 1.0).abs() <= 10.0 * tol, "x = {}", x[0]);
    assert!(x[1].abs() <= 10.0 * tol, "y = {}", x[1]);
    assert!(orbit.times.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn linear_decay() {
    let tol = 1e-10;
    let orbit = integrate_orbit(&NumericSystem::linear(1.0), [0.0, 0.0, 1.0], 5.0, tol).unwrap();
    for (t, x) in orbit.times.iter().zip(&orbit.states) {
        assert!((x[2] - (-t).exp()).abs() <= 10.0 * tol, "t = {t}");
    }
}

/// Global error of the fixed-step fifth-order solution on the rotation,
/// fitted on a log–log scale against the step count.
#[test]
fn convergence_order_matches_the_pair() {
    let sys = NumericSystem::linear(1.0);
    let t = 3.0;
    let pts: Vec<(f64, f64)> = [50usize, 100, 200]
        .iter()
        .map(|&n| {
            let x = integrate_fixed(&sys, [1.0, 0.0, 0.0], t, n);
            let err = ((x[0] - t.cos()).powi(2) + (x[1] - t.sin()).powi(2)).sqrt();
            ((t / n as f64).ln(), err.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - ORDER as f64).abs() <= 0.2 * ORDER as f64, "slope {slope}");
}

#[test]
fn moonrand_off_center_is_consistent() {
    for (a, sign) in [(q(1, 1), -1), (q(-1, 1), 1)] {
        let s = moonrand(a);
        let seq = lyapunov_constants(&s, 3).unwrap();
        assert_eq!(seq.get(1).unwrap().constant_term().signum(), sign);
        let check = sign_check(&s, &seq).unwrap();
        assert_eq!(check.verdict, Verdict::Consistent);
        assert_eq!(check.expected, Some((1, sign as i8)));
        let fit = check.fit.unwrap();
        assert_eq!((fit.fitted_order, fit.fitted_sign), (3, sign as i8));
        assert!(check.samples.iter().all(|d| d.delta_rho.signum() as i32 == sign));
    }
}

#[test]
fn halving_the_radius_shrinks_the_displacement_eightfold() {
    let s = moonrand(q(1, 1));
    let big = displacement_estimate(&s, 0.04, 20, 1e-12).unwrap();
    let small = displacement_estimate(&s, 0.02, 20, 1e-12).unwrap();
    let ratio = big.delta_rho / small.delta_rho;
    assert!((7.0..=9.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn exact_center_stays_at_the_noise_floor() {
    let s = moonrand(Rational::zero());
    let seq = lyapunov_constants(&s, 6).unwrap();
    assert_eq!(seq.first_nonzero(), None);
    let config = OracleConfig::default();
    for rho0 in [0.05, 0.1] {
        let d = displacement_with(&s, rho0, &config).unwrap();
        assert!(d.delta_rho.abs() <= config.noise_floor(), "rho0 {rho0}: {}", d.delta_rho);
    }
    let check = sign_check_with(&s, &seq, &[0.05, 0.1], &config).unwrap();
    assert_eq!(check.verdict, Verdict::ConsistentWithZero);
}

/// Once the transient in z has died out the section radius is constant along
/// the center manifold: each return changes it by at most ten times the
/// integrator tolerance. (Measured from the start point itself the change is
/// O(ρ²), since the start lies off the center manifold.)
#[test]
fn center_radius_does_not_drift() {
    let s = moonrand(Rational::zero());
    let tol = 1e-12;
    let settled: Vec<(usize, f64)> =
        (5..=20).step_by(3).map(|n| (n, displacement_estimate(&s, 0.05, n, tol).unwrap().rho)).collect();
    let (n0, r0) = settled[0];
    for &(n, r) in &settled[1..] {
        let per_turn = (r - r0).abs() / (n - n0) as f64;
        assert!(per_turn <= 10.0 * tol, "after {n} turns: {per_turn:e} per turn");
    }
}

#[test]
fn flipped_sign_is_reported_inconsistent() {
    let s = moonrand(q(1, 1));
    let mut seq = lyapunov_constants(&s, 3).unwrap();
    let l1 = seq.get(1).unwrap().clone();
    seq.set_constant(1, Jet::constant(l1.roster().clone(), l1.degree(), -&l1.constant_term()));
    assert!(matches!(sign_check(&s, &seq).unwrap().verdict, Verdict::Inconsistent { .. }));
}

#[test]
fn rejections() {
    let s = catalog_instantiate("moonrand", &[("mu", q(-1, 1)), ("b", q(2, 1)), ("c", q(1, 1)), ("a", q(1, 1))])
        .unwrap();
    assert!(matches!(displacement_estimate(&s, 0.05, 5, 1e-10), Err(OracleError::UnsupportedDirection(_))));
    let seq = lyapunov_constants(&s, 2).unwrap();
    assert!(matches!(sign_check(&s, &seq), Err(OracleError::UnsupportedDirection(_))));

    let p = apply_quadratic_perturbation(&moonrand(q(1, 1)), 1).unwrap();
    let seq = lyapunov_constants(&p, 2).unwrap();
    assert!(matches!(sign_check(&p, &seq), Err(OracleError::NotPinned(_))));
    assert!(matches!(NumericSystem::from_system(&p), Err(OracleError::NotPinned(_))));
    assert!(matches!(
        displacement_estimate(&moonrand(q(1, 1)), -0.1, 5, 1e-10),
        Err(OracleError::Domain(_))
    ));
}

#[test]
fn csv_rows_round_trip() {
    let s = moonrand(q(1, 1));
    let config = OracleConfig { settle_turns: 10, tol: 1e-10, ..OracleConfig::default() };
    let rows: Vec<_> = [0.02, 0.04].iter().map(|&r| displacement_with(&s, r, &config).unwrap()).collect();
    let mut out = Vec::new();
    write_csv(&mut out, &rows, &config).unwrap();
    let mut reader = csv::Reader::from_reader(out.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["rho0", "delta_rho", "settle_turns", "tol"]);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 2);
    for (rec, row) in records.iter().zip(&rows) {
        assert_eq!(rec[0].parse::<f64>().unwrap(), row.rho0);
        assert_eq!(rec[1].parse::<f64>().unwrap(), row.delta_rho);
        assert_eq!(&rec[2], "10");
        assert_eq!(rec[3].parse::<f64>().unwrap(), 1e-10);
    }
}

/// On every catalog center with a contracting z-direction the oracle never
/// claims a nonzero displacement of definite sign.
#[test]
fn catalog_centers_never_contradict() {
    let config = OracleConfig { settle_turns: 10, ..OracleConfig::default() };
    let mut checked = 0;
    for e in catalog() {
        for c in &e.conditions {
            let (_, s) = e.instantiate_condition(c.label, &Default::default()).unwrap();
            if !s.lambda().is_positive() {
                continue;
            }
            let seq = lyapunov_constants(&s, 6).unwrap();
            match sign_check_with(&s, &seq, &[0.01, 0.02], &config) {
                Ok(check) => {
                    assert!(!matches!(check.verdict, Verdict::Inconsistent { .. }), "{} {}", e.name, c.label);
                    checked += 1;
                }
                Err(OracleError::Escaped | OracleError::NoReturn) => {}
                Err(err) => panic!("{} {}: {err}", e.name, c.label),
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Off the center variety (a ≠ 0) with λ = μ > 0 the verdict is never
    /// inconsistent, and a definite fit always agrees with L₁.
    #[test]
    fn moonrand_sign_consistency(
        mu in (1i64..=3, 1i64..=2), a in (1i64..=3, 1i64..=2), neg in proptest::bool::ANY,
        b in -3i64..=3, c in -3i64..=3,
    ) {
        let a = q(if neg { -a.0 } else { a.0 }, a.1);
        let s = catalog_instantiate(
            "moonrand",
            &[("mu", q(mu.0, mu.1)), ("b", q(b, 1)), ("c", q(c, 1)), ("a", a)],
        ).unwrap();
        let seq = lyapunov_constants(&s, 2).unwrap();
        match sign_check(&s, &seq) {
            Ok(check) => {
                prop_assert!(!matches!(check.verdict, Verdict::Inconsistent { .. }), "{:?}", check);
                if check.verdict == Verdict::Consistent {
                    let k = seq.first_nonzero().unwrap();
                    let fit = check.fit.unwrap();
                    prop_assert_eq!(fit.fitted_sign as i32, seq.get(k).unwrap().constant_term().signum());
                }
            }
            Err(OracleError::Escaped | OracleError::NoReturn) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
