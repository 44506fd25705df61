use hopf3::exactalg::{Gaussian, Jet, Monomial, Rational};
use hopf3::lyapcore::{
    complexify, homological_eigenvalue, lyapunov_constants, lyapunov_constants_with, residual_check, LyapunovOptions,
    LyapunovSequence, Normalization,
};
use hopf3::sysmodel::{apply_quadratic_perturbation, catalog_instantiate, HopfSystem, QUADRATIC_MONOMIALS};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn rossler() -> HopfSystem {
    catalog_instantiate("rossler", &[("c", q(-1, 1))]).unwrap()
}

/// Coefficient of the named parameter in the linear part of a jet.
fn linear_coeff(l: &Jet, name: &str) -> Rational {
    let i = l.roster().iter().position(|n| n == name).unwrap();
    l.coeff(&Monomial::var(i))
}

#[test]
fn complexify_examples() {
    let m = |e: [u32; 3]| Monomial::from_exponents(&e);
    // P = x² gives U = (u + v)²/4.
    let s = HopfSystem::from_terms(q(1, 1), [&[([2, 0, 0], q(1, 1))], &[], &[]]).unwrap();
    let c = complexify(&s);
    let u2 = c.u_rhs.coeff(&m([2, 0, 0])).unwrap();
    assert_eq!((u2.re.constant_term(), u2.im.constant_term()), (q(1, 4), q(0, 1)));
    assert_eq!(c.u_rhs.coeff(&m([1, 1, 0])).unwrap().re.constant_term(), q(1, 2));
    // Q = y² gives iQ = i·(u − v)²/(−4), so the u² coefficient of U is −i/4.
    let s = HopfSystem::from_terms(q(1, 1), [&[], &[([0, 2, 0], q(1, 1))], &[]]).unwrap();
    let c = complexify(&s);
    let u2 = c.u_rhs.coeff(&m([2, 0, 0])).unwrap();
    assert_eq!((u2.re.constant_term(), u2.im.constant_term()), (q(0, 1), q(-1, 4)));
    c.validate_symmetry().unwrap();
    // R = xz stays real: (u + v)z/2.
    let s = HopfSystem::from_terms(q(1, 1), [&[], &[], &[([1, 0, 1], q(1, 1))]]).unwrap();
    let z = complexify(&s).z_rhs;
    assert_eq!(z.len(), 2);
    assert!(z.terms().iter().all(|(_, c)| c.im.is_zero() && c.re.constant_term() == q(1, 2)));
}

#[test]
fn homological_eigenvalue_examples() {
    let one = q(1, 1);
    assert_eq!(homological_eigenvalue(2, 1, 0, &one), Gaussian::i());
    assert_eq!(homological_eigenvalue(1, 1, 1, &one), Gaussian::real(q(-1, 1)));
    assert!(homological_eigenvalue(2, 2, 0, &one).is_zero());
    assert_eq!(homological_eigenvalue(0, 3, 2, &q(1, 2)), Gaussian::new(q(-1, 1), q(-3, 1)));
}

#[test]
fn unperturbed_rossler_is_a_center() {
    for c in [-1, 2, 3] {
        let s = catalog_instantiate("rossler", &[("c", q(c, 1))]).unwrap();
        let seq = lyapunov_constants(&s, 6).unwrap();
        assert_eq!(seq.first_nonzero(), None, "c = {c}");
        residual_check(&s, &seq).unwrap();
    }
}

#[test]
fn rossler_linear_parts() {
    let p = apply_quadratic_perturbation(&rossler(), 1).unwrap();
    let seq = lyapunov_constants(&p, 3).unwrap();
    let want = [
        [q(-3, 5), q(-1, 5), q(-11, 15)],
        [q(-2, 25), q(-1, 25), q(-4, 25)],
        [q(-1, 170), q(-3, 850), q(-101, 5950)],
    ];
    for (k, row) in want.iter().enumerate() {
        let l = seq.get(k + 1).unwrap();
        assert!(l.constant_term().is_zero());
        let got = ["c200", "c110", "c020"].map(|n| linear_coeff(l, n));
        assert_eq!(&got, row, "L{}", k + 1);
    }
}

#[test]
fn residual_check_detects_tampering() {
    let p = apply_quadratic_perturbation(&rossler(), 1).unwrap();
    let mut seq = lyapunov_constants(&p, 3).unwrap();
    residual_check(&p, &seq).unwrap();
    let l1 = seq.get(1).unwrap().clone();
    let bumped = &l1 + &Jet::constant(l1.roster().clone(), l1.degree(), Rational::one());
    seq.set_constant(1, bumped);
    assert!(residual_check(&p, &seq).is_err());

    let no_h = lyapunov_constants_with(&p, 2, LyapunovOptions { keep_h: false, ..Default::default() }).unwrap();
    assert!(residual_check(&p, &no_h).is_err());
}

#[test]
fn truncation_coherence() {
    let s = rossler();
    let d2 = lyapunov_constants(&apply_quadratic_perturbation(&s, 2).unwrap(), 3).unwrap();
    let d1 = lyapunov_constants(&apply_quadratic_perturbation(&s, 1).unwrap(), 3).unwrap();
    for k in 1..=3 {
        assert_eq!(d2.get(k).unwrap().truncate(1).unwrap(), *d1.get(k).unwrap());
    }
}

#[test]
fn deterministic_and_round_trips() {
    let p = apply_quadratic_perturbation(&rossler(), 1).unwrap();
    let a = lyapunov_constants(&p, 3).unwrap();
    let b = lyapunov_constants(&p, 3).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(LyapunovSequence::from_json(&a.to_json()).unwrap(), a);
    assert!(LyapunovSequence::from_json("{}").is_err());
}

fn quadratic_system() -> impl Strategy<Value = HopfSystem> {
    let coeffs = proptest::collection::vec((-4i64..=4, 1i64..=3), 18);
    ((1i64..=4, 1i64..=3), proptest::bool::ANY, coeffs).prop_map(|((ln, ld), neg, c)| {
        let lambda = q(if neg { -ln } else { ln }, ld);
        let mut eqs: [Vec<([u32; 3], Rational)>; 3] = Default::default();
        for (i, (n, d)) in c.into_iter().enumerate() {
            eqs[i / 6].push((QUADRATIC_MONOMIALS[i % 6], q(n, d)));
        }
        HopfSystem::from_terms(lambda, [&eqs[0], &eqs[1], &eqs[2]]).unwrap()
    })
}

/// Planar first focal value `a` for `ẋ = −y + f`, `ẏ = x + g` from the
/// classical third-derivative formula; the displacement is `2π·a·ρ³`.
fn planar_focal_value(f: &[([u32; 3], Rational)], g: &[([u32; 3], Rational)]) -> Rational {
    let c = |t: &[([u32; 3], Rational)], i: u32, j: u32| {
        t.iter().find(|(m, _)| *m == [i, j, 0]).map(|(_, v)| v.clone()).unwrap_or_else(Rational::zero)
    };
    let two = q(2, 1);
    let six = q(6, 1);
    let (fxx, fxy, fyy) = (&two * &c(f, 2, 0), c(f, 1, 1), &two * &c(f, 0, 2));
    let (gxx, gxy, gyy) = (&two * &c(g, 2, 0), c(g, 1, 1), &two * &c(g, 0, 2));
    let third = [&six * &c(f, 3, 0), &two * &c(f, 1, 2), &two * &c(g, 2, 1), &six * &c(g, 0, 3)];
    let cubic: Rational = third.iter().sum();
    let quad = &(&(&(&fxy * &(&fxx + &fyy)) - &(&gxy * &(&gxx + &gyy))) - &(&fxx * &gxx)) + &(&fyy * &gyy);
    &(&cubic + &quad) / &q(16, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Reality of every L_k and an exactly vanishing residual.
    #[test]
    fn random_quadratic_systems_are_consistent(s in quadratic_system()) {
        let seq = lyapunov_constants(&s, 3).unwrap();
        prop_assert!(residual_check(&s, &seq).is_ok());
    }

    #[test]
    fn scaling_homogeneity(s in quadratic_system()) {
        let two = q(2, 1);
        let base = lyapunov_constants(&s, 3).unwrap();
        let scaled = lyapunov_constants(&s.scale_nonlinearity(&two), 3).unwrap();
        for k in 1..=3u32 {
            let want = &base.get(k as usize).unwrap().constant_term() * &two.pow(2 * k);
            prop_assert_eq!(scaled.get(k as usize).unwrap().constant_term(), want);
        }
    }

    /// A rotation of the (x, y) plane keeps the index and sign of the first
    /// nonzero constant.
    #[test]
    fn rotation_keeps_first_nonzero(s in quadratic_system()) {
        let r = s.rotate_xy(&q(3, 5), &q(4, 5)).unwrap();
        let a = lyapunov_constants(&s, 2).unwrap();
        let b = lyapunov_constants(&r, 2).unwrap();
        prop_assert_eq!(a.first_nonzero(), b.first_nonzero());
        if let Some(k) = a.first_nonzero() {
            prop_assert_eq!(a.get(k).unwrap().constant_term().signum(), b.get(k).unwrap().constant_term().signum());
        }
    }

    /// The two normalizations agree on the first nonzero constant up to a
    /// positive factor.
    #[test]
    fn normalizations_agree_on_first_nonzero(s in quadratic_system()) {
        let a = lyapunov_constants(&s, 2).unwrap();
        let opts = LyapunovOptions { normalization: Normalization::Circular, keep_h: true };
        let b = lyapunov_constants_with(&s, 2, opts).unwrap();
        prop_assert!(residual_check(&s, &b).is_ok());
        prop_assert_eq!(a.first_nonzero(), b.first_nonzero());
        if let Some(k) = a.first_nonzero() {
            prop_assert_eq!(a.get(k).unwrap().constant_term().signum(), b.get(k).unwrap().constant_term().signum());
        }
    }

    /// On planar systems (z absent from P and Q, R = 0) L₁ is a fixed positive
    /// multiple of the classical focal value: L₁ = (16/3)·a.
    #[test]
    fn planar_l1_matches_classical_formula(
        f in proptest::collection::vec((-4i64..=4, 1i64..=3), 7),
        g in proptest::collection::vec((-4i64..=4, 1i64..=3), 7),
    ) {
        let monos = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [3, 0, 0], [2, 1, 0], [1, 2, 0], [0, 3, 0]];
        let terms = |c: &[(i64, i64)]| -> Vec<([u32; 3], Rational)> {
            monos.iter().zip(c).map(|(m, (n, d))| (*m, q(*n, *d))).collect()
        };
        let (tf, tg) = (terms(&f), terms(&g));
        let s = HopfSystem::from_terms(q(1, 1), [&tf, &tg, &[]]).unwrap();
        let l1 = lyapunov_constants(&s, 1).unwrap().get(1).unwrap().constant_term();
        prop_assert_eq!(l1, &q(16, 3) * &planar_focal_value(&tf, &tg));
    }
}
