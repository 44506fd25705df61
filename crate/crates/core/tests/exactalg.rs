use std::collections::BTreeMap;

use hopf3::exactalg::univariate::{rational_roots_by_divisors, UniPoly};
use hopf3::exactalg::{exact_rank, parse_poly, roster, AlgebraError, Gaussian, Jet, Matrix, Monomial, Rational, SparsePoly};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn euclid(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn normalization_examples() {
    assert_eq!(q(2, -4), q(-1, 2));
    assert_eq!(q(2, -4).denom(), &BigInt::from(2));
    let z = q(0, 5);
    assert!(z.is_zero());
    assert_eq!((z.numer().clone(), z.denom().clone()), (BigInt::from(0), BigInt::from(1)));
    let g = euclid(109395, 761090);
    let r = q(109395, 761090);
    assert_eq!(r.numer(), &BigInt::from(109395 / g));
    assert_eq!(r.denom(), &BigInt::from(761090 / g));
    assert_eq!(r, q(21879, 152218));
    assert!(matches!(Rational::new(1, 0), Err(AlgebraError::ZeroDenominator)));
}

#[test]
fn difference_of_squares_and_jet_truncation() {
    let r = roster(&["x", "y"]);
    let a = parse_poly("x + y", &r).unwrap();
    let b = parse_poly("x - y", &r).unwrap();
    assert_eq!(&a * &b, parse_poly("x^2 - y^2", &r).unwrap());

    let p = roster(&["a", "b"]);
    let one_a = Jet::new(parse_poly("1 + a", &p).unwrap(), 1);
    assert_eq!(one_a.try_mul(&one_a).unwrap(), Jet::new(parse_poly("1 + 2*a", &p).unwrap(), 1));

    let j = Jet::new(parse_poly("1 + a + a*b", &p).unwrap(), 2);
    assert_eq!(j.truncate(1).unwrap(), Jet::new(parse_poly("1 + a", &p).unwrap(), 1));
    assert_eq!(j.truncate(0).unwrap(), Jet::constant(p.clone(), 0, Rational::one()));
    assert!(j.truncate(3).is_err());
    let other = Jet::new(parse_poly("a", &p).unwrap(), 1);
    assert!(matches!(j.try_add(&other), Err(AlgebraError::DegreeMismatch { .. })));
}

#[test]
fn rank_examples() {
    assert_eq!(exact_rank(&Matrix::identity(3)), (3, vec![0, 1, 2]));
    assert_eq!(exact_rank(&Matrix::zeros(3, 4)), (0, vec![]));
    // Linear parts of L1..L3 for Rössler c = -1 in (c200, c110, c020).
    let m = Matrix::from_rows(vec![
        vec![q(-3, 5), q(-1, 5), q(-11, 15)],
        vec![q(-2, 25), q(-1, 25), q(-4, 25)],
        vec![q(-1, 170), q(-3, 850), q(-101, 5950)],
    ])
    .unwrap();
    assert_eq!(exact_rank(&m).0, 3);
}

/// Fraction-free elimination on integer-scaled rows.
fn bareiss_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_rows()
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].abs();
        rank += 1;
    }
    rank
}

fn mul_coeffs(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=8, 1usize..=20).prop_flat_map(|(r, c)| {
        // Few distinct values make dependent rows likely.
        proptest::collection::vec(proptest::collection::vec((-3i64..=3, 1i64..=3), c), r).prop_map(|rows| {
            Matrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(|(n, d)| q(n, d)).collect()).collect())
                .unwrap()
        })
    })
}

fn naive_product(a: &SparsePoly<Rational>, b: &SparsePoly<Rational>, nvars: usize) -> BTreeMap<Vec<u32>, Rational> {
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let ea = ma.to_exponents(nvars);
            let eb = mb.to_exponents(nvars);
            let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly3(max_terms: usize, max_deg: u32) -> impl Strategy<Value = SparsePoly<Rational>> {
    proptest::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), -9i64..=9, 1i64..=4), 0..=max_terms).prop_map(
        |terms| {
            SparsePoly::from_terms(
                roster(&["x", "y", "z"]),
                terms.into_iter().map(|((i, j, k), n, d)| (Monomial::from_exponents(&[i, j, k]), q(n, d))),
            )
        },
    )
}

fn jet2(d: u32) -> impl Strategy<Value = Jet> {
    poly3(8, 3).prop_map(move |p| Jet::new(p, d))
}

fn rat() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_fraction_free_oracle(m in small_matrix()) {
        prop_assert_eq!(exact_rank(&m).0, bareiss_rank(&m));
    }

    #[test]
    fn product_matches_convolution(a in poly3(30, 4), b in poly3(30, 4)) {
        let got = &a * &b;
        let want = naive_product(&a, &b, 3);
        prop_assert_eq!(got.len(), want.len());
        for (m, c) in got.terms() {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(Some(c), want.get(&m.to_exponents(3)));
        }
    }

    #[test]
    fn rational_field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn gaussian_ring_laws(a in rat(), b in rat(), c in rat(), d in rat()) {
        let x = Gaussian::new(a.clone(), b.clone());
        let y = Gaussian::new(c.clone(), d.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &x, &(&x * &x) + &(&y * &x));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), Gaussian::one());
        } else {
            prop_assert!(x.inverse().is_err());
        }
    }

    #[test]
    fn polynomial_ring_laws(a in poly3(6, 2), b in poly3(6, 2), c in poly3(6, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &b).terms().iter().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn jet_ring_laws(a in jet2(3), b in jet2(3), c in jet2(3)) {
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jet_truncation_coherence(a in poly3(8, 3), b in poly3(8, 3), c in poly3(8, 3), d in 0u32..=3) {
        // (a·b + c)·a evaluated at degree 4, then truncated, against degree d.
        let eval = |deg: u32| {
            let (ja, jb, jc) = (Jet::new(a.clone(), deg), Jet::new(b.clone(), deg), Jet::new(c.clone(), deg));
            ja.try_mul(&jb).unwrap().try_add(&jc).unwrap().try_mul(&ja).unwrap()
        };
        prop_assert_eq!(eval(4).truncate(d).unwrap(), eval(d));
    }

    #[test]
    fn rational_roots_match_divisor_search(
        roots in proptest::collection::vec((-12i64..=12, 1i64..=6), 1..=4),
        extra in proptest::collection::vec(-5i64..=5, 0..=3),
    ) {
        let mut c = vec![Rational::one()];
        for (n, d) in &roots {
            c = mul_coeffs(&c, &[-q(*n, *d), Rational::one()]);
        }
        // A monic extra factor that may or may not add rational roots.
        if !extra.is_empty() {
            let mut e: Vec<Rational> = extra.iter().map(|&e| Rational::from_integer(e)).collect();
            e.push(Rational::one());
            c = mul_coeffs(&c, &e);
        }
        let p = UniPoly::new(c);
        let mut got = p.rational_roots();
        let mut want = rational_roots_by_divisors(&p);
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }
}
