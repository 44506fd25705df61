//! Homogeneous forms: serialization, proportionality, rational factorization
//! and sign witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BifurcationError;
use crate::exactalg::{monomial_name, roster, Jet, Monomial, Rational, SparsePoly};

/// A polynomial in named variables, coefficients as rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyData {
    pub vars: Vec<String>,
    pub terms: BTreeMap<String, String>,
}

impl PolyData {
    pub fn from_poly(p: &SparsePoly<Rational>) -> Self {
        PolyData {
            vars: p.roster().to_vec(),
            terms: p.terms().iter().map(|(m, c)| (monomial_name(m, p.roster()), c.to_string())).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<SparsePoly<Rational>, BifurcationError> {
        let r = roster(&self.vars);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (name, value) in &self.terms {
            let m = Jet::parse_monomial(name, &r)?;
            let c: Rational = value.parse()?;
            terms.push((m, c));
        }
        Ok(SparsePoly::from_terms(r, terms))
    }
}

/// Verdict of [`proportionality_check`]: `second = ratio · first`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportionality {
    pub proportional: bool,
    pub ratio: Option<Rational>,
}

/// Whether `second` is a rational multiple of `first`. A zero `second` is
/// proportional with ratio 0; a nonzero `second` is never a multiple of a zero
/// `first`.
pub fn proportionality_check(first: &SparsePoly<Rational>, second: &SparsePoly<Rational>) -> Proportionality {
    if second.is_zero() {
        return Proportionality { proportional: true, ratio: Some(Rational::zero()) };
    }
    let Some((m, a)) = first.terms().first() else {
        return Proportionality { proportional: false, ratio: None };
    };
    let ratio = second.coeff(m).cloned().unwrap_or_else(Rational::zero) / a.clone();
    // All 2×2 cross-determinants vanish iff second = ratio·first.
    if &first.scale(&ratio) == second {
        Proportionality { proportional: true, ratio: Some(ratio) }
    } else {
        Proportionality { proportional: false, ratio: None }
    }
}

fn is_homogeneous(p: &SparsePoly<Rational>, d: u32) -> bool {
    !p.is_zero() && p.terms().iter().all(|(m, _)| m.degree() == d)
}

/// Square root of a quadratic form that is the square of a rational linear
/// form.
fn linear_sqrt(q: &SparsePoly<Rational>) -> Option<SparsePoly<Rational>> {
    if q.is_zero() {
        return Some(q.clone());
    }
    let r = q.roster().clone();
    let j = (0..q.nvars()).find(|&j| q.coeff(&Monomial::var_pow(j, 2)).is_some())?;
    let s = q.coeff(&Monomial::var_pow(j, 2))?.sqrt_exact()?;
    // q = (s x_j + …)² gives ∂q/∂x_j = 2s·ℓ.
    let dj = q.derivative(j, |e| Rational::from(e as i64));
    let l = dj.scale(&(Rational::one() / (Rational::from(2) * s)));
    (&(&l * &l) == q).then(|| SparsePoly::from_terms(r, l.into_terms()))
}

/// Factors a homogeneous quadratic into two rational linear forms, the second
/// made primitive. Returns `None` when no rational factorization exists.
pub fn factor_quadratic(h: &SparsePoly<Rational>) -> Option<(SparsePoly<Rational>, SparsePoly<Rational>)> {
    if !is_homogeneous(h, 2) {
        return None;
    }
    let r = h.roster().clone();
    let support = h.support_vars();
    let squared = support.iter().copied().find(|&i| h.coeff(&Monomial::var_pow(i, 2)).is_some());
    let l2 = match squared {
        Some(i) => {
            // h = a x_i² + x_i·B + C
            let parts = h.coefficients_in(i);
            let a = parts[2].constant_term();
            let b = parts[1].clone();
            let c = parts[0].clone();
            let disc = &(&b * &b) - &c.scale(&(Rational::from(4) * a.clone()));
            let root = linear_sqrt(&disc)?;
            let xi = SparsePoly::var(r.clone(), i);
            let two_a = Rational::from(2) * a.clone();
            // x_i − (−B − root)/(2a) is one factor
            &xi + &(&b + &root).scale(&(Rational::one() / two_a))
        }
        None => {
            let i = *support.first()?;
            let parts = h.coefficients_in(i);
            let b = parts.get(1).cloned().unwrap_or_else(|| SparsePoly::zero(r.clone()));
            let c = parts[0].clone();
            if b.is_zero() {
                return None;
            }
            let xi = SparsePoly::var(r.clone(), i);
            if c.is_zero() {
                xi
            } else {
                &xi + &c.try_div_exact(&b).ok()?
            }
        }
    };
    let l2 = l2.primitive();
    let l1 = h.try_div_exact(&l2).ok()?;
    debug_assert_eq!(&(&l1 * &l2), h);
    Some((l1, l2))
}

/// Small integer probe points: unit vectors, then sums and differences of two
/// unit vectors with weights up to 2.
pub(crate) fn probe_points(n: usize) -> impl Iterator<Item = Vec<Rational>> {
    let unit = (0..n).map(move |i| {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    });
    let pairs = (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            [(1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)].into_iter().map(move |(a, b)| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::from(a);
                v[j] = Rational::from(b);
                v
            })
        })
    });
    unit.chain(pairs)
}

/// Two rational points where `h` takes opposite signs, if the probe set finds
/// them. For odd-degree forms any nonzero value suffices since `h(−x) = −h(x)`.
pub fn sign_change_witness(h: &SparsePoly<Rational>) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let n = h.nvars();
    let mut pos = None;
    let mut neg = None;
    for p in probe_points(n) {
        let v = h.evaluate(&p);
        if v.is_positive() && pos.is_none() {
            pos = Some(p);
        } else if v.is_negative() && neg.is_none() {
            neg = Some(p);
        }
        if pos.is_some() && neg.is_some() {
            break;
        }
    }
    let odd = h.degree().is_some_and(|d| d % 2 == 1) && is_homogeneous(h, h.degree().unwrap_or(0));
    match (pos, neg) {
        (Some(p), Some(q)) => Some((p, q)),
        (Some(p), None) if odd => {
            let q = p.iter().map(|x| -x).collect();
            Some((p, q))
        }
        (None, Some(q)) if odd => {
            let p = q.iter().map(|x| -x).collect();
            Some((p, q))
        }
        _ => None,
    }
}
