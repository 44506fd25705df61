use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{AlgebraError, Monomial, Rational};

/// Shared, ordered list of variable names.
pub type Roster = Arc<[String]>;

pub fn roster<S: AsRef<str>>(names: &[S]) -> Roster {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Coefficient ring for [`SparsePoly`].
///
/// `compatible` lets rings with extra structure (jets of a given truncation
/// degree) refuse to mix; arithmetic is only called on compatible operands.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// The multiplicative identity of the ring `self` lives in.
    fn one_like(&self) -> Self;
    fn compatible(&self, _other: &Self) -> Result<(), AlgebraError> {
        Ok(())
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
}

impl Coefficient for Rational {
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

/// Sparse multivariate polynomial over a declared variable roster.
///
/// Terms are kept sorted in descending graded reverse-lexicographic order and
/// never hold a zero coefficient, so structural equality is mathematical
/// equality.
#[derive(Clone, PartialEq)]
pub struct SparsePoly<C> {
    roster: Roster,
    terms: Vec<(Monomial, C)>,
}

impl<C: Coefficient> SparsePoly<C> {
    pub fn zero(roster: Roster) -> Self {
        SparsePoly { roster, terms: Vec::new() }
    }

    pub fn constant(roster: Roster, c: C) -> Self {
        Self::from_terms(roster, [(Monomial::one(), c)])
    }

    pub fn monomial(roster: Roster, m: Monomial, c: C) -> Self {
        Self::from_terms(roster, [(m, c)])
    }

    /// Builds a polynomial from terms in any order; like monomials are summed
    /// and zero results dropped.
    pub fn from_terms(roster: Roster, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => e.add_assign_ref(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(roster, acc)
    }

    fn from_map(roster: Roster, acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        SparsePoly { roster, terms }
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn nvars(&self) -> usize {
        self.roster.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.roster
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        SparsePoly {
            roster: self.roster.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        SparsePoly::from_terms(self.roster.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        SparsePoly {
            roster: self.roster.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if !Arc::ptr_eq(&self.roster, &other.roster) && self.roster != other.roster {
            return Err(AlgebraError::RosterMismatch {
                left: self.roster.join(","),
                right: other.roster.join(","),
            });
        }
        if let (Some((_, a)), Some((_, b))) = (self.terms.first(), other.terms.first()) {
            a.compatible(b)?;
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        use std::cmp::Ordering::*;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Less => {
                    let c = if negate { b[j].1.neg_ref() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Equal => {
                    let c = if negate { a[i].1.sub_ref(&b[j].1) } else { a[i].1.add_ref(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { t.1.neg_ref() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        SparsePoly { roster: self.roster.clone(), terms: out }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let p = ca.mul_ref(cb);
                if p.is_zero() {
                    continue;
                }
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => e.add_assign_ref(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Ok(Self::from_map(self.roster.clone(), acc))
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.mul_ref(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        SparsePoly { roster: self.roster.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect();
        // Multiplying by a fixed monomial preserves the term order.
        SparsePoly { roster: self.roster.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.terms.first() {
            Some((_, c)) => c.one_like(),
            None if e > 0 => return self.clone(),
            None => panic!("zero polynomial raised to the power 0"),
        };
        let mut result = SparsePoly::constant(self.roster.clone(), one);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize, from_int: impl Fn(u32) -> C) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split_var(var);
            if e == 0 {
                return None;
            }
            Some((rest.mul(&Monomial::var_pow(var, e - 1)), c.mul_ref(&from_int(e))))
        });
        SparsePoly::from_terms(self.roster.clone(), terms)
    }

    /// Re-expresses the polynomial over `target`, mapping each variable by name.
    pub fn with_roster(&self, target: Roster) -> Result<Self, AlgebraError> {
        let map: Vec<usize> = self
            .roster
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .ok_or_else(|| AlgebraError::UnknownVariable(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(SparsePoly::from_terms(target, self.terms.iter().map(|(m, c)| (m.remap(&map), c.clone()))))
    }

    /// Collects the polynomial as a univariate polynomial in `var`: entry `k`
    /// holds the coefficient of `var^k` (a polynomial free of `var`).
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut parts: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            parts[e as usize].push((rest, c.clone()));
        }
        parts.into_iter().map(|t| SparsePoly::from_terms(self.roster.clone(), t)).collect()
    }
}

impl SparsePoly<Rational> {
    pub fn var(roster: Roster, index: usize) -> Self {
        Self::monomial(roster, Monomial::var(index), Rational::one())
    }

    pub fn from_rational(roster: Roster, c: Rational) -> Self {
        Self::constant(roster, c)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                t *= &point[v].pow(e);
            }
            total += t;
        }
        total
    }

    /// Substitutes `var := value`, leaving the roster unchanged.
    pub fn substitute_value(&self, var: usize, value: &Rational) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let (e, rest) = m.split_var(var);
            (rest, c * &value.pow(e))
        });
        SparsePoly::from_terms(self.roster.clone(), terms)
    }

    /// Substitutes each variable by a polynomial over a (possibly different)
    /// roster. `images[i]` replaces variable `i`.
    pub fn compose(&self, images: &[SparsePoly<Rational>], target: Roster) -> Self {
        let mut cache: HashMap<(usize, u32), SparsePoly<Rational>> = HashMap::new();
        let mut acc = SparsePoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(target.clone(), c.clone());
            for (v, e) in m.factors() {
                let p = cache
                    .entry((v, e))
                    .or_insert_with(|| images[v].pow(e))
                    .clone();
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact division; fails when `divisor` does not divide `self`.
    pub fn try_div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.check(divisor)?;
        let (lm, lc) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?.clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let q = m.div(&lm).ok_or(AlgebraError::InexactDivision)?;
            let qc = &c / &lc;
            let step = divisor.mul_monomial(&q).scale(&qc);
            rem = &rem - &step;
            quot.push((q, qc));
        }
        Ok(SparsePoly::from_terms(self.roster.clone(), quot))
    }

    /// Multiplies through by the lcm of denominators and divides by the gcd of
    /// numerators, making the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = num_bigint::BigInt::from(1);
        let mut g = num_bigint::BigInt::from(0);
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        let mut s = Rational::new(l, g).expect("nonzero gcd");
        if self.terms[0].1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Gradient with respect to every roster variable.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|v| self.derivative(v, |e| Rational::from(e as i64))).collect()
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars()];
        for (m, _) in &self.terms {
            for (v, _) in m.factors() {
                seen[v] = true;
            }
        }
        (0..self.nvars()).filter(|&v| seen[v]).collect()
    }
}

impl<C: Coefficient> fmt::Debug for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({:?})*{}", c, monomial_name(m, &self.roster)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for SparsePoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", monomial_name(m, &self.roster))?;
            } else {
                write!(f, "{a}*{}", monomial_name(m, &self.roster))?;
            }
        }
        Ok(())
    }
}

/// Renders a monomial as `a200*c020^2`, or `1` for the unit.
pub fn monomial_name(m: &Monomial, roster: &[String]) -> String {
    if m.is_one() {
        return "1".into();
    }
    m.factors()
        .map(|(v, e)| if e == 1 { roster[v].clone() } else { format!("{}^{e}", roster[v]) })
        .collect::<Vec<_>>()
        .join("*")
}

impl<C: Coefficient> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<C: Coefficient> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<C: Coefficient> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<C: Coefficient> Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        SparsePoly {
            roster: self.roster.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Roster {
        roster(&["x", "y"])
    }

    fn p(terms: &[(i64, &[u32])]) -> SparsePoly<Rational> {
        SparsePoly::from_terms(xy(), terms.iter().map(|&(c, e)| (Monomial::from_exponents(e), Rational::from(c))))
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(1, &[1, 0]), (1, &[0, 1])]);
        let b = p(&[(1, &[1, 0]), (-1, &[0, 1])]);
        assert_eq!(&a * &b, p(&[(1, &[2, 0]), (-1, &[0, 2])]));
        assert_eq!((&a * &b).to_string(), "x^2 - y^2");
    }

    #[test]
    fn roster_mismatch_is_an_error() {
        let a = SparsePoly::var(roster(&["x"]), 0);
        let b = SparsePoly::var(roster(&["y"]), 0);
        assert!(matches!(a.try_add(&b), Err(AlgebraError::RosterMismatch { .. })));
    }

    #[test]
    fn exact_division() {
        let a = p(&[(1, &[1, 0]), (1, &[0, 1])]);
        let b = p(&[(1, &[1, 0]), (-2, &[0, 1])]);
        let prod = &a * &b;
        assert_eq!(prod.try_div_exact(&a).unwrap(), b);
        assert_eq!(
            p(&[(1, &[2, 0]), (1, &[0, 2])]).try_div_exact(&a),
            Err(AlgebraError::InexactDivision)
        );
    }

    #[test]
    fn compose_and_evaluate() {
        let a = p(&[(1, &[2, 0]), (3, &[0, 1]), (-1, &[0, 0])]);
        // x -> x + y, y -> 2
        let images = vec![p(&[(1, &[1, 0]), (1, &[0, 1])]), p(&[(2, &[0, 0])])];
        let c = a.compose(&images, xy());
        let pt = [Rational::frac(1, 3), Rational::frac(-2, 5)];
        let direct = a.evaluate(&[&pt[0] + &pt[1], Rational::from(2)]);
        assert_eq!(c.evaluate(&pt), direct);
    }
}
