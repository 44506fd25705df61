use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::monomial_name;
use super::{AlgebraError, Coefficient, Gaussian, Monomial, Rational, Roster, SparsePoly};

/// A polynomial in perturbation parameters truncated at total degree `D`.
///
/// Jets with different `D` or different parameter rosters never combine; use
/// [`Jet::truncate`] to lower the degree explicitly.
#[derive(Clone, PartialEq)]
pub struct Jet {
    poly: SparsePoly<Rational>,
    degree: u32,
}

impl Jet {
    /// Wraps `poly`, dropping terms above `degree`.
    pub fn new(poly: SparsePoly<Rational>, degree: u32) -> Self {
        let poly = if poly.degree().is_some_and(|d| d > degree) {
            poly.filter_terms(|m| m.degree() <= degree)
        } else {
            poly
        };
        Jet { poly, degree }
    }

    pub fn zero(roster: Roster, degree: u32) -> Self {
        Jet { poly: SparsePoly::zero(roster), degree }
    }

    pub fn constant(roster: Roster, degree: u32, c: Rational) -> Self {
        Jet { poly: SparsePoly::constant(roster, c), degree }
    }

    /// The jet of parameter `index` itself (zero when `degree` is 0).
    pub fn param(roster: Roster, degree: u32, index: usize) -> Self {
        Jet::new(SparsePoly::var(roster, index), degree)
    }

    pub fn poly(&self) -> &SparsePoly<Rational> {
        &self.poly
    }

    pub fn into_poly(self) -> SparsePoly<Rational> {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn roster(&self) -> &Roster {
        self.poly.roster()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn constant_term(&self) -> Rational {
        self.poly.constant_term()
    }

    /// Coefficient of the monomial `m` in the parameters.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.poly.coeff(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn homogeneous_part(&self, d: u32) -> SparsePoly<Rational> {
        self.poly.homogeneous_part(d)
    }

    /// Lowers the truncation degree to `d`.
    pub fn truncate(&self, d: u32) -> Result<Jet, AlgebraError> {
        if d > self.degree {
            return Err(AlgebraError::TruncationAbove { from: self.degree, to: d });
        }
        Ok(Jet::new(self.poly.clone(), d))
    }

    /// Re-reads the same polynomial at a higher truncation degree. Terms above
    /// the old degree are unknown and stay absent, so this is only meaningful
    /// for exact (polynomial) data.
    pub fn lift(&self, d: u32) -> Jet {
        Jet { poly: self.poly.clone(), degree: d.max(self.degree) }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.poly.evaluate(point)
    }

    pub fn scale(&self, s: &Rational) -> Jet {
        Jet { poly: self.poly.scale(s), degree: self.degree }
    }

    pub fn one_like(&self) -> Jet {
        Jet::constant(self.roster().clone(), self.degree, Rational::one())
    }

    fn check(&self, other: &Jet) -> Result<(), AlgebraError> {
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        if self.roster() != other.roster() {
            return Err(AlgebraError::RosterMismatch {
                left: self.roster().join(","),
                right: other.roster().join(","),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet, AlgebraError> {
        self.check(other)?;
        Ok(Jet { poly: self.poly.try_add(&other.poly)?, degree: self.degree })
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet, AlgebraError> {
        self.check(other)?;
        Ok(Jet { poly: self.poly.try_sub(&other.poly)?, degree: self.degree })
    }

    /// Truncated product: pairs whose degrees sum above `D` are never formed.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet, AlgebraError> {
        self.check(other)?;
        let d = self.degree;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in self.poly.terms() {
            let da = ma.degree();
            for (mb, cb) in other.poly.terms() {
                if da + mb.degree() > d {
                    continue;
                }
                let p = ca * cb;
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => *e += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Ok(Jet { poly: SparsePoly::from_terms(self.roster().clone(), acc), degree: d })
    }

    /// Substitutes parameter `i` by `images[i]` (jets over a new roster, all
    /// of this jet's degree), truncating throughout.
    pub fn compose(&self, images: &[Jet]) -> Result<Jet, AlgebraError> {
        let mut out = Jet::compose_all(std::slice::from_ref(self), images)?;
        Ok(out.pop().expect("one jet in, one jet out"))
    }

    /// [`Jet::compose`] for several jets over one roster with shared images.
    /// Monomial images are memoized across all of them; each is the image of
    /// a smaller monomial times one variable image, preferring variables whose
    /// image has few terms.
    pub fn compose_all(jets: &[Jet], images: &[Jet]) -> Result<Vec<Jet>, AlgebraError> {
        let Some(first) = jets.first() else { return Ok(Vec::new()) };
        let degree = first.degree;
        let target = images.first().map(|j| j.roster().clone()).unwrap_or_else(|| first.roster().clone());
        if let Some(img) = images.iter().find(|j| j.degree != degree) {
            return Err(AlgebraError::DegreeMismatch { left: degree, right: img.degree });
        }
        let mut memo: HashMap<Monomial, Jet> = HashMap::new();
        memo.insert(Monomial::one(), Jet::constant(target.clone(), degree, Rational::one()));
        let mut out = Vec::with_capacity(jets.len());
        for jet in jets {
            if jet.degree != degree {
                return Err(AlgebraError::DegreeMismatch { left: degree, right: jet.degree });
            }
            let mut acc = SparsePoly::zero(target.clone());
            for (m, c) in jet.poly.terms() {
                let img = monomial_image(m, images, &mut memo)?;
                if !img.is_zero() {
                    acc = &acc + &img.poly.scale(c);
                }
            }
            out.push(Jet::new(acc, degree));
        }
        Ok(out)
    }

    /// Coefficient map in the sysmodel encoding: `"1"`, `"a200"`, `"a200*c020"`,
    /// `"a200^2"` to rational strings, in canonical order.
    pub fn to_named_terms(&self) -> Vec<(String, Rational)> {
        self.poly
            .terms()
            .iter()
            .map(|(m, c)| (monomial_name(m, self.roster()), c.clone()))
            .collect()
    }

    /// Parses parameter monomial names produced by [`Jet::to_named_terms`].
    pub fn parse_monomial(name: &str, roster: &[String]) -> Result<Monomial, AlgebraError> {
        let name = name.trim();
        if name == "1" {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        for factor in name.split('*') {
            let factor = factor.trim();
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (
                    v.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| AlgebraError::UnknownVariable(factor.to_string()))?,
                ),
                None => (factor, 1),
            };
            let idx = roster
                .iter()
                .position(|r| r == var)
                .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
            pairs.push((idx, exp));
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

impl Coefficient for Jet {
    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.try_add(other).expect("jet addition")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.try_sub(other).expect("jet subtraction")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("jet multiplication")
    }
    fn neg_ref(&self) -> Self {
        Jet { poly: -&self.poly, degree: self.degree }
    }
    fn one_like(&self) -> Self {
        Jet::one_like(self)
    }
    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        self.check(other)
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [D={}]", self.poly, self.degree)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.add_ref(rhs)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.sub_ref(rhs)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_ref(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.neg_ref()
    }
}

/// `re + i·im` with jet parts; used when complexifying a perturbed system.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexJet {
    pub re: Jet,
    pub im: Jet,
}

impl ComplexJet {
    pub fn real(re: Jet) -> Self {
        let im = Jet::zero(re.roster().clone(), re.degree());
        ComplexJet { re, im }
    }

    pub fn scale(&self, g: &Gaussian) -> ComplexJet {
        ComplexJet {
            re: &self.re.scale(&g.re) - &self.im.scale(&g.im),
            im: &self.re.scale(&g.im) + &self.im.scale(&g.re),
        }
    }

    pub fn conj(&self) -> ComplexJet {
        ComplexJet { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Coefficient for ComplexJet {
    fn is_zero(&self) -> bool {
        ComplexJet::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        ComplexJet { re: &self.re + &other.re, im: &self.im + &other.im }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        ComplexJet { re: &self.re - &other.re, im: &self.im - &other.im }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        ComplexJet {
            re: &(&self.re * &other.re) - &(&self.im * &other.im),
            im: &(&self.re * &other.im) + &(&self.im * &other.re),
        }
    }
    fn neg_ref(&self) -> Self {
        ComplexJet { re: -&self.re, im: -&self.im }
    }
    fn one_like(&self) -> Self {
        ComplexJet::real(self.re.one_like())
    }
    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        self.re.check(&other.re)
    }
}

fn monomial_image(m: &Monomial, images: &[Jet], memo: &mut HashMap<Monomial, Jet>) -> Result<Jet, AlgebraError> {
    if let Some(j) = memo.get(m) {
        return Ok(j.clone());
    }
    let (v, _) = m
        .factors()
        .min_by_key(|&(v, _)| images[v].poly.len())
        .expect("the unit monomial is memoized");
    let rest = m.div(&Monomial::var(v)).expect("variable divides its monomial");
    let img = monomial_image(&rest, images, memo)?.try_mul(&images[v])?;
    memo.insert(m.clone(), img.clone());
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::super::poly::roster;
    use super::*;

    #[test]
    fn truncation_drops_square() {
        let r = roster(&["a"]);
        let one_plus_a = &Jet::constant(r.clone(), 1, Rational::one()) + &Jet::param(r.clone(), 1, 0);
        let sq = &one_plus_a * &one_plus_a;
        assert_eq!(sq.to_string(), "2*a + 1");
    }

    #[test]
    fn truncate_rules() {
        let r = roster(&["a", "b"]);
        let a = Jet::param(r.clone(), 2, 0);
        let b = Jet::param(r.clone(), 2, 1);
        let j = &(&Jet::constant(r.clone(), 2, Rational::one()) + &a) + &(&a * &b);
        assert_eq!(j.truncate(1).unwrap().to_string(), "a + 1");
        assert_eq!(j.truncate(0).unwrap().to_string(), "1");
        assert!(j.truncate(3).is_err());
        let low = Jet::param(r, 1, 0);
        assert_eq!(j.try_add(&low), Err(AlgebraError::DegreeMismatch { left: 2, right: 1 }));
    }

    #[test]
    fn named_monomials_roundtrip() {
        let r = roster(&["a200", "c020"]);
        let m = Jet::parse_monomial("a200*c020^2", &r).unwrap();
        assert_eq!(monomial_name(&m, &r), "a200*c020^2");
        assert!(Jet::parse_monomial("zz", &r).is_err());
    }
}
