//! Dense univariate polynomials over the rationals, with exact real-root
//! isolation used to extract rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational, Roster, SparsePoly};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// Reads a polynomial that involves at most the variable `var`.
    pub fn from_sparse(p: &SparsePoly<Rational>, var: usize) -> Option<Self> {
        let mut coeffs = vec![Rational::zero(); p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            let (e, rest) = m.split_var(var);
            if !rest.is_one() {
                return None;
            }
            coeffs[e as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn to_sparse(&self, roster: Roster, var: usize) -> SparsePoly<Rational> {
        SparsePoly::from_terms(
            roster,
            self.coeffs.iter().enumerate().map(|(e, c)| (Monomial::var_pow(var, e as u32), c.clone())),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).signum()
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(e, c)| c * &Rational::from(e as i64))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n < dd + 1 {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let v = &r[k + j] - &(&c * dj);
                r[k + j] = v;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Divides by a positive rational so that coefficients are coprime integers.
    /// The sign is preserved, which keeps Sturm chains valid.
    pub fn positive_primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        let s = Rational::new(l, g).expect("nonzero content");
        UniPoly::new(self.coeffs.iter().map(|c| c * &s).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.positive_primitive();
        }
        if a.is_zero() {
            return a;
        }
        let lc = a.leading();
        UniPoly::new(a.coeffs.iter().map(|c| c / &lc).collect())
    }

    /// `self / gcd(self, self')`, made integer-primitive with positive leading
    /// coefficient.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g);
        let q = q.positive_primitive();
        if q.leading().is_negative() {
            UniPoly::new(q.coeffs.iter().map(|c| -c).collect())
        } else {
            q
        }
    }

    fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative().positive_primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(UniPoly::new(r.coeffs.iter().map(|c| -c).collect()).positive_primitive());
        }
        chain
    }

    /// Real roots of the squarefree part, as exact rationals where rational.
    ///
    /// Each real root is isolated with a Sturm chain and its interval shrunk
    /// below `1/(2·lc²)`; the simplest rational in the interval is then the
    /// only possible rational root there and is tested by exact evaluation.
    /// Interval endpoints are dyadic, so every sign evaluation is a single
    /// integer Horner pass.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.squarefree_part();
        let mut roots = Vec::new();
        // Zero root handled separately so that intervals stay away from it.
        let (p, has_zero) = strip_zero_root(&p);
        if has_zero {
            roots.push(Rational::zero());
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let chain: Vec<Vec<BigInt>> = p.sturm_chain().iter().map(integer_coeffs).collect();
        let ip = &chain[0];
        let bound = Dyadic::power_bound(&cauchy_bound(&p));
        let lc = p.leading().abs();
        // 2^-bits <= 1/(2·lc²)
        let bits = (&lc * &lc * Rational::from(2)).numer().bits();
        let mut stack = vec![(bound.neg(), bound)];
        while let Some((a, b)) = stack.pop() {
            let n = variations(&chain, &a) - variations(&chain, &b);
            if n == 0 {
                continue;
            }
            if n > 1 {
                let mid = a.mid(&b);
                if sign_at(ip, &mid) == 0 {
                    roots.push(mid.to_rational());
                    // Split around the exact root so it is not counted twice.
                    let eps = smaller_gap(&chain, &a, &mid);
                    stack.push((a.clone(), mid.sub(&eps)));
                    stack.push((mid.add(&eps), b.clone()));
                } else {
                    stack.push((a, mid.clone()));
                    stack.push((mid, b));
                }
                continue;
            }
            if let Some(r) = refine_single(&p, ip, a, b, bits) {
                roots.push(r);
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let p = self.squarefree_part();
        let chain: Vec<Vec<BigInt>> = p.sturm_chain().iter().map(integer_coeffs).collect();
        let b = Dyadic::power_bound(&(cauchy_bound(&p) + Rational::one()));
        (variations(&chain, &b.neg()) - variations(&chain, &b)) as usize
    }
}

/// `m / 2^k`.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    k: u64,
}

impl Dyadic {
    fn normalized(mut m: BigInt, mut k: u64) -> Dyadic {
        if m.is_zero() {
            return Dyadic { m, k: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0).min(k);
        m >>= tz;
        k -= tz;
        Dyadic { m, k }
    }

    /// The least power of two that is at least `r > 0`.
    fn power_bound(r: &Rational) -> Dyadic {
        let ceil = (r.numer() + r.denom() - BigInt::one()) / r.denom();
        Dyadic { m: BigInt::one() << ceil.bits(), k: 0 }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let k = self.k.max(other.k);
        (&self.m << (k - self.k), &other.m << (k - other.k), k)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, k) = self.aligned(other);
        Dyadic::normalized(a + b, k)
    }

    fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, k: self.k }
    }

    fn mid(&self, other: &Dyadic) -> Dyadic {
        let (a, b, k) = self.aligned(other);
        Dyadic::normalized(a + b, k + 1)
    }

    fn half(&self) -> Dyadic {
        Dyadic::normalized(self.m.clone(), self.k + 1)
    }

    fn quarter_gap(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let d = b.sub(a);
        Dyadic::normalized(d.m, d.k + 2)
    }

    /// Whether `self ≥ 2^-bits`, for `self ≥ 0`.
    fn at_least_pow2(&self, bits: u64) -> bool {
        // m / 2^k ≥ 2^-bits  ⇔  m·2^bits ≥ 2^k
        (&self.m << bits) >= (BigInt::one() << self.k)
    }

    fn to_rational(&self) -> Rational {
        Rational::new(self.m.clone(), BigInt::one() << self.k).expect("nonzero denominator")
    }
}

fn integer_coeffs(p: &UniPoly) -> Vec<BigInt> {
    let p = p.positive_primitive();
    p.coeffs
        .iter()
        .map(|c| {
            debug_assert!(c.denom().is_one());
            c.numer().clone()
        })
        .collect()
}

/// Sign of `Σ c_i x^i` at `x = m/2^k`, from `Σ c_i m^i 2^{k(d-i)}`.
fn sign_at(coeffs: &[BigInt], x: &Dyadic) -> i32 {
    let d = coeffs.len() - 1;
    let mut acc = coeffs[d].clone();
    for i in (0..d).rev() {
        acc = acc * &x.m + (&coeffs[i] << (x.k * (d - i) as u64));
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn strip_zero_root(p: &UniPoly) -> (UniPoly, bool) {
    if p.coeffs.first().is_some_and(|c| c.is_zero()) {
        (UniPoly::new(p.coeffs[1..].to_vec()), true)
    } else {
        (p.clone(), false)
    }
}

fn cauchy_bound(p: &UniPoly) -> Rational {
    let lc = p.leading().abs();
    let m = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + m / lc
}

fn variations(chain: &[Vec<BigInt>], x: &Dyadic) -> i64 {
    let mut last = 0;
    let mut count = 0;
    for q in chain {
        let s = sign_at(q, x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

// Half-width of a neighbourhood around an exact root `r` in (a, b) that holds
// no other root.
fn smaller_gap(chain: &[Vec<BigInt>], a: &Dyadic, r: &Dyadic) -> Dyadic {
    let mut eps = Dyadic::quarter_gap(a, r);
    loop {
        if variations(chain, &r.sub(&eps)) - variations(chain, &r.add(&eps)) == 1 {
            return eps;
        }
        eps = eps.half();
    }
}

// One simple root in (a, b]; shrink and test the simplest rational candidate.
fn refine_single(p: &UniPoly, ip: &[BigInt], mut a: Dyadic, mut b: Dyadic, bits: u64) -> Option<Rational> {
    if sign_at(ip, &b) == 0 {
        return Some(b.to_rational());
    }
    let mut sa = sign_at(ip, &a);
    if sa == 0 {
        // A root exactly at `a` belongs to the neighbouring interval. Just to
        // the right of it a squarefree polynomial has the sign of p'(a).
        sa = sign_at(&integer_coeffs(&p.derivative()), &a);
    }
    while b.sub(&a).at_least_pow2(bits) {
        let mid = a.mid(&b);
        let sm = sign_at(ip, &mid);
        if sm == 0 {
            return Some(mid.to_rational());
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let cand = Rational::simplest_between(&a.to_rational(), &b.to_rational());
    if p.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// Rational roots by exhaustive candidate search `±p/q` with `p | a0`, `q | an`.
/// Only practical for small coefficients; kept as an independent check.
pub fn rational_roots_by_divisors(p: &UniPoly) -> Vec<Rational> {
    let p = p.squarefree_part();
    let (p, has_zero) = strip_zero_root(&p);
    let mut roots = Vec::new();
    if has_zero {
        roots.push(Rational::zero());
    }
    if p.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let a0 = p.coeffs[0].numer().abs();
    let an = p.leading().numer().abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out
    };
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for s in [1i64, -1] {
                let c = Rational::new(&num * BigInt::from(s), den.clone()).expect("nonzero");
                if p.eval(&c).is_zero() {
                    roots.push(c);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn finds_rational_roots_among_irrational_ones() {
        // (2x - 3)(x + 5)(x^2 - 2)(3x - 1)^2
        let f = [up(&[-3, 2]), up(&[5, 1]), up(&[-2, 0, 1]), up(&[-1, 3]), up(&[-1, 3])];
        let mut p = up(&[1]);
        for g in &f {
            let mut c = vec![Rational::zero(); p.coeffs.len() + g.coeffs.len() - 1];
            for (i, a) in p.coeffs.iter().enumerate() {
                for (j, b) in g.coeffs.iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            p = UniPoly::new(c);
        }
        let expect = vec![Rational::from(-5), Rational::frac(1, 3), Rational::frac(3, 2)];
        assert_eq!(p.rational_roots(), expect);
        assert_eq!(rational_roots_by_divisors(&p), expect);
        assert_eq!(p.count_real_roots(), 5);
    }

    #[test]
    fn zero_and_close_roots() {
        // x (x - 1/1000)(x - 1/999)
        let a = UniPoly::new(vec![Rational::zero(), Rational::one()]);
        let b = UniPoly::new(vec![Rational::frac(-1, 1000), Rational::one()]);
        let c = UniPoly::new(vec![Rational::frac(-1, 999), Rational::one()]);
        let mul = |p: &UniPoly, q: &UniPoly| {
            let mut c = vec![Rational::zero(); p.coeffs.len() + q.coeffs.len() - 1];
            for (i, x) in p.coeffs.iter().enumerate() {
                for (j, y) in q.coeffs.iter().enumerate() {
                    c[i + j] += x * y;
                }
            }
            UniPoly::new(c)
        };
        let p = mul(&mul(&a, &b), &c);
        assert_eq!(
            p.rational_roots(),
            vec![Rational::zero(), Rational::frac(1, 1000), Rational::frac(1, 999)]
        );
    }
}
