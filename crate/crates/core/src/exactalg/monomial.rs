use std::cmp::Ordering;

use smallvec::SmallVec;

/// A monomial stored sparsely as `(variable index, exponent)` pairs, sorted by
/// variable index, with no zero exponents.
///
/// The ordering is graded reverse-lexicographic where variable 0 is the largest:
/// first compare total degree, then the monomial with the smaller exponent in
/// the last variable where they differ is the larger one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: SmallVec<[(u16, u16); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        let mut m = Monomial::one();
        if exp > 0 {
            m.factors.push((index as u16, exp as u16));
        }
        m
    }

    /// Builds from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let factors = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i as u16, e as u16))
            .collect();
        Monomial { factors }
    }

    /// Builds from arbitrary `(var, exp)` pairs; repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var_pow(v, e));
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.factors
            .iter()
            .find(|&&(v, _)| v as usize == var)
            .map_or(0, |&(_, e)| e as u32)
    }

    pub fn to_exponents(&self, nvars: usize) -> Vec<u32> {
        let mut out = vec![0; nvars];
        for &(v, e) in &self.factors {
            out[v as usize] = e as u32;
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(var, exp)` pairs in increasing variable order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.factors.iter().map(|&(v, e)| (v as usize, e as u32))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.factors.last().map(|&(v, _)| v as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        let b = &other.factors;
        for &(v, e) in &self.factors {
            let mut e = e;
            if j < b.len() && b[j].0 == v {
                if b[j].1 > e {
                    return None;
                }
                e -= b[j].1;
                j += 1;
            } else if j < b.len() && b[j].0 < v {
                return None;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Removes variable `var`, returning its exponent and the remaining monomial.
    pub fn split_var(&self, var: usize) -> (u32, Monomial) {
        let mut rest = self.clone();
        let mut exp = 0;
        rest.factors.retain(|&mut (v, e)| {
            if v as usize == var {
                exp = e as u32;
                false
            } else {
                true
            }
        });
        (exp, rest)
    }

    /// Renumbers variables through `map` (old index → new index).
    pub fn remap(&self, map: &[usize]) -> Monomial {
        Monomial::from_pairs(self.factors().map(|(v, e)| (map[v], e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        // Walk from the highest variable index downwards.
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 || j > 0 {
            let va = if i > 0 { Some(a[i - 1]) } else { None };
            let vb = if j > 0 { Some(b[j - 1]) } else { None };
            match (va, vb) {
                (Some((xa, ea)), Some((xb, eb))) if xa == xb => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
                (Some((xa, _)), Some((xb, _))) => {
                    // The side holding the higher variable has a positive exponent
                    // where the other has zero, so it is smaller.
                    return if xa > xb { Ordering::Less } else { Ordering::Greater };
                }
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => break,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(v, e)| if e == 1 { format!("v{v}") } else { format!("v{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    // Reference grevlex on dense vectors.
    fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        if da != db {
            return da.cmp(&db);
        }
        for k in (0..a.len()).rev() {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        Ordering::Equal
    }

    #[test]
    fn grevlex_examples() {
        // x > y > z among degree-1, and x^2 > xy > y^2 > xz > yz > z^2.
        let order = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in order.windows(2) {
            assert!(w[0] > w[1], "{:?} > {:?}", w[0], w[1]);
        }
        assert!(m(&[0, 0, 1]) > Monomial::one());
    }

    #[test]
    fn matches_dense_reference() {
        let mut all = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..2 {
                        all.push(vec![a, b, c, d]);
                    }
                }
            }
        }
        for x in &all {
            for y in &all {
                assert_eq!(m(x).cmp(&m(y)), grevlex(x, y), "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = m(&[1, 0, 2]);
        let b = m(&[0, 3, 1]);
        let p = a.mul(&b);
        assert_eq!(p, m(&[1, 3, 3]));
        assert_eq!(p.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(p.split_var(1), (3, m(&[1, 0, 3])));
    }
}
