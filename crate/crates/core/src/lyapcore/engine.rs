//! Degree-by-degree homological solver on dense integer jets.
//!
//! Every jet is stored densely over the monomials of degree ≤ D in the
//! parameters, with Gaussian-integer entries. All coefficients of H of one
//! degree share a single integer denominator; the field is scaled to integers
//! by one common denominator. Each degree therefore needs only integer
//! multiply-adds plus one gcd sweep, instead of rational normalization at
//! every operation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::complex::ComplexSystem;
use super::{LyapunovError, Normalization};
use crate::exactalg::{ComplexJet, Jet, Monomial, Rational, Roster, SparsePoly};

/// Monomials of degree ≤ D in the parameters, graded ascending.
#[derive(Debug)]
pub struct JetSpace {
    pub roster: Roster,
    pub degree: u32,
    pub monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl JetSpace {
    pub fn new(roster: Roster, degree: u32) -> Self {
        let n = roster.len();
        let mut monos = vec![Monomial::one()];
        let mut frontier = vec![(Monomial::one(), 0usize)];
        for _ in 0..degree {
            let mut next = Vec::new();
            for (m, lo) in &frontier {
                for v in *lo..n {
                    let nm = m.mul(&Monomial::var(v));
                    monos.push(nm.clone());
                    next.push((nm, v));
                }
            }
            frontier = next;
        }
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        JetSpace { roster, degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    fn product_row(&self, j: usize) -> Vec<u32> {
        let mj = &self.monos[j];
        self.monos
            .iter()
            .map(|mi| {
                if mi.degree() + mj.degree() > self.degree {
                    u32::MAX
                } else {
                    self.index[&mi.mul(mj)] as u32
                }
            })
            .collect()
    }

    fn rational_jet(&self, num: &[BigInt], den: &BigInt) -> Jet {
        let terms = num.iter().enumerate().filter(|(_, n)| !n.is_zero()).map(|(i, n)| {
            (self.monos[i].clone(), Rational::new(n.clone(), den.clone()).expect("nonzero denominator"))
        });
        Jet::new(SparsePoly::from_terms(self.roster.clone(), terms), self.degree)
    }
}

/// Dense Gaussian-integer jet.
#[derive(Clone, Debug, PartialEq)]
pub struct GJet {
    pub re: Vec<BigInt>,
    pub im: Vec<BigInt>,
}

impl GJet {
    fn zero(n: usize) -> Self {
        GJet { re: vec![BigInt::zero(); n], im: vec![BigInt::zero(); n] }
    }

    fn is_zero(&self) -> bool {
        self.re.iter().all(Zero::is_zero) && self.im.iter().all(Zero::is_zero)
    }

    fn conj(&self) -> Self {
        GJet { re: self.re.clone(), im: self.im.iter().map(|x| -x).collect() }
    }

    /// `self += s · other` for a Gaussian integer `s = (sr, si)`.
    fn add_scaled(&mut self, other: &GJet, sr: &BigInt, si: &BigInt) {
        for k in 0..self.re.len() {
            let (or, oi) = (&other.re[k], &other.im[k]);
            if or.is_zero() && oi.is_zero() {
                continue;
            }
            if !sr.is_zero() {
                self.re[k] += sr * or;
                self.im[k] += sr * oi;
            }
            if !si.is_zero() {
                self.re[k] -= si * oi;
                self.im[k] += si * or;
            }
        }
    }

    /// Multiplies by the Gaussian integer `(sr, si)`.
    fn mul_gauss(&self, sr: &BigInt, si: &BigInt) -> GJet {
        let mut out = GJet::zero(self.re.len());
        out.add_scaled(self, sr, si);
        out
    }

    fn scale_int(&mut self, s: &BigInt) {
        if s.is_one() {
            return;
        }
        for x in self.re.iter_mut().chain(self.im.iter_mut()) {
            if !x.is_zero() {
                *x *= s;
            }
        }
    }

    fn gcd_into(&self, g: &mut BigInt) {
        for x in self.re.iter().chain(&self.im) {
            if !x.is_zero() {
                *g = g.gcd(x);
                if g.is_one() {
                    return;
                }
            }
        }
    }

    fn div_exact(&mut self, g: &BigInt) {
        for x in self.re.iter_mut().chain(self.im.iter_mut()) {
            if !x.is_zero() {
                *x /= g;
            }
        }
    }
}

/// One nonzero entry of a field coefficient: jet index, product-table row,
/// Gaussian-integer value.
#[derive(Debug)]
struct FieldEntry {
    row: usize,
    re: BigInt,
    im: BigInt,
}

#[derive(Debug)]
struct FieldTerm {
    exps: [u32; 3],
    degree: u32,
    entries: Vec<FieldEntry>,
}

/// Coefficients of H of one degree, `numerator / den`, indexed by
/// [`tri_index`].
#[derive(Clone, Debug)]
pub struct HDegree {
    pub degree: u32,
    pub den: BigInt,
    pub entries: Vec<Option<GJet>>,
}

/// Position of `u^a v^b z^(m−a−b)` among the monomials of degree `m`.
pub fn tri_index(m: u32, a: u32, b: u32) -> usize {
    let (m, a, b) = (m as usize, a as usize, b as usize);
    a * (m + 1) - a * (a.saturating_sub(1)) / 2 + b
}

pub struct EngineOutput {
    pub space: Arc<JetSpace>,
    pub constants: Vec<Jet>,
    pub h: Option<Vec<HDegree>>,
}

impl HDegree {
    pub fn get(&self, a: u32, b: u32) -> Option<&GJet> {
        self.entries.get(tri_index(self.degree, a, b)).and_then(|e| e.as_ref())
    }

    /// The coefficient of `u^a v^b z^c` as a rational complex jet.
    pub fn complex_jet(&self, space: &JetSpace, a: u32, b: u32) -> ComplexJet {
        match self.get(a, b) {
            Some(g) => ComplexJet { re: space.rational_jet(&g.re, &self.den), im: space.rational_jet(&g.im, &self.den) },
            None => ComplexJet::real(Jet::zero(space.roster.clone(), space.degree)),
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Runs the solver through degree `2n + 2`, returning `L_1 … L_n`.
pub fn run(
    cs: &ComplexSystem,
    n: usize,
    norm: Normalization,
    keep_h: bool,
) -> Result<EngineOutput, LyapunovError> {
    let space = Arc::new(JetSpace::new(cs.parameters.clone(), cs.jet_degree));
    let s_len = space.len();

    // Common denominator of the field.
    let mut fd = BigInt::one();
    for eq in 0..3 {
        for (_, c) in cs.rhs(eq).terms() {
            for part in [&c.re, &c.im] {
                for (_, q) in part.poly().terms() {
                    fd = fd.lcm(q.denom());
                }
            }
        }
    }

    // Integer field terms and the product rows they need.
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut row_of: HashMap<usize, usize> = HashMap::new();
    let mut fields: [Vec<FieldTerm>; 3] = Default::default();
    let mut max_field_degree = 2;
    for (eq, field) in fields.iter_mut().enumerate() {
        for (m, c) in cs.rhs(eq).terms() {
            let e = m.to_exponents(3);
            let mut acc: BTreeMap<usize, (BigInt, BigInt)> = BTreeMap::new();
            for (part, is_im) in [(&c.re, false), (&c.im, true)] {
                for (pm, q) in part.poly().terms() {
                    let j = space.index[pm];
                    let v = q.numer() * (&fd / q.denom());
                    let slot = acc.entry(j).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
                    if is_im {
                        slot.1 += v;
                    } else {
                        slot.0 += v;
                    }
                }
            }
            let entries = acc
                .into_iter()
                .map(|(j, (re, im))| {
                    let row = *row_of.entry(j).or_insert_with(|| {
                        rows.push(space.product_row(j));
                        rows.len() - 1
                    });
                    FieldEntry { row, re, im }
                })
                .collect::<Vec<_>>();
            if entries.is_empty() {
                continue;
            }
            max_field_degree = max_field_degree.max(m.degree());
            field.push(FieldTerm { exps: [e[0], e[1], e[2]], degree: m.degree(), entries });
        }
    }

    let p = cs.lambda.numer().clone();
    let q = cs.lambda.denom().clone();

    // H_2 = uv.
    let mut h2 = HDegree { degree: 2, den: BigInt::one(), entries: vec![None; 6] };
    let mut one = GJet::zero(s_len);
    one.re[0] = BigInt::one();
    h2.entries[tri_index(2, 1, 1)] = Some(one);
    let mut hs: Vec<HDegree> = vec![h2];
    let mut first_kept = 0usize; // index into hs of degree 2 + first_kept
    let mut constants = Vec::with_capacity(n);

    let top = 2 * n as u32 + 2;
    for m in 3..=top {
        // Source degrees and the common denominator over them.
        let mut src_degrees: Vec<u32> = fields
            .iter()
            .flatten()
            .map(|t| m + 1 - t.degree)
            .filter(|&k| k >= 2)
            .collect();
        src_degrees.sort_unstable();
        src_degrees.dedup();
        let hdeg = |k: u32| -> &HDegree { &hs[(k - 2) as usize - first_kept] };
        let mut dm = BigInt::one();
        for &k in &src_degrees {
            dm = dm.lcm(&hdeg(k).den);
        }
        let scale: HashMap<u32, BigInt> = src_degrees.iter().map(|&k| (k, &dm / &hdeg(k).den)).collect();

        let mons: Vec<(u32, u32)> = (0..=m).flat_map(|a| (0..=a.min(m - a)).map(move |b| (a, b))).collect();
        let remainders: Vec<GJet> = mons
            .par_iter()
            .map(|&(a, b)| {
                let c = m - a - b;
                let mut total = GJet::zero(s_len);
                for &k in &src_degrees {
                    let mut acc = GJet::zero(s_len);
                    for (d, field) in fields.iter().enumerate() {
                        for t in field {
                            if m + 1 - t.degree != k {
                                continue;
                            }
                            let mut src = [a as i64, b as i64, c as i64];
                            for i in 0..3 {
                                src[i] -= t.exps[i] as i64;
                            }
                            src[d] += 1;
                            if src.iter().any(|&x| x < 0) {
                                continue;
                            }
                            let Some(h) = hdeg(k).get(src[0] as u32, src[1] as u32) else { continue };
                            let e = BigInt::from(src[d]);
                            for fe in &t.entries {
                                let row = &rows[fe.row];
                                let (cr, ci) = (&fe.re * &e, &fe.im * &e);
                                for i in 0..s_len {
                                    let (hr, hi) = (&h.re[i], &h.im[i]);
                                    if hr.is_zero() && hi.is_zero() {
                                        continue;
                                    }
                                    let kk = row[i];
                                    if kk == u32::MAX {
                                        continue;
                                    }
                                    let kk = kk as usize;
                                    if !cr.is_zero() {
                                        acc.re[kk] += &cr * hr;
                                        acc.im[kk] += &cr * hi;
                                    }
                                    if !ci.is_zero() {
                                        acc.re[kk] -= &ci * hi;
                                        acc.im[kk] += &ci * hr;
                                    }
                                }
                            }
                        }
                    }
                    let sk = &scale[&k];
                    acc.scale_int(sk);
                    total.add_scaled(&acc, &BigInt::one(), &BigInt::zero());
                }
                total
            })
            .collect();
        let rem_of: HashMap<(u32, u32), usize> = mons.iter().enumerate().map(|(i, &ab)| (ab, i)).collect();

        // Common multiple of the divisor norms |q·eig|².
        let eig = |a: u32, b: u32| -> (BigInt, BigInt) {
            let c = m - a - b;
            (-(&p * BigInt::from(c)), &q * BigInt::from(a as i64 - b as i64))
        };
        let mut big_m = BigInt::one();
        for &(a, b) in &mons {
            if a == b && a + b == m {
                continue;
            }
            let (er, ei) = eig(a, b);
            let nrm = &er * &er + &ei * &ei;
            if nrm.is_zero() {
                return Err(LyapunovError::Integrity(format!("zero divisor at u^{a} v^{b} z^{}", m - a - b)));
            }
            big_m = big_m.lcm(&nrm);
        }

        let even = m % 2 == 0;
        let half = m / 2;
        let axis = even && norm == Normalization::AxisPower;
        let kbin = if axis { binomial(m, half) } else { BigInt::one() };
        let base_den = &fd * &dm;

        if even {
            let rnn = &remainders[rem_of[&(half, half)]];
            if rnn.im.iter().any(|x| !x.is_zero()) {
                return Err(LyapunovError::ImaginaryResidue { k: half as usize - 1 });
            }
            // L = R_nn / (Fd·Dm) · (4^n / C(2n,n) under the axis convention).
            let (num_scale, den) = if axis {
                (BigInt::from(4u32).pow(half), &base_den * &kbin)
            } else {
                (BigInt::one(), base_den.clone())
            };
            let num: Vec<BigInt> = rnn.re.iter().map(|x| x * &num_scale).collect();
            constants.push(space.rational_jet(&num, &den));
        }

        let den = &base_den * &big_m * &kbin;
        let solved: Vec<(usize, Option<GJet>)> = mons
            .par_iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let c = m - a - b;
                if a == b && c == 0 {
                    return (i, None);
                }
                let (er, ei) = eig(a, b);
                let nrm = &er * &er + &ei * &ei;
                let mult = &big_m / &nrm * &q;
                // −q·conj(e)·(M/|e|²)
                let (sr, si) = (-(&er * &mult), &ei * &mult);
                let r = &remainders[i];
                let h = if axis && c == 0 {
                    let mut t = r.clone();
                    t.scale_int(&kbin);
                    let rnn = &remainders[rem_of[&(half, half)]];
                    t.add_scaled(rnn, &-binomial(m, a), &BigInt::zero());
                    t.mul_gauss(&sr, &si)
                } else {
                    let mut t = r.mul_gauss(&sr, &si);
                    t.scale_int(&kbin);
                    t
                };
                (i, (!h.is_zero()).then_some(h))
            })
            .collect();

        let mut entries: Vec<Option<GJet>> = vec![None; ((m + 1) * (m + 2) / 2) as usize];
        for (i, h) in solved {
            let (a, b) = mons[i];
            if let Some(h) = h {
                if a != b {
                    entries[tri_index(m, b, a)] = Some(h.conj());
                }
                entries[tri_index(m, a, b)] = Some(h);
            }
        }
        if axis {
            // Coefficient of x^m in H vanishes: h_nn = −Σ_{a≠b} h_ab.
            let mut hnn = GJet::zero(s_len);
            for a in 0..=m {
                if a == half {
                    continue;
                }
                if let Some(h) = &entries[tri_index(m, a, m - a)] {
                    hnn.add_scaled(h, &-BigInt::one(), &BigInt::zero());
                }
            }
            if !hnn.is_zero() {
                entries[tri_index(m, half, half)] = Some(hnn);
            }
        }

        // Reduce by the common content.
        let mut g = den.clone();
        for e in entries.iter().flatten() {
            e.gcd_into(&mut g);
            if g.is_one() {
                break;
            }
        }
        let g = g.abs();
        let mut den = den;
        if !g.is_one() {
            den /= &g;
            for e in entries.iter_mut().flatten() {
                e.div_exact(&g);
            }
        }
        hs.push(HDegree { degree: m, den, entries });

        if !keep_h {
            // Only the last (max field degree − 1) degrees are ever read again.
            let keep = (max_field_degree - 1) as usize;
            while hs.len() > keep {
                hs.remove(0);
                first_kept += 1;
            }
        }
    }

    Ok(EngineOutput { space, constants, h: keep_h.then_some(hs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_index_is_a_bijection() {
        for m in 0..8u32 {
            let mut seen = vec![false; ((m + 1) * (m + 2) / 2) as usize];
            for a in 0..=m {
                for b in 0..=m - a {
                    let i = tri_index(m, a, b);
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn jet_space_counts() {
        let r = crate::exactalg::roster(&["a", "b", "c"]);
        assert_eq!(JetSpace::new(r.clone(), 2).len(), 10);
        assert_eq!(JetSpace::new(r, 0).len(), 1);
    }
}
