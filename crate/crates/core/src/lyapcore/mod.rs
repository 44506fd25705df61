//! Lyapunov constants of a canonical system, as jets in its perturbation
//! parameters.
//!
//! A formal first integral `H = uv + Σ_{m≥3} H_m` is built degree by degree in
//! complex coordinates. At each degree the homological equation
//! `(i(a−b) − λc)·h_abc = −(known remainder)` is solved monomial by monomial;
//! the resonant monomials `(uv)^k` cannot be solved and their remainders are
//! the Lyapunov constants.

mod complex;
mod engine;

pub use complex::{complex_roster, complexify, conjugate_swap, homological_eigenvalue, ComplexSystem};
pub use engine::{tri_index, HDegree, JetSpace};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{ComplexJet, Jet, Monomial, Rational, SparsePoly};
use crate::sysmodel::{jet_from_json, jet_to_json, HopfSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LyapunovError {
    #[error("need at least one Lyapunov constant")]
    ZeroCount,
    #[error("integrity failure: L{k} has a nonzero imaginary part")]
    ImaginaryResidue { k: usize },
    #[error("integrity failure: residual is nonzero at u^{} v^{} z^{}", mono[0], mono[1], mono[2])]
    Residual { mono: [u32; 3] },
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("malformed Lyapunov sequence: {0}")]
    Malformed(String),
}

/// How the free coefficient of `(uv)^k` in H is fixed, which decides the
/// complement in `X·H = Σ L_k · w_k`.
///
/// * `AxisPower` (default): the coefficient of `x^(2k+2)` in H vanishes and
///   `w_k = x^(2k+2)`.
/// * `Circular`: the coefficient of `(uv)^(k+1)` vanishes and
///   `w_k = (x²+y²)^(k+1)`.
///
/// Both give the same vanishing locus and agree on the first nonzero
/// constant up to a positive factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    AxisPower,
    Circular,
}

/// Lyapunov constants `L_1 … L_N`, plus the solved coefficients of H when
/// retained.
#[derive(Clone)]
pub struct LyapunovSequence {
    pub normalization: Normalization,
    pub constants: Vec<Jet>,
    space: Arc<JetSpace>,
    h: Option<Vec<HDegree>>,
}

impl std::fmt::Debug for LyapunovSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LyapunovSequence")
            .field("normalization", &self.normalization)
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}

impl PartialEq for LyapunovSequence {
    fn eq(&self, other: &Self) -> bool {
        self.normalization == other.normalization && self.constants == other.constants
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LyapunovOptions {
    pub normalization: Normalization,
    /// Keep every degree of H for [`residual_check`]. Costs memory.
    pub keep_h: bool,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions { normalization: Normalization::AxisPower, keep_h: true }
    }
}

/// `L_1 … L_n` with default options.
pub fn lyapunov_constants(s: &HopfSystem, n: usize) -> Result<LyapunovSequence, LyapunovError> {
    lyapunov_constants_with(s, n, LyapunovOptions::default())
}

pub fn lyapunov_constants_with(
    s: &HopfSystem,
    n: usize,
    opts: LyapunovOptions,
) -> Result<LyapunovSequence, LyapunovError> {
    if n == 0 {
        return Err(LyapunovError::ZeroCount);
    }
    let cs = complexify(s);
    cs.validate_symmetry()?;
    let out = engine::run(&cs, n, opts.normalization, opts.keep_h)?;
    Ok(LyapunovSequence { normalization: opts.normalization, constants: out.constants, space: out.space, h: out.h })
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    normalization: Normalization,
    parameters: Vec<String>,
    jet_degree: u32,
    constants: Vec<ConstantFile>,
}

#[derive(Serialize, Deserialize)]
struct ConstantFile {
    k: usize,
    jet: std::collections::BTreeMap<String, String>,
}

impl LyapunovSequence {
    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    /// `L_k`, 1-based.
    pub fn get(&self, k: usize) -> Option<&Jet> {
        k.checked_sub(1).and_then(|i| self.constants.get(i))
    }

    pub fn has_h(&self) -> bool {
        self.h.is_some()
    }

    /// Coefficient of `u^a v^b z^c` in H, if retained.
    pub fn h_coefficient(&self, a: u32, b: u32, c: u32) -> Option<ComplexJet> {
        let m = a + b + c;
        let hs = self.h.as_ref()?;
        let d = hs.iter().find(|d| d.degree == m)?;
        Some(d.complex_jet(&self.space, a, b))
    }

    /// Degrees of H that were retained.
    pub fn h_degrees(&self) -> Vec<u32> {
        self.h.as_ref().map(|h| h.iter().map(|d| d.degree).collect()).unwrap_or_default()
    }

    /// Index of the first constant that is not identically zero (1-based).
    pub fn first_nonzero(&self) -> Option<usize> {
        self.constants.iter().position(|l| !l.is_zero()).map(|i| i + 1)
    }

    /// Replaces `L_k` (1-based); used to inject faults in tests.
    pub fn set_constant(&mut self, k: usize, value: Jet) {
        self.constants[k - 1] = value;
    }

    pub fn to_json(&self) -> String {
        let file = SequenceFile {
            normalization: self.normalization,
            parameters: self.space.roster.to_vec(),
            jet_degree: self.space.degree,
            constants: self
                .constants
                .iter()
                .enumerate()
                .map(|(i, l)| ConstantFile { k: i + 1, jet: jet_to_json(l) })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("sequence serializes")
    }

    /// A sequence from given constants, without H. All constants must share
    /// one roster and jet degree.
    pub fn from_constants(normalization: Normalization, constants: Vec<Jet>) -> LyapunovSequence {
        let (roster, degree) = constants
            .first()
            .map(|l| (l.roster().clone(), l.degree()))
            .unwrap_or_else(|| (crate::exactalg::roster::<&str>(&[]), 0));
        LyapunovSequence { normalization, constants, space: Arc::new(JetSpace::new(roster, degree)), h: None }
    }

    /// Reads the constants back (H is not part of the file).
    pub fn from_json(text: &str) -> Result<LyapunovSequence, LyapunovError> {
        let file: SequenceFile = serde_json::from_str(text).map_err(|e| LyapunovError::Malformed(e.to_string()))?;
        let roster = crate::exactalg::roster(&file.parameters);
        let mut constants = Vec::with_capacity(file.constants.len());
        for (i, c) in file.constants.iter().enumerate() {
            if c.k != i + 1 {
                return Err(LyapunovError::Malformed(format!("constant {} out of order", c.k)));
            }
            constants.push(
                jet_from_json(&c.jet, &roster, file.jet_degree).map_err(|e| LyapunovError::Malformed(e.to_string()))?,
            );
        }
        Ok(LyapunovSequence {
            normalization: file.normalization,
            constants,
            space: Arc::new(JetSpace::new(roster, file.jet_degree)),
            h: None,
        })
    }
}

/// Recomputes `X·∇H − Σ L_k w_k` symbolically through degree `2N+2` and
/// checks that it vanishes, reporting the first offending monomial.
pub fn residual_check(s: &HopfSystem, seq: &LyapunovSequence) -> Result<(), LyapunovError> {
    let Some(hdeg) = &seq.h else {
        return Err(LyapunovError::Integrity("sequence was computed without retaining H".into()));
    };
    let cs = complexify(s);
    let cr = complex_roster();
    let params = s.parameters().clone();
    let d = s.jet_degree();
    let cjet = |g: crate::exactalg::Gaussian| {
        ComplexJet { re: Jet::constant(params.clone(), d, g.re), im: Jet::constant(params.clone(), d, g.im) }
    };
    let top = 2 * seq.constants.len() as u32 + 2;

    // H as a polynomial in (u, v, z).
    let mut h_terms = Vec::new();
    for deg in hdeg {
        for a in 0..=deg.degree {
            for b in 0..=deg.degree - a {
                if deg.get(a, b).is_some() {
                    let c = deg.degree - a - b;
                    h_terms.push((Monomial::from_exponents(&[a, b, c]), deg.complex_jet(&seq.space, a, b)));
                }
            }
        }
    }
    let h = SparsePoly::from_terms(cr.clone(), h_terms);

    // Full vector field including the linear part.
    let lam = &s.lambda().clone();
    let lin = [
        SparsePoly::monomial(cr.clone(), Monomial::var(0), cjet(crate::exactalg::Gaussian::i())),
        SparsePoly::monomial(cr.clone(), Monomial::var(1), cjet(-crate::exactalg::Gaussian::i())),
        SparsePoly::monomial(
            cr.clone(),
            Monomial::var(2),
            cjet(crate::exactalg::Gaussian::real(-lam)),
        ),
    ];
    let from_int = |k: u32| cjet(crate::exactalg::Gaussian::real(Rational::from(k as i64)));
    let mut xh = SparsePoly::zero(cr.clone());
    for i in 0..3 {
        let field = &lin[i] + cs.rhs(i);
        let dh = h.derivative(i, from_int);
        let prod = truncated_mul(&field, &dh, top);
        xh = &xh + &prod;
    }

    // Complement Σ L_k w_k.
    let mut comp = SparsePoly::zero(cr.clone());
    for (k, l) in seq.constants.iter().enumerate() {
        let n = k as u32 + 2;
        let lj = ComplexJet::real(l.clone());
        let w = match seq.normalization {
            Normalization::AxisPower => {
                // x^(2n) = ((u+v)/2)^(2n)
                let x = SparsePoly::from_terms(
                    cr.clone(),
                    [
                        (Monomial::var(0), cjet(crate::exactalg::Gaussian::real(Rational::frac(1, 2)))),
                        (Monomial::var(1), cjet(crate::exactalg::Gaussian::real(Rational::frac(1, 2)))),
                    ],
                );
                x.pow(2 * n)
            }
            Normalization::Circular => {
                SparsePoly::monomial(cr.clone(), Monomial::from_exponents(&[n, n, 0]), cjet(crate::exactalg::Gaussian::one()))
            }
        };
        let scaled = SparsePoly::from_terms(cr.clone(), w.terms().iter().map(|(m, c)| (m.clone(), c.mul_ref(&lj))));
        comp = &comp + &scaled;
    }
    let resid = &xh - &comp;
    let mut bad: Vec<&Monomial> = resid.terms().iter().map(|(m, _)| m).filter(|m| m.degree() <= top).collect();
    // Report resonant monomials first, then lowest degree.
    bad.sort_by_key(|m| {
        let e = m.to_exponents(3);
        (m.degree(), !(e[0] == e[1] && e[2] == 0))
    });
    if let Some(m) = bad.first() {
        let e = m.to_exponents(3);
        return Err(LyapunovError::Residual { mono: [e[0], e[1], e[2]] });
    }
    Ok(())
}

use crate::exactalg::Coefficient;

fn truncated_mul(a: &SparsePoly<ComplexJet>, b: &SparsePoly<ComplexJet>, top: u32) -> SparsePoly<ComplexJet> {
    let mut terms = Vec::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma.degree() + mb.degree() <= top {
                terms.push((ma.mul(mb), ca.mul_ref(cb)));
            }
        }
    }
    SparsePoly::from_terms(a.roster().clone(), terms)
}
