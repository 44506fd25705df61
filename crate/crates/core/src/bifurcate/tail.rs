//! Tail normalization: solve the pivot constants for the pivot parameters and
//! read off the leading forms of the remaining constants.

use serde::{Deserialize, Serialize};

use super::forms::{probe_points, PolyData};
use super::linear::{pivot_block, LinearRank};
use super::BifurcationError;
use crate::exactalg::univariate::UniPoly;
use crate::exactalg::{roster, Jet, Monomial, Rational, Roster, SparsePoly};
use crate::lyapcore::LyapunovSequence;

/// Lowest-order part of a constant after the pivot substitution.
#[derive(Debug, Clone, PartialEq)]
pub struct TailForm {
    /// 1-based index of the constant.
    pub k: usize,
    /// `L_k` after substitution, as a jet in the free parameters.
    pub jet: Jet,
    /// Degree of the lowest nonzero homogeneous part; `None` if the jet
    /// vanishes through the truncation degree.
    pub degree: Option<u32>,
    pub h: SparsePoly<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTail {
    pub pivot_parameters: Vec<String>,
    /// 1-based indices of the constants solved for the pivots.
    pub pivot_constants: Vec<usize>,
    pub free_parameters: Vec<String>,
    /// Pivot parameters as jets in the free parameters.
    pub solved: Vec<Jet>,
    /// Every constant not used as a pivot row, in index order.
    pub tail: Vec<TailForm>,
}

impl NormalizedTail {
    pub fn free_roster(&self) -> Roster {
        roster(&self.free_parameters)
    }

    /// The nonzero leading forms in index order.
    pub fn h_forms(&self) -> Vec<&TailForm> {
        self.tail.iter().filter(|t| t.degree.is_some()).collect()
    }

    pub fn form(&self, k: usize) -> Option<&TailForm> {
        self.tail.iter().find(|t| t.k == k)
    }
}

/// Solves `L_i = 0` (pivot rows) for the pivot parameters as jets in the free
/// parameters and substitutes into the remaining constants.
///
/// The solve is a chord iteration `x ← x − A⁻¹·L(x)` with the constant pivot
/// block `A`; each pass fixes one more degree, so `D` passes reach the
/// truncation degree.
pub fn normalize_tail(seq: &LyapunovSequence, lr: &LinearRank) -> Result<NormalizedTail, BifurcationError> {
    let first = seq.constants.first().ok_or(BifurcationError::Domain("empty sequence".into()))?;
    let d = first.degree();
    if d < 2 {
        return Err(BifurcationError::JetDegree { needed: 2, found: d });
    }
    if let Some(k) = seq.constants.iter().position(|l| !l.constant_term().is_zero()) {
        return Err(BifurcationError::NotACenter { k: k + 1 });
    }
    let full = first.roster().clone();
    let is_pivot = |p: usize| lr.pivots.contains(&p);
    let free_names: Vec<String> = (0..full.len()).filter(|&p| !is_pivot(p)).map(|p| full[p].clone()).collect();
    let free = roster(&free_names);

    let a = pivot_block(&lr.matrix.matrix(), &lr.rows, &lr.pivots);
    let a_inv = a
        .inverse()
        .map_err(|_| BifurcationError::Integrity("pivot block is singular despite full rank".into()))?;

    let mut solved: Vec<Jet> = vec![Jet::zero(free.clone(), d); lr.pivots.len()];
    let images = |solved: &[Jet]| -> Vec<Jet> {
        let mut fi = 0;
        (0..full.len())
            .map(|p| match lr.pivots.iter().position(|&q| q == p) {
                Some(j) => solved[j].clone(),
                None => {
                    fi += 1;
                    Jet::param(free.clone(), d, fi - 1)
                }
            })
            .collect()
    };
    for _ in 0..d {
        let img = images(&solved);
        let rows: Vec<Jet> = lr.rows.iter().map(|&i| seq.constants[i].clone()).collect();
        let vals = Jet::compose_all(&rows, &img)?;
        for (j, s) in solved.iter_mut().enumerate() {
            let mut corr = Jet::zero(free.clone(), d);
            for (i, v) in vals.iter().enumerate() {
                let c = &a_inv[(j, i)];
                if !c.is_zero() {
                    corr = corr.try_add(&v.scale(c))?;
                }
            }
            *s = s.try_sub(&corr)?;
        }
    }
    let img = images(&solved);
    let substituted = Jet::compose_all(&seq.constants, &img)?;
    for &i in &lr.rows {
        if !substituted[i].is_zero() {
            return Err(BifurcationError::Integrity(format!("L{} does not vanish after the pivot solve", i + 1)));
        }
    }

    let tail = (0..seq.constants.len())
        .filter(|i| !lr.rows.contains(i))
        .map(|i| {
            let jet = substituted[i].clone();
            let degree = jet.poly().min_degree();
            let h = match degree {
                Some(m) => jet.homogeneous_part(m),
                None => SparsePoly::zero(free.clone()),
            };
            if degree == Some(1) {
                return Err(BifurcationError::Integrity(format!("L{} keeps a linear part after the pivot solve", i + 1)));
            }
            Ok(TailForm { k: i + 1, jet, degree, h })
        })
        .collect::<Result<Vec<_>, BifurcationError>>()?;

    Ok(NormalizedTail {
        pivot_parameters: lr.pivot_names(),
        pivot_constants: lr.rows.iter().map(|i| i + 1).collect(),
        free_parameters: free_names,
        solved,
        tail,
    })
}

/// A point on `h = 0` where `h` is regular and `next` does not vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceWitness {
    pub point: Vec<Rational>,
    /// Index of a variable with nonzero partial derivative at the point.
    pub regular_var: usize,
    pub partial: Rational,
    pub next_value: Rational,
}

/// Searches for a rational point with `h(x) = 0`, `∇h(x) ≠ 0` and
/// `next(x) ≠ 0`. Two strategies, both exact: solving for a variable in
/// which `h` is linear, and rational roots of `h` along lines through probe
/// points.
pub fn hypersurface_witness(h: &SparsePoly<Rational>, next: &SparsePoly<Rational>) -> Option<HypersurfaceWitness> {
    let n = h.nvars();
    let grad = h.gradient();
    let accept = |x: Vec<Rational>| -> Option<HypersurfaceWitness> {
        if !h.evaluate(&x).is_zero() {
            return None;
        }
        let next_value = next.evaluate(&x);
        if next_value.is_zero() {
            return None;
        }
        let (regular_var, partial) =
            grad.iter().enumerate().map(|(i, g)| (i, g.evaluate(&x))).find(|(_, v)| !v.is_zero())?;
        Some(HypersurfaceWitness { point: x, regular_var, partial, next_value })
    };

    // h = x_i·B + C with B ≢ 0.
    for i in h.support_vars() {
        if h.degree_in(i) != 1 {
            continue;
        }
        let parts = h.coefficients_in(i);
        for base in probe_points(n) {
            let b = parts[1].evaluate(&base);
            if b.is_zero() {
                continue;
            }
            let mut x = base;
            x[i] = -(parts[0].evaluate(&x) / b);
            if let Some(w) = accept(x) {
                return Some(w);
            }
        }
    }

    // Rational roots of t ↦ h(p + t·e_j).
    let t_roster = roster(&["t"]);
    for p in probe_points(n) {
        for j in 0..n {
            let images: Vec<SparsePoly<Rational>> = (0..n)
                .map(|v| {
                    let c = SparsePoly::from_rational(t_roster.clone(), p[v].clone());
                    if v == j {
                        &c + &SparsePoly::var(t_roster.clone(), 0)
                    } else {
                        c
                    }
                })
                .collect();
            let line = h.compose(&images, t_roster.clone());
            let Some(u) = UniPoly::from_sparse(&line, 0) else { continue };
            if u.degree().unwrap_or(0) == 0 {
                continue;
            }
            for t in u.rational_roots() {
                let mut x = p.clone();
                x[j] = &x[j] + &t;
                if let Some(w) = accept(x) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Evidence that a cubic form restricted to `ℓ = 0` is `c·ℓ'²·ℓ''`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicStructure {
    /// The hyperplane `ℓ = 0` the cubic is restricted to.
    pub restricted_by: PolyData,
    /// Variable eliminated through `ℓ = 0`.
    pub eliminated: String,
    /// The cubic after the restriction.
    pub restricted: PolyData,
    /// `ℓ'` restricted, the squared factor.
    pub square: PolyData,
    /// `c·ℓ''`, the simple factor.
    pub simple: PolyData,
}

/// Image of `ℓ = 0` as a substitution eliminating its first variable.
pub(crate) fn hyperplane_substitution(l: &SparsePoly<Rational>) -> Option<(usize, Vec<SparsePoly<Rational>>)> {
    let r = l.roster().clone();
    let v = l.support_vars().into_iter().next()?;
    let cv = l.coeff(&Monomial::var(v))?.clone();
    let rest = &l.filter_terms(|m| m != &Monomial::var(v)).scale(&(-Rational::one() / cv));
    let images = (0..r.len()).map(|i| if i == v { rest.clone() } else { SparsePoly::var(r.clone(), i) }).collect();
    Some((v, images))
}

/// Checks whether `g` restricted to one factor's hyperplane is a square of the
/// other (restricted) factor times a further independent linear form.
pub fn cubic_square_structure(
    g: &SparsePoly<Rational>,
    factors: (&SparsePoly<Rational>, &SparsePoly<Rational>),
) -> Option<CubicStructure> {
    let r = g.roster().clone();
    for (l, other) in [(factors.0, factors.1), (factors.1, factors.0)] {
        let Some((v, images)) = hyperplane_substitution(l) else { continue };
        let gr = g.compose(&images, r.clone());
        let sq = other.compose(&images, r.clone());
        if gr.is_zero() || sq.is_zero() || sq.degree() != Some(1) {
            continue;
        }
        let Ok(simple) = gr.try_div_exact(&(&sq * &sq)) else { continue };
        if simple.degree() != Some(1) || super::proportionality_check(&sq, &simple).proportional {
            continue;
        }
        return Some(CubicStructure {
            restricted_by: PolyData::from_poly(l),
            eliminated: r[v].clone(),
            restricted: PolyData::from_poly(&gr),
            square: PolyData::from_poly(&sq),
            simple: PolyData::from_poly(&simple),
        });
    }
    None
}
