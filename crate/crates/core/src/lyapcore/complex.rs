//! Complexified form of a canonical system.

use crate::exactalg::{roster, ComplexJet, Gaussian, Monomial, Rational, Roster, SparsePoly};
use crate::sysmodel::HopfSystem;

use super::LyapunovError;

/// The roster `[u, v, z]`.
pub fn complex_roster() -> Roster {
    roster(&["u", "v", "z"])
}

/// `u̇ = iu + U`, `v̇ = −iv + V`, `ż = −λz + Z` with `u = x + iy`, `v = x − iy`.
/// Only the nonlinear parts `U`, `V`, `Z` are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSystem {
    pub lambda: Rational,
    pub parameters: Roster,
    pub jet_degree: u32,
    pub u_rhs: SparsePoly<ComplexJet>,
    pub v_rhs: SparsePoly<ComplexJet>,
    pub z_rhs: SparsePoly<ComplexJet>,
}

/// Image of a polynomial under `u ↔ v` combined with complex conjugation.
pub fn conjugate_swap(p: &SparsePoly<ComplexJet>) -> SparsePoly<ComplexJet> {
    SparsePoly::from_terms(
        p.roster().clone(),
        p.terms().iter().map(|(m, c)| (m.remap(&[1, 0, 2]), c.conj())),
    )
}

impl ComplexSystem {
    /// Checks that `V` is the conjugate-swap of `U` and that `Z` is
    /// self-conjugate.
    pub fn validate_symmetry(&self) -> Result<(), LyapunovError> {
        if conjugate_swap(&self.u_rhs) != self.v_rhs {
            return Err(LyapunovError::Integrity("v equation is not the conjugate of the u equation".into()));
        }
        if conjugate_swap(&self.z_rhs) != self.z_rhs {
            return Err(LyapunovError::Integrity("z equation is not self-conjugate".into()));
        }
        Ok(())
    }

    /// Nonlinear part of equation `i` (0 = u, 1 = v, 2 = z).
    pub fn rhs(&self, i: usize) -> &SparsePoly<ComplexJet> {
        match i {
            0 => &self.u_rhs,
            1 => &self.v_rhs,
            _ => &self.z_rhs,
        }
    }
}

/// Substitutes `x = (u+v)/2`, `y = (u−v)/(2i)`.
pub fn complexify(s: &HopfSystem) -> ComplexSystem {
    let cr = complex_roster();
    let half = Rational::frac(1, 2);
    let x = SparsePoly::from_terms(
        cr.clone(),
        [(Monomial::var(0), Gaussian::real(half.clone())), (Monomial::var(1), Gaussian::real(half.clone()))],
    );
    // (u − v)/(2i) = −(i/2)u + (i/2)v
    let y = SparsePoly::from_terms(
        cr.clone(),
        [
            (Monomial::var(0), Gaussian::new(Rational::zero(), -&half)),
            (Monomial::var(1), Gaussian::new(Rational::zero(), half)),
        ],
    );
    let z = SparsePoly::monomial(cr.clone(), Monomial::var(2), Gaussian::one());
    let images = [x, y, z];

    let convert = |p: &SparsePoly<crate::exactalg::Jet>| -> SparsePoly<ComplexJet> {
        let mut terms: Vec<(Monomial, ComplexJet)> = Vec::new();
        for (m, c) in p.terms() {
            let mut prod = SparsePoly::constant(cr.clone(), Gaussian::one());
            for (v, e) in m.factors() {
                prod = &prod * &images[v].pow(e);
            }
            let cj = ComplexJet::real(c.clone());
            terms.extend(prod.terms().iter().map(|(pm, g)| (pm.clone(), cj.scale(g))));
        }
        SparsePoly::from_terms(cr.clone(), terms)
    };
    let p = convert(s.p());
    let q = convert(s.q());
    let iq = SparsePoly::from_terms(cr.clone(), q.terms().iter().map(|(m, c)| (m.clone(), c.scale(&Gaussian::i()))));
    ComplexSystem {
        lambda: s.lambda().clone(),
        parameters: s.parameters().clone(),
        jet_degree: s.jet_degree(),
        u_rhs: &p + &iq,
        v_rhs: &p - &iq,
        z_rhs: convert(s.r()),
    }
}

/// The divisor `i(a−b) − λc` of the homological equation at `u^a v^b z^c`.
pub fn homological_eigenvalue(a: u32, b: u32, c: u32, lambda: &Rational) -> Gaussian {
    Gaussian::new(-&(lambda * &Rational::from(c as i64)), Rational::from(a as i64 - b as i64))
}
