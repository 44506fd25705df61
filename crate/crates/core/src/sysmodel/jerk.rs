//! Canonical form of jerk systems `x''' = f(x, x', x'')` at a Hopf point.
//!
//! A jerk field `(y, z, f)` whose linearization at the origin has
//! `f_x = β²τ`, `f_y = −β²`, `f_z = τ` has eigenvalues `±iβ` and `τ`. The change
//! `x = −X/β² + Z/τ²`, `y = Y/β + Z/τ`, `z = X + Z` followed by the time
//! rescaling `t → t/β` produces
//!
//! ```text
//! Ẋ = −Y + βF₂,   Ẏ = X − τF₂,   Ż = −λZ − τλF₂
//! ```
//!
//! with `λ = −τ/β`. The builder accepts any nonzero λ, as the canonical form
//! itself makes sense for all of them.

use super::{state_roster, HopfSystem, SystemError};
use crate::exactalg::{Matrix, Rational, SparsePoly};

#[derive(Clone, Debug, PartialEq)]
pub struct JerkSpec {
    pub beta: Rational,
    pub tau: Rational,
    pub lambda: Rational,
    /// Quadratic (or higher) part F₂ over (x, y, z).
    pub f2: SparsePoly<Rational>,
}

impl JerkSpec {
    /// F₂ = a₁x² + a₂y² + a₃z² + a₄xy + a₅xz + a₆yz.
    pub fn quadratic(beta: Rational, tau: Rational, lambda: Rational, a: [Rational; 6]) -> JerkSpec {
        let exps: [[u32; 3]; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
        let f2 = SparsePoly::from_terms(
            state_roster(),
            exps.iter().zip(a).map(|(e, c)| (crate::exactalg::Monomial::from_exponents(e), c)),
        );
        JerkSpec { beta, tau, lambda, f2 }
    }

    /// Matrix `M` of the variable change, old = M · new, columns (X, Y, Z).
    pub fn change_matrix(&self) -> Result<Matrix, SystemError> {
        let b2 = self.beta.pow(2).recip()?;
        let t2 = self.tau.pow(2).recip()?;
        let b1 = self.beta.recip()?;
        let t1 = self.tau.recip()?;
        let z = Rational::zero;
        Ok(Matrix::from_rows(vec![
            vec![-b2, z(), t2],
            vec![z(), b1, t1],
            vec![Rational::one(), z(), Rational::one()],
        ])?)
    }
}

/// Builds the canonical Hopf system of a jerk specification.
pub fn jerk_canonicalize(spec: &JerkSpec) -> Result<HopfSystem, SystemError> {
    for (name, v) in [("beta", &spec.beta), ("tau", &spec.tau), ("lambda", &spec.lambda)] {
        if v.is_zero() {
            return Err(SystemError::Domain(format!("jerk {name} must be nonzero")));
        }
    }
    if spec.f2.roster() != &state_roster() {
        return Err(SystemError::Domain("F2 must be a polynomial in x, y, z".into()));
    }
    if let Some((m, _)) = spec.f2.terms().iter().find(|(m, _)| m.degree() < 2) {
        let e = m.to_exponents(3);
        return Err(SystemError::CanonicalForm { equation: "F2", mono: [e[0], e[1], e[2]] });
    }
    let p = spec.f2.scale(&spec.beta);
    let q = spec.f2.scale(&-&spec.tau);
    let r = spec.f2.scale(&-&(&spec.tau * &spec.lambda));
    HopfSystem::from_rational(spec.lambda.clone(), [p, q, r])
}
