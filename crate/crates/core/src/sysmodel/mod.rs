//! Systems with a Hopf singular point in canonical form
//!
//! ```text
//! ẋ = −y + P(x,y,z),   ẏ = x + Q(x,y,z),   ż = −λz + R(x,y,z)
//! ```
//!
//! where P, Q, R have no constant or linear terms. Only the nonlinear parts are
//! stored; the linear part is implicit. Coefficients are [`Jet`]s in the
//! perturbation parameters, so an unperturbed system is simply one with an empty
//! parameter roster and jet degree 0.

mod catalog;
mod constraints;
mod format;
mod jerk;
mod perturb;

pub use catalog::{catalog, catalog_entry, catalog_instantiate, CatalogEntry, CenterCondition, ParamSpec};
pub use constraints::{complete_assignment, Assignment};
pub use format::{jet_from_json, jet_to_json, parse_system, serialize_system};
pub use jerk::{jerk_canonicalize, JerkSpec};
pub use perturb::{apply_quadratic_perturbation, apply_quadratic_perturbation_pinned, perturbation_names, QUADRATIC_MONOMIALS};

use std::sync::OnceLock;

use thiserror::Error;

use crate::exactalg::{roster, AlgebraError, Jet, Monomial, Rational, Roster, SparsePoly};

/// Equation labels used in files and error messages.
pub const EQUATIONS: [&str; 3] = ["dx", "dy", "dz"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("canonical-form violation in {equation}: term x^{} y^{} z^{} has degree below 2 (the linear part is implicit)", mono[0], mono[1], mono[2])]
    CanonicalForm { equation: &'static str, mono: [u32; 3] },
    #[error("malformed rational `{value}` in {context}")]
    MalformedRational { context: String, value: String },
    #[error("malformed system file: {0}")]
    Malformed(String),
    #[error("unknown perturbation parameter `{0}`")]
    UnknownParameter(String),
    #[error("jet degree mismatch: expected {expected}, found {found}")]
    JetDegree { expected: u32, found: u32 },
    #[error("system is already perturbed")]
    AlreadyPerturbed,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("catalog entry `{entry}` has no center condition `{label}`")]
    UnknownCondition { entry: String, label: String },
    #[error("parameter `{name}` of `{entry}` has no value and no default")]
    MissingParameter { entry: String, name: String },
    #[error("catalog entry `{entry}` has no parameter `{name}`")]
    UnexpectedParameter { entry: String, name: String },
    #[error("inadmissible parameters for `{entry}`: violates `{predicate}`")]
    Inadmissible { entry: String, predicate: String },
    #[error("condition `{label}` violated: `{constraint}` evaluates to {value}")]
    ConditionViolated { label: String, constraint: String, value: Rational },
    #[error("cannot complete the parameters of condition `{label}`: {reason}")]
    Underdetermined { label: String, reason: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The roster `[x, y, z]` shared by every state-space polynomial.
pub fn state_roster() -> Roster {
    static R: OnceLock<Roster> = OnceLock::new();
    R.get_or_init(|| roster(&["x", "y", "z"])).clone()
}

/// A system in canonical Hopf form with jet coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct HopfSystem {
    lambda: Rational,
    parameters: Roster,
    jet_degree: u32,
    rhs: [SparsePoly<Jet>; 3],
}

impl HopfSystem {
    /// Builds and validates a system. `rhs` holds the nonlinear parts of
    /// ẋ, ẏ, ż over [`state_roster`].
    pub fn new(
        lambda: Rational,
        parameters: Roster,
        jet_degree: u32,
        rhs: [SparsePoly<Jet>; 3],
    ) -> Result<Self, SystemError> {
        let s = HopfSystem { lambda, parameters, jet_degree, rhs };
        s.validate()?;
        Ok(s)
    }

    /// An unperturbed system from rational nonlinear parts.
    pub fn from_rational(lambda: Rational, rhs: [SparsePoly<Rational>; 3]) -> Result<Self, SystemError> {
        let params = roster::<&str>(&[]);
        let lift = |p: SparsePoly<Rational>| p.map_coeffs(|c| Jet::constant(params.clone(), 0, c.clone()));
        let [p, q, r] = rhs;
        Self::new(lambda, params.clone(), 0, [lift(p), lift(q), lift(r)])
    }

    /// Convenience constructor from `(exponents, coefficient)` lists.
    pub fn from_terms(lambda: Rational, terms: [&[([u32; 3], Rational)]; 3]) -> Result<Self, SystemError> {
        let polys = terms.map(|ts| {
            SparsePoly::from_terms(state_roster(), ts.iter().map(|(e, c)| (Monomial::from_exponents(e), c.clone())))
        });
        Self::from_rational(lambda, polys)
    }

    /// Checks every invariant of the canonical form.
    pub fn validate(&self) -> Result<(), SystemError> {
        if self.lambda.is_zero() {
            return Err(SystemError::ZeroLambda);
        }
        for (eq, poly) in EQUATIONS.iter().zip(&self.rhs) {
            if poly.roster() != &state_roster() {
                return Err(AlgebraError::RosterMismatch {
                    left: poly.roster().join(","),
                    right: "x,y,z".into(),
                }
                .into());
            }
            for (m, c) in poly.terms() {
                if m.degree() < 2 {
                    let e = m.to_exponents(3);
                    return Err(SystemError::CanonicalForm { equation: eq, mono: [e[0], e[1], e[2]] });
                }
                if c.degree() != self.jet_degree {
                    return Err(SystemError::JetDegree { expected: self.jet_degree, found: c.degree() });
                }
                if c.roster() != &self.parameters {
                    return Err(AlgebraError::RosterMismatch {
                        left: c.roster().join(","),
                        right: self.parameters.join(","),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn parameters(&self) -> &Roster {
        &self.parameters
    }

    pub fn jet_degree(&self) -> u32 {
        self.jet_degree
    }

    /// Nonlinear part of equation `i` (0 = ẋ, 1 = ẏ, 2 = ż).
    pub fn rhs(&self, i: usize) -> &SparsePoly<Jet> {
        &self.rhs[i]
    }

    pub fn p(&self) -> &SparsePoly<Jet> {
        &self.rhs[0]
    }

    pub fn q(&self) -> &SparsePoly<Jet> {
        &self.rhs[1]
    }

    pub fn r(&self) -> &SparsePoly<Jet> {
        &self.rhs[2]
    }

    pub fn is_unperturbed(&self) -> bool {
        self.parameters.is_empty() && self.jet_degree == 0
    }

    /// Highest total degree in (x, y, z) over all equations.
    pub fn state_degree(&self) -> u32 {
        self.rhs.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Nonlinear terms of equation `i` with the jet constant terms, i.e. the
    /// system at parameter value zero.
    pub fn rational_terms(&self, i: usize) -> Vec<([u32; 3], Rational)> {
        self.rhs[i]
            .terms()
            .iter()
            .filter_map(|(m, c)| {
                let v = c.constant_term();
                let e = m.to_exponents(3);
                (!v.is_zero()).then(|| ([e[0], e[1], e[2]], v))
            })
            .collect()
    }

    /// Rational polynomial of equation `i` at parameter value zero.
    pub fn rational_rhs(&self, i: usize) -> SparsePoly<Rational> {
        self.rhs[i].map_coeffs(|c| c.constant_term())
    }

    /// Substitutes values for some parameters and drops them from the roster.
    pub fn substitute_parameters(&self, values: &[(String, Rational)]) -> Result<HopfSystem, SystemError> {
        let mut fixed: Vec<Option<Rational>> = vec![None; self.parameters.len()];
        for (name, v) in values {
            let i = self
                .parameters
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| SystemError::UnknownParameter(name.clone()))?;
            fixed[i] = Some(v.clone());
        }
        let live: Vec<String> =
            self.parameters.iter().zip(&fixed).filter(|(_, f)| f.is_none()).map(|(p, _)| p.clone()).collect();
        let new_roster = roster(&live);
        let mut k = 0;
        let images: Vec<Jet> = fixed
            .iter()
            .map(|f| match f {
                Some(v) => Jet::constant(new_roster.clone(), self.jet_degree, v.clone()),
                None => {
                    k += 1;
                    Jet::param(new_roster.clone(), self.jet_degree, k - 1)
                }
            })
            .collect();
        let mut out = Vec::with_capacity(3);
        for poly in &self.rhs {
            let terms = poly
                .terms()
                .iter()
                .map(|(m, c)| Ok((m.clone(), c.compose(&images)?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            out.push(SparsePoly::from_terms(state_roster(), terms));
        }
        let [p, q, r]: [SparsePoly<Jet>; 3] = out.try_into().expect("three equations");
        if live.is_empty() {
            let deg0 = |p: SparsePoly<Jet>| p.map_coeffs(|c| Jet::constant(new_roster.clone(), 0, c.constant_term()));
            return HopfSystem::new(self.lambda.clone(), new_roster.clone(), 0, [deg0(p), deg0(q), deg0(r)]);
        }
        HopfSystem::new(self.lambda.clone(), new_roster, self.jet_degree, [p, q, r])
    }

    /// The unperturbed system at a full parameter point (roster order).
    pub fn at_parameters(&self, point: &[Rational]) -> Result<HopfSystem, SystemError> {
        if point.len() != self.parameters.len() {
            return Err(SystemError::Domain(format!(
                "expected {} parameter values, got {}",
                self.parameters.len(),
                point.len()
            )));
        }
        let rhs = self.rhs.clone().map(|p| p.map_coeffs(|c| c.evaluate(point)));
        HopfSystem::from_rational(self.lambda.clone(), rhs)
    }

    /// Same system with every jet truncated to degree `d ≤ jet_degree`.
    pub fn truncate_jets(&self, d: u32) -> Result<HopfSystem, SystemError> {
        let mut rhs = Vec::with_capacity(3);
        for p in &self.rhs {
            let terms = p
                .terms()
                .iter()
                .map(|(m, c)| Ok((m.clone(), c.truncate(d)?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            rhs.push(SparsePoly::from_terms(state_roster(), terms));
        }
        let rhs: [SparsePoly<Jet>; 3] = rhs.try_into().expect("three equations");
        HopfSystem::new(self.lambda.clone(), self.parameters.clone(), d, rhs)
    }

    /// Multiplies every coefficient of state degree `k` by `s^(k-1)`, which is
    /// the effect of the scaling (x,y,z) → (x,y,z)/s on the nonlinear part.
    pub fn scale_nonlinearity(&self, s: &Rational) -> HopfSystem {
        let rhs = self.rhs.clone().map(|p| {
            SparsePoly::from_terms(
                state_roster(),
                p.terms().iter().map(|(m, c)| (m.clone(), c.scale(&s.pow(m.degree() - 1)))),
            )
        });
        HopfSystem { rhs, ..self.clone() }
    }

    /// Applies the planar rotation (x, y) → (c·x − s·y, s·x + c·y), which
    /// commutes with the canonical linear part. Requires c² + s² = 1.
    pub fn rotate_xy(&self, c: &Rational, s: &Rational) -> Result<HopfSystem, SystemError> {
        if &(c * c) + &(s * s) != Rational::one() {
            return Err(SystemError::Domain("rotation needs c² + s² = 1".into()));
        }
        // New coordinates X = Rx; old coordinates x = RᵀX.
        let sr = state_roster();
        let var = |i| SparsePoly::<Rational>::var(sr.clone(), i);
        let (xv, yv, zv) = (var(0), var(1), var(2));
        let old = [&xv.scale(c) + &yv.scale(s), &yv.scale(c) - &xv.scale(s), zv];
        let sub: Vec<SparsePoly<Jet>> = self.rhs.iter().map(|p| substitute_state(p, &old)).collect();
        let p = &scale_jet_poly(&sub[0], c) - &scale_jet_poly(&sub[1], s);
        let q = &scale_jet_poly(&sub[0], s) + &scale_jet_poly(&sub[1], c);
        HopfSystem::new(self.lambda.clone(), self.parameters.clone(), self.jet_degree, [p, q, sub[2].clone()])
    }
}

fn scale_jet_poly(p: &SparsePoly<Jet>, s: &Rational) -> SparsePoly<Jet> {
    SparsePoly::from_terms(state_roster(), p.terms().iter().map(|(m, c)| (m.clone(), c.scale(s))))
}

/// Substitutes rational polynomials in (x, y, z) for the state variables of a
/// jet-coefficient polynomial.
pub fn substitute_state(p: &SparsePoly<Jet>, images: &[SparsePoly<Rational>; 3]) -> SparsePoly<Jet> {
    let mut acc: Vec<(Monomial, Jet)> = Vec::new();
    for (m, c) in p.terms() {
        let mut prod = SparsePoly::from_rational(state_roster(), Rational::one());
        for (v, e) in m.factors() {
            prod = &prod * &images[v].pow(e);
        }
        for (pm, pc) in prod.terms() {
            acc.push((pm.clone(), c.scale(pc)));
        }
    }
    SparsePoly::from_terms(state_roster(), acc)
}
