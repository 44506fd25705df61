//! Catalog of named systems, their canonicalizing transforms and their
//! center conditions.
//!
//! Builders take the raw parameters of each family and return the canonical
//! form. Systems that are naturally written as `ẋ = y, ẏ = −x + …` (Moon-Rand,
//! Giné-Valls) are brought to canonical form by the reflection `y → −y`.

use std::sync::OnceLock;

use super::constraints::{complete_assignment, Assignment};
use super::jerk::{jerk_canonicalize, JerkSpec};
use super::{state_roster, HopfSystem, SystemError};
use crate::exactalg::{parse_poly, roster, Rational, Roster, SparsePoly};

/// A free parameter of a catalog family.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Option<&'static str>,
}

/// A named set of polynomial constraints on the free parameters under which
/// the origin is a center, with a representative sample.
#[derive(Debug, Clone)]
pub struct CenterCondition {
    pub label: &'static str,
    pub constraints: &'static [&'static str],
    /// Sample values; the rest follow from the constraints or default to 0.
    pub sample: &'static [(&'static str, &'static str)],
    /// Further admissible samples used by property tests when random values
    /// rarely satisfy the admissibility predicates.
    pub extra_samples: &'static [&'static [(&'static str, &'static str)]],
}

type Builder = fn(&Assignment) -> Result<HopfSystem, SystemError>;

pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub parameters: Vec<ParamSpec>,
    /// Human-readable admissibility predicates, checked by the builder.
    pub admissibility: &'static [&'static str],
    pub conditions: Vec<CenterCondition>,
    build: Builder,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).finish_non_exhaustive()
    }
}

impl CatalogEntry {
    pub fn parameter_roster(&self) -> Roster {
        roster(&self.parameters.iter().map(|p| p.name).collect::<Vec<_>>())
    }

    pub fn condition(&self, label: &str) -> Result<&CenterCondition, SystemError> {
        self.conditions.iter().find(|c| c.label == label).ok_or_else(|| SystemError::UnknownCondition {
            entry: self.name.to_string(),
            label: label.to_string(),
        })
    }

    /// Fills in defaults and checks that every value names a parameter.
    pub fn resolve(&self, values: &Assignment) -> Result<Assignment, SystemError> {
        for k in values.keys() {
            if !self.parameters.iter().any(|p| p.name == k) {
                return Err(SystemError::UnexpectedParameter { entry: self.name.into(), name: k.clone() });
            }
        }
        let mut out = Assignment::new();
        for p in &self.parameters {
            let v = match (values.get(p.name), p.default) {
                (Some(v), _) => v.clone(),
                (None, Some(d)) => d.parse().expect("catalog default"),
                (None, None) => {
                    return Err(SystemError::MissingParameter { entry: self.name.into(), name: p.name.into() })
                }
            };
            out.insert(p.name.to_string(), v);
        }
        Ok(out)
    }

    /// Builds the canonical system at the given parameter values.
    pub fn instantiate(&self, values: &Assignment) -> Result<HopfSystem, SystemError> {
        let full = self.resolve(values)?;
        (self.build)(&full)
    }

    /// Parsed constraints of a condition over [`CatalogEntry::parameter_roster`].
    pub fn constraints(&self, cond: &CenterCondition) -> Vec<SparsePoly<Rational>> {
        let r = self.parameter_roster();
        cond.constraints.iter().map(|c| parse_poly(c, &r).expect("catalog constraint parses")).collect()
    }

    /// Completes `known` (plus defaults) so that the condition holds.
    pub fn complete_condition(&self, cond: &CenterCondition, known: &Assignment) -> Result<Assignment, SystemError> {
        let mut base = Assignment::new();
        for p in &self.parameters {
            if let Some(d) = p.default {
                base.insert(p.name.to_string(), d.parse().expect("catalog default"));
            }
        }
        // Defaults only fill parameters the constraints do not mention, so a
        // default can never contradict a condition.
        let cs = self.constraints(cond);
        let r = self.parameter_roster();
        base.retain(|name, _| {
            let i = r.iter().position(|n| n == name).expect("known parameter");
            !cs.iter().any(|c| c.degree_in(i) > 0)
        });
        base.extend(known.iter().map(|(k, v)| (k.clone(), v.clone())));
        complete_assignment(cond.label, &cs, &base)
    }

    /// The parameter assignment of the condition's sample, completed.
    pub fn sample_assignment(&self, label: &str) -> Result<Assignment, SystemError> {
        let cond = self.condition(label)?;
        self.complete_condition(cond, &to_assignment(cond.sample))
    }

    /// Instantiates the sample of a condition, with optional overrides.
    pub fn instantiate_condition(
        &self,
        label: &str,
        overrides: &Assignment,
    ) -> Result<(Assignment, HopfSystem), SystemError> {
        let cond = self.condition(label)?;
        let mut known = to_assignment(cond.sample);
        known.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        let full = self.complete_condition(cond, &known)?;
        let s = self.instantiate(&full)?;
        Ok((full, s))
    }

    /// A random admissible point of the condition: the sample's parameters get
    /// fresh values from `draw`, the rest are completed. Returns `None` if the
    /// draw is inconsistent or inadmissible.
    pub fn random_condition_point(
        &self,
        cond: &CenterCondition,
        draw: &mut dyn FnMut() -> Rational,
    ) -> Option<(Assignment, HopfSystem)> {
        let known: Assignment = cond.sample.iter().map(|(k, _)| (k.to_string(), draw())).collect();
        let full = self.complete_condition(cond, &known).ok()?;
        let s = self.instantiate(&full).ok()?;
        Some((full, s))
    }
}

fn to_assignment(pairs: &[(&str, &str)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), v.parse().expect("catalog sample"))).collect()
}

fn val<'a>(a: &'a Assignment, name: &str) -> &'a Rational {
    &a[name]
}

fn r(n: i64) -> Rational {
    Rational::from(n)
}

/// Polynomial in x, y, z from `(exponents, coefficient)` pairs.
fn poly(terms: &[([u32; 3], Rational)]) -> SparsePoly<Rational> {
    SparsePoly::from_terms(
        state_roster(),
        terms.iter().map(|(e, c)| (crate::exactalg::Monomial::from_exponents(e), c.clone())),
    )
}

fn inadmissible(entry: &str, predicate: &str) -> SystemError {
    SystemError::Inadmissible { entry: entry.into(), predicate: predicate.into() }
}

const XX: [u32; 3] = [2, 0, 0];
const XY: [u32; 3] = [1, 1, 0];
const XZ: [u32; 3] = [1, 0, 1];
const YY: [u32; 3] = [0, 2, 0];
const YZ: [u32; 3] = [0, 1, 1];
const ZZ: [u32; 3] = [0, 0, 2];

fn build_rossler(a: &Assignment) -> Result<HopfSystem, SystemError> {
    let c = val(a, "c");
    if c.is_zero() {
        return Err(inadmissible("rossler", "c != 0"));
    }
    let k = &(c * c) + &r(1);
    let k2 = &k * &k;
    let p = poly(&[(XZ, -(c / &k)), (ZZ, -(&(c * c) / &k2))]);
    let q = poly(&[(XZ, k.recip()?), (ZZ, c / &k2)]);
    let rr = poly(&[(XZ, r(1)), (ZZ, c / &k)]);
    HopfSystem::from_rational(c.clone(), [p, q, rr])
}

fn build_lorenz(v: &Assignment) -> Result<HopfSystem, SystemError> {
    let (a, b, d) = (val(v, "a"), val(v, "b"), val(v, "d"));
    if a.is_zero() {
        return Err(inadmissible("lorenz", "a != 0"));
    }
    if d.is_zero() {
        return Err(inadmissible("lorenz", "d != 0"));
    }
    if b.is_zero() {
        return Err(inadmissible("lorenz", "b != 0"));
    }
    let s2 = -&(a * &(a + b));
    if !s2.is_positive() {
        return Err(inadmissible("lorenz", "a*(a+b) < 0"));
    }
    let sigma = s2.sqrt_exact().ok_or_else(|| inadmissible("lorenz", "-a*(a+b) is the square of a rational"))?;
    let bs = b * &sigma;
    let p = poly(&[(XZ, -(a / &bs)), (YZ, &(a * a) / &(&bs * &sigma))]);
    let q = poly(&[(XZ, -&b.recip()?), (YZ, a / &bs)]);
    let rr = poly(&[(XY, b.recip()?), (YY, -(a / &bs))]);
    HopfSystem::from_rational(-(d / &sigma), [p, q, rr])
}

fn build_moonrand(v: &Assignment) -> Result<HopfSystem, SystemError> {
    let mu = val(v, "mu");
    if mu.is_zero() {
        return Err(inadmissible("moonrand", "mu != 0"));
    }
    let (a, b, c) = (val(v, "a"), val(v, "b"), val(v, "c"));
    let q = poly(&[(XZ, r(1))]);
    let rr = poly(&[(XX, c.clone()), (XY, -b), (YY, a.clone())]);
    HopfSystem::from_rational(mu.clone(), [SparsePoly::zero(state_roster()), q, rr])
}

fn build_jerk(v: &Assignment) -> Result<HopfSystem, SystemError> {
    let coeffs = ["a1", "a2", "a3", "a4", "a5", "a6"].map(|n| val(v, n).clone());
    let spec = JerkSpec::quadratic(val(v, "beta").clone(), val(v, "tau").clone(), val(v, "lambda").clone(), coeffs);
    jerk_canonicalize(&spec).map_err(|e| match e {
        SystemError::Domain(m) => inadmissible("jerk", &m),
        other => other,
    })
}

fn build_ginevalls(v: &Assignment) -> Result<HopfSystem, SystemError> {
    let g = |n: &str| val(v, n).clone();
    // ẏ = −x + F(x,y,z) and ż = −z + G(x,y); after y → −y the ẏ equation
    // carries −F(x,−y,z) and ż carries G(x,−y).
    let q = poly(&[
        (XX, -g("a1")),
        (XY, g("a2")),
        (XZ, -g("a3")),
        (YY, -g("a4")),
        (YZ, g("a5")),
        (ZZ, -g("a6")),
    ]);
    let rr = poly(&[(XX, g("c1")), (XY, -g("c2")), (YY, g("c3"))]);
    HopfSystem::from_rational(r(1), [SparsePoly::zero(state_roster()), q, rr])
}

fn build_emrs(v: &Assignment) -> Result<HopfSystem, SystemError> {
    let g = |n: &str| val(v, n).clone();
    let p = poly(&[(XX, g("a")), (YY, g("a")), (XZ, g("c")), (YZ, g("d"))]);
    let q = poly(&[(XX, g("b")), (YY, g("b")), (XZ, g("e")), (YZ, g("f"))]);
    let rr = poly(&[(XX, g("S")), (YY, g("S")), (XZ, g("T")), (YZ, g("U"))]);
    HopfSystem::from_rational(r(1), [p, q, rr])
}

fn params(names: &[&'static str], default: Option<&'static str>) -> Vec<ParamSpec> {
    names.iter().map(|&name| ParamSpec { name, default }).collect()
}

type CondRow = (&'static str, &'static [&'static str], &'static [(&'static str, &'static str)]);

fn conditions(rows: &[CondRow]) -> Vec<CenterCondition> {
    rows.iter()
        .map(|&(label, constraints, sample)| CenterCondition { label, constraints, sample, extra_samples: &[] })
        .collect()
}

const JERK_CONDITIONS: &[CondRow] = &[
    ("a", &["a1", "a2", "a4"], &[("a3", "1"), ("a5", "2"), ("a6", "3")]),
    ("b", &["a1 - a2", "a3", "a5", "a6"], &[("a2", "2"), ("a4", "4")]),
    ("c", &["a1 + a2", "a3", "a5", "a6"], &[("a2", "2"), ("a4", "4")]),
    ("d", &["a1 + a2", "2*a2 - a3 + a6", "a3 - a4 - 2*a5", "2*a4 + 3*a5 + a6"], &[("a4", "1"), ("a5", "-1/2")]),
    ("e", &["2*a1 - a6", "2*a2 + a5", "2*a3 - a5 + a6", "a4 + a5 + a6"], &[("a2", "5"), ("a3", "-1/2")]),
    ("f", &["a1 - a2", "2*a2 + a6", "a4", "a5 + a6"], &[("a2", "3/5"), ("a3", "1")]),
    ("g", &["2*a1 + a2", "2*a2 + a6", "4*a3 + 5*a6", "a4", "2*a5 - a6"], &[("a1", "2")]),
];

/// Giné-Valls conditions, labelled `<pair>-<item>` where `<pair>` names the two
/// coefficients that vanish in the case (e.g. `a3a4-c`). Samples marked in the
/// decisions ledger replace values that are missing or inconsistent.
const GV_CONDITIONS: &[CondRow] = &[
    ("a1a2-a", &["a1", "a2", "c1", "c2", "c3"], &[("a5", "3/4"), ("a3", "1"), ("a4", "3"), ("a6", "1/2")]),
    ("a1a2-b", &["a1", "a2", "a5", "2*c1 - c2", "c3"], &[("c1", "0"), ("a3", "4"), ("a4", "1/2"), ("a6", "-5/3")]),
    ("a1a2-c", &["a1", "a2", "a3", "a5", "a6"], &[("c1", "-1"), ("c2", "2/3"), ("c3", "5"), ("a4", "-2/3")]),
    ("a1a3-a", &["a1", "a3", "a4", "c1", "c2", "c3"], &[("a2", "3"), ("a5", "2/3"), ("a6", "-6")]),
    ("a1a3-b", &["a1", "a3", "a2", "c1", "c2", "c3"], &[("a4", "5"), ("a5", "2"), ("a6", "1")]),
    (
        "a1a3-c",
        &[
            "a1",
            "a3",
            "2*a2*a4 + a5*c2",
            "a4*a5^2 - a2^2*a6",
            "2*a4^2*a5 + a2*a6*c2",
            "4*a4^3 - a6*c2^2",
            "2*a2^3*a6 + a5^3*c2",
            "2*c1 - c2",
            "c3",
        ],
        &[("a2", "-1"), ("a4", "5/8"), ("c1", "1/2")],
    ),
    ("a1a3-d", &["a1", "a3", "a2", "a5", "2*c1 - c2", "c3"], &[("a4", "1"), ("a6", "-1"), ("c1", "2/3")]),
    ("a1a3-e", &["a1", "a3", "a4", "a5", "a6"], &[("a2", "1/2"), ("c1", "2/3"), ("c2", "-1/2"), ("c3", "1/4")]),
    ("a1a3-f", &["a1", "a3", "a2", "a5", "a6"], &[("a4", "-2"), ("c1", "2/3"), ("c2", "-1/2"), ("c3", "1/4")]),
    ("a1a4-a", &["a1", "a4", "c1", "c2", "c3"], &[("a2", "1"), ("a3", "2"), ("a5", "-1/2"), ("a6", "5/3")]),
    ("a1a4-b", &["a1", "a4", "a5", "a6", "2*c1 - c2", "c3"], &[("c1", "1/2"), ("a2", "-2"), ("a3", "7/8")]),
    ("a1a4-c", &["a1", "a4", "a2", "a5", "2*c1 - c2", "c3"], &[("a3", "7/8"), ("a6", "2/8"), ("c1", "2/3")]),
    ("a1a4-d", &["a1", "a4", "a3", "a5", "a6"], &[("a2", "1/2"), ("c1", "-2"), ("c2", "7/8"), ("c3", "2/8")]),
    ("a1a5-a", &["a1", "a5", "a4", "c1", "c2", "c3"], &[("a2", "1/2"), ("a3", "-2"), ("a6", "7/8")]),
    ("a1a5-b", &["a1", "a5", "a4", "a6", "2*c1 - c2", "c3"], &[("a3", "2"), ("a2", "3"), ("c1", "-2/3")]),
    ("a1a5-c", &["a1", "a5", "a2", "2*c1 - c2", "c3"], &[("a3", "-2"), ("a4", "-2"), ("a6", "7/8"), ("c1", "2/3")]),
    ("a1a5-d", &["a1", "a5", "a3", "a4", "a6"], &[("a2", "1/2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")]),
    ("a1a5-e", &["a1", "a5", "a2", "a3", "a6"], &[("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")]),
    ("a1a6-a", &["a1", "a6", "a4", "c1", "c2", "c3"], &[("a2", "1/2"), ("a3", "-2"), ("a5", "7/8")]),
    ("a1a6-b", &["a1", "a6", "a2", "c1", "c2", "c3"], &[("a3", "-2"), ("a4", "-2"), ("a5", "7/8")]),
    ("a1a6-c", &["a1", "a6", "a4", "a5", "2*c1 - c2", "c3"], &[("a2", "1/2"), ("a3", "-2"), ("c1", "2/3")]),
    ("a1a6-d", &["a1", "a6", "a2", "a5", "2*c1 - c2", "c3"], &[("a3", "-2"), ("a4", "-2"), ("c1", "2/3")]),
    ("a1a6-e", &["a1", "a6", "a3", "a4", "a5"], &[("a2", "1/2"), ("c1", "2/3"), ("c2", "-1/2"), ("c3", "1/4")]),
    ("a1a6-f", &["a1", "a6", "a2", "a3", "a5"], &[("a4", "-2"), ("c1", "2/3"), ("c2", "-1/2"), ("c3", "1/4")]),
    (
        "a2a3-a",
        &["a2", "a3", "a5", "a6"],
        &[("a1", "1/2"), ("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")],
    ),
    ("a2a3-b", &["a2", "a3", "a5", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a4", "-2"), ("a6", "1"), ("c1", "2/3")]),
    ("a2a3-c", &["a2", "a3", "c1", "c2", "c3"], &[("a1", "1/2"), ("a4", "-2"), ("a5", "7/8"), ("a6", "1")]),
    ("a2a4-a", &["a2", "a4", "a5", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a6", "1"), ("c1", "2/3")]),
    ("a2a4-b", &["a2", "a4", "c1", "c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a5", "7/8"), ("a6", "1")]),
    ("a2a4-c", &["a2", "a4", "a3", "a5", "a6"], &[("a1", "1/2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")]),
    (
        "a2a5-a",
        &["a2", "a5", "a3", "a6"],
        &[("a1", "1/2"), ("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")],
    ),
    ("a2a5-b", &["a2", "a5", "a1", "a3", "a4", "c1", "c2", "c3"], &[("a6", "1")]),
    (
        "a2a5-c",
        &["a2", "a5", "2*c1 - c2", "c3"],
        &[("a1", "1/2"), ("a3", "-2"), ("a4", "-2"), ("a6", "1"), ("c1", "2/3")],
    ),
    ("a2a6-a", &["a2", "a6", "c1", "c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a4", "-2"), ("a5", "7/8")]),
    ("a2a6-b", &["a2", "a6", "a5", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a4", "-2"), ("c1", "2/3")]),
    (
        "a2a6-c",
        &["a2", "a6", "a3", "a5"],
        &[("a1", "1/2"), ("a4", "-2"), ("c1", "2/3"), ("c2", "-1/2"), ("c3", "1/4")],
    ),
    ("a3a4-a", &["a3", "a4", "a2", "c1", "c2", "c3"], &[("a1", "1/2"), ("a5", "7/8"), ("a6", "1")]),
    ("a3a4-b", &["a3", "a4", "a1", "c1", "c2", "c3"], &[("a2", "-2"), ("a5", "7/8"), ("a6", "1")]),
    (
        "a3a4-c",
        &["a3", "a4", "a6", "2*a1*a2 + a5*c2", "2*c1 - c2", "c3"],
        &[("a2", "-2"), ("a5", "7/8"), ("c1", "2/3")],
    ),
    ("a3a4-d", &["a3", "a4", "a2", "a5", "a6"], &[("a1", "1/2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")]),
    ("a3a4-e", &["a3", "a4", "a1", "a5", "a6"], &[("a2", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")]),
    ("a3a4-f", &["a3", "a4", "a2", "a5", "c3", "2*c1 - c2"], &[("a1", "1/2"), ("c1", "2/3")]),
    (
        "a3a5-a",
        &["a3", "a5", "a2", "a6"],
        &[("a1", "1/2"), ("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")],
    ),
    ("a3a5-b", &["a3", "a5", "a2", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a4", "-2"), ("a6", "1"), ("c1", "2/3")]),
    (
        "a3a5-c",
        &["a3", "a5", "a1 + a4", "a6"],
        &[("a2", "-2"), ("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")],
    ),
    ("a3a5-d", &["a3", "a5", "a1 + a4", "c1", "c2", "c3"], &[("a2", "-2"), ("a4", "-2")]),
    (
        "a3a6-a",
        &["a3", "a6", "a2", "a5"],
        &[("a1", "1/2"), ("a4", "-2"), ("c3", "2/8"), ("c1", "2/3"), ("c2", "-1/2")],
    ),
    (
        "a3a6-b",
        &["a3", "a6", "a5", "a1 + a4"],
        &[("a2", "-2"), ("a4", "-2"), ("c3", "-2/8"), ("c1", "4/3"), ("c2", "-1/2")],
    ),
    ("a3a6-c", &["a3", "a6", "a2", "c1", "c2", "c3"], &[("a1", "1/2"), ("a4", "-2"), ("a5", "7/8")]),
    ("a3a6-d", &["a3", "a6", "a1 + a4", "c1", "c2", "c3"], &[("a2", "-2"), ("a4", "-2"), ("a5", "7/8")]),
    (
        "a3a6-e",
        &["a3", "a6", "2*a1*a2 + a5*c2", "a4", "2*c1 - c2", "c3"],
        &[("a2", "-1"), ("a5", "-8/9"), ("c2", "-1/2")],
    ),
    ("a4a5-a", &["a4", "a5", "a1", "c1", "c2", "c3"], &[("a2", "-1"), ("a3", "-2"), ("a6", "1")]),
    ("a4a5-b", &["a4", "a5", "a1", "a6", "2*c1 - c2", "c3"], &[("a2", "-1"), ("a3", "-2"), ("c1", "4/3")]),
    ("a4a5-c", &["a4", "a5", "a2", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a6", "1"), ("c1", "4/3")]),
    ("a4a5-d", &["a4", "a5", "a2", "a3", "a6"], &[("a1", "1/2"), ("c3", "-2/8"), ("c1", "4/3"), ("c2", "-1/2")]),
    ("a4a5-e", &["a4", "a5", "a1", "a3", "a6"], &[("a2", "-1"), ("c3", "-2/8"), ("c1", "4/3"), ("c2", "-1/2")]),
    ("a4a6-a", &["a4", "a6", "a2", "c1", "c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("a5", "-8/9")]),
    ("a4a6-b", &["a4", "a6", "a1", "c1", "c2", "c3"], &[("a2", "-1"), ("a3", "-2"), ("a5", "-8/9")]),
    ("a4a6-c", &["a4", "a6", "a2", "a5", "2*c1 - c2", "c3"], &[("a1", "1/2"), ("a3", "-2"), ("c1", "2/3")]),
    ("a4a6-d", &["a4", "a6", "a1", "a5", "2*c1 - c2", "c3"], &[("a2", "-1"), ("a3", "-2"), ("c1", "-2/3")]),
    (
        "a4a6-e",
        &["a4", "a6", "a3", "2*a1*a2 + a5*c2", "2*c1 - c2", "c3"],
        &[("a5", "1"), ("a2", "-3/2"), ("c2", "-1/2")],
    ),
    ("a4a6-f", &["a4", "a6", "a2", "a3", "a5"], &[("a1", "1/2"), ("c3", "-2/5"), ("c1", "-2/3"), ("c2", "-1/2")]),
    ("a4a6-g", &["a4", "a6", "a1", "a3", "a5"], &[("a2", "-1"), ("c3", "-2/5"), ("c1", "-2/3"), ("c2", "-1/2")]),
    (
        "a5a6-a",
        &["a5", "a6", "a2", "a3"],
        &[("a1", "1"), ("a4", "-2"), ("c3", "-2/5"), ("c1", "-2/3"), ("c2", "2")],
    ),
    (
        "a5a6-b",
        &["a5", "a6", "a1 + a4", "a3"],
        &[("a2", "-1"), ("a4", "-2"), ("c3", "65"), ("c1", "2/56"), ("c2", "1")],
    ),
    ("a5a6-c", &["a5", "a6", "a1 + a4", "c1", "c2", "c3"], &[("a2", "-1"), ("a4", "-2"), ("a3", "-8/9")]),
    ("a5a6-d", &["a5", "a6", "a2", "2*c1 - c2", "c3"], &[("a1", "-1"), ("a4", "2"), ("a3", "-9"), ("c1", "2/5")]),
    ("a5a6-e", &["a5", "a6", "a1", "a4", "2*c1 - c2", "c3"], &[("a2", "3"), ("a3", "5"), ("c1", "2")]),
];

const EMRS_CONDITIONS: &[CondRow] = &[
    ("branch1", &["a", "b", "c + f", "S - 1", "c", "d + e"], &[("e", "1"), ("T", "1/2"), ("U", "3/4")]),
    (
        "branch2",
        &["a", "b", "c + f", "S - 1", "8*c + T^2 - U^2", "4*(e - d) - T^2 - U^2", "2*(e + d) + T*U"],
        &[("U", "1"), ("T", "1")],
    ),
    ("branch3", &["d + e", "c", "f", "S - 1", "a", "b"], &[("e", "-2"), ("T", "1/2"), ("U", "3/4")]),
    ("branch4", &["d + e", "c", "f", "S - 1", "T - 2*a", "U - 2*b"], &[("a", "1"), ("b", "5/2"), ("e", "-2")]),
    ("branch5", &["d + e", "c", "f", "S - 1", "d", "e"], &[("a", "1"), ("b", "5/2"), ("T", "3/8"), ("U", "-4")]),
    (
        "branch6",
        &["S"],
        &[
            ("a", "1"),
            ("b", "2"),
            ("c", "3"),
            ("d", "-1/2"),
            ("e", "5/2"),
            ("f", "2/3"),
            ("T", "-1"),
            ("U", "2"),
        ],
    ),
];

fn build_catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "rossler",
            summary: "Rössler system at a = b = 0, moved to canonical form; a center on z = 0 for every c",
            parameters: vec![ParamSpec { name: "c", default: Some("-1") }],
            admissibility: &["c != 0"],
            conditions: vec![CenterCondition {
                label: "all",
                constraints: &[],
                sample: &[("c", "-1")],
                extra_samples: &[&[("c", "2")], &[("c", "1/3")]],
            }],
            build: build_rossler,
        },
        CatalogEntry {
            name: "lorenz",
            summary: "generalized Lorenz system with a = c, sigma = sqrt(-a(a+b)) rational",
            parameters: params(&["a", "b", "d"], None),
            admissibility: &["a != 0", "b != 0", "d != 0", "a*(a+b) < 0", "-a*(a+b) is the square of a rational"],
            conditions: vec![CenterCondition {
                label: "bautin",
                constraints: &["d + 2*a"],
                sample: &[("a", "-1"), ("b", "5")],
                extra_samples: &[&[("a", "-1"), ("b", "2")], &[("a", "-2"), ("b", "4")]],
            }],
            build: build_lorenz,
        },
        CatalogEntry {
            name: "moonrand",
            summary: "Moon-Rand system, reflected y -> -y into canonical form",
            parameters: vec![
                ParamSpec { name: "mu", default: None },
                ParamSpec { name: "a", default: Some("0") },
                ParamSpec { name: "b", default: None },
                ParamSpec { name: "c", default: None },
            ],
            admissibility: &["mu != 0"],
            conditions: vec![CenterCondition {
                label: "bautin",
                constraints: &["a", "2*c - mu*b"],
                sample: &[("mu", "1"), ("b", "2")],
                extra_samples: &[],
            }],
            build: build_moonrand,
        },
        CatalogEntry {
            name: "jerk",
            summary: "canonical jerk system with quadratic F2 = a1 x^2 + a2 y^2 + a3 z^2 + a4 xy + a5 xz + a6 yz",
            parameters: {
                let mut p = vec![
                    ParamSpec { name: "beta", default: Some("1") },
                    ParamSpec { name: "tau", default: Some("-1") },
                    ParamSpec { name: "lambda", default: Some("1") },
                ];
                p.extend(params(&["a1", "a2", "a3", "a4", "a5", "a6"], Some("0")));
                p
            },
            admissibility: &["beta != 0", "tau != 0", "lambda != 0"],
            conditions: conditions(JERK_CONDITIONS),
            build: build_jerk,
        },
        CatalogEntry {
            name: "ginevalls",
            summary: "x' = y, y' = -x + a1 x^2 + a2 xy + a3 xz + a4 y^2 + a5 yz + a6 z^2, z' = -z + c1 x^2 + c2 xy + c3 y^2, reflected y -> -y",
            parameters: params(&["a1", "a2", "a3", "a4", "a5", "a6", "c1", "c2", "c3"], Some("0")),
            admissibility: &[],
            conditions: conditions(GV_CONDITIONS),
            build: build_ginevalls,
        },
        CatalogEntry {
            name: "emrs",
            summary: "x' = -y + a(x^2+y^2) + cxz + dyz, y' = x + b(x^2+y^2) + exz + fyz, z' = -z + S(x^2+y^2) + Txz + Uyz",
            parameters: params(&["a", "b", "c", "d", "e", "f", "S", "T", "U"], Some("0")),
            admissibility: &[],
            conditions: conditions(EMRS_CONDITIONS),
            build: build_emrs,
        },
    ]
}

/// All catalog entries.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry, SystemError> {
    catalog().iter().find(|e| e.name == name).ok_or_else(|| SystemError::UnknownEntry(name.to_string()))
}

/// Builds the named system at the given parameters (defaults fill the rest).
pub fn catalog_instantiate(name: &str, values: &[(&str, Rational)]) -> Result<HopfSystem, SystemError> {
    let a: Assignment = values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    catalog_entry(name)?.instantiate(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_sample_satisfies_its_condition() {
        for e in catalog() {
            for c in &e.conditions {
                let (_, s) = e.instantiate_condition(c.label, &Assignment::new()).unwrap_or_else(|err| {
                    panic!("{} {}: {err}", e.name, c.label);
                });
                s.validate().unwrap();
            }
        }
    }

    #[test]
    fn lorenz_rejects_irrational_sigma() {
        let err = catalog_instantiate("lorenz", &[("a", r(-1)), ("b", r(3)), ("d", r(2))]).unwrap_err();
        assert!(matches!(err, SystemError::Inadmissible { ref predicate, .. } if predicate.contains("square")));
    }
}
