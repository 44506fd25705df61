//! JSON file format for systems.
//!
//! ```json
//! {
//!   "lambda": "1",
//!   "jet_degree": 1,
//!   "parameters": ["a200", "a110"],
//!   "equations": {
//!     "dx": [ {"coeff": {"1": "-11/15", "a200": "1"}, "mono": [2,0,0]} ],
//!     "dy": [],
//!     "dz": []
//!   }
//! }
//! ```
//!
//! The canonical linear part is implicit and may not appear in the term lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{state_roster, HopfSystem, SystemError, EQUATIONS};
use crate::exactalg::{roster, Jet, Monomial, Rational, Roster, SparsePoly};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    lambda: String,
    jet_degree: u32,
    parameters: Vec<String>,
    equations: EquationsFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationsFile {
    dx: Vec<TermFile>,
    dy: Vec<TermFile>,
    dz: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coeff: BTreeMap<String, String>,
    mono: [u32; 3],
}

fn parse_rational(context: &str, value: &str) -> Result<Rational, SystemError> {
    value
        .parse()
        .map_err(|_| SystemError::MalformedRational { context: context.to_string(), value: value.to_string() })
}

/// Encodes a jet as a map from parameter-monomial names to rational strings.
pub fn jet_to_json(j: &Jet) -> BTreeMap<String, String> {
    j.to_named_terms().into_iter().map(|(k, v)| (k, v.to_string())).collect()
}

/// Decodes the map produced by [`jet_to_json`].
pub fn jet_from_json(map: &BTreeMap<String, String>, params: &Roster, degree: u32) -> Result<Jet, SystemError> {
    let mut terms = Vec::with_capacity(map.len());
    for (name, value) in map {
        let m = Jet::parse_monomial(name, params)
            .map_err(|_| SystemError::UnknownParameter(name.clone()))?;
        if m.degree() > degree {
            return Err(SystemError::Malformed(format!(
                "coefficient monomial `{name}` exceeds jet degree {degree}"
            )));
        }
        terms.push((m, parse_rational(&format!("coefficient `{name}`"), value)?));
    }
    Ok(Jet::new(SparsePoly::from_terms(params.clone(), terms), degree))
}

/// Parses and validates a system file.
pub fn parse_system(text: &str) -> Result<HopfSystem, SystemError> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| SystemError::Malformed(e.to_string()))?;
    let lambda = parse_rational("lambda", &file.lambda)?;
    if lambda.is_zero() {
        return Err(SystemError::ZeroLambda);
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = file.parameters.iter().find(|p| !seen.insert(p.as_str())) {
        return Err(SystemError::Malformed(format!("duplicate parameter `{dup}`")));
    }
    let params = roster(&file.parameters);
    let lists = [&file.equations.dx, &file.equations.dy, &file.equations.dz];
    let mut rhs = Vec::with_capacity(3);
    for (eq, list) in EQUATIONS.iter().zip(lists) {
        let mut terms = Vec::with_capacity(list.len());
        for t in list {
            if t.mono.iter().sum::<u32>() < 2 {
                return Err(SystemError::CanonicalForm { equation: eq, mono: t.mono });
            }
            terms.push((Monomial::from_exponents(&t.mono), jet_from_json(&t.coeff, &params, file.jet_degree)?));
        }
        rhs.push(SparsePoly::from_terms(state_roster(), terms));
    }
    let rhs: [SparsePoly<Jet>; 3] = rhs.try_into().expect("three equations");
    HopfSystem::new(lambda, params, file.jet_degree, rhs)
}

/// Serializes a system, terms in canonical monomial order.
pub fn serialize_system(s: &HopfSystem) -> String {
    let list = |i: usize| {
        s.rhs(i)
            .terms()
            .iter()
            .map(|(m, c)| {
                let e = m.to_exponents(3);
                TermFile { coeff: jet_to_json(c), mono: [e[0], e[1], e[2]] }
            })
            .collect()
    };
    let file = SystemFile {
        lambda: s.lambda().to_string(),
        jet_degree: s.jet_degree(),
        parameters: s.parameters().to_vec(),
        equations: EquationsFile { dx: list(0), dy: list(1), dz: list(2) },
    };
    serde_json::to_string_pretty(&file).expect("system serializes")
}
