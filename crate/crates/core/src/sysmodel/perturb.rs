//! Injection of the full quadratic perturbation.

use super::{state_roster, HopfSystem, SystemError};
use crate::exactalg::{roster, Jet, Monomial, SparsePoly};

/// Quadratic monomials in roster order: x², xy, xz, y², yz, z².
pub const QUADRATIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

/// The 18 perturbation parameter names `a200, a110, …, c002`.
pub fn perturbation_names() -> Vec<String> {
    ["a", "b", "c"]
        .iter()
        .flat_map(|e| QUADRATIC_MONOMIALS.iter().map(move |m| format!("{e}{}{}{}", m[0], m[1], m[2])))
        .collect()
}

/// Adds `Σ a_jkl x^j y^k z^l` to ẋ, `b_jkl` to ẏ and `c_jkl` to ż, lifting
/// every coefficient to a jet of degree `degree` in the 18 new parameters.
pub fn apply_quadratic_perturbation(s: &HopfSystem, degree: u32) -> Result<HopfSystem, SystemError> {
    apply_quadratic_perturbation_pinned(s, degree, &[])
}

/// As [`apply_quadratic_perturbation`] with the `pinned` parameters fixed at
/// zero and left out of the roster.
pub fn apply_quadratic_perturbation_pinned(
    s: &HopfSystem,
    degree: u32,
    pinned: &[&str],
) -> Result<HopfSystem, SystemError> {
    if !s.is_unperturbed() {
        return Err(SystemError::AlreadyPerturbed);
    }
    let all = perturbation_names();
    if let Some(bad) = pinned.iter().find(|p| !all.iter().any(|a| a == *p)) {
        return Err(SystemError::UnknownParameter(bad.to_string()));
    }
    let live: Vec<&String> = all.iter().filter(|n| !pinned.contains(&n.as_str())).collect();
    let params = roster(&live);
    let mut rhs = Vec::with_capacity(3);
    for eq in 0..3 {
        let mut terms: Vec<(Monomial, Jet)> = s
            .rhs(eq)
            .terms()
            .iter()
            .map(|(m, c)| (m.clone(), Jet::constant(params.clone(), degree, c.constant_term())))
            .collect();
        for (k, mono) in QUADRATIC_MONOMIALS.iter().enumerate() {
            let name = &all[eq * 6 + k];
            if let Some(idx) = live.iter().position(|n| *n == name) {
                terms.push((Monomial::from_exponents(mono), Jet::param(params.clone(), degree, idx)));
            }
        }
        rhs.push(SparsePoly::from_terms(state_roster(), terms));
    }
    let rhs: [SparsePoly<Jet>; 3] = rhs.try_into().expect("three equations");
    HopfSystem::new(s.lambda().clone(), params, degree, rhs)
}
