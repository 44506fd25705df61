//! Completing a partial parameter assignment so that a list of polynomial
//! constraints holds.

use std::collections::BTreeMap;

use super::SystemError;
use crate::exactalg::{Matrix, Monomial, Rational, SparsePoly};

/// Named rational parameter values.
pub type Assignment = BTreeMap<String, Rational>;

/// Extends `known` until every constraint vanishes.
///
/// Repeatedly looks for a constraint that, after substituting the known
/// values, is linear in a single unknown and solves it. When none is, the
/// pending constraints that are linear are solved jointly and every unknown
/// they pin down uniquely is assigned. Unknowns that no
/// constraint mentions are set to zero. Fails if a constraint reduces to a
/// nonzero constant or if the remaining constraints are not of that simple
/// shape.
pub fn complete_assignment(
    label: &str,
    constraints: &[SparsePoly<Rational>],
    known: &Assignment,
) -> Result<Assignment, SystemError> {
    let Some(roster) = constraints.first().map(|c| c.roster().clone()) else {
        return Ok(known.clone());
    };
    let mut values: Vec<Option<Rational>> = roster.iter().map(|n| known.get(n).cloned()).collect();
    let mut pending: Vec<usize> = (0..constraints.len()).collect();
    loop {
        let mut progress = false;
        let mut still = Vec::new();
        for &ci in &pending {
            let mut p = constraints[ci].clone();
            for (v, val) in values.iter().enumerate() {
                if let Some(val) = val {
                    p = p.substitute_value(v, val);
                }
            }
            if p.is_zero() {
                continue;
            }
            let vars = p.support_vars();
            if vars.is_empty() {
                return Err(violated(label, &constraints[ci], p.constant_term()));
            }
            if vars.len() == 1 && p.degree() == Some(1) {
                let v = vars[0];
                let a = p.coeff(&Monomial::var(v)).cloned().unwrap_or_else(Rational::zero);
                values[v] = Some(-&(&p.constant_term() / &a));
                progress = true;
            } else {
                still.push(ci);
            }
        }
        pending = still;
        if pending.is_empty() {
            break;
        }
        if !progress {
            progress = solve_linear_block(label, constraints, &pending, &mut values)?;
        }
        if !progress {
            let names: Vec<String> = pending.iter().map(|&c| constraints[c].to_string()).collect();
            return Err(SystemError::Underdetermined {
                label: label.to_string(),
                reason: format!("no unknown can be isolated in [{}]", names.join(", ")),
            });
        }
    }
    let mut out = known.clone();
    for (name, v) in roster.iter().zip(values) {
        out.insert(name.clone(), v.unwrap_or_else(Rational::zero));
    }
    // Final check with every value in place.
    let point: Vec<Rational> = roster.iter().map(|n| out[n].clone()).collect();
    for c in constraints {
        let v = c.evaluate(&point);
        if !v.is_zero() {
            return Err(violated(label, c, v));
        }
    }
    Ok(out)
}

/// Joint solve of the pending constraints that are linear after substitution.
/// Returns whether any unknown was fixed.
fn solve_linear_block(
    label: &str,
    constraints: &[SparsePoly<Rational>],
    pending: &[usize],
    values: &mut [Option<Rational>],
) -> Result<bool, SystemError> {
    let mut rows = Vec::new();
    for &ci in pending {
        let mut p = constraints[ci].clone();
        for (v, val) in values.iter().enumerate() {
            if let Some(val) = val {
                p = p.substitute_value(v, val);
            }
        }
        if p.degree() == Some(1) {
            rows.push(p);
        }
    }
    let mut unknowns: Vec<usize> = rows.iter().flat_map(|p| p.support_vars()).collect();
    unknowns.sort_unstable();
    unknowns.dedup();
    if rows.is_empty() {
        return Ok(false);
    }
    // Augmented matrix [A | -b] for A·u + b = 0.
    let table: Vec<Vec<Rational>> = rows
        .iter()
        .map(|p| {
            let mut r: Vec<Rational> = unknowns
                .iter()
                .map(|&v| p.coeff(&Monomial::var(v)).cloned().unwrap_or_else(Rational::zero))
                .collect();
            r.push(-&p.constant_term());
            r
        })
        .collect();
    let mut m = Matrix::from_rows(table)?;
    let pivots = m.rref();
    let k = unknowns.len();
    if pivots.contains(&k) {
        let c = pending.iter().copied().find(|&c| constraints[c].degree() == Some(1)).unwrap_or(pending[0]);
        return Err(violated(label, &constraints[c], Rational::one()));
    }
    let mut fixed = false;
    for (row, &col) in pivots.iter().enumerate() {
        let free = (col + 1..k).any(|j| !m[(row, j)].is_zero());
        if !free {
            values[unknowns[col]] = Some(m[(row, k)].clone());
            fixed = true;
        }
    }
    Ok(fixed)
}

fn violated(label: &str, c: &SparsePoly<Rational>, value: Rational) -> SystemError {
    SystemError::ConditionViolated { label: label.to_string(), constraint: c.to_string(), value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, roster};

    #[test]
    fn solves_chained_linear_constraints() {
        let r = roster(&["a1", "a2", "a5", "c1", "c2"]);
        let cs: Vec<_> =
            ["2*a1*a2 + a5*c2", "2*c1 - c2"].iter().map(|s| parse_poly(s, &r).unwrap()).collect();
        let mut known = Assignment::new();
        known.insert("a2".into(), Rational::from(-2));
        known.insert("a5".into(), Rational::frac(7, 8));
        known.insert("c1".into(), Rational::frac(2, 3));
        let out = complete_assignment("t", &cs, &known).unwrap();
        assert_eq!(out["c2"], Rational::frac(4, 3));
        assert_eq!(out["a1"], Rational::frac(7, 24));
    }

    #[test]
    fn solves_coupled_linear_constraints() {
        let r = roster(&["d", "e", "t"]);
        let cs: Vec<_> = ["4*(e - d) - t^2", "2*(e + d) + t"].iter().map(|s| parse_poly(s, &r).unwrap()).collect();
        let known: Assignment = [("t".to_string(), Rational::from(2))].into();
        let out = complete_assignment("t", &cs, &known).unwrap();
        assert_eq!(out["e"], Rational::zero());
        assert_eq!(out["d"], Rational::from(-1));
    }

    #[test]
    fn reports_contradictions() {
        let r = roster(&["a", "b"]);
        let cs = vec![parse_poly("a - b", &r).unwrap()];
        let known: Assignment = [("a".to_string(), Rational::one()), ("b".to_string(), Rational::zero())].into();
        assert!(matches!(complete_assignment("t", &cs, &known), Err(SystemError::ConditionViolated { .. })));
    }
}
