use serde::{Deserialize, Serialize};

use crate::exactalg::{Matrix, Rational, SparsePoly};

/// Exact evidence that a common zero of `𝓛_1 … 𝓛_n` is transversal and that
/// the next constant does not vanish there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionCertificate {
    pub vars: Vec<String>,
    pub assignment: Vec<Rational>,
    /// 1-based indices of the equations that vanish at the assignment.
    pub vanishing_set: Vec<usize>,
    /// The next equation at the assignment.
    pub witness_value: Rational,
    /// Determinant of the Jacobian on `minor_columns` (all columns when the
    /// system is square).
    pub jacobian_det: Rational,
    pub minor_columns: Vec<usize>,
    pub valid: bool,
    /// Why the certificate was declined, if it was.
    pub declined: Option<String>,
}

/// Evaluates the Jacobian of `eqs` and `next_eq` at `solution`. Valid iff
/// every equation vanishes, the Jacobian has full row rank (a nonzero
/// maximal minor) and `next_eq` is nonzero. A declined certificate is a normal
/// result, not an error.
pub fn transversality_certificate(
    eqs: &[SparsePoly<Rational>],
    solution: &[Rational],
    next_eq: &SparsePoly<Rational>,
) -> SolutionCertificate {
    let vars: Vec<String> = next_eq.roster().to_vec();
    let n = eqs.len();
    let m = solution.len();
    let values: Vec<Rational> = eqs.iter().map(|e| e.evaluate(solution)).collect();
    let vanishing_set: Vec<usize> = (0..n).filter(|&i| values[i].is_zero()).map(|i| i + 1).collect();
    let witness_value = next_eq.evaluate(solution);

    let mut j = Matrix::zeros(n, m);
    for (i, e) in eqs.iter().enumerate() {
        for (v, g) in e.gradient().iter().enumerate() {
            j[(i, v)] = g.evaluate(solution);
        }
    }
    let minor_columns: Vec<usize> = if n == m {
        (0..m).collect()
    } else {
        let mut w = j.clone();
        w.rref()
    };
    let jacobian_det = if minor_columns.len() == n {
        let rows: Vec<usize> = (0..n).collect();
        j.select(&rows, &minor_columns).determinant().expect("square minor")
    } else {
        Rational::zero()
    };

    let declined = if vanishing_set.len() != n {
        Some("the assignment is not a common zero".to_string())
    } else if jacobian_det.is_zero() {
        Some("the Jacobian is singular at the assignment".to_string())
    } else if witness_value.is_zero() {
        Some("the next constant vanishes at the assignment".to_string())
    } else {
        None
    };
    SolutionCertificate {
        vars,
        assignment: solution.to_vec(),
        vanishing_set,
        witness_value,
        jacobian_det,
        minor_columns,
        valid: declined.is_none(),
        declined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, roster};

    #[test]
    fn identity_system_at_origin() {
        let r = roster(&["x", "y"]);
        let eqs = [parse_poly("x", &r).unwrap(), parse_poly("y", &r).unwrap()];
        let one = SparsePoly::from_rational(r, Rational::one());
        let c = transversality_certificate(&eqs, &[Rational::zero(), Rational::zero()], &one);
        assert!(c.valid);
        assert_eq!(c.jacobian_det, Rational::one());
    }

    #[test]
    fn declines_singular_or_vanishing_witness() {
        let r = roster(&["x", "y"]);
        let eqs = [parse_poly("x^2", &r).unwrap(), parse_poly("y", &r).unwrap()];
        let next = parse_poly("1 + x", &r).unwrap();
        let c = transversality_certificate(&eqs, &[Rational::zero(), Rational::zero()], &next);
        assert!(!c.valid);
        let eqs = [parse_poly("x", &r).unwrap(), parse_poly("y", &r).unwrap()];
        let c = transversality_certificate(&eqs, &[Rational::zero(), Rational::zero()], &parse_poly("x", &r).unwrap());
        assert!(!c.valid && c.witness_value.is_zero());
    }
}
