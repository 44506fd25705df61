use serde::{Deserialize, Serialize};

use super::BifurcationError;
use crate::exactalg::{exact_rank, independent_rows, Matrix, Monomial, Rational};
use crate::lyapcore::LyapunovSequence;

/// Coefficients of the degree-1 parts of `L_1 … L_N`: one row per constant,
/// one column per perturbation parameter in roster order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearPartMatrix {
    pub roster: Vec<String>,
    pub rows: Vec<Vec<Rational>>,
}

impl LinearPartMatrix {
    pub fn from_sequence(seq: &LyapunovSequence) -> Self {
        let roster: Vec<String> = seq.constants.first().map(|l| l.roster().to_vec()).unwrap_or_default();
        let rows = seq
            .constants
            .iter()
            .map(|l| (0..roster.len()).map(|p| l.coeff(&Monomial::var(p))).collect())
            .collect();
        LinearPartMatrix { roster, rows }
    }

    pub fn matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.roster.len());
        }
        Matrix::from_rows(self.rows.clone()).expect("rectangular")
    }
}

/// Rank of the linear parts with deterministic pivots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRank {
    pub matrix: LinearPartMatrix,
    pub rank: usize,
    /// Pivot columns, 0-based indices into the roster.
    pub pivots: Vec<usize>,
    /// Rows (0-based, so row `i` is `L_{i+1}`) that are independent on the
    /// pivot columns.
    pub rows: Vec<usize>,
}

impl LinearRank {
    pub fn pivot_names(&self) -> Vec<String> {
        self.pivots.iter().map(|&p| self.matrix.roster[p].clone()).collect()
    }
}

/// Extracts the linear-part matrix and its rank.
pub fn linear_rank(seq: &LyapunovSequence) -> Result<LinearRank, BifurcationError> {
    let d = seq.constants.first().map(|l| l.degree()).unwrap_or(0);
    if d < 1 {
        return Err(BifurcationError::JetDegree { needed: 1, found: d });
    }
    let matrix = LinearPartMatrix::from_sequence(seq);
    let m = matrix.matrix();
    let (rank, pivots) = exact_rank(&m);
    let rows = pivot_rows(&m, &pivots);
    Ok(LinearRank { matrix, rank, pivots, rows })
}

/// Same analysis with prescribed pivot parameters; fails if they do not
/// carry the full rank.
pub fn linear_rank_with_pivots(seq: &LyapunovSequence, pivot_names: &[String]) -> Result<LinearRank, BifurcationError> {
    let mut lr = linear_rank(seq)?;
    let pivots: Vec<usize> = pivot_names
        .iter()
        .map(|n| {
            lr.matrix.roster.iter().position(|r| r == n).ok_or_else(|| BifurcationError::UnknownParameter(n.clone()))
        })
        .collect::<Result<_, _>>()?;
    let m = lr.matrix.matrix();
    let rows = pivot_rows(&m, &pivots);
    if rows.len() != pivots.len() || pivots.len() != lr.rank {
        return Err(BifurcationError::Domain(format!(
            "prescribed pivots [{}] do not span the rank-{} linear part",
            pivot_names.join(", "),
            lr.rank
        )));
    }
    lr.pivots = pivots;
    lr.rows = rows;
    Ok(lr)
}

fn pivot_rows(m: &Matrix, pivots: &[usize]) -> Vec<usize> {
    let all: Vec<usize> = (0..m.rows()).collect();
    independent_rows(&m.select(&all, pivots))
}

/// The square block of `m` on the given rows and pivot columns.
pub(crate) fn pivot_block(m: &Matrix, rows: &[usize], pivots: &[usize]) -> Matrix {
    m.select(rows, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{roster, Jet, SparsePoly};
    use crate::lyapcore::LyapunovSequence;

    #[test]
    fn pivots_follow_roster_order() {
        let r = roster(&["p", "q", "s"]);
        let lin = |c: [i64; 3]| {
            let terms = (0..3).map(|i| (Monomial::var(i), Rational::from(c[i])));
            Jet::new(SparsePoly::from_terms(r.clone(), terms), 1)
        };
        let m = LinearPartMatrix::from_sequence(&fake(vec![lin([0, 1, 1]), lin([0, 2, 2]), lin([0, 0, 3])]));
        let (rank, piv) = exact_rank(&m.matrix());
        assert_eq!((rank, piv), (2, vec![1, 2]));
    }

    fn fake(constants: Vec<Jet>) -> LyapunovSequence {
        LyapunovSequence::from_constants(crate::lyapcore::Normalization::AxisPower, constants)
    }
}
