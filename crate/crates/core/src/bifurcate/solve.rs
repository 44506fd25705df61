//! Exact rational solutions of small polynomial systems: linear elimination,
//! then iterated resultants down to one variable.

use serde::{Deserialize, Serialize};

use super::forms::PolyData;
use super::BifurcationError;
use crate::exactalg::univariate::UniPoly;
use crate::exactalg::{independent_rows, Matrix, Monomial, Rational, SparsePoly};

/// Resultant of `f` and `g` with respect to `var`, by fraction-free
/// elimination on the Sylvester matrix.
pub fn resultant(f: &SparsePoly<Rational>, g: &SparsePoly<Rational>, var: usize) -> SparsePoly<Rational> {
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m == 0 {
        return fc[0].pow(n as u32);
    }
    if n == 0 {
        return gc[0].pow(m as u32);
    }
    let size = m + n;
    let zero = SparsePoly::zero(f.roster().clone());
    let mut a = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (i, c) in fc.iter().rev().enumerate() {
            a[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in gc.iter().rev().enumerate() {
            a[n + r][r + i] = c.clone();
        }
    }
    bareiss(a)
}

fn bareiss(mut a: Vec<Vec<SparsePoly<Rational>>>) -> SparsePoly<Rational> {
    let n = a.len();
    let roster = a[0][0].roster().clone();
    let mut prev = SparsePoly::from_rational(roster.clone(), Rational::one());
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return SparsePoly::zero(roster);
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.try_div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = SparsePoly::zero(roster.clone());
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Rational solutions of a small system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallSystemSolution {
    pub vars: Vec<String>,
    /// Each solution assigns every roster variable, in roster order.
    pub solutions: Vec<Vec<Rational>>,
    /// The equations left after eliminating the linear variables.
    pub reduced: Vec<PolyData>,
    /// Univariate eliminant in the first nonlinear variable.
    pub eliminant: Option<PolyData>,
    /// Common factors removed from two-variable projections. Each is the
    /// projection of a curve of solutions; such curves are not enumerated.
    #[serde(default)]
    pub components: Vec<PolyData>,
}

/// Solves `eqs = 0` over the rationals.
///
/// The equations must be affine in `linear_vars` with constant coefficients;
/// those variables are eliminated by exact linear algebra. At most three
/// `nonlinear_vars` remain and are eliminated by resultants; rational roots of
/// the eliminant are lifted one variable at a time and every returned
/// solution satisfies all equations exactly. When the solution set contains a
/// curve, its projection is divided out and only the isolated points off it
/// are returned; the removed factors are listed in `components`.
pub fn solve_small_system(
    eqs: &[SparsePoly<Rational>],
    linear_vars: &[usize],
    nonlinear_vars: &[usize],
) -> Result<SmallSystemSolution, BifurcationError> {
    let first = eqs.first().ok_or(BifurcationError::Domain("no equations".into()))?;
    let r = first.roster().clone();
    if nonlinear_vars.len() > 3 {
        return Err(BifurcationError::Domain("at most three nonlinear variables are supported".into()));
    }
    for e in eqs {
        if e.roster() != &r {
            return Err(BifurcationError::Domain("equations over different variables".into()));
        }
        if let Some(v) = e.support_vars().into_iter().find(|v| !linear_vars.contains(v) && !nonlinear_vars.contains(v)) {
            return Err(BifurcationError::Domain(format!("variable `{}` is neither linear nor nonlinear", r[v])));
        }
    }

    // eq = C·x + rest(nonlinear)
    let mut c = Matrix::zeros(eqs.len(), linear_vars.len());
    let mut rest = Vec::with_capacity(eqs.len());
    for (i, e) in eqs.iter().enumerate() {
        let mut other = Vec::new();
        for (m, coef) in e.terms() {
            let lin: Vec<(usize, u32)> = m.factors().filter(|(v, _)| linear_vars.contains(v)).collect();
            match lin.as_slice() {
                [] => other.push((m.clone(), coef.clone())),
                [(v, 1)] if m.degree() == 1 => {
                    let j = linear_vars.iter().position(|x| x == v).expect("linear variable");
                    c[(i, j)] = coef.clone();
                }
                _ => {
                    return Err(BifurcationError::Domain(format!(
                        "equation {} is not affine in the linear variables with constant coefficients",
                        i + 1
                    )))
                }
            }
        }
        rest.push(SparsePoly::from_terms(r.clone(), other));
    }
    let sel = if linear_vars.is_empty() { Vec::new() } else { independent_rows(&c) };
    if sel.len() < linear_vars.len() {
        return Err(BifurcationError::PositiveDimensional("the linear variables are not determined".into()));
    }
    let block_inv = if linear_vars.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        c.select(&sel, &(0..linear_vars.len()).collect::<Vec<_>>()).inverse()?
    };
    // x_j = −Σ_i inv[j][i]·rest[sel_i]
    let lin_sol: Vec<SparsePoly<Rational>> = (0..linear_vars.len())
        .map(|j| {
            let mut acc = SparsePoly::zero(r.clone());
            for (i, &s) in sel.iter().enumerate() {
                acc = &acc - &rest[s].scale(&block_inv[(j, i)]);
            }
            acc
        })
        .collect();
    let reduced: Vec<SparsePoly<Rational>> = (0..eqs.len())
        .filter(|i| !sel.contains(i))
        .map(|i| {
            let mut e = rest[i].clone();
            for (j, x) in lin_sol.iter().enumerate() {
                if !c[(i, j)].is_zero() {
                    e = &e + &x.scale(&c[(i, j)]);
                }
            }
            e
        })
        .filter(|e| !e.is_zero())
        .map(|e| e.primitive())
        .collect();

    let mut eliminant = None;
    let mut components = Vec::new();
    let partial = solve_rec(&reduced, nonlinear_vars, &mut eliminant, &mut components)?;
    let mut solutions = Vec::new();
    for vals in partial {
        let mut point = vec![Rational::zero(); r.len()];
        for (&v, val) in nonlinear_vars.iter().zip(&vals) {
            point[v] = val.clone();
        }
        for (j, &v) in linear_vars.iter().enumerate() {
            point[v] = lin_sol[j].evaluate(&point);
        }
        if eqs.iter().all(|e| e.evaluate(&point).is_zero()) {
            solutions.push(point);
        }
    }
    solutions.sort();
    solutions.dedup();
    Ok(SmallSystemSolution {
        vars: r.to_vec(),
        solutions,
        reduced: reduced.iter().map(PolyData::from_poly).collect(),
        eliminant: eliminant.as_ref().map(PolyData::from_poly),
        components: components.iter().map(PolyData::from_poly).collect(),
    })
}

/// Eliminates `y` from `eqs`: resultants of the equation of least degree in
/// `y` with every other one, plus the equations free of `y`.
fn project(eqs: &[SparsePoly<Rational>], y: usize) -> Vec<SparsePoly<Rational>> {
    let (with_y, mut next): (Vec<_>, Vec<_>) = eqs.iter().cloned().partition(|e| e.degree_in(y) > 0);
    if let Some(pos) = (0..with_y.len()).min_by_key(|&i| (with_y[i].degree_in(y), with_y[i].len())) {
        let f = &with_y[pos];
        for (i, g) in with_y.iter().enumerate() {
            if i != pos {
                let res = resultant(f, g, y);
                if !res.is_zero() {
                    next.push(res.primitive());
                }
            }
        }
    }
    next
}

fn univariate_gcd(eqs: &[SparsePoly<Rational>], x: usize) -> UniPoly {
    eqs.iter()
        .map(|e| UniPoly::from_sparse(e, x).expect("univariate after elimination"))
        .reduce(|a, b| a.gcd(&b))
        .unwrap_or_else(UniPoly::zero)
}

/// Content of `f` as a polynomial in `y` over `Q[x]`.
fn content_in(f: &SparsePoly<Rational>, x: usize, y: usize) -> SparsePoly<Rational> {
    univariate_gcd(&f.coefficients_in(y), x).to_sparse(f.roster().clone(), x)
}

/// Pseudo-remainder of `f` by `g` as polynomials in `y`.
fn pseudo_remainder(f: &SparsePoly<Rational>, g: &SparsePoly<Rational>, y: usize) -> SparsePoly<Rational> {
    let dg = g.degree_in(y);
    let lc = g.coefficients_in(y).pop().expect("nonzero divisor");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(y) >= dg {
        let dr = r.degree_in(y);
        let lr = r.coefficients_in(y).pop().expect("nonzero remainder");
        let shift = SparsePoly::monomial(r.roster().clone(), Monomial::var_pow(y, dr - dg), Rational::one());
        r = &(&lc * &r) - &(&(&lr * &shift) * g);
    }
    r
}

/// Greatest common divisor of two polynomials in the variables `x` and `y`
/// only, by the primitive remainder sequence over `Q[x]`.
fn bivariate_gcd(f: &SparsePoly<Rational>, g: &SparsePoly<Rational>, x: usize, y: usize) -> SparsePoly<Rational> {
    let (cf, cg) = (content_in(f, x, y), content_in(g, x, y));
    let roster = f.roster().clone();
    let c = UniPoly::from_sparse(&cf, x)
        .expect("univariate content")
        .gcd(&UniPoly::from_sparse(&cg, x).expect("univariate content"))
        .to_sparse(roster, x);
    let mut a = f.try_div_exact(&cf).expect("content divides");
    let mut b = g.try_div_exact(&cg).expect("content divides");
    if a.degree_in(y) < b.degree_in(y) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_remainder(&a, &b, y);
        a = b;
        b = if r.is_zero() { r } else { r.try_div_exact(&content_in(&r, x, y)).expect("content divides") };
    }
    (&c * &a).primitive()
}

fn solve_rec(
    eqs: &[SparsePoly<Rational>],
    vars: &[usize],
    record: &mut Option<SparsePoly<Rational>>,
    components: &mut Vec<SparsePoly<Rational>>,
) -> Result<Vec<Vec<Rational>>, BifurcationError> {
    let mut eqs: Vec<SparsePoly<Rational>> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.iter().any(|e| e.is_constant()) {
        return Ok(Vec::new());
    }
    let Some((&y, front)) = vars.split_last() else {
        return Ok(vec![Vec::new()]);
    };
    if eqs.is_empty() {
        return Err(BifurcationError::PositiveDimensional("a variable is left unconstrained".into()));
    }
    let Some(&x) = front.first() else {
        let u = univariate_gcd(&eqs, y);
        if record.is_none() {
            *record = Some(u.to_sparse(eqs[0].roster().clone(), y));
        }
        return Ok(u.rational_roots().into_iter().map(|r| vec![r]).collect());
    };
    if front.len() == 1 && eqs.len() >= 2 {
        // A common factor is a curve of solutions; only isolated points off
        // it are enumerated.
        let g = eqs[1..].iter().fold(eqs[0].clone(), |acc, e| bivariate_gcd(&acc, e, x, y));
        if !g.is_constant() {
            eqs = eqs.iter().map(|e| e.try_div_exact(&g).expect("gcd divides")).collect();
            components.push(g);
        }
    }
    let proj = project(&eqs, y);
    if proj.is_empty() {
        return Err(BifurcationError::PositiveDimensional("the projection is not finite".into()));
    }
    let mut out = Vec::new();
    for head in solve_rec(&proj, front, record, components)? {
        let fixed: Vec<SparsePoly<Rational>> = eqs
            .iter()
            .map(|e| front.iter().zip(&head).fold(e.clone(), |acc, (&v, val)| acc.substitute_value(v, val)))
            .collect();
        if fixed.iter().any(|e| e.is_constant() && !e.is_zero()) {
            continue;
        }
        let live: Vec<SparsePoly<Rational>> = fixed.into_iter().filter(|e| !e.is_zero()).collect();
        if live.is_empty() {
            return Err(BifurcationError::PositiveDimensional("a fiber of the projection is not finite".into()));
        }
        for root in univariate_gcd(&live, y).rational_roots() {
            let mut point = head.clone();
            point.push(root);
            out.push(point);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, roster};

    #[test]
    fn resultant_of_line_and_circle() {
        let r = roster(&["x", "y"]);
        let f = parse_poly("x^2 + y^2 - 25", &r).unwrap();
        let g = parse_poly("y - x - 1", &r).unwrap();
        let res = resultant(&f, &g, 1);
        // x² + (x+1)² − 25 = 2x² + 2x − 24
        assert_eq!(res, parse_poly("2*x^2 + 2*x - 24", &r).unwrap());
    }

    #[test]
    fn solves_a_linear_system() {
        let r = roster(&["a", "b"]);
        let eqs = [parse_poly("a + b - 3", &r).unwrap(), parse_poly("a - b - 1", &r).unwrap()];
        let s = solve_small_system(&eqs, &[0, 1], &[]).unwrap();
        assert_eq!(s.solutions, vec![vec![Rational::from(2), Rational::from(1)]]);
    }

    #[test]
    fn mixed_system_with_irrational_branch() {
        let r = roster(&["a", "x", "y"]);
        let eqs = [
            parse_poly("a - x*y", &r).unwrap(),
            parse_poly("x^2 + y^2 - 25", &r).unwrap(),
            parse_poly("y - x - 1", &r).unwrap(),
        ];
        let s = solve_small_system(&eqs, &[0], &[1, 2]).unwrap();
        assert_eq!(s.solutions.len(), 2);
        for p in &s.solutions {
            assert!(eqs.iter().all(|e| e.evaluate(p).is_zero()));
        }
        // x² = 2 has no rational solutions.
        let eqs = [parse_poly("x^2 - 2", &r).unwrap(), parse_poly("y - x", &r).unwrap()];
        assert!(solve_small_system(&eqs, &[], &[1, 2]).unwrap().solutions.is_empty());
    }
}
