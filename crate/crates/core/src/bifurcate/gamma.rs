//! Weighted scaling of the perturbation parameters by a small `γ`.

use serde::{Deserialize, Serialize};

use super::BifurcationError;
use crate::exactalg::{roster, Matrix, Monomial, Rational, SparsePoly};
use crate::lyapcore::LyapunovSequence;

/// How the parameters are scaled.
///
/// The constants listed in `linear_constants` have their linear parts taken
/// as new coordinates `w_i = γ^linear_weight · u_i`, which determines the
/// `linear_pivots` parameters. Each `scaled` parameter becomes `γ^w · u`. The
/// `gauge` parameter becomes `γ` itself. Parameters not mentioned are 0.
///
/// The `u` variables are numbered `u1, u2, …`: first one per linear constant,
/// then one per scaled parameter, in the given orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSpec {
    #[serde(default)]
    pub linear_constants: Vec<usize>,
    #[serde(default)]
    pub linear_pivots: Vec<String>,
    #[serde(default)]
    pub linear_weight: u32,
    pub scaled: Vec<(String, u32)>,
    pub gauge: Option<String>,
    pub order: u32,
}

/// The coefficient of `γ^order` in every constant.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaExpansion {
    pub u_names: Vec<String>,
    /// Image of each parameter as a polynomial in `(γ, u…)`, in roster order.
    pub images: Vec<(String, SparsePoly<Rational>)>,
    /// `𝓛_k` for `k = 1 … N`, polynomials in the `u` variables.
    pub constants: Vec<SparsePoly<Rational>>,
}

fn gamma_degree(p: &SparsePoly<Rational>) -> Option<u32> {
    p.terms().iter().map(|(m, _)| m.exponent(0)).min()
}

/// Substitutes the scaling into every `L_k` and extracts the coefficient of
/// `γ^order`.
pub fn gamma_expand(seq: &LyapunovSequence, spec: &GammaSpec) -> Result<GammaExpansion, BifurcationError> {
    let first = seq.constants.first().ok_or(BifurcationError::Domain("empty sequence".into()))?;
    let d = first.degree();
    let params = first.roster().clone();
    let index = |name: &str| {
        params.iter().position(|p| p == name).ok_or_else(|| BifurcationError::UnknownParameter(name.to_string()))
    };
    if spec.linear_constants.len() != spec.linear_pivots.len() {
        return Err(BifurcationError::Domain("linear constants and pivots differ in number".into()));
    }
    let r = spec.linear_constants.len();
    let u_names: Vec<String> = (1..=r + spec.scaled.len()).map(|i| format!("u{i}")).collect();
    let mut t_names = vec!["gamma".to_string()];
    t_names.extend(u_names.iter().cloned());
    let t = roster(&t_names);
    let gamma_pow = |w: u32| SparsePoly::monomial(t.clone(), Monomial::var_pow(0, w), Rational::one());
    let u_var = |i: usize| SparsePoly::var(t.clone(), i + 1);

    let mut images: Vec<Option<SparsePoly<Rational>>> = vec![None; params.len()];
    for (j, (name, w)) in spec.scaled.iter().enumerate() {
        if *w == 0 {
            return Err(BifurcationError::Domain(format!("weight of `{name}` must be positive")));
        }
        images[index(name)?] = Some(&gamma_pow(*w) * &u_var(r + j));
    }
    if let Some(g) = &spec.gauge {
        let i = index(g)?;
        if images[i].is_some() {
            return Err(BifurcationError::Domain(format!("`{g}` is both scaled and the gauge")));
        }
        images[i] = Some(gamma_pow(1));
    }
    let pivots: Vec<usize> = spec.linear_pivots.iter().map(|n| index(n)).collect::<Result<_, _>>()?;
    if let Some(p) = pivots.iter().find(|&&p| images[p].is_some()) {
        return Err(BifurcationError::Domain(format!("pivot `{}` is also scaled", params[*p])));
    }
    if r > 0 {
        if spec.linear_weight == 0 {
            return Err(BifurcationError::Domain("linear weight must be positive".into()));
        }
        let lin = |k: usize, p: usize| -> Result<Rational, BifurcationError> {
            let l = seq
                .get(k)
                .ok_or_else(|| BifurcationError::Domain(format!("constant L{k} was not computed")))?;
            Ok(l.coeff(&Monomial::var(p)))
        };
        let mut a = Matrix::zeros(r, r);
        for (i, &k) in spec.linear_constants.iter().enumerate() {
            for (j, &p) in pivots.iter().enumerate() {
                a[(i, j)] = lin(k, p)?;
            }
        }
        let a_inv = a.inverse().map_err(|_| BifurcationError::Domain("linear pivot block is singular".into()))?;
        // rhs_i = w_i − Σ_{free p} lin(k_i, p)·image(p)
        let mut rhs = Vec::with_capacity(r);
        for (i, &k) in spec.linear_constants.iter().enumerate() {
            let mut e = &gamma_pow(spec.linear_weight) * &u_var(i);
            for (p, img) in images.iter().enumerate() {
                if let Some(img) = img {
                    let c = lin(k, p)?;
                    if !c.is_zero() {
                        e = &e - &img.scale(&c);
                    }
                }
            }
            rhs.push(e);
        }
        for (j, &p) in pivots.iter().enumerate() {
            let mut e = SparsePoly::zero(t.clone());
            for (i, ri) in rhs.iter().enumerate() {
                let c = &a_inv[(j, i)];
                if !c.is_zero() {
                    e = &e + &ri.scale(c);
                }
            }
            images[p] = Some(e);
        }
    }
    let images: Vec<SparsePoly<Rational>> =
        images.into_iter().map(|i| i.unwrap_or_else(|| SparsePoly::zero(t.clone()))).collect();

    // Terms of L beyond the jet degree carry at least γ^((D+1)·w_min).
    let w_min = images.iter().filter_map(gamma_degree).min().unwrap_or(u32::MAX);
    if w_min != u32::MAX && spec.order >= (d + 1).saturating_mul(w_min) {
        return Err(BifurcationError::Domain(format!(
            "order {} needs jet degree at least {}, the sequence has {d}",
            spec.order,
            spec.order / w_min
        )));
    }

    let u = roster(&u_names);
    let map: Vec<usize> = (0..t.len()).map(|i| i.saturating_sub(1)).collect();
    let constants = seq
        .constants
        .iter()
        .map(|l| {
            let full = l.poly().compose(&images, t.clone());
            let terms = full
                .terms()
                .iter()
                .filter(|(m, _)| m.exponent(0) == spec.order)
                .map(|(m, c)| (m.split_var(0).1.remap(&map), c.clone()));
            SparsePoly::from_terms(u.clone(), terms)
        })
        .collect();
    Ok(GammaExpansion {
        u_names,
        images: params.iter().cloned().zip(images).collect(),
        constants,
    })
}
