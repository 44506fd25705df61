//! The full pipeline from a Lyapunov sequence to a certified lower bound, its
//! serializable report and an independent checker for that report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::certify::{transversality_certificate, SolutionCertificate};
use super::forms::{factor_quadratic, probe_points, proportionality_check, sign_change_witness, PolyData};
use super::gamma::{gamma_expand, GammaSpec};
use super::linear::{linear_rank, linear_rank_with_pivots, LinearRank};
use super::solve::solve_small_system;
use super::tail::{cubic_square_structure, hyperplane_substitution, hypersurface_witness, normalize_tail, CubicStructure};
use super::BifurcationError;
use crate::exactalg::{exact_rank, Matrix, Rational, SparsePoly};
use crate::lyapcore::{lyapunov_constants_with, LyapunovOptions, LyapunovSequence};
use crate::sysmodel::{apply_quadratic_perturbation_pinned, catalog_entry, Assignment};

/// What was analyzed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub name: String,
    #[serde(default)]
    pub condition: Option<String>,
    pub parameters: BTreeMap<String, Rational>,
    /// Perturbation parameters held at zero.
    #[serde(default)]
    pub pinned: Vec<String>,
}

/// The weighted-scaling stage: expand, solve the first `equations` scaled
/// constants and certify a transversal solution against the next one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPlan {
    pub spec: GammaSpec,
    pub equations: usize,
    pub linear_vars: Vec<String>,
    pub nonlinear_vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisPlan {
    /// Prescribed pivot parameters; the deterministic rule otherwise.
    #[serde(default)]
    pub pivots: Option<Vec<String>>,
    /// Run the tail-normalization stages (needs `D ≥ 2`).
    pub higher_order: bool,
    /// Replaces the tail stages by the weighted-scaling argument.
    #[serde(default)]
    pub gamma: Option<GammaPlan>,
}

impl Default for AnalysisPlan {
    fn default() -> Self {
        AnalysisPlan { pivots: None, higher_order: true, gamma: None }
    }
}

/// One piece of evidence. Every variant carries the data its check needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The linear-part matrix has the stated rank on the stated pivots.
    LinearRank {
        roster: Vec<String>,
        matrix: Vec<Vec<Rational>>,
        rank: usize,
        pivots: Vec<String>,
        /// 1-based constants independent on the pivot columns.
        pivot_constants: Vec<usize>,
    },
    /// The leading form `h_k` is a product of two rational linear forms and
    /// does not vanish at `point`.
    QuadraticFactor { k: usize, h: PolyData, factors: [PolyData; 2], point: Vec<Rational>, value: Rational },
    /// The leading form `h_k` takes both signs.
    SignChange { k: usize, h: PolyData, positive: Vec<Rational>, negative: Vec<Rational> },
    /// The leading form `h_k` does not vanish at `point`.
    Nonvanishing { k: usize, h: PolyData, point: Vec<Rational>, value: Rational },
    /// `h_next = ratio · h_k`: the next constant adds nothing at this order.
    Proportional { k: usize, next: usize, h: PolyData, next_h: PolyData, ratio: Rational },
    /// A regular point of `h_k = 0` where `h_next` does not vanish.
    HypersurfaceWitness {
        k: usize,
        next: usize,
        h: PolyData,
        next_h: PolyData,
        point: Vec<Rational>,
        regular_var: String,
        partial: Rational,
        next_value: Rational,
    },
    /// With `h_next = ratio · h_k` and `h_k = ℓ·ℓ'`, the cubic part `cubic`
    /// of `L_next − ratio·L_k` restricted to `ℓ = 0` is `ℓ'²·ℓ''`, so it
    /// changes sign along the regular branch `ℓ = 0` of the zero set.
    CubicStructure { k: usize, next: usize, h: PolyData, ratio: Rational, cubic: PolyData, structure: CubicStructure },
    /// A transversal common zero of the first `n` scaled constants where the
    /// next one does not vanish, giving `n + 1` cycles.
    Transversal {
        equations: Vec<PolyData>,
        next_equation: PolyData,
        solutions_found: usize,
        certificate: SolutionCertificate,
        /// Solutions whose certificate was declined, e.g. a center.
        declined: Vec<SolutionCertificate>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub increment: usize,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub system: SystemDescriptor,
    pub n: usize,
    pub d: u32,
    pub rank: usize,
    pub pivots: Vec<String>,
    pub stages: Vec<Stage>,
    /// Where the analysis stopped without a further increment.
    pub notes: Vec<String>,
    pub lower_bound: usize,
}

impl CyclicityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<CyclicityReport, BifurcationError> {
        serde_json::from_str(text).map_err(|e| BifurcationError::Verification(format!("malformed report: {e}")))
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn nonzero_point(h: &SparsePoly<Rational>) -> Option<(Vec<Rational>, Rational)> {
    let n = h.nvars();
    let ones = vec![Rational::one(); n];
    let ramp: Vec<Rational> = (1..=n as i64).map(Rational::from).collect();
    probe_points(n).chain([ones, ramp]).find_map(|p| {
        let v = h.evaluate(&p);
        (!v.is_zero()).then_some((p, v))
    })
}

fn rank_stage(lr: &LinearRank) -> Stage {
    Stage {
        name: "linear rank".into(),
        increment: lr.rank,
        evidence: Evidence::LinearRank {
            roster: lr.matrix.roster.clone(),
            matrix: lr.matrix.rows.clone(),
            rank: lr.rank,
            pivots: lr.pivot_names(),
            pivot_constants: lr.rows.iter().map(|i| i + 1).collect(),
        },
    }
}

/// Runs the analysis selected by `plan`.
pub fn analyze(
    system: SystemDescriptor,
    seq: &LyapunovSequence,
    plan: &AnalysisPlan,
) -> Result<CyclicityReport, BifurcationError> {
    let d = seq.constants.first().map(|l| l.degree()).unwrap_or(0);
    let lr = match &plan.pivots {
        Some(p) => linear_rank_with_pivots(seq, p)?,
        None => linear_rank(seq)?,
    };
    let mut stages = vec![rank_stage(&lr)];
    let mut notes = Vec::new();
    if let Some(g) = &plan.gamma {
        gamma_stage(seq, &lr, g, &mut stages, &mut notes)?;
    } else if plan.higher_order {
        if d < 2 {
            notes.push("jet degree 1: no higher-order analysis".into());
        } else {
            tail_stages(seq, &lr, d, &mut stages, &mut notes)?;
        }
    }
    let lower_bound = stages.iter().map(|s| s.increment).sum();
    Ok(CyclicityReport {
        system,
        n: seq.constants.len(),
        d,
        rank: lr.rank,
        pivots: lr.pivot_names(),
        stages,
        notes,
        lower_bound,
    })
}

fn tail_stages(
    seq: &LyapunovSequence,
    lr: &LinearRank,
    d: u32,
    stages: &mut Vec<Stage>,
    notes: &mut Vec<String>,
) -> Result<(), BifurcationError> {
    let tail = normalize_tail(seq, lr)?;
    let Some(pos) = tail.tail.iter().position(|t| t.degree.is_some()) else {
        notes.push(format!("every constant beyond the pivots vanishes through degree {d}"));
        return Ok(());
    };
    let first = &tail.tail[pos];
    let m = first.degree.expect("nonzero form");
    let h = &first.h;
    let hd = PolyData::from_poly(h);
    let factors = if m == 2 { factor_quadratic(h) } else { None };
    let evidence = if let (Some((l1, l2)), Some((point, value))) = (&factors, nonzero_point(h)) {
        Some(Evidence::QuadraticFactor {
            k: first.k,
            h: hd.clone(),
            factors: [PolyData::from_poly(l1), PolyData::from_poly(l2)],
            point,
            value,
        })
    } else if let Some((positive, negative)) = sign_change_witness(h) {
        Some(Evidence::SignChange { k: first.k, h: hd.clone(), positive, negative })
    } else {
        nonzero_point(h).map(|(point, value)| Evidence::Nonvanishing { k: first.k, h: hd.clone(), point, value })
    };
    let Some(evidence) = evidence else {
        notes.push(format!("no rational point found where h{} is nonzero", first.k));
        return Ok(());
    };
    stages.push(Stage { name: format!("leading form h{}", first.k), increment: 1, evidence });

    let Some(next) = tail.tail.get(pos + 1) else {
        notes.push(format!("no constant after L{} was computed", first.k));
        return Ok(());
    };
    let next_h = next.jet.homogeneous_part(m);
    let prop = proportionality_check(h, &next_h);
    if !prop.proportional {
        match hypersurface_witness(h, &next_h) {
            Some(w) => stages.push(Stage {
                name: format!("h{} = 0 with h{} != 0", first.k, next.k),
                increment: 1,
                evidence: Evidence::HypersurfaceWitness {
                    k: first.k,
                    next: next.k,
                    h: hd,
                    next_h: PolyData::from_poly(&next_h),
                    regular_var: tail.free_parameters[w.regular_var].clone(),
                    point: w.point,
                    partial: w.partial,
                    next_value: w.next_value,
                },
            }),
            None => notes.push(format!("no certified increment at order {m}: no rational witness on h{} = 0", first.k)),
        }
        return Ok(());
    }
    let ratio = prop.ratio.expect("proportional forms have a ratio");
    stages.push(Stage {
        name: format!("h{} proportional to h{}", next.k, first.k),
        increment: 0,
        evidence: Evidence::Proportional {
            k: first.k,
            next: next.k,
            h: hd.clone(),
            next_h: PolyData::from_poly(&next_h),
            ratio: ratio.clone(),
        },
    });
    let Some((l1, l2)) = factors else {
        notes.push(format!("no certified increment beyond order {m}"));
        return Ok(());
    };
    if d < m + 1 {
        notes.push(format!("no certified increment at order {m}; order {} needs jet degree {}", m + 1, m + 1));
        return Ok(());
    }
    let shifted = next.jet.try_sub(&first.jet.scale(&ratio))?;
    if shifted.poly().min_degree() != Some(m + 1) {
        notes.push(format!("no certified increment at order {}", m + 1));
        return Ok(());
    }
    let g = shifted.homogeneous_part(m + 1);
    match cubic_square_structure(&g, (&l1, &l2)) {
        Some(structure) => stages.push(Stage {
            name: format!("order-{} structure of L{} - ratio*L{}", m + 1, next.k, first.k),
            increment: 1,
            evidence: Evidence::CubicStructure {
                k: first.k,
                next: next.k,
                h: hd,
                ratio,
                cubic: PolyData::from_poly(&g),
                structure,
            },
        }),
        None => notes.push(format!("no certified increment at order {}", m + 1)),
    }
    Ok(())
}

fn gamma_stage(
    seq: &LyapunovSequence,
    lr: &LinearRank,
    plan: &GammaPlan,
    stages: &mut Vec<Stage>,
    notes: &mut Vec<String>,
) -> Result<(), BifurcationError> {
    let exp = gamma_expand(seq, &plan.spec)?;
    let n = plan.equations;
    if exp.constants.len() < n + 1 {
        return Err(BifurcationError::Domain(format!(
            "{} scaled equations plus the next one need N >= {}, have {}",
            n,
            n + 1,
            exp.constants.len()
        )));
    }
    let index = |name: &String| {
        exp.u_names.iter().position(|u| u == name).ok_or_else(|| BifurcationError::UnknownParameter(name.clone()))
    };
    let lin: Vec<usize> = plan.linear_vars.iter().map(index).collect::<Result<_, _>>()?;
    let nonlin: Vec<usize> = plan.nonlinear_vars.iter().map(index).collect::<Result<_, _>>()?;
    let eqs = &exp.constants[..n];
    let next = &exp.constants[n];
    let sol = solve_small_system(eqs, &lin, &nonlin)?;
    let mut certs: Vec<SolutionCertificate> =
        sol.solutions.iter().map(|s| transversality_certificate(eqs, s, next)).collect();
    let Some(pos) = certs.iter().position(|c| c.valid) else {
        notes.push(format!(
            "{} rational solution(s) of the scaled system, none transversal with a nonvanishing next constant",
            sol.solutions.len()
        ));
        return Ok(());
    };
    let certificate = certs.remove(pos);
    let increment = (n + 1).saturating_sub(lr.rank);
    stages.push(Stage {
        name: format!("transversal zero of the first {n} scaled constants"),
        increment,
        evidence: Evidence::Transversal {
            equations: eqs.iter().map(PolyData::from_poly).collect(),
            next_equation: PolyData::from_poly(next),
            solutions_found: sol.solutions.len(),
            certificate,
            declined: certs,
        },
    });
    Ok(())
}

fn fail(msg: impl Into<String>) -> BifurcationError {
    BifurcationError::Verification(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), BifurcationError> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

fn linear_form(p: &SparsePoly<Rational>) -> bool {
    !p.is_zero() && p.terms().iter().all(|(m, _)| m.degree() == 1)
}

/// Re-checks every evidence item of a report from its serialized data and
/// the bookkeeping of the bound. Nothing is recomputed from the system.
pub fn verify_report(report: &CyclicityReport) -> Result<(), BifurcationError> {
    let mut rank = None;
    for (i, stage) in report.stages.iter().enumerate() {
        let name = &stage.name;
        let expect_inc = |n: usize| ensure(stage.increment == n, || format!("stage `{name}` claims {}", stage.increment));
        match &stage.evidence {
            Evidence::LinearRank { roster: names, matrix, rank: r, pivots, pivot_constants } => {
                ensure(i == 0, || "the linear rank must be the first stage".into())?;
                let m = if matrix.is_empty() {
                    Matrix::zeros(0, names.len())
                } else {
                    Matrix::from_rows(matrix.clone()).map_err(|_| fail("ragged linear-part matrix"))?
                };
                ensure(m.cols() == names.len(), || "matrix width differs from the roster".into())?;
                let (got, _) = exact_rank(&m);
                ensure(got == *r && *r == report.rank, || format!("rank is {got}, report says {r}"))?;
                ensure(pivots == &report.pivots && pivots.len() == *r, || "pivot list mismatch".into())?;
                let cols: Vec<usize> = pivots
                    .iter()
                    .map(|p| names.iter().position(|n| n == p).ok_or_else(|| fail(format!("unknown pivot {p}"))))
                    .collect::<Result<_, _>>()?;
                let rows: Vec<usize> = pivot_constants.iter().map(|k| k.wrapping_sub(1)).collect();
                ensure(rows.iter().all(|&k| k < m.rows()), || "pivot constant out of range".into())?;
                let block = m.select(&rows, &cols);
                ensure(block.rows() == block.cols() && block.determinant().is_ok_and(|d| !d.is_zero()), || {
                    "pivot block is singular".into()
                })?;
                expect_inc(*r)?;
                rank = Some(*r);
            }
            Evidence::QuadraticFactor { h, factors, point, value, .. } => {
                let h = h.to_poly()?;
                let (a, b) = (factors[0].to_poly()?, factors[1].to_poly()?);
                ensure(linear_form(&a) && linear_form(&b), || "factors are not linear forms".into())?;
                ensure(&a * &b == h, || "factors do not multiply to the form".into())?;
                ensure(&h.evaluate(point) == value && !value.is_zero(), || "form vanishes at the point".into())?;
                expect_inc(1)?;
            }
            Evidence::SignChange { h, positive, negative, .. } => {
                let h = h.to_poly()?;
                ensure(h.evaluate(positive).is_positive() && h.evaluate(negative).is_negative(), || {
                    "no sign change at the given points".into()
                })?;
                expect_inc(1)?;
            }
            Evidence::Nonvanishing { h, point, value, .. } => {
                let h = h.to_poly()?;
                ensure(&h.evaluate(point) == value && !value.is_zero(), || "form vanishes at the point".into())?;
                expect_inc(1)?;
            }
            Evidence::Proportional { h, next_h, ratio, .. } => {
                ensure(h.to_poly()?.scale(ratio) == next_h.to_poly()?, || "forms are not proportional".into())?;
                expect_inc(0)?;
            }
            Evidence::HypersurfaceWitness { h, next_h, point, regular_var, partial, next_value, .. } => {
                let h = h.to_poly()?;
                let next_h = next_h.to_poly()?;
                let v = h
                    .roster()
                    .iter()
                    .position(|n| n == regular_var)
                    .ok_or_else(|| fail(format!("unknown variable {regular_var}")))?;
                ensure(h.evaluate(point).is_zero(), || "point is not on the hypersurface".into())?;
                ensure(&h.gradient()[v].evaluate(point) == partial && !partial.is_zero(), || {
                    "hypersurface is singular at the point".into()
                })?;
                ensure(&next_h.evaluate(point) == next_value && !next_value.is_zero(), || {
                    "next form vanishes at the point".into()
                })?;
                expect_inc(1)?;
            }
            Evidence::CubicStructure { h, cubic, structure, .. } => {
                let h = h.to_poly()?;
                let g = cubic.to_poly()?;
                let l = structure.restricted_by.to_poly()?;
                ensure(linear_form(&l) && h.try_div_exact(&l).is_ok(), || "hyperplane is not a factor".into())?;
                let (_, images) = hyperplane_substitution(&l).ok_or_else(|| fail("empty hyperplane"))?;
                let restricted = g.compose(&images, g.roster().clone());
                ensure(restricted == structure.restricted.to_poly()?, || "restriction mismatch".into())?;
                let sq = structure.square.to_poly()?;
                let simple = structure.simple.to_poly()?;
                ensure(linear_form(&sq) && linear_form(&simple), || "factors are not linear".into())?;
                ensure(!proportionality_check(&sq, &simple).proportional, || "factors are dependent".into())?;
                ensure(&(&sq * &sq) * &simple == restricted, || "restricted cubic is not l'^2 l''".into())?;
                expect_inc(1)?;
            }
            Evidence::Transversal { equations, next_equation, certificate, .. } => {
                let eqs: Vec<SparsePoly<Rational>> = equations.iter().map(|e| e.to_poly()).collect::<Result<_, _>>()?;
                let next = next_equation.to_poly()?;
                let redo = transversality_certificate(&eqs, &certificate.assignment, &next);
                ensure(redo == *certificate && redo.valid, || "certificate does not re-verify".into())?;
                let r = rank.ok_or_else(|| fail("transversal stage before the rank"))?;
                expect_inc((eqs.len() + 1).saturating_sub(r))?;
            }
        }
    }
    ensure(rank.is_some(), || "report has no linear rank stage".into())?;
    let total: usize = report.stages.iter().map(|s| s.increment).sum();
    ensure(total == report.lower_bound, || format!("increments sum to {total}, bound is {}", report.lower_bound))
}

/// A named, reproducible analysis of a catalog instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub system: &'static str,
    pub condition: &'static str,
    pub overrides: Vec<(&'static str, &'static str)>,
    pub pinned: Vec<&'static str>,
    pub n: usize,
    pub jet: u32,
    pub plan: AnalysisPlan,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// All presets.
pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "theorem-1.2",
            summary: "jerk condition g: weighted scaling with 11 transversal equations, bound 12",
            system: "jerk",
            condition: "g",
            overrides: vec![],
            pinned: vec!["b020", "b101", "b110", "b200", "c002", "c011"],
            n: 12,
            jet: 2,
            plan: AnalysisPlan {
                pivots: Some(names(&["a002", "a011", "a020", "a101", "a110", "a200", "b002", "b011"])),
                higher_order: false,
                gamma: Some(GammaPlan {
                    spec: GammaSpec {
                        linear_constants: (1..=8).collect(),
                        linear_pivots: names(&["a002", "a011", "a020", "a101", "a110", "a200", "b002", "b011"]),
                        linear_weight: 2,
                        scaled: vec![("c020".into(), 1), ("c101".into(), 1), ("c110".into(), 1)],
                        gauge: Some("c200".into()),
                        order: 2,
                    },
                    equations: 11,
                    linear_vars: (1..=8).map(|i| format!("u{i}")).collect(),
                    nonlinear_vars: names(&["u9", "u10", "u11"]),
                }),
            },
        },
        Preset {
            name: "rossler",
            summary: "Rössler c = -1: rank 3, h4 nonzero, h5 proportional to h4, bound 4",
            system: "rossler",
            condition: "all",
            overrides: vec![],
            pinned: vec![],
            n: 5,
            jet: 2,
            plan: AnalysisPlan::default(),
        },
        Preset {
            name: "lorenz",
            summary: "Lorenz (a, b, d) = (-1, 5, 2): rank 2 and a witness on h3 = 0, bound 4",
            system: "lorenz",
            condition: "bautin",
            overrides: vec![],
            pinned: vec![],
            n: 4,
            jet: 2,
            plan: AnalysisPlan::default(),
        },
        Preset {
            name: "moonrand",
            summary: "Moon-Rand (mu, b, c) = (1, 2, 1): rank 2 and a witness on h3 = 0, bound 4",
            system: "moonrand",
            condition: "bautin",
            overrides: vec![],
            pinned: vec![],
            n: 4,
            jet: 2,
            plan: AnalysisPlan::default(),
        },
        Preset {
            name: "ginevalls-a1a3-c",
            summary: "Giné-Valls a1 = a3 = 0 item c: rank 9, h10 factors through c002, bound 10",
            system: "ginevalls",
            condition: "a1a3-c",
            overrides: vec![],
            pinned: vec![],
            n: 11,
            jet: 2,
            plan: AnalysisPlan {
                pivots: Some(names(&["a002", "a011", "a020", "a101", "a110", "a200", "b002", "b011", "c020"])),
                ..AnalysisPlan::default()
            },
        },
        Preset {
            name: "ginevalls-a3a4-c",
            summary: "Giné-Valls a3 = a4 = 0 item c: rank 8, factored h9, order-3 square structure, bound 10",
            system: "ginevalls",
            condition: "a3a4-c",
            overrides: vec![],
            pinned: vec![],
            n: 11,
            jet: 3,
            plan: AnalysisPlan {
                pivots: Some(names(&["a002", "a011", "a020", "a101", "a110", "a200", "b011", "c200"])),
                ..AnalysisPlan::default()
            },
        },
    ]
}

/// Looks a preset up by name.
pub fn preset(name: &str) -> Result<Preset, BifurcationError> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| BifurcationError::Domain(format!("unknown preset `{name}`")))
}

impl Preset {
    /// The unperturbed center's parameter values.
    pub fn assignment(&self) -> Result<Assignment, BifurcationError> {
        let entry = catalog_entry(self.system)?;
        let overrides: Assignment =
            self.overrides.iter().map(|(k, v)| Ok((k.to_string(), v.parse()?))).collect::<Result<_, BifurcationError>>()?;
        Ok(entry.instantiate_condition(self.condition, &overrides)?.0)
    }

    /// Instantiates, perturbs, computes the constants and analyzes.
    pub fn run(&self) -> Result<(LyapunovSequence, CyclicityReport), BifurcationError> {
        let entry = catalog_entry(self.system)?;
        let values = self.assignment()?;
        let base = entry.instantiate(&values)?;
        let perturbed = apply_quadratic_perturbation_pinned(&base, self.jet, &self.pinned)?;
        let seq = lyapunov_constants_with(&perturbed, self.n, LyapunovOptions { keep_h: false, ..Default::default() })?;
        let descriptor = SystemDescriptor {
            name: self.system.to_string(),
            condition: Some(self.condition.to_string()),
            parameters: values,
            pinned: names(&self.pinned),
        };
        let report = analyze(descriptor, &seq, &self.plan)?;
        Ok((seq, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{roster, Jet};
    use crate::lyapcore::Normalization;

    fn seq_of(polys: &[&str], vars: &[&str], d: u32) -> LyapunovSequence {
        let r = roster(vars);
        let constants = polys
            .iter()
            .map(|p| Jet::new(crate::exactalg::parse_poly(p, &r).unwrap(), d))
            .collect::<Vec<_>>();
        LyapunovSequence::from_constants(Normalization::AxisPower, constants)
    }

    fn descriptor() -> SystemDescriptor {
        SystemDescriptor { name: "toy".into(), condition: None, parameters: BTreeMap::new(), pinned: vec![] }
    }

    #[test]
    fn unperturbed_center_has_bound_zero() {
        let seq = seq_of(&["0", "0"], &["p"], 1);
        let rep = analyze(descriptor(), &seq, &AnalysisPlan::default()).unwrap();
        assert_eq!(rep.lower_bound, 0);
        verify_report(&rep).unwrap();
    }

    #[test]
    fn witness_on_quadric_adds_two() {
        // L1 = p, L2 = q² - s², L3 = q·s: h2 = 0 at q = s, h3 there is q² ≠ 0.
        let seq = seq_of(&["p", "q^2 - s^2", "q*s"], &["p", "q", "s"], 2);
        let rep = analyze(descriptor(), &seq, &AnalysisPlan::default()).unwrap();
        assert_eq!(rep.lower_bound, 3);
        verify_report(&rep).unwrap();
        let json = rep.to_json();
        assert_eq!(CyclicityReport::from_json(&json).unwrap(), rep);
    }

    #[test]
    fn proportional_tail_stops_and_tampering_is_caught() {
        let seq = seq_of(&["p", "q*s", "3*q*s"], &["p", "q", "s"], 2);
        let rep = analyze(descriptor(), &seq, &AnalysisPlan::default()).unwrap();
        assert_eq!(rep.lower_bound, 2);
        assert!(matches!(rep.stages[2].evidence, Evidence::Proportional { .. }));
        verify_report(&rep).unwrap();
        let mut bad = rep.clone();
        bad.lower_bound = 3;
        assert!(verify_report(&bad).is_err());
        let mut bad = rep;
        if let Evidence::Proportional { ratio, .. } = &mut bad.stages[2].evidence {
            *ratio = Rational::from(2);
        }
        assert!(verify_report(&bad).is_err());
    }

    #[test]
    fn cubic_structure_on_a_factor_hyperplane() {
        // h2 = q·s, L3 = 2·q·s + q²·t: restricted to s = 0 the cubic is q²·t.
        let seq = seq_of(&["p", "q*s", "2*q*s + q^2*t"], &["p", "q", "s", "t"], 3);
        let rep = analyze(descriptor(), &seq, &AnalysisPlan::default()).unwrap();
        assert_eq!(rep.lower_bound, 3, "{:#?}", rep);
        verify_report(&rep).unwrap();
    }
}
