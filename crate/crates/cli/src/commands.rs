use std::path::Path;

use hopf3::bifurcate::{analyze, preset, presets, verify_report, AnalysisPlan, CyclicityReport, GammaPlan, SystemDescriptor};
use hopf3::exactalg::Rational;
use hopf3::lyapcore::{lyapunov_constants_with, LyapunovOptions, LyapunovSequence};
use hopf3::numoracle::{sign_check_with, write_csv, OracleConfig, Verdict};
use hopf3::sysmodel::{apply_quadratic_perturbation_pinned, catalog_entry, parse_system, Assignment, HopfSystem};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{parse_exact, parse_sets, Command, OracleArgs, RunArgs};
use crate::error::CliError;

/// What a finished command hands back for printing and writing.
pub struct Outcome {
    pub summary: Vec<String>,
    pub result: Value,
    /// A domain or integrity failure discovered after the output was built.
    pub failure: Option<CliError>,
}

/// The configuration as recorded in the report.
#[derive(Serialize)]
struct RecordedConfig<'a> {
    #[serde(flatten)]
    run: &'a RunArgs,
    n: usize,
    jet: u32,
    perturb: bool,
    pinned: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'a OracleArgs>,
}

/// A fully resolved system ready for the pipeline.
struct Resolved {
    descriptor: SystemDescriptor,
    system: HopfSystem,
    n: usize,
    jet: u32,
    perturb: bool,
    pinned: Vec<String>,
    plan: AnalysisPlan,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn default_perturb(cmd: &Command) -> bool {
    matches!(cmd, Command::Rank(_) | Command::HigherOrder(_) | Command::Cyclicity(_))
}

fn default_jet(cmd: &Command) -> u32 {
    match cmd {
        Command::HigherOrder(_) | Command::Cyclicity(_) => 2,
        _ => 1,
    }
}

fn check_conflict(flag: &'static str, given: &Option<String>, preset: &str, expected: &str) -> Result<(), CliError> {
    match given {
        Some(g) if g != expected => Err(CliError::PresetConflict {
            flag,
            given: g.clone(),
            preset: preset.to_string(),
            expected: expected.to_string(),
        }),
        _ => Ok(()),
    }
}

fn resolve(cmd: &Command) -> Result<Resolved, CliError> {
    let args = cmd.run_args();
    let sets: Assignment = parse_sets(&args.set)?.into_iter().collect();
    let perturb = if args.no_perturb {
        false
    } else {
        args.perturb || default_perturb(cmd)
    };

    if let Some(name) = &args.preset {
        if !presets().iter().any(|p| p.name == name) {
            return Err(CliError::UnknownPreset(name.clone()));
        }
        let p = preset(name)?;
        check_conflict("system", &args.system, p.name, p.system)?;
        check_conflict("condition", &args.condition, p.name, p.condition)?;
        let entry = catalog_entry(p.system)?;
        let mut overrides = p.assignment()?;
        overrides.extend(sets);
        let (values, system) = entry.instantiate_condition(p.condition, &overrides)?;
        let pinned = if args.pin.is_empty() { p.pinned.iter().map(|s| s.to_string()).collect() } else { args.pin.clone() };
        let mut plan = p.plan.clone();
        if !args.pivots.is_empty() {
            plan.pivots = Some(args.pivots.clone());
        }
        return Ok(Resolved {
            descriptor: SystemDescriptor {
                name: p.system.to_string(),
                condition: Some(p.condition.to_string()),
                parameters: values,
                pinned: pinned.clone(),
            },
            system,
            n: args.n.unwrap_or(p.n),
            jet: args.jet.unwrap_or(p.jet),
            perturb: !args.no_perturb,
            pinned,
            plan,
        });
    }

    let (descriptor, system) = if let Some(name) = &args.system {
        let entry = catalog_entry(name)?;
        let (values, system) = match &args.condition {
            Some(label) => entry.instantiate_condition(label, &sets)?,
            None => {
                let values = entry.resolve(&sets)?;
                let s = entry.instantiate(&values)?;
                (values, s)
            }
        };
        (SystemDescriptor { name: name.clone(), condition: args.condition.clone(), parameters: values, pinned: vec![] }, system)
    } else if let Some(path) = &args.file {
        let mut system = parse_system(&read(path)?)?;
        if !sets.is_empty() {
            let pairs: Vec<(String, Rational)> = sets.clone().into_iter().collect();
            system = system.substitute_parameters(&pairs)?;
        }
        (SystemDescriptor { name: path.display().to_string(), condition: None, parameters: sets, pinned: vec![] }, system)
    } else {
        return Err(CliError::NoSystem);
    };

    let mut plan = AnalysisPlan::default();
    if !args.pivots.is_empty() {
        plan.pivots = Some(args.pivots.clone());
    }
    if let Some(path) = &args.weights {
        let g: GammaPlan = serde_json::from_str(&read(path)?).map_err(|e| CliError::Weights(e.to_string()))?;
        plan.gamma = Some(g);
    }
    Ok(Resolved {
        descriptor: SystemDescriptor { pinned: args.pin.clone(), ..descriptor },
        system,
        n: args.n.unwrap_or(6),
        jet: args.jet.unwrap_or(default_jet(cmd)),
        perturb,
        pinned: args.pin.clone(),
        plan,
    })
}

fn constants(r: &Resolved) -> Result<LyapunovSequence, CliError> {
    let system = if r.perturb {
        let pins: Vec<&str> = r.pinned.iter().map(String::as_str).collect();
        apply_quadratic_perturbation_pinned(&r.system, r.jet, &pins)?
    } else {
        r.system.clone()
    };
    let opts = LyapunovOptions { keep_h: false, ..Default::default() };
    Ok(lyapunov_constants_with(&system, r.n, opts)?)
}

fn short(text: String) -> String {
    const LIMIT: usize = 160;
    if text.len() <= LIMIT {
        text
    } else {
        let cut = (0..=LIMIT).rev().find(|&i| text.is_char_boundary(i)).unwrap_or(0);
        format!("{} … ({} chars)", &text[..cut], text.len())
    }
}

fn bound_summary(report: &CyclicityReport) -> Vec<String> {
    let mut out = vec![format!("rank = {}", report.rank), format!("pivots: {}", report.pivots.join(", "))];
    for s in &report.stages {
        out.push(format!("stage {}: +{}", s.name, s.increment));
    }
    out.extend(report.notes.iter().map(|n| format!("note: {n}")));
    out.push(format!("certified lower bound: {}", report.lower_bound));
    out
}

fn checked_report(r: &Resolved, seq: &LyapunovSequence, plan: &AnalysisPlan) -> Result<CyclicityReport, CliError> {
    let report = analyze(r.descriptor.clone(), seq, plan)?;
    verify_report(&report)?;
    Ok(report)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Runs one command, returning the summary lines and the JSON document.
pub fn execute(cmd: &Command) -> Result<(Outcome, Value), CliError> {
    let r = resolve(cmd)?;
    let outcome = match cmd {
        Command::Compute(_) => {
            let seq = constants(&r)?;
            let summary =
                seq.constants.iter().enumerate().map(|(i, l)| short(format!("L{} = {}", i + 1, l))).collect();
            let result: Value = serde_json::from_str(&seq.to_json()).expect("sequence JSON");
            Outcome { summary, result, failure: None }
        }
        Command::Rank(_) => {
            let seq = constants(&r)?;
            let plan = AnalysisPlan { higher_order: false, gamma: None, ..r.plan.clone() };
            let report = checked_report(&r, &seq, &plan)?;
            let summary = vec![format!("rank = {}", report.rank), format!("pivots: {}", report.pivots.join(", "))];
            Outcome { summary, result: to_value(&report), failure: None }
        }
        Command::HigherOrder(_) => {
            let seq = constants(&r)?;
            let plan = AnalysisPlan { higher_order: true, gamma: None, ..r.plan.clone() };
            let report = checked_report(&r, &seq, &plan)?;
            Outcome { summary: bound_summary(&report), result: to_value(&report), failure: None }
        }
        Command::Cyclicity(_) => {
            let seq = constants(&r)?;
            let report = checked_report(&r, &seq, &r.plan)?;
            Outcome { summary: bound_summary(&report), result: to_value(&report), failure: None }
        }
        Command::VerifyCenter(_) => {
            let seq = constants(&r)?;
            let first = seq.first_nonzero();
            let summary = match first {
                None => vec![format!("L1..L{} = 0", seq.len())],
                Some(k) => vec![short(format!("L{k} = {}", seq.constants[k - 1]))],
            };
            let result = json!({ "n": seq.len(), "center": first.is_none(), "first_nonzero": first });
            Outcome { summary, result, failure: first.map(|k| CliError::NotACenter { k }) }
        }
        Command::Oracle(o) => oracle(&r, o)?,
    };
    let config = RecordedConfig {
        run: cmd.run_args(),
        n: r.n,
        jet: r.jet,
        perturb: r.perturb,
        pinned: &r.pinned,
        oracle: match cmd {
            Command::Oracle(o) => Some(o),
            _ => None,
        },
    };
    let config = to_value(&config);
    Ok((outcome, config))
}

fn oracle(r: &Resolved, o: &OracleArgs) -> Result<Outcome, CliError> {
    let seq = constants(r)?;
    let radii = o
        .rho
        .iter()
        .map(|t| parse_exact("rho", t).map(|q| q.to_f64()))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let config = OracleConfig { settle_turns: o.settle_turns, tol: 10f64.powi(-o.tol_digits), ..OracleConfig::default() };
    let check = sign_check_with(&r.system, &seq, &radii, &config)?;
    if let Some(path) = &o.csv {
        let file = std::fs::File::create(path).map_err(|source| CliError::Write { path: path.clone(), source })?;
        write_csv(file, &check.samples, &config)?;
    }
    let mut summary: Vec<String> = check
        .samples
        .iter()
        .map(|d| format!("rho0 = {:e}  rho = {:e}  delta_rho = {:e}", d.rho0, d.rho, d.delta_rho))
        .collect();
    if let Some(f) = &check.fit {
        summary.push(format!("fit: order {} (slope {:.4}), sign {:+}", f.fitted_order, f.slope, f.fitted_sign));
    }
    let (line, failure) = match &check.verdict {
        Verdict::Consistent => ("verdict: consistent".to_string(), None),
        Verdict::ConsistentWithZero => ("verdict: consistent with zero".to_string(), None),
        Verdict::Inconclusive { reason } => (format!("verdict: inconclusive ({reason})"), None),
        Verdict::Inconsistent { reason } => {
            (format!("verdict: inconsistent ({reason})"), Some(CliError::OracleInconsistent(reason.clone())))
        }
    };
    summary.push(line);
    let mut result = to_value(&check);
    result["settle_turns"] = json!(config.settle_turns);
    result["tol"] = json!(config.tol);
    Ok(Outcome { summary, result, failure })
}

#[derive(Serialize)]
struct Header<'a> {
    tool: &'static str,
    version: &'static str,
    timestamp_unix: u64,
    output: &'a Path,
}

#[derive(Serialize)]
struct Document<'a> {
    header: Header<'a>,
    command: &'a str,
    config: Value,
    result: Value,
}

/// The JSON document. Everything that differs between identical runs lives
/// in the header.
pub fn document(command: &str, output: &Path, config: Value, result: Value) -> String {
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let header = Header { tool: "hopf3", version: env!("CARGO_PKG_VERSION"), timestamp_unix, output };
    let mut text =
        serde_json::to_string_pretty(&Document { header, command, config, result }).expect("document serializes");
    text.push('\n');
    text
}
