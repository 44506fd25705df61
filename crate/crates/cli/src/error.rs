use std::path::PathBuf;

use hopf3::bifurcate::BifurcationError;
use hopf3::lyapcore::LyapunovError;
use hopf3::numoracle::OracleError;
use hopf3::sysmodel::SystemError;
use thiserror::Error;

/// Exit status for a failed domain check (bad input, not a center, …).
pub const EXIT_DOMAIN: u8 = 1;
/// Exit status for an internal consistency failure.
pub const EXIT_INTEGRITY: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("decimal value `{0}` rejected; write it as an exact rational such as 3/2")]
    DecimalInput(String),
    #[error("malformed value `{value}` for --{flag}")]
    BadValue { flag: &'static str, value: String },
    #[error("no system given; use --system, --file or --preset")]
    NoSystem,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("--{flag} `{given}` conflicts with preset `{preset}`, which uses `{expected}`")]
    PresetConflict { flag: &'static str, given: String, preset: String, expected: String },
    #[error("HOPF3_THREADS must be a positive integer, found `{0}`")]
    Threads(String),
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed weights file: {0}")]
    Weights(String),
    #[error("batch line {line}: {message}")]
    Batch { line: usize, message: String },
    #[error("not a center: L{k} is nonzero")]
    NotACenter { k: usize },
    #[error("the numeric oracle contradicts the exact constants: {0}")]
    OracleInconsistent(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Lyapunov(#[from] LyapunovError),
    #[error(transparent)]
    Bifurcation(#[from] BifurcationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn system_code(e: &SystemError) -> &'static str {
    use SystemError::*;
    match e {
        UnknownEntry(_) => "E_UNKNOWN_SYSTEM",
        UnknownCondition { .. } => "E_UNKNOWN_CONDITION",
        Malformed(_) | MalformedRational { .. } | CanonicalForm { .. } | JetDegree { .. } => "E_MALFORMED_FILE",
        Inadmissible { .. } | ZeroLambda => "E_INADMISSIBLE",
        ConditionViolated { .. } | Underdetermined { .. } => "E_CONDITION",
        MissingParameter { .. } | UnexpectedParameter { .. } | UnknownParameter(_) => "E_PARAMETER",
        AlreadyPerturbed => "E_ALREADY_PERTURBED",
        Domain(_) => "E_DOMAIN",
        Algebra(_) => "E_ALGEBRA",
    }
}

fn lyapunov_code(e: &LyapunovError) -> &'static str {
    match e {
        LyapunovError::ZeroCount => "E_BAD_VALUE",
        LyapunovError::Malformed(_) => "E_MALFORMED_FILE",
        LyapunovError::ImaginaryResidue { .. } | LyapunovError::Residual { .. } | LyapunovError::Integrity(_) => {
            "E_INTEGRITY"
        }
    }
}

fn bifurcation_code(e: &BifurcationError) -> &'static str {
    use BifurcationError::*;
    match e {
        JetDegree { .. } => "E_JET_DEGREE",
        NotACenter { .. } => "E_NOT_A_CENTER",
        UnknownParameter(_) => "E_PARAMETER",
        Integrity(_) | Verification(_) => "E_INTEGRITY",
        Domain(_) => "E_DOMAIN",
        PositiveDimensional(_) => "E_POSITIVE_DIMENSIONAL",
        Algebra(_) => "E_ALGEBRA",
        Lyapunov(l) => lyapunov_code(l),
        System(s) => system_code(s),
    }
}

impl CliError {
    /// Stable machine-readable code printed with every error.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::DecimalInput(_) => "E_DECIMAL_INPUT",
            CliError::BadValue { .. } => "E_BAD_VALUE",
            CliError::NoSystem => "E_NO_SYSTEM",
            CliError::UnknownPreset(_) => "E_UNKNOWN_PRESET",
            CliError::PresetConflict { .. } => "E_PRESET_CONFLICT",
            CliError::Threads(_) => "E_THREADS",
            CliError::Read { .. } | CliError::Write { .. } => "E_IO",
            CliError::Weights(_) => "E_MALFORMED_FILE",
            CliError::Batch { .. } => "E_BATCH",
            CliError::NotACenter { .. } => "E_NOT_A_CENTER",
            CliError::OracleInconsistent(_) => "E_ORACLE_INCONSISTENT",
            CliError::System(e) => system_code(e),
            CliError::Lyapunov(e) => lyapunov_code(e),
            CliError::Bifurcation(e) => bifurcation_code(e),
            CliError::Oracle(e) => match e {
                OracleError::Domain(_) => "E_DOMAIN",
                OracleError::NotPinned(_) => "E_NOT_PINNED",
                OracleError::UnsupportedDirection(_) => "E_UNSUPPORTED_DIRECTION",
                OracleError::StepUnderflow => "E_DIVERGED",
                OracleError::Escaped | OracleError::NoReturn => "E_NO_ESTIMATE",
                OracleError::Csv(_) | OracleError::Io(_) => "E_IO",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.code() {
            "E_INTEGRITY" | "E_ORACLE_INCONSISTENT" => EXIT_INTEGRITY,
            _ => EXIT_DOMAIN,
        }
    }
}
