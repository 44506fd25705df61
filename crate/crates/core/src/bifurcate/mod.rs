//! From Lyapunov constants over perturbation parameters to certified lower
//! bounds on the number of bifurcating limit cycles.
//!
//! The first-order count is the rank of the linear parts of `L_1 … L_N`.
//! Beyond it the analysis normalizes the tail (solving the pivot constants for
//! the pivot parameters as jets), inspects the lowest homogeneous parts of the
//! remaining constants and, for the weighted-scaling argument, solves a small
//! polynomial system exactly and certifies transversality. Every increment is
//! backed by an evidence item that [`verify_report`] re-checks from the
//! serialized report alone.

mod certify;
mod forms;
mod gamma;
mod linear;
mod report;
mod solve;
mod tail;

pub use certify::{transversality_certificate, SolutionCertificate};
pub use forms::{factor_quadratic, proportionality_check, sign_change_witness, PolyData, Proportionality};
pub use gamma::{gamma_expand, GammaExpansion, GammaSpec};
pub use linear::{linear_rank, linear_rank_with_pivots, LinearPartMatrix, LinearRank};
pub use report::{
    analyze, preset, presets, verify_report, AnalysisPlan, CyclicityReport, Evidence, GammaPlan, Preset, Stage,
    SystemDescriptor,
};
pub use solve::{resultant, solve_small_system, SmallSystemSolution};
pub use tail::{cubic_square_structure, hypersurface_witness, normalize_tail, CubicStructure, NormalizedTail, TailForm};

use thiserror::Error;

use crate::exactalg::AlgebraError;
use crate::lyapcore::LyapunovError;
use crate::sysmodel::SystemError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BifurcationError {
    #[error("the analysis needs jet degree at least {needed}, found {found}")]
    JetDegree { needed: u32, found: u32 },
    #[error("the unperturbed system is not a center: L{k} has a nonzero constant term")]
    NotACenter { k: usize },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("invalid request: {0}")]
    Domain(String),
    #[error("the system is not zero-dimensional: {0}")]
    PositiveDimensional(String),
    #[error("evidence check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lyapunov(#[from] LyapunovError),
    #[error(transparent)]
    System(#[from] SystemError),
}
