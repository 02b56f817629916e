use thiserror::Error;

use crate::diversity::AxiomReport;
use crate::ground::SubsetMask;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("ground set size {n} exceeds the cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("ground sets do not match")]
    GroundMismatch,

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("diversity axioms violated ({} violation(s))", report.violations.len())]
    Axioms { report: AxiomReport },

    #[error("function is not in P_X (violating set mask {}, cover cost {cost})", set.bits())]
    NotInP {
        set: SubsetMask,
        cover: Vec<SubsetMask>,
        cost: String,
    },

    #[error("span function is not tight on mask {}", set.bits())]
    NotTight { set: SubsetMask },

    #[error("coordinate minimization failed to reach a fixpoint within {max_sweeps} sweeps")]
    Convergence { max_sweeps: usize },

    #[error("hyperconvexity premise violated for constraint sub-list {sublist:?}: sum of radii {got} < delta_T {required}")]
    Premise {
        sublist: Vec<usize>,
        required: String,
        got: String,
    },

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded (internal error for the programs generated here)")]
    LpUnbounded,

    #[error("graph is disconnected")]
    Disconnected,
}

pub type Result<T> = std::result::Result<T, Error>;
