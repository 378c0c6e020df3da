//! Common result carrier for the de-clipping algorithms.

use crate::signal::{Signal, Spectrum};
use crate::transforms::SupportSet;

/// Termination status of a de-clipping run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclipStatus {
    /// The algorithm met its own convergence rule.
    Converged,
    /// Greedy support growth ran out of usable candidates before the
    /// residual target was met (the least-squares update would become
    /// underdetermined, so a zero residual would carry no evidence).
    SupportExhausted,
    /// An iteration cap was hit before convergence.
    MaxIters,
    /// An inner convex solve failed (reported infeasible).
    SolverFailure,
}

impl DeclipStatus {
    pub fn is_converged(self) -> bool {
        matches!(self, DeclipStatus::Converged)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeclipStatus::Converged => "converged",
            DeclipStatus::SupportExhausted => "support_exhausted",
            DeclipStatus::MaxIters => "max_iters",
            DeclipStatus::SolverFailure => "solver_failure",
        }
    }
}

/// Outcome of a de-clipping algorithm.
///
/// For the greedy and reweighted algorithms `x_hat` is exactly the
/// synthesis of `alpha_hat`. The convex baselines additionally copy the
/// observed non-clipped samples into `x_hat` (they satisfy the equality
/// constraints to solver tolerance anyway; the substitution removes solver
/// noise), so there `x_hat` may differ from the synthesis by up to that
/// tolerance on non-clipped positions.
#[derive(Debug, Clone)]
pub struct DeclipResult {
    /// Restored time-domain signal.
    pub x_hat: Signal,
    /// Restored spectrum (exactly Hermitian-symmetric).
    pub alpha_hat: Spectrum,
    /// Spectral support containing every non-negligible coefficient of
    /// `alpha_hat`.
    pub support: SupportSet,
    /// Algorithm-level iterations (greedy selections, reweighting rounds,
    /// or inner solver iterations for the one-shot baselines).
    pub iterations: usize,
    /// Final l2 residual on the non-clipped samples, `||y - Phi Psi alpha||`.
    pub final_residual: f64,
    pub status: DeclipStatus,
}
