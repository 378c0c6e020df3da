//! De-clipping algorithms: iteratively reweighted l1 with clipping
//! constraints (ReL1CC) and Trivial Pursuit with clipping constraints
//! (TPCC), plus the plain zero-padded pursuit score kept for ablation.

use crate::error::{Error, Result};
use crate::l1::{
    convex_result, solve_weighted_l1_warm, support_of, L1Problem, SolverParams, SolverStatus,
};
use crate::result::{DeclipResult, DeclipStatus};
use crate::signal::{ClippedObservation, Signal, Spectrum};
use crate::transforms::{
    dft, dft_raw, idft_raw_real, least_squares_on_support, restricted_synthesis, SupportSet,
    WeightVector,
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parameters of the reweighted scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Rel1Params {
    /// Maximum number of weighted solves.
    pub ell_max: usize,
    /// Regularizer in the weight update `w = 1/(|alpha| + eps)`.
    pub eps: f64,
    /// Stop once consecutive iterates differ by less than this (l2).
    pub delta: f64,
    pub solver: SolverParams,
}

impl Default for Rel1Params {
    fn default() -> Self {
        Self {
            ell_max: 10,
            eps: 0.1,
            delta: 1e-6,
            solver: SolverParams::default(),
        }
    }
}

impl Rel1Params {
    pub fn validate(&self) -> Result<()> {
        let bad = |v: f64| !v.is_finite() || v <= 0.0;
        if self.ell_max < 1 || bad(self.eps) || bad(self.delta) {
            return Err(Error::InvalidParameter(
                "need ell_max >= 1, eps > 0, delta > 0".into(),
            ));
        }
        self.solver.validate()
    }
}

/// Parameters of the greedy pursuit.
#[derive(Debug, Clone, PartialEq)]
pub struct TpccParams {
    /// Residual target on the non-clipped samples.
    pub eps_residual: f64,
    /// Cap on the support size; `None` means the number of non-clipped
    /// samples, past which the least-squares update would be
    /// underdetermined and a vanishing residual meaningless.
    pub max_support: Option<usize>,
}

impl Default for TpccParams {
    fn default() -> Self {
        Self {
            eps_residual: 1e-6,
            max_support: None,
        }
    }
}

impl TpccParams {
    pub fn validate(&self) -> Result<()> {
        if !self.eps_residual.is_finite() || self.eps_residual <= 0.0 {
            return Err(Error::InvalidParameter(
                "eps_residual must be positive".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Reweighted l1 with clipping constraints
// ---------------------------------------------------------------------------

/// Weight update `w_i = 1/(|alpha_i| + eps)`.
pub(crate) fn reweight(alpha: &Spectrum, eps: f64) -> WeightVector {
    WeightVector::new(
        alpha
            .coeffs()
            .iter()
            .map(|c| 1.0 / (c.norm() + eps))
            .collect(),
    )
    .expect("positive finite weights")
}

/// De-clip by iteratively reweighted l1 minimization with clipping
/// constraints.
///
/// Starts from unit weights, repeatedly solves the bound-constrained
/// weighted l1 problem, and sharpens the weights with the previous iterate:
/// `w_i = 1/(|alpha_i| + eps)`. Stops after `ell_max` solves or as soon as
/// consecutive iterates differ by less than `delta` in l2; the last iterate
/// is returned.
pub fn declip_rel1cc(obs: &ClippedObservation, params: &Rel1Params) -> Result<DeclipResult> {
    params.validate()?;
    let n = obs.n_len();
    let mut weights = WeightVector::uniform(n, 1.0)?;
    let mut previous: Option<Spectrum> = None;
    let mut warm: Option<Vec<f64>> = None;
    let mut last_solve = None;
    let mut solves = 0;

    for _ in 0..params.ell_max {
        let problem = L1Problem::from_observation(obs, weights.clone(), true)?;
        let sol = solve_weighted_l1_warm(&problem, &params.solver, warm.as_deref());
        solves += 1;
        if sol.status == SolverStatus::Infeasible {
            let mut res = convex_result(obs, sol);
            res.status = DeclipStatus::SolverFailure;
            res.iterations = solves;
            return Ok(res);
        }
        let alpha = sol.alpha.clone();
        let stop = previous
            .as_ref()
            .is_some_and(|prev| alpha.distance(prev) < params.delta);
        weights = reweight(&alpha, params.eps);
        // Warm-start the next solve from the projection of this iterate.
        let mut x = idft_raw_real(alpha.coeffs());
        for (&i, &yv) in obs.omega_nc().iter().zip(obs.y()) {
            x[i] = yv;
        }
        warm = Some(x);
        previous = Some(alpha);
        last_solve = Some(sol);
        if stop {
            break;
        }
    }

    let sol = last_solve.expect("ell_max >= 1 guarantees a solve");
    let alpha = sol.alpha;
    let x_hat = Signal::new(idft_raw_real(alpha.coeffs()))?;
    let final_residual = l2_residual(&alpha, obs)?;
    Ok(DeclipResult {
        support: support_of(&alpha),
        x_hat,
        alpha_hat: alpha,
        iterations: solves,
        final_residual,
        status: match sol.status {
            SolverStatus::Optimal => DeclipStatus::Converged,
            SolverStatus::MaxIters => DeclipStatus::MaxIters,
            SolverStatus::Infeasible => DeclipStatus::SolverFailure,
        },
    })
}

fn l2_residual(alpha: &Spectrum, obs: &ClippedObservation) -> Result<f64> {
    let fitted = restricted_synthesis(alpha, obs.omega_nc())?;
    Ok(fitted
        .iter()
        .zip(obs.y())
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt())
}

// ---------------------------------------------------------------------------
// Trivial pursuit with clipping constraints
// ---------------------------------------------------------------------------

/// De-clip by greedy support growth scored on the clipped signal.
///
/// The score is computed once: the DFT of the clipped signal itself (the
/// clipped values stand in for the missing samples, rather than zeros).
/// Each round moves the largest remaining bin in `[0, N/2]` (ties break to
/// the smallest index) into the support together with its conjugate mirror,
/// then refits the coefficients on the grown support by least squares
/// against the non-clipped samples. Stops when the residual drops to
/// `eps_residual`, or reports `SupportExhausted` when the support would
/// outgrow `max_support`.
pub fn declip_tpcc(obs: &ClippedObservation, params: &TpccParams) -> Result<DeclipResult> {
    params.validate()?;
    let n = obs.n_len();
    let m = obs.m();
    let max_support = params.max_support.unwrap_or(m);

    // match step: score from the clipped signal, computed once
    let mut score: Vec<f64> = dft_raw(obs.x_c())
        .iter()
        .take(n / 2 + 1)
        .map(|c| c.norm())
        .collect();

    let mut support = SupportSet::new(n);
    let mut alpha = Spectrum::zeros(n);
    let mut residual = l2(obs.y());
    let mut iterations = 0;
    let mut status = DeclipStatus::Converged;

    while residual > params.eps_residual {
        // identify: largest remaining bin, smallest index on ties
        let (best, best_mag) =
            score
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0usize, -1.0f64),
                    |(bi, bm), (i, v)| {
                        if v > bm {
                            (i, v)
                        } else {
                            (bi, bm)
                        }
                    },
                );
        let added_dof = if best == 0 || (n.is_multiple_of(2) && best == n / 2) {
            1
        } else {
            2
        };
        if best_mag <= 0.0 || support.len() + added_dof > max_support {
            status = DeclipStatus::SupportExhausted;
            break;
        }
        support.insert_conjugate(best)?;
        score[best] = 0.0;

        // update: refit on the grown support
        alpha = least_squares_on_support(obs.y(), obs.omega_nc(), &support)?;
        residual = l2_residual(&alpha, obs)?;
        iterations += 1;
    }

    let x_hat = Signal::new(idft_raw_real(alpha.coeffs()))?;
    Ok(DeclipResult {
        x_hat,
        alpha_hat: alpha,
        support,
        iterations,
        final_residual: residual,
        status,
    })
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Pursuit scores and known-sparsity support estimation
// ---------------------------------------------------------------------------

/// Plain pursuit score: coefficient magnitudes of the zero-padded
/// non-clipped samples (the adjoint of the restricted synthesis applied to
/// `y`). Exposed for the ablation against the clipped-value padding used by
/// [`declip_tpcc`].
pub fn tp_score(y: &[f64], omega_nc: &[usize], n_len: usize) -> Result<Vec<f64>> {
    if y.len() != omega_nc.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: omega_nc.len(),
        });
    }
    let mut padded = vec![0.0; n_len];
    for (&i, &v) in omega_nc.iter().zip(y) {
        if i >= n_len {
            return Err(Error::IndexOutOfRange { index: i, n_len });
        }
        padded[i] = v;
    }
    Ok(dft_raw(&padded).iter().map(|c| c.norm()).collect())
}

/// Locations of the `count/2` largest-magnitude bins of a spectrum over
/// `[0, N/2]` (ties break to the smallest index), closed over conjugation.
/// This is the support estimate when the sparsity level is known a priori.
pub fn top_harmonics(h: &Spectrum, count: usize) -> Result<SupportSet> {
    let n = h.n_len();
    if count > n {
        return Err(Error::InvalidParameter(format!(
            "count {count} exceeds spectrum length {n}"
        )));
    }
    if !count.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "count {count} must be even (harmonics pair up)"
        )));
    }
    let mut bins: Vec<usize> = (0..=n / 2).collect();
    bins.sort_by(|&a, &b| {
        h.coeffs()[b]
            .norm()
            .partial_cmp(&h.coeffs()[a].norm())
            .expect("finite magnitudes")
            .then(a.cmp(&b))
    });
    SupportSet::from_half_indices(n, &bins[..(count / 2).min(bins.len())])
}

/// Support estimate for an observation with known sparsity: the largest
/// bins of the clipped signal's spectrum.
pub fn estimate_support_from_clipped(obs: &ClippedObservation, count: usize) -> Result<SupportSet> {
    top_harmonics(&dft(&obs.x_c_signal()), count)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
