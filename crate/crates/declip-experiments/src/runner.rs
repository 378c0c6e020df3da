//! Monte-Carlo experiment runners.

use declip_core::{
    clip, clip_level_for_m, declip_bp_with, declip_bpcc_with, declip_rel1cc, declip_tpcc,
    is_recovered, recovery_error, synth_sparse_signal, ClippedObservation, DeclipResult,
    DeclipStatus, Error, Result, Signal, SynthSpec,
};

use crate::config::{Algo, TrialConfig};
use crate::par::map_trials;
use crate::seed::{derive_seed, tag};
use crate::table::{mean_std, ExperimentTable, TableRow};

/// Redraw budget when a trial's target M is unachievable for the drawn
/// signal (near-ties in its |x| ladder).
const MAX_REDRAWS: u64 = 64;

/// Run one algorithm on an observation with the configured parameters.
pub fn run_declip(algo: Algo, obs: &ClippedObservation, cfg: &TrialConfig) -> Result<DeclipResult> {
    match algo {
        Algo::Bp => declip_bp_with(obs, &cfg.rel1.solver),
        Algo::Bpcc => declip_bpcc_with(obs, &cfg.rel1.solver),
        Algo::Rel1cc => declip_rel1cc(obs, &cfg.rel1),
        Algo::Tpcc => declip_tpcc(obs, &cfg.tpcc),
    }
}

/// Whether a run counts as a successful restoration. An exhausted support
/// is never a success: its vanishing residual carries no evidence.
pub fn trial_success(x: &Signal, res: &DeclipResult, tol: f64) -> bool {
    res.status != DeclipStatus::SupportExhausted
        && is_recovered(x, &res.x_hat, tol).unwrap_or(false)
}

/// Every M < N for which a symmetric clip level exists, descending.
pub fn achievable_m_values(x: &Signal) -> Vec<usize> {
    (0..x.n_len())
        .rev()
        .filter(|&m| clip_level_for_m(x, m).is_ok())
        .collect()
}

/// Minimum number of non-clipped samples at which an algorithm still
/// restores the signal.
///
/// Scans the achievable M values in decreasing order (mildest clipping
/// first) and stops at the first failure; the result is the smallest M
/// that succeeded with every larger tested M also succeeding. `None`
/// means the algorithm failed even at the mildest achievable clipping.
pub fn find_m_min(x: &Signal, algo: Algo, cfg: &TrialConfig) -> Result<Option<usize>> {
    let mut last_success = None;
    for m in achievable_m_values(x) {
        let level = clip_level_for_m(x, m).expect("ladder yields achievable targets");
        let obs = clip(x, -level, level)?;
        debug_assert_eq!(obs.m(), m);
        let res = run_declip(algo, &obs, cfg)?;
        if trial_success(x, &res, cfg.recovery_tol) {
            last_success = Some(m);
        } else {
            break;
        }
    }
    Ok(last_success)
}

/// Draw a trial signal, redrawing (bounded) until the target M is
/// achievable, and clip it to exactly M non-clipped samples.
fn draw_clipped_trial(
    cfg: &TrialConfig,
    experiment: u64,
    k: usize,
    m: usize,
    trial: u64,
) -> Result<(Signal, ClippedObservation)> {
    for attempt in 0..MAX_REDRAWS {
        let seed = derive_seed(cfg.seed, &[experiment, k as u64, m as u64, trial, attempt]);
        let (x, _) = synth_sparse_signal(&SynthSpec::new(cfg.n_len, k, seed))?;
        if let Ok(level) = clip_level_for_m(&x, m) {
            let obs = clip(&x, -level, level)?;
            debug_assert_eq!(obs.m(), m);
            return Ok((x, obs));
        }
    }
    Err(Error::InvalidParameter(format!(
        "no drawable signal reaches M={m} after {MAX_REDRAWS} attempts (K={k})"
    )))
}

/// Average minimum non-clipped count per algorithm and sparsity level.
pub fn run_mmin_experiment(cfg: &TrialConfig) -> Result<ExperimentTable> {
    cfg.validate()?;
    let mut table = ExperimentTable::new("mmin", cfg.seed, cfg.config_hash());
    for &k in &cfg.k_values {
        let per_trial: Vec<Result<Vec<Option<usize>>>> = map_trials(cfg.trials, |t| {
            let seed = derive_seed(cfg.seed, &[tag::MMIN, k as u64, 0, t as u64, 0]);
            let (x, _) = synth_sparse_signal(&SynthSpec::new(cfg.n_len, k, seed))?;
            cfg.algorithms
                .iter()
                .map(|&algo| find_m_min(&x, algo, cfg))
                .collect()
        });
        let per_trial: Vec<Vec<Option<usize>>> = per_trial.into_iter().collect::<Result<_>>()?;
        for (ai, &algo) in cfg.algorithms.iter().enumerate() {
            let found: Vec<f64> = per_trial
                .iter()
                .filter_map(|t| t[ai].map(|m| m as f64))
                .collect();
            let (mean, std) = mean_std(&found);
            table.rows.push(TableRow {
                algorithm: algo,
                k,
                m: mean,
                success: found.len(),
                trials: cfg.trials,
                mean,
                std,
            });
        }
    }
    Ok(table)
}

/// Recovery probability as a function of sparsity at a fixed number of
/// non-clipped samples (the first entry of `m_values`).
pub fn run_prob_vs_k(cfg: &TrialConfig) -> Result<ExperimentTable> {
    cfg.validate()?;
    let &m_target = cfg
        .m_values
        .first()
        .ok_or_else(|| Error::InvalidParameter("m_values must contain the target M".into()))?;
    let mut table = ExperimentTable::new("probk", cfg.seed, cfg.config_hash());
    for &k in &cfg.k_values {
        let outcomes: Vec<Result<Vec<(bool, f64)>>> = map_trials(cfg.trials, |t| {
            let (x, obs) = draw_clipped_trial(cfg, tag::PROB_VS_K, k, m_target, t as u64)?;
            cfg.algorithms
                .iter()
                .map(|&algo| {
                    let res = run_declip(algo, &obs, cfg)?;
                    Ok((
                        trial_success(&x, &res, cfg.recovery_tol),
                        recovery_error(&x, &res.x_hat)?,
                    ))
                })
                .collect()
        });
        let outcomes: Vec<Vec<(bool, f64)>> = outcomes.into_iter().collect::<Result<_>>()?;
        for (ai, &algo) in cfg.algorithms.iter().enumerate() {
            let success = outcomes.iter().filter(|t| t[ai].0).count();
            let errors: Vec<f64> = outcomes.iter().map(|t| t[ai].1).collect();
            let (mean, std) = mean_std(&errors);
            table.rows.push(TableRow {
                algorithm: algo,
                k,
                m: m_target as f64,
                success,
                trials: cfg.trials,
                mean,
                std,
            });
        }
    }
    Ok(table)
}

/// Recovery probability of the greedy pursuit over the full (K, M) grid.
pub fn run_tpcc_phase(cfg: &TrialConfig) -> Result<ExperimentTable> {
    cfg.validate()?;
    if cfg.m_values.is_empty() {
        return Err(Error::InvalidParameter("m_values must be non-empty".into()));
    }
    let mut table = ExperimentTable::new("phase", cfg.seed, cfg.config_hash());
    for &k in &cfg.k_values {
        for &m in &cfg.m_values {
            let outcomes: Vec<Result<(bool, f64)>> = map_trials(cfg.trials, |t| {
                let (x, obs) = draw_clipped_trial(cfg, tag::PHASE, k, m, t as u64)?;
                let res = declip_tpcc(&obs, &cfg.tpcc)?;
                Ok((
                    trial_success(&x, &res, cfg.recovery_tol),
                    recovery_error(&x, &res.x_hat)?,
                ))
            });
            let outcomes: Vec<(bool, f64)> = outcomes.into_iter().collect::<Result<_>>()?;
            let success = outcomes.iter().filter(|o| o.0).count();
            let errors: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
            let (mean, std) = mean_std(&errors);
            table.rows.push(TableRow {
                algorithm: Algo::Tpcc,
                k,
                m: m as f64,
                success,
                trials: cfg.trials,
                mean,
                std,
            });
        }
    }
    Ok(table)
}
