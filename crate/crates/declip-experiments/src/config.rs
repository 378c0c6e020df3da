//! Experiment configuration.

use declip_core::{Error, Rel1Params, Result, TpccParams};
use std::fmt;
use std::str::FromStr;

/// The four de-clipping methods under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    /// Equality-constrained weighted l1 (no clip bounds).
    Bp,
    /// Weighted l1 with clip-bound constraints.
    Bpcc,
    /// Iteratively reweighted l1 with clip-bound constraints.
    Rel1cc,
    /// Greedy trivial pursuit scored on the clipped signal.
    Tpcc,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Bp, Algo::Bpcc, Algo::Rel1cc, Algo::Tpcc];

    pub fn label(self) -> &'static str {
        match self {
            Algo::Bp => "bp",
            Algo::Bpcc => "bpcc",
            Algo::Rel1cc => "rel1cc",
            Algo::Tpcc => "tpcc",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bp" => Ok(Algo::Bp),
            "bpcc" => Ok(Algo::Bpcc),
            "rel1cc" => Ok(Algo::Rel1cc),
            "tpcc" => Ok(Algo::Tpcc),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?} (expected bp|bpcc|rel1cc|tpcc)"
            ))),
        }
    }
}

/// Monte-Carlo sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    /// Signal length.
    pub n_len: usize,
    /// Sparsity levels to sweep.
    pub k_values: Vec<usize>,
    /// Non-clipped sample counts: the single target for the
    /// recovery-probability sweep, the full grid for the phase experiment.
    pub m_values: Vec<usize>,
    /// Trials per sweep cell.
    pub trials: usize,
    /// Master seed; all per-trial seeds derive from it.
    pub seed: u64,
    /// Algorithms to run (the phase experiment always runs TPCC only).
    pub algorithms: Vec<Algo>,
    /// Time-domain l2 threshold for declaring a trial recovered.
    pub recovery_tol: f64,
    pub rel1: Rel1Params,
    pub tpcc: TpccParams,
}

impl TrialConfig {
    /// Standard configuration: N = 128, K in {2,...,10}, M = 70,
    /// 100 trials, all four algorithms.
    pub fn new(seed: u64) -> Self {
        Self {
            n_len: 128,
            k_values: vec![2, 4, 6, 8, 10],
            m_values: vec![70],
            trials: 100,
            seed,
            algorithms: Algo::ALL.to_vec(),
            recovery_tol: declip_core::RECOVERY_TOL,
            rel1: Rel1Params::default(),
            tpcc: TpccParams::default(),
        }
    }

    /// Reduced trial count for fast runs on small machines.
    pub fn ci_preset(seed: u64) -> Self {
        Self {
            trials: 25,
            ..Self::new(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.n_len < 4 {
            return Err(Error::TooShort { len: self.n_len });
        }
        if self.k_values.is_empty() {
            return Err(Error::InvalidParameter("k_values must be non-empty".into()));
        }
        for &k in &self.k_values {
            if k < 2 || !k.is_multiple_of(2) || k > self.n_len - 2 {
                return Err(Error::InvalidSparsity { k, n: self.n_len });
            }
        }
        for &m in &self.m_values {
            if m > self.n_len {
                return Err(Error::InvalidParameter(format!(
                    "m value {m} exceeds signal length {}",
                    self.n_len
                )));
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter(
                "algorithms must be non-empty".into(),
            ));
        }
        if !self.recovery_tol.is_finite() || self.recovery_tol <= 0.0 {
            return Err(Error::InvalidParameter(
                "recovery_tol must be positive".into(),
            ));
        }
        self.rel1.validate()?;
        self.tpcc.validate()
    }

    /// Stable hash of the sweep-relevant fields, recorded in CSV metadata.
    pub fn config_hash(&self) -> u64 {
        let repr = format!(
            "n={};k={:?};m={:?};trials={};seed={};algos={:?};tol={:e};rel1=({},{:e},{:e},{:e},{:e},{});tpcc=({:e},{:?})",
            self.n_len,
            self.k_values,
            self.m_values,
            self.trials,
            self.seed,
            self.algorithms.iter().map(|a| a.label()).collect::<Vec<_>>(),
            self.recovery_tol,
            self.rel1.ell_max,
            self.rel1.eps,
            self.rel1.delta,
            self.rel1.solver.tol_feas,
            self.rel1.solver.tol_gap,
            self.rel1.solver.max_iters,
            self.tpcc.eps_residual,
            self.tpcc.max_support,
        );
        // FNV-1a
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in repr.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}
