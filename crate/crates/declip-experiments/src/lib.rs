//! Monte-Carlo harness for the de-clipping algorithms.
//!
//! Three experiments sweep the problem space:
//!
//! * [`run_mmin_experiment`] — average minimum number of non-clipped
//!   samples each algorithm needs for exact restoration, per sparsity
//!   level;
//! * [`run_prob_vs_k`] — recovery probability as a function of sparsity at
//!   a fixed number of non-clipped samples;
//! * [`run_tpcc_phase`] — recovery probability of the greedy pursuit over
//!   the full (K, M) grid.
//!
//! Results land in [`ExperimentTable`]s with a fixed CSV schema. Runs are
//! reproducible: all randomness derives from the config seed through a
//! documented splitting rule ([`seed::derive_seed`]), so identical configs
//! produce byte-identical CSV (up to the optional timestamp line) no
//! matter how trials are scheduled. Trials fan out over rayon when the
//! `parallel` feature (default) is enabled; `DECLIP_THREADS` caps the
//! worker count (0 = auto).

pub mod config;
pub mod demos;
pub mod par;
pub mod runner;
pub mod seed;
pub mod table;

pub use config::{Algo, TrialConfig};
pub use demos::{
    demo_single_tone, demo_support_estimation, demo_two_tone, DemoCase, RecoveryOutcome,
    SingleToneDemo, SupportDemo, TwoToneDemo, SUPPORT_DEMO_SEED,
};
#[cfg(feature = "parallel")]
pub use par::map_trials_parallel;
pub use par::{map_trials, map_trials_sequential};
pub use runner::{
    achievable_m_values, find_m_min, run_declip, run_mmin_experiment, run_prob_vs_k,
    run_tpcc_phase, trial_success,
};
pub use table::{mean_std, ExperimentTable, TableRow};
