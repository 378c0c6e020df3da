//! Restoration of clipped, frequency-sparse signals.
//!
//! A clipped recording replaces every sample beyond the converter's range
//! with the bound itself. When the underlying signal is a concise sum of
//! harmonics (its DFT has few non-zero coefficients), the missing samples
//! can often be restored exactly. This crate provides:
//!
//! * the data model ([`Signal`], [`Spectrum`], [`ClippedObservation`]),
//!   random sparse-signal synthesis, and recovery metrics;
//! * unitary DFT operators, support-restricted least squares, and column
//!   norm weights ([`transforms`]);
//! * the convex baselines: weighted l1 minimization over the non-clipped
//!   samples, with or without bound constraints on the clipped ones
//!   ([`declip_bp`], [`declip_bpcc`]);
//! * the two main algorithms: iteratively reweighted l1 with clipping
//!   constraints ([`declip_rel1cc`]) and greedy Trivial Pursuit with
//!   clipping constraints ([`declip_tpcc`]).
//!
//! Everything is deterministic: randomness enters only through explicit
//! ChaCha8 seeds, and all types are immutable after construction, so
//! operations can run concurrently without shared state.
//!
//! ```
//! use declip_core::{clip, declip_tpcc, is_recovered, synth_sparse_signal,
//!                   SynthSpec, TpccParams, RECOVERY_TOL};
//!
//! let (x, _) = synth_sparse_signal(&SynthSpec::new(128, 4, 7)).unwrap();
//! let level = 0.5 * x.max_abs();
//! let obs = clip(&x, -level, level).unwrap();
//! let restored = declip_tpcc(&obs, &TpccParams::default()).unwrap();
//! assert!(is_recovered(&x, &restored.x_hat, RECOVERY_TOL).unwrap());
//! ```

pub mod algos;
pub mod error;
pub mod l1;
pub mod result;
pub mod signal;
pub mod transforms;

pub use algos::{
    declip_rel1cc, declip_tpcc, estimate_support_from_clipped, top_harmonics, tp_score, Rel1Params,
    TpccParams,
};
pub use error::{Error, Result};
pub use l1::{
    declip_bp, declip_bp_with, declip_bpcc, declip_bpcc_with, solve_weighted_l1,
    solve_weighted_l1_warm, L1Problem, SolverParams, SolverResult, SolverStatus,
};
pub use result::{DeclipResult, DeclipStatus};
pub use signal::{
    clip, clip_level_for_m, is_recovered, read_signal_csv, read_signal_file, recovery_error,
    synth_from_harmonics, synth_sparse_signal, write_signal_csv, write_signal_file,
    ClippedObservation, Harmonic, Signal, Spectrum, SynthSpec, RECOVERY_TOL, SPARSITY_REL_TOL,
};
pub use transforms::{
    column_norm_weights, dft, idft, least_squares_on_support, restricted_synthesis, SupportSet,
    WeightVector, HERMITIAN_TOL,
};

pub use num_complex::Complex64;
