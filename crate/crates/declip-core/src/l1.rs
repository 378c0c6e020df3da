//! Weighted complex-l1 minimization over Hermitian-symmetric spectra with
//! equality constraints on the non-clipped samples and optional one-sided
//! bound constraints on the clipped samples.
//!
//! Two problems are solved here, differing only in whether the bound
//! constraints are active:
//!
//! * equality only — `min ||W alpha||_1  s.t.  Phi Psi alpha = y`
//! * with bounds  — additionally `Psi alpha >= C_u` on the upper-clipped
//!   positions and `Psi alpha <= C_l` on the lower-clipped ones.
//!
//! The solver is ADMM on the splitting `alpha` (spectrum) vs `z` (time
//! signal) with the consensus constraint `Psi alpha = z`. Because `Psi` is
//! unitary, the `alpha` update is an exact per-coefficient complex
//! soft-threshold of the analysis transform, and the `z` update is a
//! per-sample projection (pin the non-clipped values, clamp the clipped
//! ones when bounds are enabled). Each iteration costs two length-N FFTs.
//! Over-relaxation and residual-balancing of the penalty parameter are
//! used; both are standard for this scheme.
//!
//! Iterates stay Hermitian throughout: the analysis of a real vector is
//! Hermitian, soft-thresholding with a symmetric weight vector preserves
//! the symmetry, and the synthesis of a Hermitian spectrum is real. The
//! returned spectrum is re-symmetrized exactly, so inequality constraints
//! on the (real) synthesis are well-posed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::result::{DeclipResult, DeclipStatus};
use crate::signal::{ClippedObservation, Signal, Spectrum, SPARSITY_REL_TOL};
use crate::transforms::{column_norm_weights, fft_plans, SupportSet, WeightVector};

// ---------------------------------------------------------------------------
// Problem and parameters
// ---------------------------------------------------------------------------

/// A weighted l1 problem over length-N Hermitian spectra.
#[derive(Debug, Clone)]
pub struct L1Problem {
    n_len: usize,
    weights: WeightVector,
    omega_nc: Vec<usize>,
    y: Vec<f64>,
    omega_u: Vec<usize>,
    c_upper: f64,
    omega_l: Vec<usize>,
    c_lower: f64,
    inequalities_enabled: bool,
}

impl L1Problem {
    /// Assemble a problem from raw parts. The index sets must be disjoint
    /// and in range; `y` pairs with `omega_nc`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_len: usize,
        weights: WeightVector,
        omega_nc: Vec<usize>,
        y: Vec<f64>,
        omega_u: Vec<usize>,
        c_upper: f64,
        omega_l: Vec<usize>,
        c_lower: f64,
        inequalities_enabled: bool,
    ) -> Result<Self> {
        if weights.len() != n_len {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: n_len,
            });
        }
        if y.len() != omega_nc.len() {
            return Err(Error::LengthMismatch {
                left: y.len(),
                right: omega_nc.len(),
            });
        }
        if !c_lower.is_finite() || !c_upper.is_finite() || c_lower >= c_upper {
            return Err(Error::InvalidClipBounds {
                lower: c_lower,
                upper: c_upper,
            });
        }
        let mut seen = vec![false; n_len];
        for &i in omega_nc.iter().chain(&omega_u).chain(&omega_l) {
            if i >= n_len {
                return Err(Error::IndexOutOfRange { index: i, n_len });
            }
            if seen[i] {
                return Err(Error::InvalidParameter(format!(
                    "index {i} appears in more than one constraint set"
                )));
            }
            seen[i] = true;
        }
        Ok(Self {
            n_len,
            weights,
            omega_nc,
            y,
            omega_u,
            c_upper,
            omega_l,
            c_lower,
            inequalities_enabled,
        })
    }

    /// Problem for a clipped observation: equality on the non-clipped
    /// samples, bounds on the clipped ones when `inequalities_enabled`.
    pub fn from_observation(
        obs: &ClippedObservation,
        weights: WeightVector,
        inequalities_enabled: bool,
    ) -> Result<Self> {
        Self::new(
            obs.n_len(),
            weights,
            obs.omega_nc().to_vec(),
            obs.y().to_vec(),
            obs.omega_u().to_vec(),
            obs.c_upper(),
            obs.omega_l().to_vec(),
            obs.c_lower(),
            inequalities_enabled,
        )
    }

    pub fn n_len(&self) -> usize {
        self.n_len
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn inequalities_enabled(&self) -> bool {
        self.inequalities_enabled
    }

    /// Max constraint violation of a spectrum's synthesis (l-infinity).
    pub fn feasibility_residual(&self, alpha: &Spectrum) -> Result<f64> {
        if alpha.n_len() != self.n_len {
            return Err(Error::LengthMismatch {
                left: alpha.n_len(),
                right: self.n_len,
            });
        }
        let x = crate::transforms::idft_raw_real(alpha.coeffs());
        Ok(self.feasibility_residual_time(&x))
    }

    fn feasibility_residual_time(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (&i, &yv) in self.omega_nc.iter().zip(&self.y) {
            worst = worst.max((x[i] - yv).abs());
        }
        if self.inequalities_enabled {
            for &i in &self.omega_u {
                worst = worst.max(self.c_upper - x[i]);
            }
            for &i in &self.omega_l {
                worst = worst.max(x[i] - self.c_lower);
            }
        }
        worst.max(0.0)
    }

    /// Weighted l1 objective of a spectrum.
    pub fn objective(&self, alpha: &Spectrum) -> f64 {
        alpha
            .coeffs()
            .iter()
            .zip(self.weights.as_slice())
            .map(|(c, w)| w * c.norm())
            .sum()
    }

    /// Projection onto the constraint set, applied per sample.
    fn project(&self, x: &mut [f64]) {
        for (&i, &yv) in self.omega_nc.iter().zip(&self.y) {
            x[i] = yv;
        }
        if self.inequalities_enabled {
            for &i in &self.omega_u {
                x[i] = x[i].max(self.c_upper);
            }
            for &i in &self.omega_l {
                x[i] = x[i].min(self.c_lower);
            }
        }
    }

    /// The clipped signal implied by the problem data; the default start.
    fn clipped_signal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n_len];
        for (&i, &yv) in self.omega_nc.iter().zip(&self.y) {
            x[i] = yv;
        }
        for &i in &self.omega_u {
            x[i] = self.c_upper;
        }
        for &i in &self.omega_l {
            x[i] = self.c_lower;
        }
        x
    }
}

/// Solver tolerances and iteration cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Max allowed constraint violation of the returned spectrum (absolute).
    pub tol_feas: f64,
    /// Relative stationarity (dual-residual) tolerance.
    pub tol_gap: f64,
    pub max_iters: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            tol_feas: 1e-8,
            tol_gap: 1e-8,
            max_iters: 50_000,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |v: f64| !v.is_finite() || v <= 0.0;
        if bad(self.tol_feas) || bad(self.tol_gap) || self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "solver tolerances and max_iters must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    MaxIters,
    Infeasible,
}

/// Solution of a weighted l1 problem.
#[derive(Debug, Clone)]
pub struct SolverResult {
    /// Minimizer (exactly Hermitian-symmetric).
    pub alpha: Spectrum,
    pub status: SolverStatus,
    /// Max constraint violation of `alpha` (l-infinity). `Optimal` implies
    /// this is at most `tol_feas`.
    pub feas_residual: f64,
    /// Weighted l1 objective at `alpha`.
    pub objective: f64,
    pub iterations: usize,
}

// ---------------------------------------------------------------------------
// ADMM solver
// ---------------------------------------------------------------------------

const RELAXATION: f64 = 1.8;
const CHECK_EVERY: usize = 10;
const RHO_BALANCE_EVERY: usize = 50;
const RHO_BALANCE_RATIO: f64 = 10.0;
const RHO_MIN: f64 = 1e-4;
const RHO_MAX: f64 = 1e4;

/// Solve a weighted l1 problem from the default start (the clipped signal).
pub fn solve_weighted_l1(problem: &L1Problem, params: &SolverParams) -> SolverResult {
    solve_weighted_l1_warm(problem, params, None)
}

/// Solve with an optional time-domain warm start. The start is projected
/// onto the constraint set before iterating; `None` starts from the clipped
/// signal itself.
pub fn solve_weighted_l1_warm(
    problem: &L1Problem,
    params: &SolverParams,
    warm_start: Option<&[f64]>,
) -> SolverResult {
    params.validate().expect("invalid solver parameters");
    let n = problem.n_len;
    let (fwd, inv) = fft_plans(n);
    let scale = 1.0 / (n as f64).sqrt();

    // Weights symmetrized over conjugate bins; on the Hermitian feasible
    // set this leaves the objective unchanged and keeps iterates symmetric.
    let w = problem.weights.as_slice();
    let w_sym: Vec<f64> = (0..n).map(|k| 0.5 * (w[k] + w[(n - k) % n])).collect();

    let mut z: Vec<f64> = match warm_start {
        Some(x0) if x0.len() == n => x0.to_vec(),
        _ => problem.clipped_signal(),
    };
    problem.project(&mut z);
    let mut u = vec![0.0f64; n];
    let mut rho = 1.0f64;

    let mut alpha = vec![Complex64::new(0.0, 0.0); n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut v = vec![0.0f64; n];
    let mut z_prev = vec![0.0f64; n];

    let mut iterations = 0;
    let mut converged = false;
    let mut r_pri = f64::INFINITY;
    let mut s_dual = f64::INFINITY;

    while iterations < params.max_iters {
        iterations += 1;
        let check = iterations % CHECK_EVERY == 0 || iterations == params.max_iters;
        if check {
            z_prev.copy_from_slice(&z);
        }

        // alpha-update: complex soft-threshold of the analysis of z - u
        for i in 0..n {
            buf[i] = Complex64::new(z[i] - u[i], 0.0);
        }
        fwd.process(&mut buf);
        for k in 0..n {
            let g = buf[k] * scale;
            let t = w_sym[k] / rho;
            let mag = g.norm();
            alpha[k] = if mag > t {
                g * ((mag - t) / mag)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }

        // v = synthesis of alpha (real because alpha is Hermitian)
        buf.copy_from_slice(&alpha);
        inv.process(&mut buf);
        for (vi, c) in v.iter_mut().zip(&buf) {
            *vi = c.re * scale;
        }

        // relaxed z-update and scaled dual update: u first accumulates
        // vhat + u_old, z becomes its projection, and the difference is
        // the new scaled dual
        for i in 0..n {
            let vhat = RELAXATION * v[i] + (1.0 - RELAXATION) * z[i];
            u[i] += vhat;
        }
        z.copy_from_slice(&u);
        problem.project(&mut z);
        for i in 0..n {
            u[i] -= z[i];
        }

        if check {
            r_pri = l2_diff(&v, &z);
            s_dual = rho * l2_diff(&z, &z_prev);
            let eps_dual = params.tol_gap * (1.0 + rho * l2(&u));
            if r_pri <= params.tol_feas && s_dual <= eps_dual {
                converged = true;
                break;
            }
            if iterations % RHO_BALANCE_EVERY == 0 {
                if r_pri > RHO_BALANCE_RATIO * s_dual && rho < RHO_MAX {
                    rho *= 2.0;
                    u.iter_mut().for_each(|x| *x *= 0.5);
                } else if s_dual > RHO_BALANCE_RATIO * r_pri && rho > RHO_MIN {
                    rho *= 0.5;
                    u.iter_mut().for_each(|x| *x *= 2.0);
                }
            }
        }
    }

    let spectrum = Spectrum::new(alpha).expect("finite iterate").symmetrized();
    let x_raw = crate::transforms::idft_raw_real(spectrum.coeffs());
    let feas_residual = problem.feasibility_residual_time(&x_raw);
    let objective = problem.objective(&spectrum);

    let status = if converged && feas_residual <= params.tol_feas {
        SolverStatus::Optimal
    } else if !converged
        && r_pri > (1e6 * params.tol_feas).max(1e-2 * (l2(&problem.y) + 1.0))
        && s_dual <= 10.0 * params.tol_gap * (1.0 + rho * l2(&u))
    {
        // Stalled at a point far from feasibility while the iterates have
        // stopped moving: the constraint set is (numerically) empty.
        SolverStatus::Infeasible
    } else {
        SolverStatus::MaxIters
    };

    SolverResult {
        alpha: spectrum,
        status,
        feas_residual,
        objective,
        iterations,
    }
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// Convex de-clipping baselines
// ---------------------------------------------------------------------------

/// De-clip by equality-constrained weighted l1 minimization (no bound
/// constraints on the clipped samples).
pub fn declip_bp(obs: &ClippedObservation) -> Result<DeclipResult> {
    declip_convex(obs, false, &SolverParams::default())
}

/// De-clip by weighted l1 minimization with clipping bound constraints.
pub fn declip_bpcc(obs: &ClippedObservation) -> Result<DeclipResult> {
    declip_convex(obs, true, &SolverParams::default())
}

pub fn declip_bp_with(obs: &ClippedObservation, params: &SolverParams) -> Result<DeclipResult> {
    declip_convex(obs, false, params)
}

pub fn declip_bpcc_with(obs: &ClippedObservation, params: &SolverParams) -> Result<DeclipResult> {
    declip_convex(obs, true, params)
}

fn declip_convex(
    obs: &ClippedObservation,
    inequalities: bool,
    params: &SolverParams,
) -> Result<DeclipResult> {
    let weights = column_norm_weights(obs.omega_nc(), obs.n_len())?;
    let problem = L1Problem::from_observation(obs, weights, inequalities)?;
    let sol = solve_weighted_l1(&problem, params);
    Ok(convex_result(obs, sol))
}

/// Package a solver result: synthesize, copy the observed samples into the
/// non-clipped positions, and extract the support.
pub(crate) fn convex_result(obs: &ClippedObservation, sol: SolverResult) -> DeclipResult {
    let mut x = crate::transforms::idft_raw_real(sol.alpha.coeffs());
    let residual_nc = l2_at(&x, obs.omega_nc(), obs.y());
    for (&i, &yv) in obs.omega_nc().iter().zip(obs.y()) {
        x[i] = yv;
    }
    let support = support_of(&sol.alpha);
    let status = match sol.status {
        SolverStatus::Optimal => DeclipStatus::Converged,
        SolverStatus::MaxIters => DeclipStatus::MaxIters,
        SolverStatus::Infeasible => DeclipStatus::SolverFailure,
    };
    DeclipResult {
        x_hat: Signal::new(x).expect("finite synthesis"),
        alpha_hat: sol.alpha,
        support,
        iterations: sol.iterations,
        final_residual: residual_nc,
        status,
    }
}

fn l2_at(x: &[f64], idx: &[usize], y: &[f64]) -> f64 {
    idx.iter()
        .zip(y)
        .map(|(&i, &v)| (x[i] - v) * (x[i] - v))
        .sum::<f64>()
        .sqrt()
}

/// Support of all non-negligible coefficients of a Hermitian spectrum.
pub(crate) fn support_of(alpha: &Spectrum) -> SupportSet {
    let n = alpha.n_len();
    let mut s = SupportSet::new(n);
    let threshold = SPARSITY_REL_TOL * alpha.max_abs();
    if threshold == 0.0 {
        return s;
    }
    for k in 0..=n / 2 {
        if alpha.coeffs()[k].norm() > threshold {
            s.insert_conjugate(k).expect("k <= N/2 < N");
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
