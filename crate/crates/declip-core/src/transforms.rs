//! DFT synthesis/analysis operators and support-restricted least squares.
//!
//! The unitary convention is used throughout: both directions carry a
//! `1/sqrt(N)` factor, so the transform is an isometry (Parseval holds
//! exactly) and the columns of a row-restricted synthesis operator all have
//! norm `sqrt(M/N)`.
//!
//! The forward direction maps time to frequency,
//! `h(k) = 1/sqrt(N) * sum_n x(n) exp(-i 2 pi k n / N)`; the inverse maps a
//! Hermitian-symmetric spectrum back to a real signal.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::signal::{Signal, Spectrum};

/// Relative Hermitian-symmetry tolerance accepted by [`idft`].
pub const HERMITIAN_TOL: f64 = 1e-9;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward and inverse plans for length `n`. Plans are cached per thread;
/// results do not depend on which thread computes them.
pub(crate) fn fft_plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

/// Unitary forward transform of a real vector.
pub(crate) fn dft_raw(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_plans(n).0.process(&mut buf);
    let s = 1.0 / (n as f64).sqrt();
    for c in &mut buf {
        *c *= s;
    }
    buf
}

/// Unitary inverse transform, keeping only the real part. Callers must have
/// checked (or constructed) Hermitian symmetry.
pub(crate) fn idft_raw_real(coeffs: &[Complex64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    fft_plans(n).1.process(&mut buf);
    let s = 1.0 / (n as f64).sqrt();
    buf.iter().map(|c| c.re * s).collect()
}

/// Unitary DFT of a real signal. The result is Hermitian-symmetric up to
/// floating-point roundoff and satisfies Parseval: `||dft(x)|| == ||x||`.
pub fn dft(x: &Signal) -> Spectrum {
    Spectrum::new(dft_raw(x.samples())).expect("finite signal transforms to finite spectrum")
}

/// Unitary inverse DFT of a Hermitian-symmetric spectrum.
///
/// Rejects spectra whose relative symmetry deviation exceeds
/// [`HERMITIAN_TOL`]; such spectra do not represent real signals. The
/// imaginary residue (at most the deviation) is discarded.
pub fn idft(a: &Spectrum) -> Result<Signal> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Signal::new(idft_raw_real(a.coeffs()))
}

/// Evaluate the synthesis `Psi alpha` at the given sample positions only
/// (the action of the row-restricted operator).
pub fn restricted_synthesis(a: &Spectrum, omega_nc: &[usize]) -> Result<Vec<f64>> {
    let n = a.n_len();
    if let Some(&bad) = omega_nc.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            n_len: n,
        });
    }
    let x = idft(a)?;
    Ok(omega_nc.iter().map(|&i| x.samples()[i]).collect())
}

// ---------------------------------------------------------------------------
// Support sets
// ---------------------------------------------------------------------------

/// A conjugate-closed set of spectral indices: `k` in the set implies
/// `(N-k) % N` is too. Grown in conjugate pairs by greedy support
/// estimation and consumed by the restricted least-squares update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    n_len: usize,
    indices: BTreeSet<usize>,
}

impl SupportSet {
    pub fn new(n_len: usize) -> Self {
        Self {
            n_len,
            indices: BTreeSet::new(),
        }
    }

    /// Build from representative bins in `[0, N/2]`; each bin is closed over
    /// conjugation.
    pub fn from_half_indices(n_len: usize, half: &[usize]) -> Result<Self> {
        let mut s = Self::new(n_len);
        for &k in half {
            s.insert_conjugate(k)?;
        }
        Ok(s)
    }

    /// Insert `k` together with its conjugate mirror `(N-k) % N`.
    pub fn insert_conjugate(&mut self, k: usize) -> Result<()> {
        if k >= self.n_len {
            return Err(Error::IndexOutOfRange {
                index: k,
                n_len: self.n_len,
            });
        }
        self.indices.insert(k);
        self.indices.insert((self.n_len - k) % self.n_len);
        Ok(())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.contains(&k)
    }

    /// Number of indices in the set. Because the set is conjugate-closed
    /// this equals the number of real degrees of freedom it spans.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn n_len(&self) -> usize {
        self.n_len
    }

    /// All indices, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.indices.iter().copied().collect()
    }

    /// Representative bins in `[0, N/2]`, ascending.
    pub fn half_indices(&self) -> Vec<usize> {
        self.indices
            .iter()
            .copied()
            .filter(|&k| k <= self.n_len / 2)
            .collect()
    }

    /// True when the other set contains every index of this one.
    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.indices.is_subset(&other.indices)
    }
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Diagonal of a spectral weighting matrix, stored as a vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
}

impl WeightVector {
    /// All entries must be finite and non-negative.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some(index) = w.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { w })
    }

    pub fn uniform(n_len: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n_len])
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }
}

/// Column norms of the row-restricted synthesis operator, used as the
/// diagonal weighting of the l1 objective.
///
/// Under the unitary convention every column of the restricted operator has
/// the same norm `sqrt(M/N)`, so the returned vector is constant.
pub fn column_norm_weights(omega_nc: &[usize], n_len: usize) -> Result<WeightVector> {
    if let Some(&bad) = omega_nc.iter().find(|&&i| i >= n_len) {
        return Err(Error::IndexOutOfRange { index: bad, n_len });
    }
    let norm = (omega_nc.len() as f64 / n_len as f64).sqrt();
    WeightVector::uniform(n_len, norm)
}

// ---------------------------------------------------------------------------
// Support-restricted least squares
// ---------------------------------------------------------------------------

/// Real-parameter column layout for a conjugate-closed support. The
/// variables are scaled so the real parameter norm equals the complex
/// coefficient norm exactly, which makes the minimum-norm real solution the
/// minimum-norm complex solution.
#[derive(Debug, Clone, Copy)]
enum RealColumn {
    /// DC bin: one real coefficient, column `1/sqrt(N)`.
    Dc,
    /// Nyquist bin (even N): one real coefficient, column `(-1)^n/sqrt(N)`.
    Nyquist,
    /// `sqrt(2) * Re(alpha_k)`: column `sqrt(2/N) cos(2 pi k n / N)`.
    Cos(usize),
    /// `sqrt(2) * Im(alpha_k)`: column `-sqrt(2/N) sin(2 pi k n / N)`.
    Sin(usize),
}

fn real_columns(support: &SupportSet) -> Vec<RealColumn> {
    let n = support.n_len();
    let mut cols = Vec::new();
    for k in support.half_indices() {
        if k == 0 {
            cols.push(RealColumn::Dc);
        } else if n.is_multiple_of(2) && k == n / 2 {
            cols.push(RealColumn::Nyquist);
        } else {
            cols.push(RealColumn::Cos(k));
            cols.push(RealColumn::Sin(k));
        }
    }
    cols
}

fn real_column_value(col: RealColumn, row: usize, n: usize) -> f64 {
    let nf = n as f64;
    match col {
        RealColumn::Dc => 1.0 / nf.sqrt(),
        RealColumn::Nyquist => {
            let sign = if row.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign / nf.sqrt()
        }
        RealColumn::Cos(k) => (2.0 / nf).sqrt() * (2.0 * PI * k as f64 * row as f64 / nf).cos(),
        RealColumn::Sin(k) => -(2.0 / nf).sqrt() * (2.0 * PI * k as f64 * row as f64 / nf).sin(),
    }
}

/// Minimum-norm least-squares spectrum restricted to a support.
///
/// Solves `min ||y - Phi Psi alpha||_2` over spectra supported on the
/// conjugate-closed set, with pseudoinverse semantics: rank deficiency
/// yields the minimum-norm solution. Entries off the support are exactly
/// zero and the result is exactly Hermitian-symmetric.
pub fn least_squares_on_support(
    y: &[f64],
    omega_nc: &[usize],
    support: &SupportSet,
) -> Result<Spectrum> {
    let n = support.n_len();
    if y.len() != omega_nc.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: omega_nc.len(),
        });
    }
    if let Some(&bad) = omega_nc.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            n_len: n,
        });
    }
    let cols = real_columns(support);
    if cols.is_empty() || omega_nc.is_empty() {
        return Ok(Spectrum::zeros(n));
    }
    let m = omega_nc.len();
    let b = DMatrix::from_fn(m, cols.len(), |r, c| {
        real_column_value(cols[c], omega_nc[r], n)
    });
    let rhs = DVector::from_row_slice(y);
    let svd = b.svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max().max(1e-300);
    let sol = svd.solve(&rhs, cutoff).expect("SVD computed with U and V");

    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let mut i = 0;
    while i < cols.len() {
        match cols[i] {
            RealColumn::Dc => {
                coeffs[0] = Complex64::new(sol[i], 0.0);
                i += 1;
            }
            RealColumn::Nyquist => {
                coeffs[n / 2] = Complex64::new(sol[i], 0.0);
                i += 1;
            }
            RealColumn::Cos(k) => {
                let re = sol[i] * inv_sqrt2;
                let im = sol[i + 1] * inv_sqrt2;
                coeffs[k] = Complex64::new(re, im);
                coeffs[n - k] = Complex64::new(re, -im);
                i += 2;
            }
            RealColumn::Sin(_) => unreachable!("sin columns are consumed with their cos pair"),
        }
    }
    Spectrum::new(coeffs)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{synth_from_harmonics, synth_sparse_signal, Harmonic, SynthSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(n: usize, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Signal::from_fn(n, |_| rng.gen_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn dft_of_constant_is_dc_only() {
        let x = Signal::new(vec![1.0; 4]).unwrap();
        let h = dft(&x);
        assert!((h.coeffs()[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        for k in 1..4 {
            assert!(h.coeffs()[k].norm() < 1e-12);
        }
    }

    #[test]
    fn dft_of_cosine_hits_the_pair() {
        let x = Signal::from_fn(8, |n| (2.0 * PI * n as f64 / 8.0).cos()).unwrap();
        let h = dft(&x);
        let want = 8f64.sqrt() / 2.0;
        for (k, c) in h.coeffs().iter().enumerate() {
            if k == 1 || k == 7 {
                assert!((c.norm() - want).abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn parseval_holds() {
        let x = random_signal(16, 1);
        let h = dft(&x);
        let hx: f64 = h.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((hx - x.norm()).abs() < 1e-12);
    }

    #[test]
    fn idft_of_zero_is_zero() {
        let x = idft(&Spectrum::zeros(8)).unwrap();
        assert!(x.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn idft_of_unit_pair_is_cosine() {
        let n = 8;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[1] = Complex64::new((n as f64).sqrt() / 2.0, 0.0);
        coeffs[n - 1] = coeffs[1].conj();
        let x = idft(&Spectrum::new(coeffs).unwrap()).unwrap();
        for (i, &v) in x.samples().iter().enumerate() {
            let want = (2.0 * PI * i as f64 / n as f64).cos();
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn idft_rejects_asymmetric_spectra() {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
        coeffs[1] = Complex64::new(1.0, 0.5);
        // mirror bin left at zero: clearly not Hermitian
        let err = idft(&Spectrum::new(coeffs).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn round_trip_on_sparse_signal() {
        let (x, _) = synth_sparse_signal(&SynthSpec::new(128, 10, 21)).unwrap();
        let back = idft(&dft(&x)).unwrap();
        let err: f64 = x
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10);
    }

    #[test]
    fn restricted_synthesis_full_and_empty() {
        let (x, a) = synth_sparse_signal(&SynthSpec::new(16, 4, 2)).unwrap();
        let all: Vec<usize> = (0..16).collect();
        let full = restricted_synthesis(&a, &all).unwrap();
        for (v, w) in full.iter().zip(x.samples()) {
            assert!((v - w).abs() < 1e-12);
        }
        assert!(restricted_synthesis(&a, &[]).unwrap().is_empty());
        assert!(matches!(
            restricted_synthesis(&a, &[16]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn support_set_closes_over_conjugation() {
        let mut s = SupportSet::new(16);
        s.insert_conjugate(3).unwrap();
        s.insert_conjugate(0).unwrap();
        s.insert_conjugate(8).unwrap();
        assert_eq!(s.indices(), vec![0, 3, 8, 13]);
        assert_eq!(s.half_indices(), vec![0, 3, 8]);
        assert_eq!(s.len(), 4);
        assert!(s.insert_conjugate(16).is_err());
    }

    #[test]
    fn ls_recovers_exact_tone_from_full_observation() {
        let (x, a) = synth_from_harmonics(
            16,
            &[Harmonic {
                freq: 3,
                amplitude: 1.2,
                phase: 0.7,
            }],
        )
        .unwrap();
        let all: Vec<usize> = (0..16).collect();
        let support = SupportSet::from_half_indices(16, &[3]).unwrap();
        let est = least_squares_on_support(x.samples(), &all, &support).unwrap();
        assert!(est.distance(&a) < 1e-10);
        let resid: f64 = restricted_synthesis(&est, &all)
            .unwrap()
            .iter()
            .zip(x.samples())
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-10);
    }

    #[test]
    fn ls_on_empty_support_returns_zero() {
        let y = vec![1.0, -2.0, 0.5];
        let omega = vec![0, 3, 7];
        let support = SupportSet::new(16);
        let est = least_squares_on_support(&y, &omega, &support).unwrap();
        assert_eq!(est.sparsity(), 0);
    }

    #[test]
    fn ls_output_is_hermitian_for_conjugate_closed_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = 16;
            let y: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let omega: Vec<usize> = vec![0, 1, 3, 5, 8, 10, 12, 13, 15];
            let support = SupportSet::from_half_indices(n, &[0, 2, 7, 8]).unwrap();
            let est = least_squares_on_support(&y, &omega, &support).unwrap();
            assert!(est.hermitian_deviation() <= 1e-9);
            for k in est
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(k, _)| k)
            {
                assert!(support.contains(k), "bin {k} off support is non-zero");
            }
        }
    }

    #[test]
    fn nested_supports_do_not_increase_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let y: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let omega: Vec<usize> = vec![0, 2, 3, 4, 6, 8, 9, 11, 13, 14];
        let mut support = SupportSet::new(16);
        let mut last = f64::INFINITY;
        for k in [1, 4, 6] {
            support.insert_conjugate(k).unwrap();
            let est = least_squares_on_support(&y, &omega, &support).unwrap();
            let resid: f64 = restricted_synthesis(&est, &omega)
                .unwrap()
                .iter()
                .zip(&y)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
            assert!(resid <= last + 1e-12);
            last = resid;
        }
    }

    #[test]
    fn column_norms_are_uniform() {
        let all: Vec<usize> = (0..128).collect();
        let w = column_norm_weights(&all, 128).unwrap();
        assert!(w.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-15));

        let some: Vec<usize> = (0..70).collect();
        let w = column_norm_weights(&some, 128).unwrap();
        let want = (70.0f64 / 128.0).sqrt();
        let spread = w
            .as_slice()
            .iter()
            .fold(0.0f64, |s, &v| s.max((v - want).abs()));
        assert!(spread < 1e-14);

        let w = column_norm_weights(&[], 128).unwrap();
        assert!(w.as_slice().iter().all(|&v| v == 0.0));
    }
}
