//! Signal/clipping data model: time-domain signals, DFT spectra, clipped
//! observations, sparse-signal synthesis, and recovery metrics.
//!
//! Conventions used throughout the crate:
//!
//! * Spectra follow the unitary DFT scaling, so a real signal with a single
//!   harmonic `A*cos(2*pi*f*n/N + phi)` has coefficients of magnitude
//!   `sqrt(N)/2 * A` at bins `f` and `N-f`.
//! * A sample is *clipped* when it reaches the bound (`x >= c_upper` or
//!   `x <= c_lower`); boundary equality counts as clipped, which makes
//!   [`clip`] idempotent.
//! * All randomness comes from `ChaCha8Rng` seeded with a caller-provided
//!   64-bit seed; identical seeds give bitwise-identical signals.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default recovery threshold: a restoration counts as exact when the
/// time-domain l2 error is at most this value.
pub const RECOVERY_TOL: f64 = 1e-3;

/// Relative magnitude below which a spectral coefficient counts as zero.
pub const SPARSITY_REL_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Signal
// ---------------------------------------------------------------------------

/// A real time-domain signal of length N.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    /// Wrap a sample vector; every sample must be finite and `len >= 2`.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooShort { len: samples.len() });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { samples })
    }

    /// Evaluate `f(n)` for `n = 0..n_len`.
    pub fn from_fn(n_len: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new((0..n_len).map(f).collect())
    }

    pub fn n_len(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Largest absolute sample value.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// l2 norm of the sample vector.
    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Complex DFT coefficients of length N under the unitary convention.
///
/// A spectrum represents a real signal exactly when it is Hermitian
/// symmetric: `coeffs[(N-k) % N] == conj(coeffs[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::TooShort { len: coeffs.len() });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n_len: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); n_len.max(2)],
        }
    }

    pub fn n_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Worst-case Hermitian-symmetry violation, relative to the largest
    /// coefficient magnitude. Zero spectra report zero deviation.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.coeffs.len();
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let mirror = self.coeffs[(n - k) % n].conj();
            worst = worst.max((self.coeffs[k] - mirror).norm());
        }
        worst / scale
    }

    /// Whether the spectrum represents a real signal to the given relative
    /// tolerance.
    pub fn is_real_representable(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Number of non-negligible coefficients: entries with magnitude above
    /// `SPARSITY_REL_TOL` times the largest magnitude.
    pub fn sparsity(&self) -> usize {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0;
        }
        let thresh = SPARSITY_REL_TOL * scale;
        self.coeffs.iter().filter(|c| c.norm() > thresh).count()
    }

    /// l2 distance to another spectrum.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Project onto the Hermitian-symmetric subspace: averages each
    /// coefficient with the conjugate of its mirror. Exact symmetry holds on
    /// the result.
    pub(crate) fn symmetrized(mut self) -> Spectrum {
        let n = self.coeffs.len();
        let snapshot = self.coeffs.clone();
        for k in 0..n {
            let mirror = snapshot[(n - k) % n].conj();
            self.coeffs[k] = 0.5 * (snapshot[k] + mirror);
        }
        // self-conjugate bins must be exactly real
        self.coeffs[0].im = 0.0;
        if n.is_multiple_of(2) {
            self.coeffs[n / 2].im = 0.0;
        }
        self
    }
}

// ---------------------------------------------------------------------------
// Clipped observations
// ---------------------------------------------------------------------------

/// A clipped signal together with the clip bounds and the index-set
/// partition it induces.
///
/// `omega_u`/`omega_l` hold the positions clipped at the upper/lower bound,
/// `omega_nc` the non-clipped positions, and `y` the non-clipped values in
/// index order. The three sets partition `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedObservation {
    x_c: Vec<f64>,
    c_lower: f64,
    c_upper: f64,
    omega_u: Vec<usize>,
    omega_l: Vec<usize>,
    omega_nc: Vec<usize>,
    y: Vec<f64>,
}

impl ClippedObservation {
    pub fn x_c(&self) -> &[f64] {
        &self.x_c
    }

    /// The clipped samples as a `Signal` (used e.g. as the matched input of
    /// greedy support estimation).
    pub fn x_c_signal(&self) -> Signal {
        Signal {
            samples: self.x_c.clone(),
        }
    }

    pub fn c_lower(&self) -> f64 {
        self.c_lower
    }

    pub fn c_upper(&self) -> f64 {
        self.c_upper
    }

    pub fn omega_u(&self) -> &[usize] {
        &self.omega_u
    }

    pub fn omega_l(&self) -> &[usize] {
        &self.omega_l
    }

    pub fn omega_nc(&self) -> &[usize] {
        &self.omega_nc
    }

    /// Non-clipped sample values, ordered by index.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n_len(&self) -> usize {
        self.x_c.len()
    }

    /// Number of non-clipped samples.
    pub fn m(&self) -> usize {
        self.omega_nc.len()
    }
}

/// Clip a signal at the given bounds.
///
/// Samples with `x(n) >= c_upper` are replaced by `c_upper` and indexed in
/// `omega_u`; samples with `x(n) <= c_lower` go to `c_lower` and `omega_l`.
/// Boundary equality counts as clipped, so clipping an already-clipped
/// signal at the same bounds is the identity.
pub fn clip(x: &Signal, c_lower: f64, c_upper: f64) -> Result<ClippedObservation> {
    if !c_lower.is_finite() || !c_upper.is_finite() || c_lower >= c_upper {
        return Err(Error::InvalidClipBounds {
            lower: c_lower,
            upper: c_upper,
        });
    }
    let n = x.n_len();
    let mut obs = ClippedObservation {
        x_c: Vec::with_capacity(n),
        c_lower,
        c_upper,
        omega_u: Vec::new(),
        omega_l: Vec::new(),
        omega_nc: Vec::new(),
        y: Vec::new(),
    };
    for (i, &v) in x.samples().iter().enumerate() {
        if v >= c_upper {
            obs.x_c.push(c_upper);
            obs.omega_u.push(i);
        } else if v <= c_lower {
            obs.x_c.push(c_lower);
            obs.omega_l.push(i);
        } else {
            obs.x_c.push(v);
            obs.omega_nc.push(i);
            obs.y.push(v);
        }
    }
    Ok(obs)
}

/// Symmetric clip level that leaves exactly `m_target` samples non-clipped.
///
/// Returns the midpoint between the `m_target`-th and `(m_target+1)`-th
/// smallest values of `|x(n)|`, so `clip(x, -C, C)` has `m() == m_target`.
/// When near-ties in the `|x|` ladder make the target count impossible (the
/// midpoint would not separate the two values), returns
/// [`Error::UnachievableM`] carrying the nearest achievable counts.
pub fn clip_level_for_m(x: &Signal, m_target: usize) -> Result<f64> {
    let n = x.n_len();
    if m_target > n {
        return Err(Error::InvalidParameter(format!(
            "m_target {m_target} exceeds signal length {n}"
        )));
    }
    let mut mags: Vec<f64> = x.samples().iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));

    match level_for(&mags, m_target) {
        Some(c) => Ok(c),
        None => {
            let below = (0..m_target)
                .rev()
                .find(|&m| level_for(&mags, m).is_some())
                .unwrap_or(0);
            let above = (m_target + 1..=n)
                .find(|&m| level_for(&mags, m).is_some())
                .unwrap_or(n);
            Err(Error::UnachievableM {
                target: m_target,
                below,
                above,
            })
        }
    }
}

/// Candidate symmetric level for exactly `m` non-clipped samples, or `None`
/// when the sorted magnitude ladder does not admit one.
fn level_for(mags: &[f64], m: usize) -> Option<f64> {
    let n = mags.len();
    let max = mags[n - 1];
    // Groups of |x| values closer than this are treated as tied. Genuine
    // ladder gaps in the target signals are ~1e-2; floating-point noise
    // between symmetry-related samples is ~1e-16.
    let tie_tol = 1e-9 * max.max(1.0);
    let lo = if m == 0 { 0.0 } else { mags[m - 1] };
    let hi = if m == n { max + 2.0 * tie_tol } else { mags[m] };
    if hi - lo <= tie_tol {
        return None;
    }
    let c = 0.5 * (lo + hi);
    // The midpoint must really separate the ladder; verify the exact count.
    let count = mags.iter().filter(|&&v| v < c).count();
    (count == m && c > 0.0).then_some(c)
}

// ---------------------------------------------------------------------------
// Sparse-signal synthesis
// ---------------------------------------------------------------------------

/// Parameters for random frequency-sparse signal synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Signal length N.
    pub n_len: usize,
    /// Number of non-zero DFT coefficients; must be even (harmonics come in
    /// conjugate pairs).
    pub k_sparsity: usize,
    /// Lower bound of the uniform amplitude distribution.
    pub amp_low: f64,
    /// Upper bound of the uniform amplitude distribution.
    pub amp_high: f64,
    /// Seed for the portable generator (ChaCha8).
    pub rng_seed: u64,
}

impl SynthSpec {
    /// Spec with the standard amplitude range `[0.5, 1.5]`.
    pub fn new(n_len: usize, k_sparsity: usize, rng_seed: u64) -> Self {
        Self {
            n_len,
            k_sparsity,
            amp_low: 0.5,
            amp_high: 1.5,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n_len, self.k_sparsity);
        if n < 4 {
            return Err(Error::TooShort { len: n });
        }
        if k < 2 || !k.is_multiple_of(2) || k > n - 2 || k / 2 > n / 2 - 1 {
            return Err(Error::InvalidSparsity { k, n });
        }
        if !self.amp_low.is_finite()
            || !self.amp_high.is_finite()
            || self.amp_low > self.amp_high
            || self.amp_low < 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "invalid amplitude range [{}, {}]",
                self.amp_low, self.amp_high
            )));
        }
        Ok(())
    }
}

/// One harmonic component `amplitude * cos(2*pi*freq*n/N + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    /// Frequency index in `1..N/2` (DC and Nyquist excluded).
    pub freq: usize,
    pub amplitude: f64,
    pub phase: f64,
}

/// Build a signal and its exact spectrum from explicit harmonics.
///
/// Each harmonic contributes the conjugate coefficient pair
/// `alpha[f] = sqrt(N)/2 * A * exp(i*phi)`, `alpha[N-f] = conj(alpha[f])`.
/// Frequencies must be distinct and strictly inside `(0, N/2)`.
pub fn synth_from_harmonics(n_len: usize, harmonics: &[Harmonic]) -> Result<(Signal, Spectrum)> {
    if n_len < 4 {
        return Err(Error::TooShort { len: n_len });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_len];
    for (i, h) in harmonics.iter().enumerate() {
        if h.freq == 0 || h.freq >= n_len.div_ceil(2) {
            return Err(Error::IndexOutOfRange {
                index: h.freq,
                n_len,
            });
        }
        if !h.amplitude.is_finite() || !h.phase.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        if coeffs[h.freq].norm() != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duplicate harmonic frequency {}",
                h.freq
            )));
        }
        let c = 0.5 * (n_len as f64).sqrt() * h.amplitude * Complex64::new(0.0, h.phase).exp();
        coeffs[h.freq] = c;
        coeffs[n_len - h.freq] = c.conj();
    }
    let signal = Signal::from_fn(n_len, |n| {
        harmonics
            .iter()
            .map(|h| {
                h.amplitude * (2.0 * PI * h.freq as f64 * n as f64 / n_len as f64 + h.phase).cos()
            })
            .sum()
    })?;
    Ok((signal, Spectrum::new(coeffs)?))
}

/// Synthesize a random K-sparse signal.
///
/// Draw order (fixed so seeds are reproducible across versions): the
/// frequencies `1..N/2` are shuffled and the first K/2 taken, then sorted;
/// for each frequency in ascending order an amplitude `U[amp_low, amp_high)`
/// is drawn followed by a phase `U[0, 2*pi)`. DC and Nyquist are excluded so
/// every harmonic contributes exactly one conjugate pair and the spectrum
/// has exactly K non-zeros.
pub fn synth_sparse_signal(spec: &SynthSpec) -> Result<(Signal, Spectrum)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut freqs: Vec<usize> = (1..spec.n_len.div_ceil(2)).collect();
    freqs.shuffle(&mut rng);
    freqs.truncate(spec.k_sparsity / 2);
    freqs.sort_unstable();
    let harmonics: Vec<Harmonic> = freqs
        .into_iter()
        .map(|freq| {
            let amplitude = if spec.amp_low == spec.amp_high {
                spec.amp_low
            } else {
                rng.gen_range(spec.amp_low..spec.amp_high)
            };
            let phase = rng.gen_range(0.0..2.0 * PI);
            Harmonic {
                freq,
                amplitude,
                phase,
            }
        })
        .collect();
    synth_from_harmonics(spec.n_len, &harmonics)
}

// ---------------------------------------------------------------------------
// Recovery metrics
// ---------------------------------------------------------------------------

/// l2 norm of the restoration error `x - x_hat`.
pub fn recovery_error(x: &Signal, x_hat: &Signal) -> Result<f64> {
    if x.n_len() != x_hat.n_len() {
        return Err(Error::LengthMismatch {
            left: x.n_len(),
            right: x_hat.n_len(),
        });
    }
    Ok(x.samples()
        .iter()
        .zip(x_hat.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Whether the restoration counts as exact: `recovery_error <= tol`
/// (closed boundary).
pub fn is_recovered(x: &Signal, x_hat: &Signal, tol: f64) -> Result<bool> {
    Ok(recovery_error(x, x_hat)? <= tol)
}

// ---------------------------------------------------------------------------
// Signal CSV format
// ---------------------------------------------------------------------------

/// Write a signal as CSV: one sample per line at 17 significant digits
/// (exact f64 round-trip), optionally preceded by `#` comment lines.
pub fn write_signal_csv<W: Write>(w: &mut W, x: &Signal, header: Option<&str>) -> Result<()> {
    if let Some(h) = header {
        for line in h.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    for v in x.samples() {
        writeln!(w, "{v:.16e}")?;
    }
    Ok(())
}

/// Read a signal written by [`write_signal_csv`]; `#` comment lines and
/// blank lines are skipped.
pub fn read_signal_csv<R: BufRead>(r: R) -> Result<Signal> {
    let mut samples = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("{e}: {t:?}"),
        })?;
        samples.push(v);
    }
    Signal::new(samples)
}

pub fn write_signal_file(path: &Path, x: &Signal, header: Option<&str>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_signal_csv(&mut f, x, header)
}

pub fn read_signal_file(path: &Path) -> Result<Signal> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_signal_csv(f)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{dft, idft};

    fn fig1_tone() -> Signal {
        Signal::from_fn(128, |n| (2.0 * PI * n as f64 / 128.0 + PI / 4.0).sin()).unwrap()
    }

    #[test]
    fn signal_rejects_nan_and_short() {
        assert_eq!(
            Signal::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert_eq!(Signal::new(vec![1.0]), Err(Error::TooShort { len: 1 }));
    }

    #[test]
    fn single_tone_matches_closed_form() {
        // N=128, K=2, amplitude 1, phase pi/4, frequency 1.
        let (x, a) = synth_from_harmonics(
            128,
            &[Harmonic {
                freq: 1,
                amplitude: 1.0,
                phase: PI / 4.0,
            }],
        )
        .unwrap();
        for (n, &v) in x.samples().iter().enumerate() {
            let want = (2.0 * PI * n as f64 / 128.0 + PI / 4.0).cos();
            assert!((v - want).abs() < 1e-15);
        }
        for (k, c) in a.coeffs().iter().enumerate() {
            if k == 1 || k == 127 {
                assert!((c.norm() - 128f64.sqrt() / 2.0).abs() < 1e-12);
            } else {
                assert_eq!(c.norm(), 0.0);
            }
        }
        assert_eq!(a.sparsity(), 2);
    }

    #[test]
    fn synth_k10_sparsity_and_symmetry() {
        let (_, a) = synth_sparse_signal(&SynthSpec::new(128, 10, 7)).unwrap();
        assert_eq!(a.sparsity(), 10);
        assert!(a.is_real_representable(1e-10));
    }

    #[test]
    fn synth_round_trip_n16_k4() {
        let (x, a) = synth_sparse_signal(&SynthSpec::new(16, 4, 3)).unwrap();
        assert_eq!(a.sparsity(), 4);
        let back = idft(&dft(&x)).unwrap();
        let err = recovery_error(&x, &back).unwrap();
        assert!(err <= 1e-10, "round-trip error {err}");
    }

    #[test]
    fn synth_is_deterministic_bitwise() {
        let spec = SynthSpec::new(128, 8, 99);
        let (x1, a1) = synth_sparse_signal(&spec).unwrap();
        let (x2, a2) = synth_sparse_signal(&spec).unwrap();
        assert_eq!(x1, x2);
        assert_eq!(a1, a2);
    }

    #[test]
    fn synth_rejects_bad_sparsity() {
        assert!(matches!(
            synth_sparse_signal(&SynthSpec::new(128, 3, 0)),
            Err(Error::InvalidSparsity { .. })
        ));
        // K/2 > N/2 - 1
        assert!(matches!(
            synth_sparse_signal(&SynthSpec::new(16, 16, 0)),
            Err(Error::InvalidSparsity { .. })
        ));
    }

    #[test]
    fn clip_counts_match_tone_levels() {
        let x = fig1_tone();
        let obs = clip(&x, -0.75, 0.75).unwrap();
        assert_eq!(obs.m(), 70);
        let obs = clip(&x, -0.72, 0.72).unwrap();
        assert_eq!(obs.m(), 66);
    }

    #[test]
    fn clip_with_loose_bounds_is_identity() {
        let x = fig1_tone();
        let obs = clip(&x, -2.0, 2.0).unwrap();
        assert!(obs.omega_u().is_empty());
        assert!(obs.omega_l().is_empty());
        assert_eq!(obs.m(), 128);
        assert_eq!(obs.y(), x.samples());
    }

    #[test]
    fn clip_partitions_indices() {
        let x = fig1_tone();
        let obs = clip(&x, -0.6, 0.7).unwrap();
        let mut all: Vec<usize> = obs
            .omega_u()
            .iter()
            .chain(obs.omega_l())
            .chain(obs.omega_nc())
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..128).collect::<Vec<_>>());
        for (&i, &v) in obs.omega_nc().iter().zip(obs.y()) {
            assert!(obs.c_lower() < v && v < obs.c_upper());
            assert_eq!(obs.x_c()[i], v);
        }
    }

    #[test]
    fn clip_is_idempotent() {
        let x = fig1_tone();
        let obs = clip(&x, -0.72, 0.72).unwrap();
        let again = clip(&obs.x_c_signal(), -0.72, 0.72).unwrap();
        assert_eq!(again.x_c(), obs.x_c());
        assert_eq!(again.omega_u(), obs.omega_u());
    }

    #[test]
    fn clip_rejects_bad_bounds() {
        let x = fig1_tone();
        assert!(matches!(
            clip(&x, 0.5, 0.5),
            Err(Error::InvalidClipBounds { .. })
        ));
    }

    #[test]
    fn clip_level_hits_target_m() {
        let x = fig1_tone();
        let c = clip_level_for_m(&x, 70).unwrap();
        assert!(c > 0.72 && c < 0.76, "level {c}");
        assert_eq!(clip(&x, -c, c).unwrap().m(), 70);
    }

    #[test]
    fn clip_level_for_full_m_sits_above_max() {
        let x = fig1_tone();
        let c = clip_level_for_m(&x, 128).unwrap();
        assert!(c > x.max_abs());
        assert_eq!(clip(&x, -c, c).unwrap().m(), 128);
    }

    #[test]
    fn clip_level_reports_unachievable_gap() {
        // The tone's |x| ladder jumps from 66 to 70 non-clipped samples.
        let x = fig1_tone();
        assert_eq!(
            clip_level_for_m(&x, 68),
            Err(Error::UnachievableM {
                target: 68,
                below: 66,
                above: 70
            })
        );
    }

    #[test]
    fn clip_level_monotone_in_m() {
        let x = fig1_tone();
        let mut last = 0.0;
        for m in 0..=128 {
            if let Ok(c) = clip_level_for_m(&x, m) {
                assert!(c >= last);
                last = c;
                assert_eq!(clip(&x, -c, c).unwrap().m(), m);
            }
        }
    }

    #[test]
    fn recovery_error_basics() {
        let x = fig1_tone();
        assert_eq!(recovery_error(&x, &x).unwrap(), 0.0);
        let impulse = Signal::from_fn(4, |n| if n == 0 { 1.0 } else { 0.0 }).unwrap();
        let zero = Signal::new(vec![0.0; 4]).unwrap();
        assert_eq!(recovery_error(&impulse, &zero).unwrap(), 1.0);
        let short = Signal::new(vec![0.0; 3]).unwrap();
        assert!(matches!(
            recovery_error(&x, &short),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn single_entry_perturbation_recovers_at_default_tol() {
        let (x, _) = synth_sparse_signal(&SynthSpec::new(64, 6, 11)).unwrap();
        let mut samples = x.samples().to_vec();
        samples[0] += 1e-4;
        let x_hat = Signal::new(samples).unwrap();
        let err = recovery_error(&x, &x_hat).unwrap();
        // up to one ulp of x[0] is absorbed when adding the perturbation
        assert!((err - 1e-4).abs() < 1e-13);
        assert!(is_recovered(&x, &x_hat, RECOVERY_TOL).unwrap());
    }

    #[test]
    fn is_recovered_boundary_is_closed() {
        // 0.125 is exact in binary, so err == tol holds exactly.
        let x = Signal::new(vec![0.0; 8]).unwrap();
        let mut samples = vec![0.0; 8];
        samples[3] = 0.125;
        let x_hat = Signal::new(samples).unwrap();
        assert_eq!(recovery_error(&x, &x_hat).unwrap(), 0.125);
        assert!(is_recovered(&x, &x_hat, 0.125).unwrap());
        assert!(!is_recovered(&x, &x_hat, 0.0625).unwrap());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let (x, _) = synth_sparse_signal(&SynthSpec::new(128, 10, 5)).unwrap();
        let mut buf = Vec::new();
        write_signal_csv(&mut buf, &x, Some("test signal")).unwrap();
        let back = read_signal_csv(buf.as_slice()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn csv_reports_parse_errors_with_line() {
        let text = "# header\n1.0\nnot-a-number\n";
        match read_signal_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
