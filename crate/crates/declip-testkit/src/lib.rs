//! Independent reference computations used only from test code.
//!
//! Everything here is deliberately naive and self-contained: direct
//! O(N^2) transform summation, dense operator matrices, complex Gaussian
//! elimination, and exhaustive enumeration of sparse explanations of a
//! clipped observation. None of it shares code with the implementations it
//! cross-checks (no FFT, no nalgebra), so agreement is meaningful.

use num_complex::Complex64;
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Direct transforms and dense operators
// ---------------------------------------------------------------------------

/// Unitary DFT by direct summation: `h(k) = 1/sqrt(N) sum_n x(n) e^{-i2pikn/N}`.
pub fn dft_direct(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                let ang = -2.0 * PI * (k * j) as f64 / n as f64;
                acc += v * Complex64::new(ang.cos(), ang.sin());
            }
            s * acc
        })
        .collect()
}

/// Unitary inverse DFT by direct summation (complex output; the caller
/// checks how small the imaginary part is).
pub fn idft_direct(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &c) in a.iter().enumerate() {
                let ang = 2.0 * PI * (k * j) as f64 / n as f64;
                acc += c * Complex64::new(ang.cos(), ang.sin());
            }
            s * acc
        })
        .collect()
}

/// Dense row-restricted synthesis operator: the rows of the unitary inverse
/// DFT matrix selected by `omega` (an M x N complex matrix).
pub fn restricted_synthesis_matrix(n: usize, omega: &[usize]) -> Vec<Vec<Complex64>> {
    let s = 1.0 / (n as f64).sqrt();
    omega
        .iter()
        .map(|&row| {
            (0..n)
                .map(|k| {
                    let ang = 2.0 * PI * (row * k) as f64 / n as f64;
                    s * Complex64::new(ang.cos(), ang.sin())
                })
                .collect()
        })
        .collect()
}

/// Apply a dense matrix to a real vector.
pub fn mat_apply(m: &[Vec<Complex64>], x: &[f64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(c, &v)| c * v).sum())
        .collect()
}

/// Apply the conjugate transpose of a dense matrix to a real vector:
/// `(M^H y)(k) = sum_r conj(M[r][k]) y(r)`.
pub fn mat_adjoint_apply(m: &[Vec<Complex64>], y: &[f64]) -> Vec<Complex64> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|k| m.iter().zip(y).map(|(row, &v)| row[k].conj() * v).sum())
        .collect()
}

// ---------------------------------------------------------------------------
// Complex Gaussian elimination and normal-equations least squares
// ---------------------------------------------------------------------------

/// Solve a dense complex system by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `pivot_tol`.
pub fn solve_complex(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
    pivot_tol: f64,
) -> Option<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let pivot_row =
            (col..n).max_by(|&p, &q| a[p][col].norm().partial_cmp(&a[q][col].norm()).unwrap())?;
        if a[pivot_row][col].norm() < pivot_tol {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (head, tail) = a.split_at_mut(row);
            let pivot_row = &head[col];
            for (dst, &src) in tail[0].iter_mut().zip(pivot_row).skip(col) {
                *dst -= f * src;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Least squares on a spectral support via explicit complex normal
/// equations: builds the restricted matrix column-by-column, solves
/// `(B^H B) a = B^H y` by Gaussian elimination, and scatters back into a
/// length-N spectrum. Requires the restricted matrix to have full column
/// rank (returns `None` otherwise).
pub fn ls_normal_equations(
    y: &[f64],
    omega: &[usize],
    support: &[usize],
    n: usize,
) -> Option<Vec<Complex64>> {
    let d = support.len();
    if d == 0 {
        return Some(vec![Complex64::new(0.0, 0.0); n]);
    }
    let s = 1.0 / (n as f64).sqrt();
    // B[r][c] = Psi[omega_r][support_c]
    let b: Vec<Vec<Complex64>> = omega
        .iter()
        .map(|&row| {
            support
                .iter()
                .map(|&k| {
                    let ang = 2.0 * PI * (row * k) as f64 / n as f64;
                    s * Complex64::new(ang.cos(), ang.sin())
                })
                .collect()
        })
        .collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    let mut rhs = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        for j in 0..d {
            gram[i][j] = b.iter().map(|row| row[i].conj() * row[j]).sum();
        }
        rhs[i] = b.iter().zip(y).map(|(row, &v)| row[i].conj() * v).sum();
    }
    let sol = solve_complex(gram, rhs, 1e-10)?;
    let mut alpha = vec![Complex64::new(0.0, 0.0); n];
    for (&k, &v) in support.iter().zip(&sol) {
        alpha[k] = v;
    }
    Some(alpha)
}

// ---------------------------------------------------------------------------
// Brute-force sparse-consistency oracle
// ---------------------------------------------------------------------------

/// The constraint data of a clipped observation, as plain slices.
#[derive(Debug, Clone, Copy)]
pub struct ClipData<'a> {
    pub n: usize,
    pub y: &'a [f64],
    pub omega_nc: &'a [usize],
    pub omega_u: &'a [usize],
    pub omega_l: &'a [usize],
    pub c_upper: f64,
    pub c_lower: f64,
}

/// Result of enumerating every sparse signal consistent with an observation.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    /// Distinct time-domain signals (up to `dedupe_tol`) that satisfy the
    /// equality constraints exactly and the bound constraints, over all
    /// conjugate-closed supports within the degree-of-freedom budget.
    pub candidates: Vec<Vec<f64>>,
    /// Some support was equality-consistent but rank-deficient, so its
    /// solution set is a continuum; treat the instance as ambiguous.
    pub rank_deficient: bool,
}

impl ConsistencyReport {
    /// The observation pins down `x_true` uniquely among sparse signals:
    /// every consistent candidate coincides with it and no support was
    /// ambiguous.
    pub fn is_unique(&self, x_true: &[f64], tol: f64) -> bool {
        !self.rank_deficient
            && !self.candidates.is_empty()
            && self.candidates.iter().all(|c| l2_diff(c, x_true) <= tol)
    }
}

/// Enumerate all conjugate-closed supports with at most `max_dof` real
/// degrees of freedom and collect every consistent sparse explanation of
/// the observation.
pub fn enumerate_sparse_explanations(
    data: &ClipData,
    max_dof: usize,
    eq_tol: f64,
    ineq_tol: f64,
    dedupe_tol: f64,
) -> ConsistencyReport {
    let n = data.n;
    let half: Vec<usize> = (0..=n / 2).collect();
    let mut report = ConsistencyReport {
        candidates: Vec::new(),
        rank_deficient: false,
    };
    let mut chosen = Vec::new();
    enumerate_rec(
        data,
        &half,
        0,
        max_dof,
        &mut chosen,
        eq_tol,
        ineq_tol,
        dedupe_tol,
        &mut report,
    );
    report
}

fn bin_dof(k: usize, n: usize) -> usize {
    if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
        1
    } else {
        2
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    data: &ClipData,
    half: &[usize],
    next: usize,
    dof_left: usize,
    chosen: &mut Vec<usize>,
    eq_tol: f64,
    ineq_tol: f64,
    dedupe_tol: f64,
    report: &mut ConsistencyReport,
) {
    check_support(data, chosen, eq_tol, ineq_tol, dedupe_tol, report);
    for idx in next..half.len() {
        let k = half[idx];
        let d = bin_dof(k, data.n);
        if d > dof_left {
            continue;
        }
        chosen.push(k);
        enumerate_rec(
            data,
            half,
            idx + 1,
            dof_left - d,
            chosen,
            eq_tol,
            ineq_tol,
            dedupe_tol,
            report,
        );
        chosen.pop();
    }
}

/// Equality-fit the support against `y`; a unique exact fit that also
/// respects the clip bounds registers a candidate signal.
fn check_support(
    data: &ClipData,
    half_bins: &[usize],
    eq_tol: f64,
    ineq_tol: f64,
    dedupe_tol: f64,
    report: &mut ConsistencyReport,
) {
    let n = data.n;
    // full support = half bins plus mirrors
    let mut support: Vec<usize> = Vec::new();
    for &k in half_bins {
        support.push(k);
        let m = (n - k) % n;
        if m != k {
            support.push(m);
        }
    }
    support.sort_unstable();
    if support.is_empty() {
        // the zero signal: consistent only if y is all zeros
        if data.y.iter().all(|&v| v.abs() <= eq_tol) && bounds_ok(data, &vec![0.0; n], ineq_tol) {
            push_candidate(report, vec![0.0; n], dedupe_tol);
        }
        return;
    }
    if support.len() > data.omega_nc.len() {
        // underdetermined equality system: a consistent fit would not be
        // unique, so the instance is ambiguous if the truth fits here; the
        // budget caller keeps max_dof <= M to avoid this region.
        return;
    }
    match ls_normal_equations(data.y, data.omega_nc, &support, n) {
        None => {
            report.rank_deficient = true;
        }
        Some(alpha) => {
            let x = idft_direct(&alpha);
            if x.iter().any(|c| c.im.abs() > 1e-6) {
                // support fit produced a non-real signal; conjugate-closed
                // supports with real y cannot, so treat as ambiguous
                report.rank_deficient = true;
                return;
            }
            let xr: Vec<f64> = x.iter().map(|c| c.re).collect();
            let fit_err = data
                .omega_nc
                .iter()
                .zip(data.y)
                .map(|(&i, &v)| (xr[i] - v).powi(2))
                .sum::<f64>()
                .sqrt();
            if fit_err <= eq_tol && bounds_ok(data, &xr, ineq_tol) {
                push_candidate(report, xr, dedupe_tol);
            }
        }
    }
}

fn bounds_ok(data: &ClipData, x: &[f64], tol: f64) -> bool {
    data.omega_u.iter().all(|&i| x[i] >= data.c_upper - tol)
        && data.omega_l.iter().all(|&i| x[i] <= data.c_lower + tol)
}

fn push_candidate(report: &mut ConsistencyReport, x: Vec<f64>, dedupe_tol: f64) {
    if report
        .candidates
        .iter()
        .all(|c| l2_diff(c, &x) > dedupe_tol)
    {
        report.candidates.push(x);
    }
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_transforms_round_trip() {
        let x = vec![0.3, -1.2, 0.8, 2.0, -0.5, 0.0, 1.1, -0.7];
        let h = dft_direct(&x);
        let back = idft_direct(&h);
        for (a, b) in back.iter().zip(&x) {
            assert!((a.re - b).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_elimination_solves_identity() {
        let a = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let b = vec![Complex64::new(2.0, 1.0), Complex64::new(-3.0, 0.5)];
        let x = solve_complex(a, b.clone(), 1e-12).unwrap();
        assert!((x[0] - b[0]).norm() < 1e-14);
        assert!((x[1] - b[1]).norm() < 1e-14);
    }

    #[test]
    fn zero_pivot_is_reported() {
        let a = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let b = vec![Complex64::new(1.0, 0.0); 2];
        assert!(solve_complex(a, b, 1e-12).is_none());
    }
}
