//! Result tables and their CSV serialization.

use crate::config::Algo;
use std::io::Write;
use std::path::Path;

/// One sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub algorithm: Algo,
    pub k: usize,
    /// Cell M for the fixed-M experiments; mean minimum M over recoverable
    /// trials for the minimum-sample scan.
    pub m: f64,
    /// Recovered trials (recoverable trials for the minimum-sample scan).
    pub success: usize,
    pub trials: usize,
    /// Mean recovery error over the cell's trials (minimum-sample scan:
    /// unused, mirrors `std`).
    pub mean: f64,
    /// Sample standard deviation of the per-trial statistic.
    pub std: f64,
}

/// A finished experiment: rows plus reproducibility metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTable {
    /// Experiment kind: `mmin`, `probk`, or `phase`.
    pub experiment: String,
    pub rows: Vec<TableRow>,
    pub seed: u64,
    pub config_hash: u64,
    /// Unix timestamp; `None` keeps the CSV fully deterministic.
    pub timestamp_unix: Option<u64>,
}

impl ExperimentTable {
    pub fn new(experiment: &str, seed: u64, config_hash: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            rows: Vec::new(),
            seed,
            config_hash,
            timestamp_unix: None,
        }
    }

    /// Stamp with the current wall-clock time (one metadata line; strip it
    /// to compare runs byte for byte).
    pub fn stamp_now(&mut self) {
        self.timestamp_unix = Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        );
    }

    fn column_note(&self) -> &'static str {
        match self.experiment.as_str() {
            "mmin" => {
                "M = mean minimum non-clipped count over recoverable trials; \
                 success = recoverable trials; mean_error = sample std of the minimum"
            }
            _ => {
                "M = non-clipped count of the cell; success = recovered trials; \
                  mean_error = mean time-domain l2 recovery error"
            }
        }
    }

    /// Render the table in the fixed CSV schema
    /// `algorithm,K,M,success,trials,mean_error,seed` with `#` metadata
    /// lines (UTF-8, LF line endings).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# experiment={}\n", self.experiment));
        out.push_str(&format!("# seed={}\n", self.seed));
        out.push_str(&format!("# config_hash={:016x}\n", self.config_hash));
        out.push_str(&format!("# note={}\n", self.column_note()));
        if let Some(ts) = self.timestamp_unix {
            out.push_str(&format!("# timestamp_unix={ts}\n"));
        }
        out.push_str("algorithm,K,M,success,trials,mean_error,seed\n");
        let mmin = self.experiment == "mmin";
        for r in &self.rows {
            let m = if mmin {
                format!("{:.4}", r.m)
            } else {
                format!("{}", r.m as usize)
            };
            let err = if mmin {
                format!("{:.4}", r.std)
            } else {
                format!("{:.6e}", r.mean)
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.algorithm, r.k, m, r.success, r.trials, err, self.seed
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.to_csv().as_bytes())
    }

    /// Rate of successful trials for a cell, if present.
    pub fn success_rate(&self, algorithm: Algo, k: usize, m: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.k == k && (r.m - m as f64).abs() < 0.5)
            .map(|r| r.success as f64 / r.trials as f64)
    }

    /// Mean statistic (mean minimum M) for an algorithm at a sparsity level.
    pub fn mean_m(&self, algorithm: Algo, k: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.k == k)
            .map(|r| r.m)
    }
}

/// Sample mean and standard deviation (n-1 denominator; zero for n <= 1).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_and_determinism() {
        let mut t = ExperimentTable::new("probk", 42, 0xdead_beef);
        t.rows.push(TableRow {
            algorithm: Algo::Tpcc,
            k: 4,
            m: 70.0,
            success: 93,
            trials: 100,
            mean: 1.25e-4,
            std: 3.0e-4,
        });
        let csv = t.to_csv();
        assert!(csv.contains("algorithm,K,M,success,trials,mean_error,seed\n"));
        assert!(csv.contains("tpcc,4,70,93,100,1.250000e-4,42\n"));
        assert_eq!(csv, t.to_csv());
        assert!(!csv.contains("timestamp"));
        t.stamp_now();
        assert!(t.to_csv().contains("# timestamp_unix="));
    }

    #[test]
    fn mean_std_small_samples() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }
}
