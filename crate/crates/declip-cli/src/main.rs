//! `declip` — restore clipped, frequency-sparse signals from the command
//! line: synthesize test signals, de-clip recordings, and run the
//! Monte-Carlo experiment suites.
//!
//! Exit codes: 0 success; 1 usage or I/O error; 2 the algorithm did not
//! converge (diagnostics are still written).

mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use declip_core::{
    clip, declip_bp_with, declip_bpcc_with, declip_rel1cc, declip_tpcc, read_signal_file,
    write_signal_file, DeclipResult, DeclipStatus, Rel1Params, SolverParams, SynthSpec, TpccParams,
};
use declip_experiments::{
    demo_single_tone, demo_support_estimation, demo_two_tone, run_mmin_experiment, run_prob_vs_k,
    run_tpcc_phase, Algo, ExperimentTable, TrialConfig, SUPPORT_DEMO_SEED,
};

#[derive(Parser)]
#[command(
    name = "declip",
    version,
    about = "Restoration of clipped, frequency-sparse signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print progress details to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a random frequency-sparse test signal (CSV + spectrum JSON)
    Synth(SynthArgs),
    /// Restore a clipped signal read from a CSV file
    Declip(DeclipArgs),
    /// Run a Monte-Carlo experiment and write its CSV table
    Bench(BenchArgs),
    /// Run a canned demonstration scenario and write its data files
    Demo(DemoArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Signal length N.
    #[arg(long, default_value_t = 128)]
    n: usize,
    /// Sparsity level K (number of non-zero DFT coefficients, even).
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Bp,
    Bpcc,
    Rel1cc,
    Tpcc,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Bp => Algo::Bp,
            AlgoArg::Bpcc => Algo::Bpcc,
            AlgoArg::Rel1cc => Algo::Rel1cc,
            AlgoArg::Tpcc => Algo::Tpcc,
        }
    }
}

#[derive(Args)]
struct DeclipArgs {
    /// Input signal CSV (one sample per line; `#` comments allowed).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Lower clip bound C_l.
    #[arg(long, allow_negative_numbers = true)]
    cl: f64,
    /// Upper clip bound C_u.
    #[arg(long, allow_negative_numbers = true)]
    cu: f64,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Reweighting regularizer (rel1cc).
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Iterate-difference stop (rel1cc).
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    /// Max reweighting rounds (rel1cc).
    #[arg(long, default_value_t = 10)]
    lmax: usize,
    /// Solver feasibility tolerance (bp/bpcc/rel1cc).
    #[arg(long, default_value_t = 1e-8)]
    tol_feas: f64,
    /// Solver stationarity tolerance (bp/bpcc/rel1cc).
    #[arg(long, default_value_t = 1e-8)]
    tol_gap: f64,
    /// Solver iteration cap (bp/bpcc/rel1cc).
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,
    /// Residual target (tpcc).
    #[arg(long, default_value_t = 1e-6)]
    eps_residual: f64,
    /// Support cap (tpcc); defaults to the number of non-clipped samples.
    #[arg(long)]
    max_support: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExpArg {
    /// Average minimum non-clipped count per sparsity level.
    Mmin,
    /// Recovery probability vs sparsity at fixed M.
    Probk,
    /// Greedy-pursuit recovery probability over the (K, M) grid.
    Phase,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    exp: ExpArg,
    /// Trials per sweep cell (default: 100; phase: 500).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Signal length N.
    #[arg(long, default_value_t = 128)]
    n: usize,
    /// Comma-separated sparsity grid, e.g. 2,4,6,8,10.
    #[arg(long, value_delimiter = ',')]
    k_values: Vec<usize>,
    /// Comma-separated non-clipped-count grid (probk uses the first entry).
    #[arg(long, value_delimiter = ',')]
    m_values: Vec<usize>,
    /// Also render an SVG chart next to the CSV.
    #[arg(long)]
    svg: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DemoArg {
    /// Single tone clipped across the convex-recovery transition.
    SingleTone,
    /// Support estimation on a deeply clipped sparse signal.
    Support,
    /// Two-tone signal restored by greedy pursuit.
    TwoTone,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, value_enum)]
    which: DemoArg,
    /// Signal seed for the support demo.
    #[arg(long, default_value_t = SUPPORT_DEMO_SEED)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; route errors to stderr and use
            // exit code 1 for usage problems (help/version stay 0)
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Synth(a) => cmd_synth(a, cli.verbose),
        Command::Declip(a) => cmd_declip(a, cli.verbose),
        Command::Bench(a) => cmd_bench(a, cli.verbose),
        Command::Demo(a) => cmd_demo(a, cli.verbose),
    }
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SpectrumEntry {
    k: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SpectrumJson {
    n_len: usize,
    k_sparsity: usize,
    seed: u64,
    coeffs: Vec<SpectrumEntry>,
}

fn cmd_synth(a: SynthArgs, verbose: bool) -> Result<u8, Box<dyn std::error::Error>> {
    let spec = SynthSpec::new(a.n, a.k, a.seed);
    let (x, alpha) = declip_core::synth_sparse_signal(&spec)?;
    std::fs::create_dir_all(&a.out)?;
    let signal_path = a.out.join("signal.csv");
    write_signal_file(
        &signal_path,
        &x,
        Some(&format!("synth n={} k={} seed={}", a.n, a.k, a.seed)),
    )?;
    let coeffs: Vec<SpectrumEntry> = alpha
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| SpectrumEntry {
            k,
            re: c.re,
            im: c.im,
        })
        .collect();
    let json = SpectrumJson {
        n_len: a.n,
        k_sparsity: a.k,
        seed: a.seed,
        coeffs,
    };
    let spectrum_path = a.out.join("spectrum.json");
    std::fs::write(&spectrum_path, serde_json::to_string_pretty(&json)? + "\n")?;
    if verbose {
        eprintln!(
            "wrote {} and {}",
            signal_path.display(),
            spectrum_path.display()
        );
    }
    println!("{}", signal_path.display());
    println!("{}", spectrum_path.display());
    Ok(0)
}

// ---------------------------------------------------------------------------
// declip
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Diagnostics {
    algorithm: String,
    status: String,
    iterations: usize,
    final_residual: f64,
    n_len: usize,
    m: usize,
    c_lower: f64,
    c_upper: f64,
    support: Vec<usize>,
}

fn cmd_declip(a: DeclipArgs, verbose: bool) -> Result<u8, Box<dyn std::error::Error>> {
    if !a.cl.is_finite() || !a.cu.is_finite() || a.cl >= a.cu {
        return Err(format!("--cl {} must be strictly below --cu {}", a.cl, a.cu).into());
    }
    let x_in = read_signal_file(&a.input)?;
    // Clipping is idempotent, so applying the bounds to an already-clipped
    // recording reconstructs its index sets exactly.
    let obs = clip(&x_in, a.cl, a.cu)?;
    let solver = SolverParams {
        tol_feas: a.tol_feas,
        tol_gap: a.tol_gap,
        max_iters: a.max_iters,
    };
    let algo: Algo = a.algo.into();
    let res: DeclipResult = match algo {
        Algo::Bp => declip_bp_with(&obs, &solver)?,
        Algo::Bpcc => declip_bpcc_with(&obs, &solver)?,
        Algo::Rel1cc => declip_rel1cc(
            &obs,
            &Rel1Params {
                ell_max: a.lmax,
                eps: a.eps,
                delta: a.delta,
                solver,
            },
        )?,
        Algo::Tpcc => declip_tpcc(
            &obs,
            &TpccParams {
                eps_residual: a.eps_residual,
                max_support: a.max_support,
            },
        )?,
    };

    std::fs::create_dir_all(&a.out)?;
    let recovered_path = a.out.join("recovered.csv");
    write_signal_file(
        &recovered_path,
        &res.x_hat,
        Some(&format!("declip algo={algo} cl={} cu={}", a.cl, a.cu)),
    )?;
    let diag = Diagnostics {
        algorithm: algo.to_string(),
        status: res.status.as_str().to_string(),
        iterations: res.iterations,
        final_residual: res.final_residual,
        n_len: obs.n_len(),
        m: obs.m(),
        c_lower: a.cl,
        c_upper: a.cu,
        support: res.support.indices(),
    };
    let diag_path = a.out.join("diagnostics.json");
    std::fs::write(&diag_path, serde_json::to_string_pretty(&diag)? + "\n")?;
    if verbose {
        eprintln!(
            "status={} iterations={} residual={:.3e}",
            res.status.as_str(),
            res.iterations,
            res.final_residual
        );
    }
    println!("{}", recovered_path.display());
    println!("{}", diag_path.display());
    Ok(if res.status == DeclipStatus::Converged {
        0
    } else {
        2
    })
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn cmd_bench(a: BenchArgs, verbose: bool) -> Result<u8, Box<dyn std::error::Error>> {
    let default_k = vec![2, 4, 6, 8, 10];
    let cfg = TrialConfig {
        n_len: a.n,
        k_values: if a.k_values.is_empty() {
            default_k
        } else {
            a.k_values.clone()
        },
        m_values: if a.m_values.is_empty() {
            match a.exp {
                ExpArg::Probk => vec![70],
                ExpArg::Phase => vec![10, 20, 30, 40, 50, 60, 70],
                ExpArg::Mmin => vec![],
            }
        } else {
            a.m_values.clone()
        },
        trials: a.trials.unwrap_or(match a.exp {
            ExpArg::Phase => 500,
            _ => 100,
        }),
        seed: a.seed,
        ..TrialConfig::new(a.seed)
    };
    let started = std::time::Instant::now();
    let (name, mut table): (&str, ExperimentTable) = match a.exp {
        ExpArg::Mmin => ("mmin", run_mmin_experiment(&cfg)?),
        ExpArg::Probk => ("probk", run_prob_vs_k(&cfg)?),
        ExpArg::Phase => ("phase", run_tpcc_phase(&cfg)?),
    };
    if verbose {
        eprintln!("{name} finished in {:?}", started.elapsed());
    }
    table.stamp_now();
    std::fs::create_dir_all(&a.out)?;
    let csv_path = a.out.join(format!("{name}.csv"));
    table.write_csv(&csv_path)?;
    println!("{}", csv_path.display());
    if a.svg {
        let svg_path = a.out.join(format!("{name}.svg"));
        std::fs::write(&svg_path, render_chart(a.exp, &cfg, &table))?;
        println!("{}", svg_path.display());
    }
    Ok(0)
}

fn render_chart(exp: ExpArg, cfg: &TrialConfig, table: &ExperimentTable) -> String {
    match exp {
        ExpArg::Mmin => {
            let series: Vec<svg::Series> = cfg
                .algorithms
                .iter()
                .map(|&algo| svg::Series {
                    label: algo.to_string(),
                    points: cfg
                        .k_values
                        .iter()
                        .filter_map(|&k| table.mean_m(algo, k).map(|m| (k as f64, m)))
                        .collect(),
                })
                .collect();
            svg::line_chart(
                "Mean minimum non-clipped samples vs sparsity",
                "sparsity K",
                "mean minimum M",
                &series,
            )
        }
        ExpArg::Probk => {
            let m = cfg.m_values.first().copied().unwrap_or(70);
            let series: Vec<svg::Series> = cfg
                .algorithms
                .iter()
                .map(|&algo| svg::Series {
                    label: algo.to_string(),
                    points: cfg
                        .k_values
                        .iter()
                        .filter_map(|&k| table.success_rate(algo, k, m).map(|r| (k as f64, r)))
                        .collect(),
                })
                .collect();
            svg::line_chart(
                &format!("Recovery probability vs sparsity (M = {m})"),
                "sparsity K",
                "recovery probability",
                &series,
            )
        }
        ExpArg::Phase => {
            let xs: Vec<f64> = cfg.k_values.iter().map(|&k| k as f64).collect();
            let ys: Vec<f64> = cfg.m_values.iter().map(|&m| m as f64).collect();
            let cells: Vec<Vec<f64>> = cfg
                .m_values
                .iter()
                .map(|&m| {
                    cfg.k_values
                        .iter()
                        .map(|&k| table.success_rate(Algo::Tpcc, k, m).unwrap_or(f64::NAN))
                        .collect()
                })
                .collect();
            svg::heatmap(
                "Greedy-pursuit recovery probability",
                "sparsity K",
                "non-clipped samples M",
                &xs,
                &ys,
                &cells,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

fn cmd_demo(a: DemoArgs, verbose: bool) -> Result<u8, Box<dyn std::error::Error>> {
    std::fs::create_dir_all(&a.out)?;
    match a.which {
        DemoArg::SingleTone => {
            let demo = demo_single_tone()?;
            demo.write_csv(&a.out)?;
            for case in &demo.cases {
                for o in &case.outcomes {
                    println!(
                        "single-tone M={:3} {:6}: error {:.3e} ({})",
                        case.m,
                        o.algo.to_string(),
                        o.error,
                        if o.recovered { "recovered" } else { "failed" }
                    );
                }
            }
        }
        DemoArg::Support => {
            let demo = demo_support_estimation(a.seed)?;
            demo.write_csv(&a.out)?;
            println!(
                "support demo seed={} M={} clipped-spectrum match={} zero-padded match={}",
                demo.seed,
                demo.observation.m(),
                demo.clipped_matches,
                demo.zero_pad_matches
            );
        }
        DemoArg::TwoTone => {
            let demo = demo_two_tone()?;
            demo.write_csv(&a.out)?;
            for case in &demo.cases {
                let o = &case.outcomes[0];
                println!(
                    "two-tone M={:3}: error {:.3e} ({})",
                    case.m,
                    o.error,
                    if o.recovered { "recovered" } else { "failed" }
                );
            }
        }
    }
    if verbose {
        eprintln!("demo files in {}", a.out.display());
    }
    Ok(0)
}
