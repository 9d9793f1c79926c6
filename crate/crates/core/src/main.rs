//! Command-line harness: deterministic experiments over the multiplier
//! library with JSON reports and optional CSV tables. Exit code 0 means
//! every declared check passed, 1 means a check failed, 2 means the
//! configuration was invalid.

use clap::{Args, Parser, Subcommand};
use dyadic_maximal::bump::BumpSumMultiplier;
use dyadic_maximal::counterexample::{
    g_n_norm, log_log_slope, verify_conclusion, verify_lower_bound, GrowthWeight,
};
use dyadic_maximal::decomposition::{
    build_blocks, criterion_sum, evaluate_criterion, measure_omega, rearrange, OmegaKind, Verdict,
};
use dyadic_maximal::grid::{
    self, localized_seminorm, mikhlin_seminorm_bump, mikhlin_seminorm_symbol, GridFunction,
    GridSpec, GridSymbol,
};
use dyadic_maximal::report::{write_csv, Report};
use dyadic_maximal::tiling::{build_tiling, verify_cover, verify_disjoint, TilingInstance};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser, Debug)]
#[command(name = "dyadic-maximal", version, about = "Probes for maximal operators of dilated Fourier multipliers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// JSON report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV table path
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build disjoint, covering translates of an integer set
    Tile {
        /// Comma-separated set E (e.g. 0,5); random when omitted
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<i64>>,
        /// Capacity exponent N (card E must be <= 2^N)
        #[arg(long)]
        cap_exp: u32,
        /// Center index range I: builds b_{-I}..b_I
        #[arg(long, default_value_t = 8)]
        range: i64,
        /// Number of random instances when --set is omitted
        #[arg(long, default_value_t = 1)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the maximal-operator lower bound and conclusion growth
    Counterexample {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Comma-separated Lebesgue exponents
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<f64>,
        /// Also report the weighted growth chain (v = sqrt log)
        #[arg(long)]
        conclusion: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm growth of the lacunary test functions g_N
    Growth {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mikhlin seminorms of a multiplier
    Seminorm {
        /// Multiplier JSON path; constant 1 when omitted
        #[arg(long)]
        multiplier: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Also report localized per-scale seminorms over this k window
        #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
        k_lo: i64,
        #[arg(long, default_value_t = 4)]
        k_hi: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dyadic maximal function of a multiplier on a periodic grid
    Maximal {
        #[arg(long)]
        multiplier: PathBuf,
        /// Input grid function (header JSON path); random band-limited when omitted
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k_lo: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k_hi: i64,
        /// Extra dilation samples per octave (1 = dyadic only)
        #[arg(long, default_value_t = 1)]
        per_octave: usize,
        #[arg(long, default_value_t = 4096)]
        grid_n: usize,
        #[arg(long, default_value_t = 64.0)]
        grid_l: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kernel weight sequence, rearrangement, and frequency blocks
    Decompose {
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
        k_lo: i64,
        #[arg(long, default_value_t = 12)]
        k_hi: i64,
        /// Weighted-norm exponent p'
        #[arg(long, default_value_t = 2.0)]
        pp: f64,
        /// Weight power alpha in (1+|x|)^alpha
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Summability criterion verdict for a multiplier's weight sequence
    Criterion {
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
        k_lo: i64,
        #[arg(long, default_value_t = 12)]
        k_hi: i64,
        #[arg(long, default_value_t = 2.0)]
        pp: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Tail horizon for the rearranged sum
        #[arg(long, default_value_t = 256)]
        tail_l: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug)]
enum RunError {
    Config(String),
    CheckFailed,
    Io(std::io::Error),
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn config_err(e: impl std::fmt::Display) -> RunError {
    RunError::Config(e.to_string())
}

fn load_multiplier(path: &PathBuf) -> Result<BumpSumMultiplier, RunError> {
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(config_err)?;
    BumpSumMultiplier::from_json(&v).map_err(config_err)
}

fn run_tile(
    set: Option<Vec<i64>>,
    cap_exp: u32,
    range: i64,
    instances: usize,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if range < 1 {
        return Err(RunError::Config("range must be positive".into()));
    }
    let config = json!({
        "set": set, "cap_exp": cap_exp, "range": range,
        "instances": instances, "seed": seed,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets: Vec<Vec<i64>> = match set {
        Some(e) => vec![e],
        None => (0..instances)
            .map(|_| {
                let card = rng.gen_range(1..=1usize << cap_exp.min(6));
                let bound = 1i64 << (2 * cap_exp + 1);
                (0..card).map(|_| rng.gen_range(0..bound)).collect()
            })
            .collect(),
    };
    for e in &mut sets {
        e.sort_unstable();
        e.dedup();
    }
    let mut results = Vec::new();
    let mut all_pass = true;
    for e in &sets {
        let instance = TilingInstance::new(e.clone(), cap_exp, range).map_err(config_err)?;
        let tiling = build_tiling(&instance).map_err(config_err)?;
        let window = 4i64.pow(cap_exp + 1);
        let disjoint = verify_disjoint(&tiling, e);
        let cover = verify_cover(&tiling, window).map_err(config_err)?;
        all_pass &= disjoint && cover && tiling.max_forbidden <= 1usize << (2 * cap_exp + 1);
        results.push(json!({
            "set": e,
            "centers": (-range..=range).map(|i| tiling.center(i)).collect::<Vec<_>>(),
            "max_forbidden": tiling.max_forbidden,
            "verified": {"disjoint": disjoint, "cover": cover},
        }));
    }
    Report::new("tile", config, results, all_pass).write(output.out.as_deref())?;
    if all_pass {
        Ok(())
    } else {
        Err(RunError::CheckFailed)
    }
}

fn run_counterexample(
    n_min: u32,
    n_max: u32,
    p: &[f64],
    conclusion: bool,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if n_min < 1 || n_min > n_max {
        return Err(RunError::Config("need 1 <= n_min <= n_max".into()));
    }
    if p.iter().any(|&q| q < 1.0) {
        return Err(RunError::Config("exponents must satisfy p >= 1".into()));
    }
    let config = json!({"n_min": n_min, "n_max": n_max, "p": p, "conclusion": conclusion});
    let weight = GrowthWeight::sqrt_log();
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut all_pass = true;
    for n in n_min..=n_max {
        for &q in p {
            let lb = verify_lower_bound(n, q).map_err(config_err)?;
            all_pass &= lb.pass;
            rows.push(vec![n as f64, q, lb.norm_value, lb.bound]);
            let mut entry = serde_json::to_value(&lb).expect("report");
            if conclusion {
                let c = verify_conclusion(n, q, &weight).map_err(config_err)?;
                entry["conclusion"] = serde_json::to_value(&c).expect("report");
            }
            results.push(entry);
        }
    }
    if let Some(csv) = &output.csv {
        write_csv(csv, &["n", "p", "norm_value", "bound"], &rows)?;
    }
    Report::new("counterexample", config, results, all_pass).write(output.out.as_deref())?;
    if all_pass {
        Ok(())
    } else {
        Err(RunError::CheckFailed)
    }
}

fn run_growth(n_min: u32, n_max: u32, p: f64, output: &OutputArgs) -> Result<(), RunError> {
    if n_min < 1 || n_min >= n_max {
        return Err(RunError::Config("need 1 <= n_min < n_max".into()));
    }
    let config = json!({"n_min": n_min, "n_max": n_max, "p": p});
    let ns: Vec<f64> = (n_min..=n_max).map(f64::from).collect();
    let norms: Vec<f64> = (n_min..=n_max).map(|n| g_n_norm(n, p)).collect();
    let slope = log_log_slope(&ns, &norms);
    let rows: Vec<Vec<f64>> = ns.iter().zip(&norms).map(|(&n, &v)| vec![n, v]).collect();
    if let Some(csv) = &output.csv {
        write_csv(csv, &["n", "norm"], &rows)?;
    }
    let results = json!({"p": p, "norms": norms, "fit_exponent": slope});
    Report::new("growth", config, results, true).write(output.out.as_deref())?;
    Ok(())
}

fn run_seminorm(
    multiplier: Option<PathBuf>,
    order: usize,
    k_lo: i64,
    k_hi: i64,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if k_lo > k_hi {
        return Err(RunError::Config("need k_lo <= k_hi".into()));
    }
    let config = json!({"multiplier": multiplier, "order": order, "k_lo": k_lo, "k_hi": k_hi});
    let results = match &multiplier {
        Some(path) => {
            let m = load_multiplier(path)?;
            let global = mikhlin_seminorm_bump(&m, order.min(4), 64);
            let localized: Vec<serde_json::Value> = (k_lo..=k_hi)
                .map(|k| json!({"k": k, "value": localized_seminorm(&m, k, order.min(4), 512)}))
                .collect();
            json!({"seminorm": global, "localized": localized})
        }
        None => {
            let one = grid::FnSymbol(|_k: i64, _xi: &[f64]| Complex64::new(1.0, 0.0));
            let global = mikhlin_seminorm_symbol(&one, order.min(2), 8, 64);
            json!({"seminorm": global})
        }
    };
    Report::new("seminorm", config, results, true).write(output.out.as_deref())?;
    Ok(())
}

fn random_band_limited(spec: GridSpec, band: f64, rng: &mut ChaCha8Rng) -> GridFunction {
    let vals: Vec<Complex64> = (0..spec.points())
        .map(|q| {
            if spec.freq(q)[0].abs() <= band {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    grid::idft(&GridSymbol::sampled(spec, vals))
}

#[allow(clippy::too_many_arguments)]
fn run_maximal(
    multiplier: &PathBuf,
    function: Option<PathBuf>,
    k_lo: i64,
    k_hi: i64,
    per_octave: usize,
    grid_n: usize,
    grid_l: f64,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if k_lo > k_hi {
        return Err(RunError::Config("empty dilation set".into()));
    }
    if per_octave == 0 {
        return Err(RunError::Config("per_octave must be positive".into()));
    }
    let config = json!({
        "multiplier": multiplier, "function": function, "k_lo": k_lo, "k_hi": k_hi,
        "per_octave": per_octave, "grid_n": grid_n, "grid_l": grid_l, "seed": seed,
    });
    let m = load_multiplier(multiplier)?;
    let spec = GridSpec::new(1, grid_n, grid_l);
    let f = match &function {
        Some(path) => {
            let f = GridFunction::load(path).map_err(config_err)?;
            if f.spec != spec {
                return Err(RunError::Config("function grid does not match config".into()));
            }
            f
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_band_limited(spec, grid_l / 8.0, &mut rng)
        }
    };
    let sym = GridSymbol::lazy(spec, Arc::new(m));
    let ts: Vec<f64> = (k_lo..=k_hi)
        .flat_map(|k| {
            (0..per_octave)
                .map(move |s| 2f64.powi(k as i32) * 2f64.powf(s as f64 / per_octave as f64))
        })
        .collect();
    let sup = grid::maximal(&sym, &ts, &f).map_err(config_err)?;
    let results = json!({
        "dilation_samples": ts.len(),
        "input_l2": f.lp_norm(2.0),
        "maximal_l2": sup.lp_norm(2.0),
        "maximal_sup": sup.lp_norm(f64::INFINITY),
    });
    Report::new("maximal", config, results, true).write(output.out.as_deref())?;
    Ok(())
}

fn omega_for(
    multiplier: &PathBuf,
    k_lo: i64,
    k_hi: i64,
    pp: f64,
    alpha: f64,
) -> Result<dyadic_maximal::decomposition::WeightSequence, RunError> {
    if k_lo > k_hi {
        return Err(RunError::Config("need k_lo <= k_hi".into()));
    }
    let m = load_multiplier(multiplier)?;
    // only scales within reach of the localizer contribute
    let ks: Vec<i64> = (k_lo..=k_hi)
        .filter(|&k| (-2..=2).any(|d| m.coeff_at_scale(k + d).is_some()))
        .collect();
    if ks.is_empty() {
        return Err(RunError::Config("no multiplier scale meets the k window".into()));
    }
    let spec = GridSpec::new(1, 32768, 2048.0);
    measure_omega(&m, &ks, spec, OmegaKind::WeightedNorm { pp, alpha }).map_err(config_err)
}

fn run_decompose(
    multiplier: &PathBuf,
    k_lo: i64,
    k_hi: i64,
    pp: f64,
    alpha: f64,
    output: &OutputArgs,
) -> Result<(), RunError> {
    let config = json!({
        "multiplier": multiplier, "k_lo": k_lo, "k_hi": k_hi, "pp": pp, "alpha": alpha,
    });
    let omega = omega_for(multiplier, k_lo, k_hi, pp, alpha)?;
    let star = rearrange(&omega);
    let blocks = build_blocks(&omega);
    if let Some(csv) = &output.csv {
        let rows: Vec<Vec<f64>> = omega
            .support()
            .iter()
            .map(|&k| vec![k as f64, omega.get(k)])
            .collect();
        write_csv(csv, &["k", "omega"], &rows)?;
    }
    let results = json!({
        "omega": omega,
        "rearranged": star.sorted,
        "blocks": blocks.iter().map(|b| json!({
            "j": b.j, "ks": b.ks, "card": b.ks.len(),
        })).collect::<Vec<_>>(),
    });
    Report::new("decompose", config, results, true).write(output.out.as_deref())?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_criterion(
    multiplier: &PathBuf,
    k_lo: i64,
    k_hi: i64,
    pp: f64,
    alpha: f64,
    tail_l: usize,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if tail_l < 4 {
        return Err(RunError::Config("tail_l must be at least 4".into()));
    }
    let config = json!({
        "multiplier": multiplier, "k_lo": k_lo, "k_hi": k_hi,
        "pp": pp, "alpha": alpha, "tail_l": tail_l,
    });
    let omega = omega_for(multiplier, k_lo, k_hi, pp, alpha)?;
    let mut report = evaluate_criterion(&omega, tail_l);
    report.kind = OmegaKind::WeightedNorm { pp, alpha };
    let sum = criterion_sum(&omega, tail_l);
    let pass = report.verdict == Verdict::Satisfied;
    let results = json!({
        "criterion_sum": sum.value,
        "report": report,
    });
    Report::new("criterion", config, results, pass).write(output.out.as_deref())?;
    if pass {
        Ok(())
    } else {
        Err(RunError::CheckFailed)
    }
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Tile { set, cap_exp, range, instances, seed, output } => {
            run_tile(set, cap_exp, range, instances, seed, &output)
        }
        Command::Counterexample { n_min, n_max, p, conclusion, output } => {
            run_counterexample(n_min, n_max, &p, conclusion, &output)
        }
        Command::Growth { n_min, n_max, p, output } => run_growth(n_min, n_max, p, &output),
        Command::Seminorm { multiplier, order, k_lo, k_hi, output } => {
            run_seminorm(multiplier, order, k_lo, k_hi, &output)
        }
        Command::Maximal {
            multiplier,
            function,
            k_lo,
            k_hi,
            per_octave,
            grid_n,
            grid_l,
            seed,
            output,
        } => run_maximal(
            &multiplier, function, k_lo, k_hi, per_octave, grid_n, grid_l, seed, &output,
        ),
        Command::Decompose { multiplier, k_lo, k_hi, pp, alpha, output } => {
            run_decompose(&multiplier, k_lo, k_hi, pp, alpha, &output)
        }
        Command::Criterion { multiplier, k_lo, k_hi, pp, alpha, tail_l, output } => {
            run_criterion(&multiplier, k_lo, k_hi, pp, alpha, tail_l, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::CheckFailed) => {
            eprintln!("error: declared checks failed");
            ExitCode::from(1)
        }
        Err(RunError::Config(msg)) => {
            eprintln!("error: invalid configuration: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Io(e)) => {
            eprintln!("error: io: {e}");
            ExitCode::from(2)
        }
    }
}
