use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seedstable::estimators::Folds;
use seedstable::learners::LearnerSpec;
use seedstable::stability::{corollary1_min_bags, lemma1_variance_threshold, theorem1_min_bags, StabilityTarget};
use seedstable_cli::config::{load_config, EstimateConfig, GlobalConfig, Method, Sim1Config, Sim2Config};
use seedstable_cli::experiments::{run_estimate, run_sim1, run_sim2};
use seedstable_cli::output::{read_estimates, stability_summary, write_estimate, write_sim1, write_sim2, write_stability};
use seedstable_cli::{with_workers, CliError};

/// Seed-stable bagging and cross-bagging estimators.
#[derive(Parser)]
#[command(name = "seedstable", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bag counts and variance thresholds from the stability bounds.
    Bounds(BoundsArgs),
    /// Experiment 1: unbagged vs subbagged neural net on DGP-A.
    Sim1(Sim1Args),
    /// Experiment 2: AIPW with cross-fitting vs adaptive cross-bagging on DGP-B.
    Sim2(Sim2Args),
    /// Estimate the ATE on a CSV dataset with columns x.., a, y.
    Estimate(EstimateArgs),
    /// Recompute empirical stability from an estimates CSV.
    Stability(StabilityArgs),
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    /// Number of test points.
    #[arg(long, default_value_t = 1)]
    k: u64,
    /// Seed variance of a single prediction; 0.25 is the worst case.
    #[arg(long, default_value_t = 0.25)]
    nu2: f64,
    /// Sample size, for the functional bound.
    #[arg(long, requires_all = ["p", "lipschitz"])]
    n: Option<u64>,
    /// Number of nuisance functions, for the functional bound.
    #[arg(long, requires_all = ["n", "lipschitz"])]
    p: Option<u64>,
    /// Lipschitz constant of the functional.
    #[arg(long = "L", alias = "lipschitz", id = "lipschitz", requires_all = ["n", "p"])]
    lipschitz: Option<f64>,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "SEEDSTABLE_WORKERS")]
    workers: Option<usize>,
}

impl GlobalArgs {
    fn apply(&self, g: &mut GlobalConfig) {
        if let Some(s) = self.master_seed {
            g.master_seed = s;
        }
        if let Some(o) = &self.out {
            g.out_dir = o.clone();
        }
        if self.workers.is_some() {
            g.workers = self.workers;
        }
    }
}

macro_rules! override_fields {
    ($args:expr, $cfg:expr, $($field:ident),*) => {
        $(if let Some(v) = $args.$field.clone() { $cfg.$field = v; })*
    };
}

#[derive(Args)]
struct Sim1Args {
    #[command(flatten)]
    global: GlobalArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    /// Bags in the subbagged net.
    #[arg(long)]
    v_bags: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    hidden_units: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
}

/// A comma-separated fold list as one flag value.
#[derive(Clone)]
struct FoldList(Vec<Folds>);

fn parse_fold_list(s: &str) -> Result<FoldList, String> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(FoldList(Vec::new()));
    }
    s.split(',')
        .map(|f| f.parse::<Folds>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(FoldList)
}

#[derive(Args)]
struct Sim2Args {
    #[command(flatten)]
    global: GlobalArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trees: Option<usize>,
    /// Comma-separated folds for plain cross-fitting, e.g. `2,10,loo`; `none` disables.
    #[arg(long, value_parser = parse_fold_list)]
    folds: Option<FoldList>,
    /// Folds for the seed-averaged baselines; `none` disables.
    #[arg(long, value_parser = parse_fold_list)]
    avg_folds: Option<FoldList>,
    #[arg(long)]
    avg_seeds: Option<usize>,
    /// Skip adaptive cross-bagging.
    #[arg(long)]
    no_adaptive: bool,
    #[arg(long)]
    v0: Option<usize>,
    #[arg(long)]
    growth: Option<f64>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    clip: Option<f64>,
    /// Record wall-clock time per estimate (makes outputs run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum LearnerKind {
    Forest,
    NeuralNet,
    Constant,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    global: GlobalArgs,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long, value_parser = |s: &str| s.parse::<Folds>().map_err(|e| e.to_string()))]
    folds: Option<Folds>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    v0: Option<usize>,
    #[arg(long)]
    growth: Option<f64>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    clip: Option<f64>,
    /// Learner for every nuisance.
    #[arg(long, value_enum)]
    learner: Option<LearnerKind>,
    /// Trees when the learner is a forest.
    #[arg(long)]
    trees: Option<usize>,
}

#[derive(Args)]
struct StabilityArgs {
    /// Estimates CSV written by `sim1` or `sim2`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    /// Also write `stability_report.json` and `stability_curve.csv` here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let target = StabilityTarget::new(args.epsilon, args.delta)?;
    let (threshold, certifiable) = lemma1_variance_threshold(target, args.k)?;
    let bags = theorem1_min_bags(target, args.k, args.nu2)?;
    let functional = match (args.n, args.p, args.lipschitz) {
        (Some(n), Some(p), Some(l)) => Some(corollary1_min_bags(target, n, p, l, args.nu2)?),
        _ => None,
    };
    if args.json {
        let value = serde_json::json!({
            "epsilon": args.epsilon,
            "delta": args.delta,
            "k": args.k,
            "nu2": args.nu2,
            "variance_threshold": threshold,
            "unbagged_certifiable": certifiable,
            "min_bags": bags,
            "functional_min_bags": functional,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{:<28} {:>24}", "quantity", "value");
        println!("{:<28} {:>24.6e}", "variance threshold", threshold);
        println!("{:<28} {:>24}", "unbagged certifiable", certifiable);
        println!("{:<28} {:>24}", "min bags (V)", bags);
        if let Some(v) = functional {
            println!("{:<28} {:>24}", "functional min bags (V)", v);
        }
    }
    Ok(())
}

fn sim1(args: &Sim1Args) -> Result<(), CliError> {
    let mut cfg: Sim1Config = load_config(args.global.config.as_deref())?;
    args.global.apply(&mut cfg.global);
    override_fields!(args, cfg, n, seeds, v_bags, rho, epsilon, delta);
    override_fields!(args, cfg.net, hidden_units, learning_rate, epochs);
    let out = with_workers(cfg.global.workers, || run_sim1(&cfg))?;
    let report = write_sim1(&cfg.global.out_dir, &out)?;
    for m in &report.methods {
        if let Some(s) = &m.stability {
            eprintln!("sim1 {}: delta_hat={} r={}", m.method, s.delta_hat, s.ratio);
        }
    }
    Ok(())
}

fn sim2(args: &Sim2Args) -> Result<(), CliError> {
    let mut cfg: Sim2Config = load_config(args.global.config.as_deref())?;
    args.global.apply(&mut cfg.global);
    override_fields!(args, cfg, n, seeds, rho, epsilon, delta, trees, avg_seeds, v0, growth, max_rounds, clip);
    if let Some(f) = &args.folds {
        cfg.folds = f.0.clone();
    }
    if let Some(f) = &args.avg_folds {
        cfg.avg_folds = f.0.clone();
    }
    if args.no_adaptive {
        cfg.adaptive = false;
    }
    if args.timing {
        cfg.timing = true;
    }
    let out = with_workers(cfg.global.workers, || run_sim2(&cfg))?;
    let report = write_sim2(&cfg.global.out_dir, &out)?;
    for m in &report.methods {
        match &m.stability {
            Some(s) => eprintln!(
                "sim2 {}: delta_hat={} r={} failures={}",
                m.method, s.delta_hat, s.ratio, m.failures
            ),
            None => eprintln!("sim2 {}: too few estimates, failures={}", m.method, m.failures),
        }
    }
    Ok(())
}

fn estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let mut cfg: EstimateConfig = load_config(args.global.config.as_deref())?;
    args.global.apply(&mut cfg.global);
    override_fields!(args, cfg, input, method, folds, rho, epsilon, delta, v0, growth, max_rounds, clip);
    if let Some(kind) = args.learner {
        cfg.learner = match kind {
            LearnerKind::Forest => LearnerSpec::forest(args.trees.unwrap_or(100)),
            LearnerKind::NeuralNet => LearnerSpec::neural_net(),
            LearnerKind::Constant => LearnerSpec::Constant,
        };
    } else if let (Some(t), LearnerSpec::Forest(p)) = (args.trees, &mut cfg.learner) {
        p.tree_count = t;
    }
    let result = with_workers(cfg.global.workers, || run_estimate(&cfg))?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    if args.global.out.is_some() {
        write_estimate(&cfg.global.out_dir, &result)?;
    }
    Ok(())
}

fn stability(args: &StabilityArgs) -> Result<(), CliError> {
    let target = StabilityTarget::new(args.epsilon, args.delta)?;
    let file = std::fs::File::open(&args.input)
        .map_err(|e| CliError::Io { context: format!("opening {}", args.input.display()), source: e })?;
    let summary = stability_summary(&read_estimates(file)?, target)?;
    println!("{:<28} {:>10} {:>22} {:>22}", "method", "estimates", "delta_hat", "ratio");
    for m in &summary.methods {
        match &m.stability {
            Some(s) => println!("{:<28} {:>10} {:>22} {:>22}", m.method, m.estimates, s.delta_hat, s.ratio),
            None => println!("{:<28} {:>10} {:>22} {:>22}", m.method, m.estimates, "-", "-"),
        }
    }
    if let Some(dir) = &args.out {
        write_stability(dir, &summary)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(a) => bounds(a),
        Command::Sim1(a) => sim1(a),
        Command::Sim2(a) => sim2(a),
        Command::Estimate(a) => estimate(a),
        Command::Stability(a) => stability(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
