use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gpidist::{CompositionKind, CostModelKind, DistanceKind};
use gpidist_cli::{
    cmd_budget, cmd_compose, cmd_figures, cmd_qft, cmd_qpe, cmd_validate, emit, MethodChoice,
    QftArgs, QpeArgs, ValidateArgs,
};

#[derive(Parser)]
#[command(
    name = "gpidist",
    version,
    about = "Phase-invariant distance composition, synthesis budgets, and \
             T-count estimators for fault-tolerant circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    /// Iterated pair bound.
    Exact,
    /// Prefix-sum approximation.
    Approx1,
    /// Scaled tensor bound (uses --c).
    Approx2,
    /// Plain sum of leaf errors.
    Sum,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModelArg {
    /// T-count 3.067 log(1/eps) - 4.322.
    Kmm15,
    /// T-count 4 log(1/eps) + 10.
    Selinger15,
    /// Leading-order T-count 3 log(1/eps).
    RossSelinger16,
}

impl From<ModelArg> for CostModelKind {
    fn from(arg: ModelArg) -> Self {
        match arg {
            ModelArg::Kmm15 => CostModelKind::Kmm15,
            ModelArg::Selinger15 => CostModelKind::Selinger15,
            ModelArg::RossSelinger16 => CostModelKind::RossSelinger16,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum DistanceArg {
    /// Global-phase-invariant distance.
    Gpi,
    /// Operator-norm distance.
    Opnorm,
}

impl From<DistanceArg> for DistanceKind {
    fn from(arg: DistanceArg) -> Self {
        match arg {
            DistanceArg::Gpi => DistanceKind::Gpi,
            DistanceArg::Opnorm => DistanceKind::OperatorNorm,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum KindArg {
    /// Sequential product of factors.
    Product,
    /// Tensor product of factors.
    Tensor,
}

impl From<KindArg> for CompositionKind {
    fn from(arg: KindArg) -> Self {
        match arg {
            KindArg::Product => CompositionKind::Product,
            KindArg::Tensor => CompositionKind::Tensor,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the error bound of a composition-tree JSON file.
    Compose {
        /// Path of the tree file.
        #[arg(long)]
        input: PathBuf,
        /// Bound to evaluate.
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Constant for the approx2 method.
        #[arg(long, default_value_t = 7.5)]
        c: f64,
        /// Also report every node's intermediate bound.
        #[arg(long)]
        verbose: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the equal-split synthesis budget in both distance regimes.
    Budget {
        /// Number of approximable rotations.
        #[arg(long = "n-r")]
        n_r: u64,
        /// Total error budget.
        #[arg(long)]
        eps: f64,
        /// Budget slack reserved away from synthesis.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Scaled-tensor constant in the budget equation.
        #[arg(long, default_value_t = 7.5)]
        c: f64,
        /// Synthesis cost model.
        #[arg(long, value_enum, default_value_t = ModelArg::Kmm15)]
        model: ModelArg,
        /// Logarithm base of the cost model.
        #[arg(long, default_value_t = 2.0)]
        log_base: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the T-count of a QFT with optional rotation pruning.
    Qft {
        /// Qubit count.
        #[arg(long)]
        n: u32,
        /// Keep controlled rotations up to this index; omit to keep all.
        #[arg(long)]
        k_max: Option<u32>,
        /// Total error budget.
        #[arg(long)]
        eps: f64,
        /// Budget slack reserved away from synthesis.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Scaled-tensor constant in the budget equation.
        #[arg(long, default_value_t = 7.5)]
        c: f64,
        /// Synthesis cost model.
        #[arg(long, value_enum, default_value_t = ModelArg::Kmm15)]
        model: ModelArg,
        /// Logarithm base of the cost model.
        #[arg(long, default_value_t = 2.0)]
        log_base: f64,
        /// Distance driving the budget split.
        #[arg(long, value_enum, default_value_t = DistanceArg::Gpi)]
        distance: DistanceArg,
        /// Approximable rotations per kept controlled rotation.
        #[arg(long, default_value_t = 3)]
        rz_per_crk: u64,
        /// Fixed T gates per kept controlled rotation.
        #[arg(long, default_value_t = 7)]
        fixed_tcount_per_crk: u64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the T-count of a phase-estimation circuit.
    Qpe {
        /// Accuracy bits of the estimated phase.
        #[arg(long)]
        n: u32,
        /// Success probability.
        #[arg(long)]
        p: f64,
        /// Total error budget.
        #[arg(long)]
        eps_total: f64,
        /// Budget reserved for the phase approximation itself.
        #[arg(long)]
        eps_qpe: f64,
        /// Controlled powers of the target rotation.
        #[arg(long)]
        rotations: u64,
        /// Budget slack reserved away from synthesis.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Scaled-tensor constant in the budget equation.
        #[arg(long, default_value_t = 7.5)]
        c: f64,
        /// Synthesis cost model.
        #[arg(long, value_enum, default_value_t = ModelArg::Kmm15)]
        model: ModelArg,
        /// Logarithm base of the cost model.
        #[arg(long, default_value_t = 2.0)]
        log_base: f64,
        /// Distance driving the budget split.
        #[arg(long, value_enum, default_value_t = DistanceArg::Gpi)]
        distance: DistanceArg,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo check of the bounds against brute-force matrices.
    Validate {
        /// Composition under test.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Qubits per factor.
        #[arg(long)]
        n_qubits: u32,
        /// Factor count.
        #[arg(long)]
        m: u64,
        /// Per-factor errors, comma separated; one value is broadcast.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Trial count.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Master seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write per-trial records to this CSV file.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Write the JSON summary here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Regenerate the twelve sweep CSV files.
    Figures {
        /// Directory receiving the CSV files.
        #[arg(long)]
        out_dir: PathBuf,
        /// Write the JSON manifest here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), gpidist_cli::CliError> {
    match cli.command {
        Command::Compose {
            input,
            method,
            c,
            verbose,
            output,
        } => {
            let choice = match method {
                MethodArg::Exact => MethodChoice::exact(),
                MethodArg::Approx1 => MethodChoice::approx1(),
                MethodArg::Approx2 => MethodChoice::approx2(c),
                MethodArg::Sum => MethodChoice::sum(),
            };
            let text = cmd_compose(&input, choice, verbose)?;
            emit(&text, output.as_deref())
        }
        Command::Budget {
            n_r,
            eps,
            delta,
            c,
            model,
            log_base,
            output,
        } => {
            let text = cmd_budget(n_r, eps, delta, c, model.into(), log_base)?;
            emit(&text, output.as_deref())
        }
        Command::Qft {
            n,
            k_max,
            eps,
            delta,
            c,
            model,
            log_base,
            distance,
            rz_per_crk,
            fixed_tcount_per_crk,
            output,
        } => {
            let text = cmd_qft(&QftArgs {
                n,
                k_max,
                eps,
                delta,
                c,
                kind: model.into(),
                log_base,
                distance: distance.into(),
                rz_per_crk,
                fixed_tcount_per_crk,
            })?;
            emit(&text, output.as_deref())
        }
        Command::Qpe {
            n,
            p,
            eps_total,
            eps_qpe,
            rotations,
            delta,
            c,
            model,
            log_base,
            distance,
            output,
        } => {
            let text = cmd_qpe(&QpeArgs {
                n,
                p,
                eps_total,
                eps_qpe,
                target_rotations: rotations,
                delta,
                c,
                kind: model.into(),
                log_base,
                distance: distance.into(),
            })?;
            emit(&text, output.as_deref())
        }
        Command::Validate {
            kind,
            n_qubits,
            m,
            eps,
            trials,
            seed,
            records,
            output,
        } => {
            let (text, violations) = cmd_validate(&ValidateArgs {
                kind: kind.into(),
                n_qubits,
                m,
                eps,
                trials,
                seed,
                records,
            })?;
            emit(&text, output.as_deref())?;
            eprintln!("violations: {violations}");
            Ok(())
        }
        Command::Figures { out_dir, output } => {
            let text = cmd_figures(&out_dir)?;
            emit(&text, output.as_deref())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
