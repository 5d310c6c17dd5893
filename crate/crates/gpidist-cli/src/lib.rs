//! Command implementations behind the `gpidist` binary.
//!
//! Every command produces exactly one JSON document on stdout (or into
//! `--output`), so reports are machine-readable and byte-identical across
//! runs with the same flags. Sweep and trial tables go to CSV files named by
//! the caller. Human-oriented summaries go to stderr.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use gpidist::{
    aqft_pruning_error, aqft_tcount, compose_tree_bound, compose_tree_breakdown, cost_delta,
    equal_split_gpi, equal_split_opnorm, monte_carlo_validate, qft_rotation_census, qpe_tcount,
    sweep_approx2, sweep_product, sweep_tensor, validate_tree, Approx2Row, AqftReport,
    BoundMethod, BudgetError, BudgetSolution, CircuitError, CompositionKind, CompositionTree,
    CostModel, CostModelKind, DistanceKind, HarnessError, NodeBound, ProductRow, PruningPlan,
    QftSpec, QpeReport, QpeSpec, SweepConfig, TensorRow, TreeError, ValidateConfig,
};
use serde::Serialize;

/// Version stamp carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Failure classes, one per documented exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, unparsable input, or out-of-range parameters (exit 2).
    Input(String),
    /// A budget constraint that cannot be met (exit 3).
    Infeasible(String),
    /// Filesystem failure while writing results (exit 4).
    Io(String),
}

impl CliError {
    /// The process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Infeasible(msg) | CliError::Io(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<TreeError> for CliError {
    fn from(err: TreeError) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<BudgetError> for CliError {
    fn from(err: BudgetError) -> Self {
        match err {
            BudgetError::Infeasible { .. } => CliError::Infeasible(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(err: CircuitError) -> Self {
        match err {
            CircuitError::BudgetExhausted { .. } | CircuitError::EmptySynthesisBudget { .. } => {
                CliError::Infeasible(err.to_string())
            }
            CircuitError::Budget(inner) => inner.into(),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(err: HarnessError) -> Self {
        CliError::Input(err.to_string())
    }
}

fn serialize<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display())))
}

/// Prints `text` to stdout, or writes it to `output` when given.
pub fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn model_warning(kind: CostModelKind) -> Option<&'static str> {
    match kind {
        CostModelKind::RossSelinger16 => Some(
            "ross_selinger16 is a leading-order model: the cost formula drops \
             additive lower-order terms",
        ),
        _ => None,
    }
}

fn build_model(kind: CostModelKind, log_base: f64) -> Result<CostModel, CliError> {
    let model = match kind {
        CostModelKind::Kmm15 => CostModel::kmm15(),
        CostModelKind::Selinger15 => CostModel::selinger15(),
        CostModelKind::RossSelinger16 => CostModel::ross_selinger16(),
    };
    Ok(model.with_log_base(log_base)?)
}

/// Bound selector plus the constant for the scaled-tensor method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodChoice {
    /// Which product bound to evaluate.
    pub method: BoundMethod,
    /// Name used in the report (`exact`, `approx1`, `approx2`, `sum`).
    pub name: &'static str,
}

impl MethodChoice {
    /// The iterated pair bound.
    pub fn exact() -> Self {
        Self {
            method: BoundMethod::ExactIterative,
            name: "exact",
        }
    }

    /// The prefix-sum approximation.
    pub fn approx1() -> Self {
        Self {
            method: BoundMethod::ApproxI,
            name: "approx1",
        }
    }

    /// The scaled tensor bound with constant `c`.
    pub fn approx2(c: f64) -> Self {
        Self {
            method: BoundMethod::ApproxII { c },
            name: "approx2",
        }
    }

    /// The plain sum of leaf errors.
    pub fn sum() -> Self {
        Self {
            method: BoundMethod::SumOfError,
            name: "sum",
        }
    }
}

#[derive(Debug, Serialize)]
struct ComposeReport {
    schema_version: u32,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    qubits: u32,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    breakdown: Option<Vec<NodeBound>>,
}

/// Evaluates a composition-tree file and reports the bound, with per-node
/// intermediates when `verbose` is set.
pub fn cmd_compose(input: &Path, choice: MethodChoice, verbose: bool) -> Result<String, CliError> {
    let text = fs::read_to_string(input)
        .map_err(|err| CliError::Input(format!("cannot read {}: {err}", input.display())))?;
    let tree: CompositionTree = serde_json::from_str(&text)
        .map_err(|err| CliError::Input(format!("{}: {err}", input.display())))?;
    let qubits = validate_tree(&tree)?;
    let bound = compose_tree_bound(&tree, choice.method)?;
    let breakdown = if verbose {
        Some(compose_tree_breakdown(&tree, choice.method)?)
    } else {
        None
    };
    let c = match choice.method {
        BoundMethod::ApproxII { c } => Some(c),
        _ => None,
    };
    Ok(serialize(&ComposeReport {
        schema_version: SCHEMA_VERSION,
        method: choice.name,
        c,
        qubits,
        bound,
        breakdown,
    }))
}

#[derive(Debug, Serialize)]
struct BudgetReport {
    schema_version: u32,
    model: CostModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_warning: Option<&'static str>,
    gpi: BudgetSolution,
    operator_norm: BudgetSolution,
    cost_delta: f64,
    threshold_n_r: f64,
    above_threshold: bool,
}

/// Solves the equal-split budget in both regimes and reports the cost gap
/// together with the crossover gate count `c^2 / (1 - delta/eps)^2`.
pub fn cmd_budget(
    n_r: u64,
    eps: f64,
    delta: f64,
    c: f64,
    kind: CostModelKind,
    log_base: f64,
) -> Result<String, CliError> {
    let model = build_model(kind, log_base)?;
    let gpi = equal_split_gpi(n_r, eps, delta, c, model)?;
    let operator_norm = equal_split_opnorm(n_r, eps, model)?;
    let delta_cost = cost_delta(n_r, eps, delta, c, model)?;
    let shrink = 1.0 - delta / eps;
    let threshold_n_r = c * c / (shrink * shrink);
    Ok(serialize(&BudgetReport {
        schema_version: SCHEMA_VERSION,
        model,
        model_warning: model_warning(kind),
        gpi,
        operator_norm,
        cost_delta: delta_cost,
        threshold_n_r,
        above_threshold: n_r as f64 > threshold_n_r,
    }))
}

#[derive(Debug, Serialize)]
struct QftCliReport {
    schema_version: u32,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max: Option<u32>,
    kept: Vec<u32>,
    pruned: Vec<u32>,
    census_total: u64,
    distance: DistanceKind,
    model: CostModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_warning: Option<&'static str>,
    eps_budget: f64,
    delta: f64,
    c: f64,
    report: AqftReport,
}

/// Settings for [`cmd_qft`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftArgs {
    /// Qubit count.
    pub n: u32,
    /// Largest kept rotation index; `None` keeps every rotation.
    pub k_max: Option<u32>,
    /// Total error budget.
    pub eps: f64,
    /// Budget slack reserved away from synthesis.
    pub delta: f64,
    /// Scaled-tensor constant for the GPI budget equation.
    pub c: f64,
    /// Synthesis cost model.
    pub kind: CostModelKind,
    /// Logarithm base of the cost model.
    pub log_base: f64,
    /// Distance driving the budget split.
    pub distance: DistanceKind,
    /// Approximable leaves per kept controlled rotation.
    pub rz_per_crk: u64,
    /// Fixed T-gate overhead per kept controlled rotation.
    pub fixed_tcount_per_crk: u64,
}

/// Estimates the T-count of an (approximate) QFT under a pruning plan.
pub fn cmd_qft(args: &QftArgs) -> Result<String, CliError> {
    let model = build_model(args.kind, args.log_base)?;
    let plan = PruningPlan::keep_up_to(args.n, args.k_max.unwrap_or(args.n))?;
    let census = qft_rotation_census(args.n)?;
    let spec = QftSpec {
        n: args.n,
        rz_per_crk: args.rz_per_crk,
        fixed_tcount_per_crk: args.fixed_tcount_per_crk,
    };
    let report = aqft_tcount(
        &spec,
        &plan,
        args.eps,
        model,
        args.distance,
        args.delta,
        args.c,
    )?;
    Ok(serialize(&QftCliReport {
        schema_version: SCHEMA_VERSION,
        n: args.n,
        k_max: args.k_max,
        kept: plan.kept().iter().copied().collect(),
        pruned: plan.pruned().iter().copied().collect(),
        census_total: census.total,
        distance: args.distance,
        model,
        model_warning: model_warning(args.kind),
        eps_budget: args.eps,
        delta: args.delta,
        c: args.c,
        report,
    }))
}

#[derive(Debug, Serialize)]
struct QpeCliReport {
    schema_version: u32,
    n: u32,
    p: f64,
    eps_total: f64,
    eps_qpe: f64,
    target_rotations: u64,
    distance: DistanceKind,
    model: CostModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_warning: Option<&'static str>,
    delta: f64,
    c: f64,
    report: QpeReport,
}

/// Settings for [`cmd_qpe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpeArgs {
    /// Accuracy bits of the estimated phase.
    pub n: u32,
    /// Success probability.
    pub p: f64,
    /// Total error budget.
    pub eps_total: f64,
    /// Budget reserved for the phase approximation itself.
    pub eps_qpe: f64,
    /// Controlled powers of the target rotation.
    pub target_rotations: u64,
    /// Budget slack reserved away from synthesis.
    pub delta: f64,
    /// Scaled-tensor constant for the GPI budget equation.
    pub c: f64,
    /// Synthesis cost model.
    pub kind: CostModelKind,
    /// Logarithm base of the cost model.
    pub log_base: f64,
    /// Distance driving the budget split.
    pub distance: DistanceKind,
}

/// Estimates the T-count of a phase-estimation circuit.
pub fn cmd_qpe(args: &QpeArgs) -> Result<String, CliError> {
    let model = build_model(args.kind, args.log_base)?;
    let spec = QpeSpec {
        n: args.n,
        p: args.p,
        eps_qpe: args.eps_qpe,
    };
    let report = qpe_tcount(
        &spec,
        args.eps_total,
        model,
        args.distance,
        args.target_rotations,
        args.delta,
        args.c,
    )?;
    Ok(serialize(&QpeCliReport {
        schema_version: SCHEMA_VERSION,
        n: args.n,
        p: args.p,
        eps_total: args.eps_total,
        eps_qpe: args.eps_qpe,
        target_rotations: args.target_rotations,
        distance: args.distance,
        model,
        model_warning: model_warning(args.kind),
        delta: args.delta,
        c: args.c,
        report,
    }))
}

#[derive(Debug, Serialize)]
struct ValidateReport {
    schema_version: u32,
    kind: CompositionKind,
    n_qubits: u32,
    m: u64,
    eps_list: Vec<f64>,
    trials: u64,
    seed: u64,
    violations: u64,
    max_ratio: f64,
}

/// Settings for [`cmd_validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateArgs {
    /// Product or tensor composition.
    pub kind: CompositionKind,
    /// Qubits per factor.
    pub n_qubits: u32,
    /// Factor count.
    pub m: u64,
    /// Per-factor errors; a single value is broadcast to all `m` factors.
    pub eps: Vec<f64>,
    /// Monte-Carlo trial count.
    pub trials: u64,
    /// Master seed.
    pub seed: u64,
    /// Optional per-trial CSV destination.
    pub records: Option<PathBuf>,
}

/// Runs the Monte-Carlo soundness check and returns the JSON summary plus
/// the violation count for the caller's closing status line.
pub fn cmd_validate(args: &ValidateArgs) -> Result<(String, u64), CliError> {
    let eps_list = match args.eps.as_slice() {
        [] => return Err(CliError::Input("at least one eps value required".into())),
        [single] => vec![*single; args.m as usize],
        list => list.to_vec(),
    };
    let config = ValidateConfig {
        n_qubits: args.n_qubits,
        m: args.m,
        eps_list: eps_list.clone(),
        trials: args.trials,
        seed: args.seed,
        kind: args.kind,
    };
    let outcome = monte_carlo_validate(&config)?;
    if let Some(path) = &args.records {
        let mut csv = String::new();
        if let Some(first) = outcome.records.first() {
            csv.push_str("trial_id,n_qubits,m,measured_dp");
            for key in first.bound_values.keys() {
                csv.push_str(&format!(",bound_{key}"));
            }
            csv.push_str(",violation\n");
        }
        for record in &outcome.records {
            csv.push_str(&format!(
                "{},{},{},{:.8e}",
                record.trial_id, record.n_qubits, record.m, record.measured_dp
            ));
            for value in record.bound_values.values() {
                csv.push_str(&format!(",{value:.8e}"));
            }
            csv.push_str(&format!(",{}\n", record.violation));
        }
        write_file(path, &csv)?;
    }
    let text = serialize(&ValidateReport {
        schema_version: SCHEMA_VERSION,
        kind: args.kind,
        n_qubits: args.n_qubits,
        m: args.m,
        eps_list,
        trials: args.trials,
        seed: args.seed,
        violations: outcome.violations,
        max_ratio: outcome.max_ratio,
    });
    Ok((text, outcome.violations))
}

fn product_csv(rows: &[ProductRow]) -> String {
    let mut out = String::from("m,exact,approx1,sum\n");
    for row in rows {
        out.push_str(&format!(
            "{},{:.8e},{:.8e},{:.8e}\n",
            row.m, row.exact, row.approx1, row.sum
        ));
    }
    out
}

fn approx2_csv(rows: &[Approx2Row]) -> String {
    let mut out = String::from("m,exact,approx2,difference,sum\n");
    for row in rows {
        out.push_str(&format!(
            "{},{:.8e},{:.8e},{:.8e},{:.8e}\n",
            row.m, row.exact, row.approx2, row.difference, row.sum
        ));
    }
    out
}

fn tensor_csv(rows: &[TensorRow]) -> String {
    let mut out = String::from("m,tensor,sum\n");
    for row in rows {
        out.push_str(&format!(
            "{},{:.8e},{:.8e}\n",
            row.m, row.tensor, row.sum
        ));
    }
    out
}

/// Per-gate error grid of the product and tensor sweep families, paired
/// with the length that takes `m * eps` just past 1.
pub const SWEEP_GRID: [(f64, u64, &str); 4] = [
    (1e-1, 11, "1e-1"),
    (1e-2, 101, "1e-2"),
    (1e-3, 1001, "1e-3"),
    (1e-4, 10001, "1e-4"),
];

/// Per-gate error grid of the scaled-tensor comparison family.
pub const APPROX2_GRID: [(f64, u64, &str); 4] = [
    (1e-2, 101, "1e-2"),
    (1e-4, 101, "1e-4"),
    (1e-6, 101, "1e-6"),
    (1e-8, 101, "1e-8"),
];

/// Constant used by the scaled-tensor comparison sweeps.
pub const APPROX2_C: f64 = 7.5;

/// The file names [`cmd_figures`] writes, in emission order.
pub fn figure_file_names() -> Vec<String> {
    let mut names = Vec::new();
    for (_, _, tag) in SWEEP_GRID {
        names.push(format!("fig3_eps{tag}.csv"));
    }
    for (_, _, tag) in APPROX2_GRID {
        names.push(format!("fig4_eps{tag}.csv"));
    }
    for (_, _, tag) in SWEEP_GRID {
        names.push(format!("fig5_eps{tag}.csv"));
    }
    names
}

#[derive(Debug, Serialize)]
struct FiguresReport {
    schema_version: u32,
    out_dir: String,
    files: Vec<String>,
}

/// Regenerates the twelve sweep CSVs (product, scaled-tensor comparison,
/// and tensor families over their error grids) into `out_dir`.
pub fn cmd_figures(out_dir: &Path) -> Result<String, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|err| CliError::Io(format!("cannot create {}: {err}", out_dir.display())))?;
    let mut files = Vec::new();
    for (eps, m_max, tag) in SWEEP_GRID {
        let rows = sweep_product(&SweepConfig { eps, m_max })?;
        let name = format!("fig3_eps{tag}.csv");
        write_file(&out_dir.join(&name), &product_csv(&rows))?;
        files.push(name);
    }
    for (eps, m_max, tag) in APPROX2_GRID {
        let rows = sweep_approx2(&SweepConfig { eps, m_max }, APPROX2_C)?;
        let name = format!("fig4_eps{tag}.csv");
        write_file(&out_dir.join(&name), &approx2_csv(&rows))?;
        files.push(name);
    }
    for (eps, m_max, tag) in SWEEP_GRID {
        let rows = sweep_tensor(&SweepConfig { eps, m_max })?;
        let name = format!("fig5_eps{tag}.csv");
        write_file(&out_dir.join(&name), &tensor_csv(&rows))?;
        files.push(name);
    }
    Ok(serialize(&FiguresReport {
        schema_version: SCHEMA_VERSION,
        out_dir: out_dir.display().to_string(),
        files,
    }))
}

/// Reports the pruning error of a plan in both distances, for quick
/// inspection without a full cost estimate.
pub fn pruning_errors(n: u32, k_max: u32) -> Result<(f64, f64), CliError> {
    let plan = PruningPlan::keep_up_to(n, k_max)?;
    let gpi = aqft_pruning_error(n, &plan, DistanceKind::Gpi)?;
    let opnorm = aqft_pruning_error(n, &plan, DistanceKind::OperatorNorm)?;
    Ok((gpi, opnorm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_class() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Infeasible("x".into()).exit_code(), 3);
        assert_eq!(CliError::Io("x".into()).exit_code(), 4);
    }

    #[test]
    fn budget_errors_split_between_input_and_infeasible() {
        let infeasible: CliError = BudgetError::Infeasible {
            margin: 2.0,
            c: 1.0,
        }
        .into();
        assert_eq!(infeasible.exit_code(), 3);
        let range: CliError = BudgetError::EpsRange { eps: 2.0 }.into();
        assert_eq!(range.exit_code(), 2);
    }

    #[test]
    fn circuit_errors_split_between_input_and_infeasible() {
        let exhausted: CliError = CircuitError::BudgetExhausted {
            pruning: 0.4,
            budget: 0.3,
        }
        .into();
        assert_eq!(exhausted.exit_code(), 3);
        let empty: CliError = CircuitError::EmptySynthesisBudget {
            eps_qpe: 0.1,
            eps_total: 0.1,
        }
        .into();
        assert_eq!(empty.exit_code(), 3);
        let qubits: CliError = CircuitError::TooFewQubits { n: 1 }.into();
        assert_eq!(qubits.exit_code(), 2);
    }

    #[test]
    fn csv_rows_carry_nine_significant_digits() {
        let rows = sweep_product(&SweepConfig {
            eps: 0.01,
            m_max: 2,
        })
        .unwrap();
        let csv = product_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "m,exact,approx1,sum");
        let second = lines.nth(1).unwrap();
        assert!(second.starts_with("2,1.99995000e-2,"), "row was {second}");
        assert!(second.ends_with(",2.00000000e-2"));
    }

    #[test]
    fn figure_names_enumerate_all_twelve_files() {
        let names = figure_file_names();
        assert_eq!(names.len(), 12);
        assert_eq!(names[0], "fig3_eps1e-1.csv");
        assert_eq!(names[4], "fig4_eps1e-2.csv");
        assert_eq!(names[11], "fig5_eps1e-4.csv");
        for name in &names {
            assert!(name.ends_with(".csv"));
        }
    }

    #[test]
    fn budget_report_carries_both_regimes_and_the_threshold() {
        let text = cmd_budget(100, 0.01, 0.0, 7.5, CostModelKind::Kmm15, 2.0).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["schema_version"], 1);
        assert_eq!(value["above_threshold"], true);
        assert!((value["threshold_n_r"].as_f64().unwrap() - 56.25).abs() < 1e-12);
        assert!(value["gpi"]["total_tcount"].as_f64().unwrap() > 0.0);
        assert!(value["operator_norm"]["total_tcount"].as_f64().unwrap() > 0.0);
        assert!(value.get("model_warning").is_none());
        let rs = cmd_budget(100, 0.01, 0.0, 7.5, CostModelKind::RossSelinger16, 2.0).unwrap();
        let rs_value: serde_json::Value = serde_json::from_str(&rs).unwrap();
        assert!(rs_value["model_warning"].as_str().unwrap().contains("leading-order"));
    }

    #[test]
    fn validate_broadcasts_a_single_eps() {
        let args = ValidateArgs {
            kind: CompositionKind::Product,
            n_qubits: 1,
            m: 3,
            eps: vec![0.02],
            trials: 2,
            seed: 7,
            records: None,
        };
        let (text, violations) = cmd_validate(&args).unwrap();
        assert_eq!(violations, 0);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["eps_list"].as_array().unwrap().len(), 3);
        assert_eq!(value["violations"], 0);
    }

    #[test]
    fn infeasible_budget_maps_to_exit_three() {
        let err = cmd_budget(10, 0.9, 0.0, 0.5, CostModelKind::Kmm15, 2.0).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
