use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use wayaudit_core::measurement::NondestructiveReport;
use wayaudit_core::noise::{BoundReport, RobertsonReport};
use wayaudit_core::way::AssumptionCheck;
use wayaudit_core::{
    bound_audit_sweep, check_conserved, check_exact, check_nondestructive, counterexample_sweep, feasibility_search,
    noise_report, pointer_gram_rank, theorem_verdict, variance_audit_sweep, variance_identity_audit, AuditConfig,
    BoundAudit, BoundTally, BoundValue, CounterexampleSweep, Operator64, Outcome, SearchConfig, StateVector64,
    Tolerances64, VarianceAudit,
};

use crate::json::{format_float, matrix, Json};
use crate::model::{complex, load_model, model_echo, InputError, LoadedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Conservation, nondestructiveness and exactness of a model
    Check,
    /// Theorem verdict for a model
    Verdict,
    /// Noise and its lower bounds for a model, probe and system state
    Bound,
    /// Seeded random sweep (see --kind)
    Sweep,
    /// Search the commutant for an exact nondestructive scheme
    Optimize,
    /// Rank of the L^B Gram matrix over the pointer states
    Rank,
    /// Product-state variance audit
    AuditVariance,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Check => "check",
            Self::Verdict => "verdict",
            Self::Bound => "bound",
            Self::Sweep => "sweep",
            Self::Optimize => "optimize",
            Self::Rank => "rank",
            Self::AuditVariance => "audit-variance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Counterexample,
    BoundAudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "wayaudit",
    version,
    about = "Audit nondestructive measurement models against multiplicative conservation laws"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Model file (JSON)
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Verdict tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<SweepKind>,
    /// System state: basis index, "plus", or an inline [[re, im], ...] literal
    #[arg(long)]
    pub state: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Optimizer restarts
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Optimizer iterations per restart
    #[arg(long)]
    pub max_iter: Option<usize>,
}

/// A finished command: the serialized report and whether a falsifiable
/// assertion failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub falsified: bool,
}

type Result<T> = std::result::Result<T, InputError>;

fn core(field: &str) -> impl Fn(wayaudit_core::Error) -> InputError + '_ {
    move |e| InputError::new(field, e.to_string())
}

pub fn execute(cli: &Cli) -> Result<Report> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(InputError::new("tol", "must be a positive number"));
    }
    if cli.format == Format::Csv && cli.command != Command::Sweep {
        return Err(InputError::new("format", "csv output is only available for sweep"));
    }
    let (results, verdict, falsified, seed, model) = match cli.command {
        Command::Check => with_model(cli, check)?,
        Command::Verdict => with_model(cli, verdict)?,
        Command::Bound => with_model(cli, bound)?,
        Command::Rank => with_model(cli, rank)?,
        Command::Optimize => with_model(cli, optimize)?,
        Command::AuditVariance => audit_variance(cli)?,
        Command::Sweep => return sweep(cli),
    };
    let body = envelope(cli, results, verdict, seed, model).to_canonical();
    Ok(Report { body, falsified })
}

/// `(results, verdict, falsified, seed)` of a model command.
type ModelOutputs = (Json, Json, bool, Option<u64>);
type Outputs = (Json, Json, bool, Option<u64>, Option<Json>);

fn with_model(cli: &Cli, f: fn(&Cli, &LoadedModel) -> Result<ModelOutputs>) -> Result<Outputs> {
    let path = cli.model.as_deref().ok_or_else(|| InputError::new("model", "this command needs --model"))?;
    let m = load_model(path)?;
    let (results, verdict, falsified, seed) = f(cli, &m)?;
    Ok((results, verdict, falsified, seed, Some(model_echo(&m))))
}

fn envelope(cli: &Cli, results: Json, verdict: Json, seed: Option<u64>, model: Option<Json>) -> Json {
    let t = Tolerances64::default();
    let tolerances = Json::obj([
        ("verdict", Json::from(cli.tol)),
        ("hermiticity", t.hermiticity.into()),
        ("unitarity", t.unitarity.into()),
        ("rank", t.rank.into()),
        ("conservation", t.conservation.into()),
        ("grouping", t.grouping.into()),
    ]);
    Json::obj([
        ("command", command_echo(cli)),
        ("tolerances", tolerances),
        ("results", results),
        ("verdict", verdict),
        ("seed", seed.into()),
        ("version", format!("wayaudit {}", env!("CARGO_PKG_VERSION")).into()),
        ("model", model.into()),
    ])
}

fn command_echo(cli: &Cli) -> Json {
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    Json::obj([
        ("name", Json::from(cli.command.name())),
        ("model", path(&cli.model).into()),
        ("tol", cli.tol.into()),
        ("seed", cli.seed.into()),
        ("count", cli.count.into()),
        ("n1", cli.n1.into()),
        ("n2", cli.n2.into()),
        (
            "kind",
            cli.kind.map(|k| if k == SweepKind::Counterexample { "counterexample" } else { "bound-audit" }).into(),
        ),
        ("state", cli.state.clone().into()),
        ("format", Json::from(if cli.format == Format::Json { "json" } else { "csv" })),
        ("restarts", cli.restarts.into()),
        ("max_iter", cli.max_iter.into()),
    ])
}

fn require<T: Copy>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| InputError::new(field, format!("this command needs --{}", field.replace('_', "-"))))
}

/// `--state`: a basis index, `plus`, or an inline `[[re, im], ...]` literal.
pub fn parse_state(spec: &str, dim: usize) -> Result<StateVector64> {
    let spec = spec.trim();
    if spec == "plus" {
        return StateVector64::uniform(dim).map_err(core("state"));
    }
    if let Ok(index) = spec.parse::<usize>() {
        return StateVector64::basis(dim, index).map_err(core("state"));
    }
    let value: serde_json::Value = serde_json::from_str(spec)
        .map_err(|_| InputError::new("state", "expected a basis index, \"plus\", or a [[re, im], ...] literal"))?;
    let items = value.as_array().ok_or_else(|| InputError::new("state", "expected an array literal"))?;
    if items.len() != dim {
        return Err(InputError::new("state", format!("expected {dim} amplitudes, found {}", items.len())));
    }
    let amps = items.iter().enumerate().map(|(k, z)| complex(z, &format!("state[{k}]"))).collect::<Result<_>>()?;
    StateVector64::from_amplitudes(amps).map_err(core("state"))
}

fn nondestructive_json(nd: &NondestructiveReport<f64>) -> Json {
    Json::obj([
        ("leakage", Json::from(nd.leakage)),
        ("verdict", nd.verdict.into()),
        ("degenerate_pointers", Json::arr(nd.degenerate.iter().map(|&(i, n)| Json::arr([Json::from(i), n.into()])))),
        ("pointers", nd.pointers.as_ref().map(|p| Json::arr(p.pointers.iter())).into()),
    ])
}

fn check(cli: &Cli, m: &LoadedModel) -> Result<ModelOutputs> {
    let cons = check_conserved(&m.model, &m.conserved, cli.tol).map_err(core("conserved"))?;
    let nd = check_nondestructive(&m.model, cli.tol);
    let exact = check_exact(&m.model, cli.tol).ok();
    let exact_json = exact
        .as_ref()
        .map(|e| Json::obj([("gram", matrix(&e.gram)), ("deficit", e.deficit.into()), ("verdict", e.verdict.into())]));
    let results = Json::obj([
        (
            "conservation",
            Json::obj([
                ("kind", Json::from(m.conserved.kind.name())),
                ("residual", cons.residual.into()),
                ("verdict", cons.verdict.into()),
            ]),
        ),
        ("nondestructive", nondestructive_json(&nd)),
        ("exactness", exact_json.into()),
    ]);
    let verdict = Json::obj([
        ("conserved", Json::from(cons.verdict)),
        ("nondestructive", nd.verdict.into()),
        ("exact", exact.map(|e| e.verdict).into()),
    ]);
    Ok((results, verdict, false, None))
}

fn assumption_json(a: &AssumptionCheck<f64>) -> Json {
    Json::obj([("name", Json::from(a.name)), ("residual", a.residual.into()), ("passed", a.passed.into())])
}

fn verdict(cli: &Cli, m: &LoadedModel) -> Result<ModelOutputs> {
    let v = theorem_verdict(&m.model, &m.conserved, cli.tol).map_err(core("conserved"))?;
    let results = Json::obj([
        ("assumptions", Json::arr(v.assumptions.iter().map(assumption_json))),
        ("commutator_norm", v.commutator_norm.into()),
        ("outcome", v.outcome.name().into()),
        ("proof_counting_bound", v.proof_counting_bound.into()),
    ]);
    Ok((results, v.outcome.name().into(), v.outcome == Outcome::Contradiction, None))
}

fn bound_value(b: BoundValue<f64>) -> Json {
    match b {
        BoundValue::Value(v) => Json::from(v),
        BoundValue::Undefined => Json::from("undefined"),
        BoundValue::NotApplicable => Json::from("not_applicable"),
    }
}

fn bound_json(b: &BoundReport<f64>) -> Json {
    Json::obj([
        ("bound", bound_value(b.bound)),
        ("numerator", b.numerator.into()),
        ("denominator", b.denominator.into()),
        ("valid", b.valid.into()),
    ])
}

fn robertson_json(r: &RobertsonReport<f64>, valid: bool) -> Json {
    Json::obj([
        ("bound", Json::from(r.bound)),
        ("numerator", r.numerator.into()),
        ("var_l_exact", r.var_l_exact.into()),
        ("degenerate", r.degenerate.into()),
        ("valid", valid.into()),
    ])
}

fn bound(cli: &Cli, m: &LoadedModel) -> Result<ModelOutputs> {
    let probe = m.probe()?;
    let spec = cli.state.as_deref().ok_or_else(|| InputError::new("state", "this command needs --state"))?;
    let psi = parse_state(spec, m.model.n1())?;
    let o = m.observable_or_default();
    let r = noise_report(&m.model, &o, probe, &m.conserved, &psi).map_err(core("model"))?;
    let results = Json::obj([
        ("state", Json::from(&psi)),
        ("epsilon_sq", r.epsilon_sq.into()),
        ("robertson", robertson_json(&r.robertson, r.robertson_valid)),
        ("paper", bound_json(&r.paper)),
        ("yanase", bound_json(&r.yanase)),
        ("simplified", bound_json(&r.simplified)),
        ("var_L_exact", r.var_l_exact.into()),
        ("var_product_claim", r.var_product_claim.into()),
    ]);
    let verdict = if r.robertson_valid { "robertson_valid" } else { "robertson_violated" };
    Ok((results, verdict.into(), !r.robertson_valid, None))
}

fn rank(cli: &Cli, m: &LoadedModel) -> Result<ModelOutputs> {
    let nd = check_nondestructive(&m.model, cli.tol);
    let family = nd.pointer_family().map_err(core("unitary"))?;
    let r = pointer_gram_rank(&m.conserved.lb, family, cli.tol).map_err(core("conserved.LB"))?;
    let results = Json::obj([
        ("gram_lb", matrix(&r.gram_lb)),
        ("rank", r.rank.into()),
        ("constant_case", r.constant_case.into()),
        ("rank_consistent", r.rank_consistent.into()),
        ("nondestructive", nd.verdict.into()),
    ]);
    let verdict = Json::obj([("rank", Json::from(r.rank)), ("constant_case", r.constant_case.into())]);
    Ok((results, verdict, !r.rank_consistent, None))
}

fn optimize(cli: &Cli, m: &LoadedModel) -> Result<ModelOutputs> {
    let seed = require(cli.seed, "seed")?;
    let defaults = SearchConfig::<f64>::default();
    let config = SearchConfig {
        seed,
        restarts: cli.restarts.unwrap_or(defaults.restarts),
        max_iter: cli.max_iter.unwrap_or(defaults.max_iter),
        ..defaults
    };
    if config.restarts == 0 {
        return Err(InputError::new("restarts", "must be at least 1"));
    }
    let o = m.observable_or_default();
    let f = feasibility_search(&m.conserved, &o, m.model.n2(), &config).map_err(core("conserved"))?;
    let s = &f.search;
    let results = Json::obj([
        ("best_objective", Json::from(s.best_objective)),
        ("best_restart", s.best_restart.into()),
        ("restart_objectives", Json::arr(s.restart_objectives.iter().copied())),
        ("restarts_used", s.restarts_used.into()),
        ("iterations", s.iterations.into()),
        ("converged", s.converged.into()),
        ("objective_trace", Json::arr(s.objective_trace.iter().map(|&(k, v)| Json::arr([Json::from(k), v.into()])))),
        ("best_unitary", (&s.best_unitary).into()),
        ("best_ready_state", (&s.best_ready_state).into()),
        ("leakage", f.leakage.into()),
        ("deficit", f.deficit.into()),
        ("commutator_norm", f.commutator_norm.into()),
        ("within_hypotheses", f.within_hypotheses.into()),
        ("floor_holds", f.floor_holds.into()),
    ]);
    let verdict = match f.floor_holds {
        Some(true) => "floor_holds",
        Some(false) => "floor_broken",
        None => "not_applicable",
    };
    Ok((results, verdict.into(), f.floor_holds == Some(false), Some(seed)))
}

fn variance_json(a: &VarianceAudit<f64>) -> Json {
    Json::obj([
        ("lhs", Json::from(a.lhs)),
        ("paper_rhs", a.paper_rhs.into()),
        ("corrected_rhs", a.corrected_rhs.into()),
        ("paper_claim_holds", a.paper_claim_holds.into()),
        ("corrected_holds", a.corrected_holds.into()),
    ])
}

/// With `--model`: `A = L^A` on `--state` (default `plus`) and `B = L^B` on
/// the ready state. Without: `A = B = Z` on `|+⟩ ⊗ |0⟩`. `--count` adds
/// seeded random product-state trials.
fn audit_variance(cli: &Cli) -> Result<Outputs> {
    let (single, model) = match &cli.model {
        Some(path) => {
            let m = load_model(path)?;
            let psi = parse_state(cli.state.as_deref().unwrap_or("plus"), m.model.n1())?;
            let q = &m.conserved;
            let a = variance_identity_audit(&q.la, &q.lb, &psi, m.model.ready_state()).map_err(core("model"))?;
            (a, Some(model_echo(&m)))
        }
        None => {
            let z = Operator64::pauli_z();
            let plus = StateVector64::uniform(2).expect("static");
            let zero = StateVector64::basis(2, 0).expect("static");
            (variance_identity_audit(&z, &z, &plus, &zero).map_err(core("state"))?, None)
        }
    };
    let mut falsified = !single.corrected_holds;
    let mut results = vec![("instance", variance_json(&single))];
    let mut seed = None;
    if let Some(count) = cli.count {
        let s = require(cli.seed, "seed")?;
        let (n1, n2) = (cli.n1.unwrap_or(2), cli.n2.unwrap_or(2));
        let sweep = variance_audit_sweep::<f64>(n1, n2, count, s).map_err(core("count"))?;
        falsified |= sweep.corrected_failures > 0;
        seed = Some(s);
        results.push((
            "random",
            Json::obj([
                ("n1", Json::from(n1)),
                ("n2", n2.into()),
                ("trials", sweep.trials.into()),
                ("corrected_failures", sweep.corrected_failures.into()),
                ("paper_failures", sweep.paper_failures.into()),
                ("max_corrected_gap", sweep.max_corrected_gap.into()),
                ("max_paper_gap", sweep.max_paper_gap.into()),
            ]),
        ));
    }
    let verdict = Json::obj([
        ("corrected_holds", Json::from(!falsified)),
        ("paper_claim_holds", single.paper_claim_holds.into()),
    ]);
    Ok((Json::obj(results), verdict, falsified, seed, model))
}

fn sweep(cli: &Cli) -> Result<Report> {
    let kind = require(cli.kind, "kind")?;
    let seed = require(cli.seed, "seed")?;
    let n1 = require(cli.n1, "n1")?;
    let n2 = require(cli.n2, "n2")?;
    let count = require(cli.count, "count")?;
    if count == 0 {
        return Err(InputError::new("count", "must be at least 1"));
    }
    match kind {
        SweepKind::Counterexample => {
            let s = counterexample_sweep::<f64>(n1, n2, count, seed, cli.tol).map_err(core("n1"))?;
            let falsified = s.contradictions > 0 || s.counterexamples > 0;
            let body = match cli.format {
                Format::Csv => counterexample_csv(&s),
                Format::Json => {
                    let verdict = if falsified { "contradiction" } else { "consistent" };
                    envelope(cli, counterexample_json(&s), verdict.into(), Some(seed), None).to_canonical()
                }
            };
            Ok(Report { body, falsified })
        }
        SweepKind::BoundAudit => {
            let a = bound_audit_sweep::<f64>(AuditConfig { n1, n2, count, seed }).map_err(core("n2"))?;
            let falsified = a.summary.robertson.violations > 0;
            let body = match cli.format {
                Format::Csv => audit_csv(&a),
                Format::Json => {
                    let verdict = if falsified { "robertson_violated" } else { "robertson_valid" };
                    envelope(cli, audit_json(&a), verdict.into(), Some(seed), None).to_canonical()
                }
            };
            Ok(Report { body, falsified })
        }
    }
}

fn counterexample_json(s: &CounterexampleSweep<f64>) -> Json {
    let trials = s.trials.iter().map(|t| {
        Json::obj([
            ("trial", Json::from(t.trial)),
            ("flavor", t.flavor.name().into()),
            ("leakage", t.leakage.into()),
            ("deficit", t.deficit.into()),
            ("commutator_norm", t.commutator_norm.into()),
            ("outcome", t.outcome.name().into()),
            ("counterexample", t.counterexample.into()),
        ])
    });
    Json::obj([
        ("n1", Json::from(s.n1)),
        ("n2", s.n2.into()),
        ("count", s.count.into()),
        ("contradictions", s.contradictions.into()),
        ("counterexamples", s.counterexamples.into()),
        ("exact_found", s.exact_found.into()),
        ("max_exact_commutator", s.max_exact_commutator.into()),
        ("trials", Json::arr(trials)),
    ])
}

fn tally_json(t: &BoundTally) -> Json {
    Json::obj([
        ("applicable", Json::from(t.applicable)),
        ("evaluated", t.evaluated.into()),
        ("degenerate", t.degenerate.into()),
        ("violations", t.violations.into()),
        ("violation_fraction", t.violation_fraction().into()),
    ])
}

fn audit_json(a: &BoundAudit<f64>) -> Json {
    let s = &a.summary;
    let records = a.records.iter().map(|r| {
        Json::obj([
            ("trial", Json::from(r.trial)),
            ("epsilon_sq", r.epsilon_sq.into()),
            ("robertson_bound", r.robertson_bound.into()),
            ("paper_bound", bound_value(r.paper)),
            ("yanase_bound", bound_value(r.yanase)),
            ("simplified_bound", bound_value(r.simplified)),
            ("robertson_valid", r.robertson_valid.into()),
            ("paper_valid", r.paper_valid.into()),
            ("yanase_valid", r.yanase_valid.into()),
            ("simplified_valid", r.simplified_valid.into()),
        ])
    });
    Json::obj([
        ("n1", Json::from(a.config.n1)),
        ("n2", a.config.n2.into()),
        ("count", a.config.count.into()),
        (
            "summary",
            Json::obj([
                ("trials", Json::from(s.trials)),
                ("robertson", tally_json(&s.robertson)),
                ("paper", tally_json(&s.paper)),
                ("yanase", tally_json(&s.yanase)),
                ("simplified", tally_json(&s.simplified)),
            ]),
        ),
        ("records", Json::arr(records)),
    ])
}

/// Bound-audit CSV columns, in order.
pub const AUDIT_COLUMNS: [&str; 15] = [
    "trial",
    "n1",
    "n2",
    "epsilon_sq",
    "robertson_bound",
    "paper_bound",
    "paper_defined",
    "yanase_applicable",
    "yanase_bound",
    "simplified_applicable",
    "simplified_bound",
    "robertson_valid",
    "paper_valid",
    "yanase_valid",
    "simplified_valid",
];

fn num(x: f64) -> String {
    format_float(x).unwrap_or_default()
}

fn opt_num(b: BoundValue<f64>) -> String {
    b.value().map(num).unwrap_or_default()
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// One row per trial, then a `summary` row: `*_bound` columns hold the
/// degeneracy count, `paper_defined` and `*_applicable` hold counts, and
/// `*_valid` columns hold violation fractions.
fn audit_csv(a: &BoundAudit<f64>) -> String {
    let (n1, n2) = (a.config.n1.to_string(), a.config.n2.to_string());
    let mut rows: Vec<Vec<String>> = a
        .records
        .iter()
        .map(|r| {
            vec![
                r.trial.to_string(),
                n1.clone(),
                n2.clone(),
                num(r.epsilon_sq),
                num(r.robertson_bound),
                opt_num(r.paper),
                r.paper.is_defined().to_string(),
                r.yanase.is_applicable().to_string(),
                opt_num(r.yanase),
                r.simplified.is_applicable().to_string(),
                opt_num(r.simplified),
                r.robertson_valid.to_string(),
                opt_bool(r.paper_valid),
                opt_bool(r.yanase_valid),
                opt_bool(r.simplified_valid),
            ]
        })
        .collect();
    let s = &a.summary;
    rows.push(vec![
        "summary".into(),
        n1,
        n2,
        String::new(),
        s.robertson.degenerate.to_string(),
        s.paper.degenerate.to_string(),
        s.paper.evaluated.to_string(),
        s.yanase.applicable.to_string(),
        s.yanase.degenerate.to_string(),
        s.simplified.applicable.to_string(),
        s.simplified.degenerate.to_string(),
        num(s.robertson.violation_fraction()),
        num(s.paper.violation_fraction()),
        num(s.yanase.violation_fraction()),
        num(s.simplified.violation_fraction()),
    ]);
    write_csv(&AUDIT_COLUMNS, rows)
}

/// Counterexample-sweep CSV columns, in order.
pub const COUNTEREXAMPLE_COLUMNS: [&str; 9] =
    ["trial", "n1", "n2", "flavor", "leakage", "deficit", "commutator_norm", "outcome", "counterexample"];

/// One row per trial, then a `summary` row: `commutator_norm` holds the
/// largest commutator among exact instances, `outcome` the contradiction
/// count and `counterexample` the counterexample count.
fn counterexample_csv(s: &CounterexampleSweep<f64>) -> String {
    let (n1, n2) = (s.n1.to_string(), s.n2.to_string());
    let mut rows: Vec<Vec<String>> = s
        .trials
        .iter()
        .map(|t| {
            vec![
                t.trial.to_string(),
                n1.clone(),
                n2.clone(),
                t.flavor.name().into(),
                num(t.leakage),
                t.deficit.map(num).unwrap_or_default(),
                num(t.commutator_norm),
                t.outcome.name().into(),
                t.counterexample.to_string(),
            ]
        })
        .collect();
    rows.push(vec![
        "summary".into(),
        n1,
        n2,
        format!("exact_found={}", s.exact_found),
        String::new(),
        String::new(),
        s.max_exact_commutator.map(num).unwrap_or_default(),
        s.contradictions.to_string(),
        s.counterexamples.to_string(),
    ]);
    write_csv(&COUNTEREXAMPLE_COLUMNS, rows)
}

pub fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, &report.body)
            .map_err(|e| InputError::new("out", format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(report.body.as_bytes())
                .map_err(|e| InputError::new("out", format!("cannot write to stdout: {e}")))
        }
    }
}
