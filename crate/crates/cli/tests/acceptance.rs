//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use wayaudit_cli::run::AUDIT_COLUMNS;
use wayaudit_core::measurement::exactness_of;
use wayaudit_core::random::seeded_rng;
use wayaudit_core::way::{gram_rank, random_exact_commuting_model};
use wayaudit_core::{
    bound_audit_sweep, check_conserved, check_nondestructive, counterexample_sweep, feasibility_search,
    matrix_element_identity, pointer_gram_rank, synthesize_unitary, theorem_verdict, variance_audit_sweep,
    variance_identity_audit, AuditConfig, Complex64, Conserved64, Operator64, Outcome, SearchConfig, StateVector64,
};

type Verdict = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn diag12() -> Operator64 {
    Operator64::from_diagonal(&[1.0, 2.0])
}

fn theorem_sweep() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, (n1, n2)) in [(2, 2), (2, 3), (3, 3), (3, 5)].into_iter().enumerate() {
        let s = counterexample_sweep::<f64>(n1, n2, 1000, 2024 + k as u64, 1e-9).map_err(|e| e.to_string())?;
        let max_comm = s.max_exact_commutator.unwrap_or(0.0);
        ok &= s.contradictions == 0 && max_comm <= 1e-8;
        notes.push(format!(
            "({n1},{n2}) contradictions={} exact={} max_comm={max_comm:.1e}",
            s.contradictions, s.exact_found
        ));
    }
    let elapsed = start.elapsed();
    ensure(ok && within(elapsed, 60), format!("{}; {:.1}s", notes.join(", "), elapsed.as_secs_f64()))
}

fn constructive_commuting_case() -> Verdict {
    let basis = StateVector64::computational_basis(2);
    let ready = StateVector64::basis(2, 0).unwrap();
    let pointers = StateVector64::computational_basis(2);
    let m = synthesize_unitary(&basis, &ready, &pointers).map_err(|e| e.to_string())?;
    let q = Conserved64::multiplicative(diag12(), Operator64::identity(2)).unwrap();
    let cons = check_conserved(&m, &q, 1e-10).map_err(|e| e.to_string())?;
    let nd = check_nondestructive(&m, 1e-10);
    let family = nd.pointer_family().map_err(|e| e.to_string())?;
    let exact = exactness_of(family, 1e-10);
    let v = theorem_verdict(&m, &q, 1e-10).map_err(|e| e.to_string())?;
    ensure(
        cons.residual <= 1e-10 && nd.leakage <= 1e-10 && exact.deficit <= 1e-10 && v.outcome == Outcome::Consistent,
        format!(
            "residual={:.1e} leakage={:.1e} deficit={:.1e} outcome={}",
            cons.residual,
            nd.leakage,
            exact.deficit,
            v.outcome.name()
        ),
    )
}

fn no_go_floor() -> Verdict {
    let start = Instant::now();
    let q = Conserved64::multiplicative(diag12(), Operator64::identity(2)).unwrap();
    let config = SearchConfig { seed: 17, restarts: 8, max_iter: 2000, ..SearchConfig::default() };
    let x = feasibility_search(&q, &Operator64::pauli_x(), 2, &config).map_err(|e| e.to_string())?;
    let min_restart = x.search.restart_objectives.iter().copied().fold(f64::INFINITY, f64::min);
    let z = feasibility_search(&q, &Operator64::pauli_z(), 2, &config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        x.search.restart_objectives.len() == 8
            && min_restart > 1e-3
            && z.search.best_objective <= 1e-8
            && within(elapsed, 120),
        format!(
            "X: min over 8 restarts {min_restart:.3e} (floor 1e-3); Z control {:.1e}; {:.1}s",
            z.search.best_objective,
            elapsed.as_secs_f64()
        ),
    )
}

fn robertson_validity() -> Verdict {
    let start = Instant::now();
    let a =
        bound_audit_sweep::<f64>(AuditConfig { n1: 2, n2: 3, count: 10_000, seed: 99 }).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r = a.summary.robertson;
    ensure(
        r.violations == 0 && a.records.len() == 10_000 && within(elapsed, 60),
        format!("violations={} degenerate={} over 10000; {:.1}s", r.violations, r.degenerate, elapsed.as_secs_f64()),
    )
}

fn matrix_element_identity_holds() -> Verdict {
    let dims = [(2, 2), (2, 3), (3, 3), (3, 5)];
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let (n1, n2) = dims[trial % dims.len()];
        let mut rng = seeded_rng(5150, trial as u64);
        let (m, q) = random_exact_commuting_model::<f64>(n1, n2, &mut rng).map_err(|e| e.to_string())?;
        let table = matrix_element_identity(&m, &q, 1e-9).map_err(|e| format!("trial {trial}: {e}"))?;
        worst = worst.max(table.max_abs);
    }
    ensure(worst <= 1e-8, format!("max residual {worst:.2e} over 1000 models"))
}

fn rank_argument() -> Verdict {
    let c = Complex64::new(1.5, 0.0);
    let constant = gram_rank(vec![vec![c; 3]; 3], 1e-9);
    let m = wayaudit_core::Model64::cnot();
    let nd = check_nondestructive(&m, 1e-9);
    let r = pointer_gram_rank(&Operator64::identity(2), nd.pointer_family().map_err(|e| e.to_string())?, 1e-9)
        .map_err(|e| e.to_string())?;
    ensure(
        constant.rank == 1 && constant.constant_case && r.rank == 2 && !r.constant_case,
        format!(
            "constant: rank {} constant_case {}; CNOT: rank {} constant_case {}",
            constant.rank, constant.constant_case, r.rank, r.constant_case
        ),
    )
}

fn variance_claim_audit() -> Verdict {
    let z = Operator64::pauli_z();
    let plus = StateVector64::uniform(2).unwrap();
    let zero = StateVector64::basis(2, 0).unwrap();
    let a = variance_identity_audit(&z, &z, &plus, &zero).map_err(|e| e.to_string())?;
    let fixture_ok = (a.lhs - 1.0).abs() <= 1e-12
        && a.paper_rhs.abs() <= 1e-12
        && (a.corrected_rhs - 1.0).abs() <= 1e-12
        && a.corrected_holds
        && !a.paper_claim_holds;
    let s = variance_audit_sweep::<f64>(2, 3, 10_000, 31).map_err(|e| e.to_string())?;
    ensure(
        fixture_ok && s.corrected_failures == 0,
        format!(
            "fixture lhs={:.3} paper_rhs={:.3} corrected_rhs={:.3}; random: corrected failures {}/10000 (max gap {:.1e}), paper failures {}",
            a.lhs, a.paper_rhs, a.corrected_rhs, s.corrected_failures, s.max_corrected_gap, s.paper_failures
        ),
    )
}

fn wayaudit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wayaudit")).args(args).output().expect("binary runs")
}

fn bound_audit_report(dir: &Path) -> Verdict {
    let out = dir.join("audit.csv");
    let out_s = out.display().to_string();
    let args = [
        "sweep",
        "--kind",
        "bound-audit",
        "--n1",
        "2",
        "--n2",
        "3",
        "--count",
        "3000",
        "--seed",
        "8",
        "--format",
        "csv",
    ];
    let o = wayaudit(&[&args[..], &["--out", &out_s]].concat());
    if o.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
    }
    let mut reader = csv::Reader::from_path(&out).map_err(|e| e.to_string())?;
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(str::to_owned).collect();
    let rows: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let summary = rows.last().ok_or("no rows")?;
    let col = |name: &str| AUDIT_COLUMNS.iter().position(|c| *c == name).map(|k| summary[k].to_owned());
    ensure(
        header == AUDIT_COLUMNS && rows.len() == 3001 && &summary[0] == "summary",
        format!(
            "exit 0, {} trial rows; violation fractions paper={} yanase={} simplified={}; degenerate paper={}",
            rows.len() - 1,
            col("paper_valid").unwrap_or_default(),
            col("yanase_valid").unwrap_or_default(),
            col("simplified_valid").unwrap_or_default(),
            col("paper_bound").unwrap_or_default(),
        ),
    )
}

fn determinism(dir: &Path) -> Verdict {
    let runs: &[&[&str]] = &[
        &[
            "sweep",
            "--kind",
            "counterexample",
            "--n1",
            "3",
            "--n2",
            "5",
            "--count",
            "300",
            "--seed",
            "3",
            "--format",
            "csv",
        ],
        &["sweep", "--kind", "counterexample", "--n1", "2", "--n2", "3", "--count", "300", "--seed", "3"],
        &[
            "sweep",
            "--kind",
            "bound-audit",
            "--n1",
            "2",
            "--n2",
            "3",
            "--count",
            "500",
            "--seed",
            "4",
            "--format",
            "csv",
        ],
        &["sweep", "--kind", "bound-audit", "--n1", "3", "--n2", "3", "--count", "200", "--seed", "4"],
        &["optimize", "--model", "fixtures/cnot.json", "--seed", "6", "--restarts", "4", "--max-iter", "300"],
        &["audit-variance", "--count", "500", "--seed", "9"],
        &["bound", "--model", "fixtures/identity.json", "--state", "plus"],
        &["check", "--model", "fixtures/violating.json"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.join(format!("det-{k}-{rep}"));
            let path_s = path.display().to_string();
            let o = wayaudit(&[*args, &["--out", &path_s]].concat());
            if o.status.code() != Some(0) {
                return Err(format!("{}: exit {:?}", args.join(" "), o.status.code()));
            }
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{} differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} seeded commands byte-identical across reruns", runs.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        ("theorem consistency sweep", Box::new(theorem_sweep)),
        ("constructive commuting case", Box::new(constructive_commuting_case)),
        ("no-go feasibility floor", Box::new(no_go_floor)),
        ("Robertson bound validity", Box::new(robertson_validity)),
        ("matrix-element identity", Box::new(matrix_element_identity_holds)),
        ("Gram rank argument", Box::new(rank_argument)),
        ("variance-claim audit", Box::new(variance_claim_audit)),
        ("bound-audit report", Box::new(|| bound_audit_report(dir.path()))),
        ("determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
