use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use super::{Failure, SolverArgs};
use crate::optimize::Outcome;
use crate::solvers::IterationRecord;
use crate::workload::PreparedWorkload;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

fn cost(v: f64) -> String {
    format!("{v:.6}")
}

fn set_label(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

#[derive(Serialize)]
struct TraceStep<'a> {
    label: &'a str,
    #[serde(flatten)]
    record: &'a IterationRecord,
}

#[derive(Serialize)]
struct OptimizeJson<'a> {
    workload: String,
    seed: u64,
    k: Option<usize>,
    prune: bool,
    equivalence_nodes: usize,
    operator_nodes: usize,
    #[serde(flatten)]
    outcome: &'a Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceStep<'a>>>,
}

#[derive(Serialize)]
struct OptimizeRow {
    algorithm: String,
    materialized: String,
    bc_empty: String,
    bc_chosen: String,
    mb_chosen: String,
    use_cost: String,
    materialization_cost: String,
    equivalence_nodes: usize,
    shareable: usize,
    oracle_calls: usize,
    bc_evaluations: usize,
}

fn csv_text<R: Serialize>(rows: &[R]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize") + "\n"
}

pub(super) fn optimize(
    path: &Path,
    prepared: &PreparedWorkload,
    outcome: &Outcome,
    solver: &SolverArgs,
    trace: bool,
    format: ReportFormat,
) -> Result<String, Failure> {
    let labels = prepared.benefit.labels();
    let steps: Vec<TraceStep> = outcome
        .solver
        .trace
        .iter()
        .map(|record| TraceStep {
            label: &labels[record.element],
            record,
        })
        .collect();
    let options = solver.options();
    match format {
        ReportFormat::Json => Ok(json_text(&OptimizeJson {
            workload: path.display().to_string(),
            seed: solver.seed,
            k: options.k,
            prune: options.prune,
            equivalence_nodes: prepared.dag.eq_nodes().len(),
            operator_nodes: prepared.dag.op_nodes().len(),
            outcome,
            trace: trace.then_some(steps),
        })),
        ReportFormat::Csv => csv_text(&[OptimizeRow {
            algorithm: outcome.algorithm.to_string(),
            materialized: outcome.labels.join(" "),
            bc_empty: cost(outcome.bc_empty),
            bc_chosen: cost(outcome.bc_chosen),
            mb_chosen: cost(outcome.mb_chosen),
            use_cost: cost(outcome.use_cost),
            materialization_cost: cost(outcome.materialization_cost),
            equivalence_nodes: prepared.dag.eq_nodes().len(),
            shareable: outcome.shareable,
            oracle_calls: outcome.oracle_calls,
            bc_evaluations: outcome.bc_evaluations,
        }]),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "workload:             {}", path.display());
            let _ = writeln!(out, "algorithm:            {}", outcome.algorithm);
            let _ = writeln!(out, "seed:                 {}", solver.seed);
            let _ = writeln!(
                out,
                "nodes:                {} equivalence, {} operator, {} shareable",
                prepared.dag.eq_nodes().len(),
                prepared.dag.op_nodes().len(),
                outcome.shareable
            );
            if outcome.candidates != outcome.shareable {
                let _ = writeln!(out, "candidates:           {} after reduction", outcome.candidates);
            }
            let _ = writeln!(out, "materialized:         {}", set_label(&outcome.labels));
            let _ = writeln!(out, "bc(empty):            {}", cost(outcome.bc_empty));
            if outcome.algorithm != crate::optimize::Algorithm::None {
                let _ = writeln!(out, "bc(X):                {}", cost(outcome.bc_chosen));
                let _ = writeln!(out, "  use cost:           {}", cost(outcome.use_cost));
                let _ = writeln!(out, "  materialization:    {}", cost(outcome.materialization_cost));
                let _ = writeln!(out, "mb(X):                {}", cost(outcome.mb_chosen));
            }
            let _ = writeln!(out, "oracle calls:         {}", outcome.oracle_calls);
            let _ = writeln!(out, "bc evaluations:       {}", outcome.bc_evaluations);
            if trace {
                let _ = writeln!(out, "trace:");
                for (i, step) in steps.iter().enumerate() {
                    let r = step.record;
                    let ratio = match r.ratio {
                        Some(v) if v.is_infinite() => " ratio=inf".to_string(),
                        Some(v) => format!(" ratio={v:.6}"),
                        None => String::new(),
                    };
                    let f_m = r.f_m_value_after.map(|v| format!(" f_M={v:.6}")).unwrap_or_default();
                    let phase = match r.phase {
                        crate::solvers::Phase::MainLoop => "main",
                        crate::solvers::Phase::NegativeCostSweep => "sweep",
                    };
                    let _ = writeln!(
                        out,
                        "  {:>3} {phase:<5} {}{ratio} value={:.6}{f_m}",
                        i + 1,
                        step.label,
                        r.f_value_after
                    );
                }
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct CompareRow {
    algorithm: String,
    plan_cost: String,
    materialized: usize,
    nodes: String,
    oracle_calls: usize,
    wall_ms: String,
}

pub(super) fn compare(rows: &[Outcome], format: ReportFormat) -> Result<String, Failure> {
    let table: Vec<CompareRow> = rows
        .iter()
        .map(|o| CompareRow {
            algorithm: o.algorithm.to_string(),
            plan_cost: cost(o.bc_chosen),
            materialized: o.materialized.len(),
            nodes: o.labels.join(" "),
            oracle_calls: o.oracle_calls,
            wall_ms: format!("{:.3}", o.elapsed.as_secs_f64() * 1e3),
        })
        .collect();
    match format {
        ReportFormat::Csv => csv_text(&table),
        ReportFormat::Json => Ok(json_text(&table)),
        ReportFormat::Text => {
            let mut out = format!(
                "{:<12}{:>18}{:>14}{:>14}{:>12}  nodes\n",
                "algorithm", "plan_cost", "materialized", "oracle_calls", "wall_ms"
            );
            for (r, o) in table.iter().zip(rows) {
                let _ = writeln!(
                    out,
                    "{:<12}{:>18}{:>14}{:>14}{:>12}  {}",
                    r.algorithm,
                    r.plan_cost,
                    r.materialized,
                    r.oracle_calls,
                    r.wall_ms,
                    set_label(&o.labels)
                );
            }
            Ok(out)
        }
    }
}
