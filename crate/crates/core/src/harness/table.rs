//! Plain-text rendering of experiment reports.

use std::collections::BTreeSet;

use super::{ExperimentReport, TimingReport};

/// Right-aligned columns separated by two spaces, with a rule under the header.
pub fn render(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(headers);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

fn models(report: &ExperimentReport) -> Vec<String> {
    let mut seen = Vec::new();
    for r in &report.records {
        if !seen.contains(&r.model) {
            seen.push(r.model.clone());
        }
    }
    seen
}

fn grid(report: &ExperimentReport) -> (Vec<usize>, Vec<usize>) {
    let ns: BTreeSet<usize> = report.records.iter().map(|r| r.n).collect();
    let ms: BTreeSet<usize> = report.records.iter().map(|r| r.m).collect();
    (ns.into_iter().collect(), ms.into_iter().collect())
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

/// Test MAE with one row per target count and a column per (steps, model).
pub fn senn_error_table(report: &ExperimentReport) -> String {
    let models = models(report);
    let (ns, ms) = grid(report);
    let mut headers = vec!["targets".to_string()];
    for m in &ms {
        for model in &models {
            headers.push(format!("m={m} {model}"));
        }
    }
    let rows: Vec<Vec<String>> = ns
        .iter()
        .map(|&n| {
            let mut row = vec![n.to_string()];
            for &m in &ms {
                for model in &models {
                    row.push(cell(report.find(n, m, model, "senn").and_then(|r| r.senn_mae), 4));
                }
            }
            row
        })
        .collect();
    render(&headers, &rows)
}

/// Mean leader payoff with one row per (targets, steps) and a column per
/// (model, solver). Columns listed as absent in the report are shown as `-`.
pub fn payoff_table(report: &ExperimentReport) -> String {
    let models = models(report);
    let (ns, ms) = grid(report);
    let mut solvers: Vec<String> = Vec::new();
    for r in &report.records {
        if !solvers.contains(&r.solver_id) {
            solvers.push(r.solver_id.clone());
        }
    }
    let mut headers = vec!["targets".to_string(), "steps".to_string()];
    for model in &models {
        for s in solvers.iter().chain(&report.absent_columns) {
            headers.push(format!("{model} {}", s.to_uppercase()));
        }
    }
    let mut rows = Vec::new();
    for &n in &ns {
        for &m in &ms {
            let mut row = vec![n.to_string(), m.to_string()];
            for model in &models {
                for s in &solvers {
                    row.push(cell(report.find(n, m, model, s).map(|r| r.mean_leader_value), 4));
                }
                row.extend(report.absent_columns.iter().map(|_| "-".to_string()));
            }
            rows.push(row);
        }
    }
    render(&headers, &rows)
}

pub fn timing_table(report: &TimingReport) -> String {
    let headers: Vec<String> = ["solver", "targets", "steps", "total_ms", "eval_ms", "us/individual"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.solver.clone(),
                r.n.to_string(),
                r.m.to_string(),
                format!("{:.1}", r.total_ms),
                format!("{:.1}", r.eval_ms),
                format!("{:.3}", r.eval_us_per_individual),
            ]
        })
        .collect();
    render(&headers, &rows)
}
