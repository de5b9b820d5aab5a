//! Writers for solution, report, and trace files.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use netresponse::vcycle::SolveReport;

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// One `id value` line per node.
pub fn solution_text(x: &[bool]) -> String {
    let mut out = String::new();
    for (i, &open) in x.iter().enumerate() {
        let _ = writeln!(out, "{} {}", i, open as u8);
    }
    out
}

/// Key-value report lines for a multiscale or baseline run.
pub fn report_text(report: &SolveReport, extra: &[(String, String)]) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("objective", format!("{}", report.solution.objective));
    kv("feasible", format!("{}", report.solution.feasible));
    kv("open_nodes", format!("{}", report.solution.open_count()));
    kv("closed_nodes", format!("{}", report.solution.closed_count()));
    kv("wall_seconds", format!("{:.6}", report.wall_total.as_secs_f64()));
    kv("budget_exhausted", format!("{}", report.budget_exhausted));
    kv("subproblems", format!("{}", report.total_subproblems));
    if let Some(c) = &report.coarsest {
        kv("coarsest_n", format!("{}", c.n));
        kv("coarsest_objective", format!("{}", c.objective));
        kv("coarsest_exact", format!("{}", c.exact));
        kv("coarsest_optimal", format!("{}", c.optimal));
        kv(
            "coarsest_wall_seconds",
            format!("{:.6}", c.wall.as_secs_f64()),
        );
    }
    kv("levels", format!("{}", report.levels.len()));
    for level in &report.levels {
        let prefix = format!("level_{}", level.level);
        kv(&format!("{prefix}_n"), format!("{}", level.n));
        kv(&format!("{prefix}_coarse_n"), format!("{}", level.coarse_n));
        kv(&format!("{prefix}_theta"), format!("{}", level.theta_used));
        kv(
            &format!("{prefix}_obj_interpolate"),
            format!("{}", level.obj_after_interpolate),
        );
        kv(&format!("{prefix}_obj_relaxed"), format!("{}", level.obj_after_gs));
        kv(
            &format!("{prefix}_obj_refined"),
            format!(
                "{}",
                level
                    .refine_pass_objectives
                    .last()
                    .copied()
                    .unwrap_or(level.obj_after_gs)
            ),
        );
        kv(&format!("{prefix}_subproblems"), format!("{}", level.subproblems));
        kv(&format!("{prefix}_splices"), format!("{}", level.splices));
        kv(
            &format!("{prefix}_boundary_infeasible"),
            format!("{}", level.boundary_infeasible),
        );
        kv(
            &format!("{prefix}_wall_seconds"),
            format!("{:.6}", level.wall.as_secs_f64()),
        );
    }
    for (k, v) in extra {
        kv(k, v.clone());
    }
    out
}

/// Per-level refinement trace: `level,pass,objective`.
pub fn multiscale_trace_csv(report: &SolveReport) -> String {
    let mut out = String::from("level,pass,objective\n");
    for level in &report.levels {
        let _ = writeln!(out, "{},interpolate,{}", level.level, level.obj_after_interpolate);
        let _ = writeln!(out, "{},relaxed,{}", level.level, level.obj_after_gs);
        for (pass, obj) in level.refine_pass_objectives.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", level.level, pass, obj);
        }
    }
    out
}

/// Incumbent trace: `iteration,seconds,objective`.
pub fn baseline_trace_csv(report: &SolveReport) -> String {
    let mut out = String::from("iteration,seconds,objective\n");
    for point in &report.trace {
        let _ = writeln!(out, "{},{:.6},{}", point.iteration, point.seconds, point.objective);
    }
    out
}
