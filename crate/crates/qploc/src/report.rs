//! Human and CSV output of solver runs.

use std::fmt::Write as _;

use qploc_core::bnc::{SolveReport, SolveStats, SolveStatus};

pub fn status_name(s: &SolveStatus) -> &str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::TimeLimit => "time limit",
        SolveStatus::NodeLimit => "node limit",
        SolveStatus::Aborted(_) => "aborted",
    }
}

/// CSV header for [`csv_row`]. The last five columns follow the usual
/// benchmark tables.
pub const CSV_HEADER: &str = "instance,variant,p,status,objective,LB,gap(%),time(s),%Dev heur,%fixed plants,%time root,BB nodes";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.2}"))
}

pub fn csv_row(name: &str, variant: &str, p: usize, rep: &SolveReport) -> String {
    let s: &SolveStats = &rep.stats;
    format!(
        "{},{},{},{},{:.2},{:.2},{:.4},{:.2},{},{:.1},{:.1},{}",
        name,
        variant,
        p,
        status_name(&rep.status),
        rep.solution.total(),
        s.lb,
        s.gap_percent(),
        s.time,
        opt(s.dev_heur),
        s.fixed_plants,
        s.time_root,
        s.bb_nodes
    )
}

/// Multi-line summary for the terminal.
pub fn human(name: &str, rep: &SolveReport) -> String {
    let s = &rep.stats;
    let c = &rep.solution.cost;
    let mut out = String::new();
    let _ = writeln!(out, "instance      {name}");
    let _ = writeln!(out, "status        {}", status_name(&rep.status));
    if let SolveStatus::Aborted(why) = &rep.status {
        let _ = writeln!(out, "reason        {why}");
    }
    let _ = writeln!(out, "objective     {:.2}", c.total);
    let _ = writeln!(out, "  setup       {:.2}", c.setup);
    let _ = writeln!(out, "  linear      {:.2}", c.linear);
    let _ = writeln!(out, "  quadratic   {:.2}", c.quadratic);
    let _ = writeln!(
        out,
        "lower bound   {:.2} (gap {:.4}%)",
        s.lb,
        s.gap_percent()
    );
    let _ = writeln!(
        out,
        "root bound    {:.2} after {} rounds, {} cuts",
        s.root_lb, s.root_iterations, s.cuts
    );
    let _ = writeln!(out, "open          {:?}", rep.solution.open);
    let _ = writeln!(out, "time(s)       {:.2}", s.time);
    let _ = writeln!(out, "%Dev heur     {}", opt(s.dev_heur));
    let _ = writeln!(out, "%fixed plants {:.1}", s.fixed_plants);
    let _ = writeln!(out, "%time root    {:.1}", s.time_root);
    let _ = writeln!(out, "BB nodes      {}", s.bb_nodes);
    out
}

/// Assignment as `node facility` lines.
pub fn assignment(rep: &SolveReport) -> String {
    rep.solution
        .assign
        .iter()
        .enumerate()
        .map(|(i, k)| format!("{i} {k}\n"))
        .collect()
}
