//! Branch-and-cut.
//!
//! [`search`] is a best-bound tree search with depth-first plunging over any
//! [`Relaxation`]. Two relaxations use it: the Benders master (see
//! [`solve`]) and plain LP models with integer columns (see [`solve_milp`]),
//! which the matheuristic uses for its assignment subproblems.

use alloc::collections::BinaryHeap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::benders::{self, point_hash, BendersCut, Context, MasterState, RootStatus};
use crate::clock::Deadline;
use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::lp::{self, Basis, LpModel, LpOptions, LpResult, LpStatus};
use crate::matheur;
use crate::params::SolverParams;

/// What the relaxation wants done with a node after an LP solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    /// Rows were added; solve the node again.
    Resolve,
    /// The LP point is a feasible solution of the given value.
    Accept {
        value: f64,
    },
    /// Branch.
    Fractional,
    Prune,
}

/// A node relaxation whose bounds the search may change.
pub trait Relaxation {
    fn num_cols(&self) -> usize;
    fn bounds(&self, j: usize) -> (f64, f64);
    fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> Result<()>;
    /// Branching class of column `j`; lower classes are branched on first.
    /// `None` for continuous columns.
    fn priority(&self, j: usize) -> Option<u32>;
    fn solve(&mut self, warm: Option<&Basis>, stop: &dyn Fn() -> bool) -> Result<LpResult>;
    /// Inspects an optimal node LP. `integral` tells whether every integer
    /// column is integral; `round` counts earlier `Resolve`s at this node.
    fn check(
        &mut self,
        res: &LpResult,
        integral: bool,
        depth: usize,
        round: usize,
    ) -> Result<Check>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    pub node_limit: usize,
    pub tol_gap: f64,
    pub int_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// Tree exhausted or bound gap closed.
    Finished,
    NodeLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub nodes: usize,
    /// Best value accepted, or the initial cutoff.
    pub ub: f64,
    /// Lower bound over the unexplored tree (equals `ub` when finished).
    pub lb: f64,
}

struct Node {
    changes: Vec<(usize, f64, f64)>,
    lb: f64,
    depth: usize,
    basis: Option<Basis>,
    seq: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: smallest bound first, then newest
    fn cmp(&self, other: &Self) -> Ordering {
        other.lb.total_cmp(&self.lb).then(self.seq.cmp(&other.seq))
    }
}

fn cutoff(ub: f64, tol_gap: f64) -> f64 {
    ub - tol_gap * ub.abs().max(1.0)
}

/// Picks the most fractional column of the lowest priority class.
fn branching_column<R: Relaxation + ?Sized>(rel: &R, x: &[f64], int_tol: f64) -> Option<usize> {
    let mut best: Option<(u32, f64, usize)> = None;
    for (j, &v) in x.iter().enumerate().take(rel.num_cols()) {
        let Some(class) = rel.priority(j) else {
            continue;
        };
        let frac = (v - libm::floor(v)).min(libm::ceil(v) - v);
        if frac <= int_tol {
            continue;
        }
        let better = match best {
            None => true,
            Some((c, f, _)) => class < c || (class == c && frac > f + 1e-12),
        };
        if better {
            best = Some((class, frac, j));
        }
    }
    best.map(|(_, _, j)| j)
}

/// Runs the tree search from the current bounds of `rel`. `ub` is the value
/// of a known solution (or infinity). Bounds are restored on return.
pub fn search<R: Relaxation + ?Sized>(
    rel: &mut R,
    ub: f64,
    limits: &SearchLimits,
    deadline: &Deadline<'_>,
) -> Result<SearchOutcome> {
    let ncols = rel.num_cols();
    let root_bounds: Vec<(f64, f64)> = (0..ncols).map(|j| rel.bounds(j)).collect();
    let mut touched: Vec<usize> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut ub = ub;
    let mut nodes = 0usize;
    let mut next = Some(Node {
        changes: Vec::new(),
        lb: f64::NEG_INFINITY,
        depth: 0,
        basis: None,
        seq: 0,
    });
    let dl = *deadline;
    let stop = move || dl.expired();
    let result = (|| -> Result<SearchStatus> {
        loop {
            let node = match next.take() {
                Some(n) => n,
                None => match heap.pop() {
                    Some(n) => n,
                    None => return Ok(SearchStatus::Finished),
                },
            };
            if node.lb >= cutoff(ub, limits.tol_gap) {
                // heap order: every remaining node is at least as bad
                if heap
                    .peek()
                    .is_none_or(|h: &Node| h.lb >= cutoff(ub, limits.tol_gap))
                {
                    heap.clear();
                    return Ok(SearchStatus::Finished);
                }
                continue;
            }
            if deadline.expired() {
                heap.push(node);
                return Ok(SearchStatus::TimeLimit);
            }
            if nodes >= limits.node_limit {
                heap.push(node);
                return Ok(SearchStatus::NodeLimit);
            }
            nodes += 1;
            for &j in &touched {
                rel.set_bounds(j, root_bounds[j].0, root_bounds[j].1)?;
            }
            touched.clear();
            for &(j, lo, up) in &node.changes {
                rel.set_bounds(j, lo, up)?;
                touched.push(j);
            }
            let mut warm = node.basis.clone();
            let mut round = 0;
            let (res, verdict) = loop {
                let res = rel.solve(warm.as_ref(), &stop)?;
                match res.status {
                    LpStatus::Optimal => {}
                    LpStatus::Infeasible => break (res, Check::Prune),
                    LpStatus::IterLimit if deadline.expired() => {
                        heap.push(node);
                        return Ok(SearchStatus::TimeLimit);
                    }
                    LpStatus::IterLimit => {
                        return Err(Error::NumericalFailure("node LP iteration limit".into()))
                    }
                    LpStatus::Unbounded => {
                        return Err(Error::NumericalFailure("node LP unbounded".into()))
                    }
                }
                if res.objective >= cutoff(ub, limits.tol_gap) {
                    break (res, Check::Prune);
                }
                let integral = branching_column(rel, &res.x, limits.int_tol).is_none();
                let verdict = rel.check(&res, integral, node.depth, round)?;
                if verdict == Check::Resolve {
                    warm = Some(res.basis.clone());
                    round += 1;
                    continue;
                }
                break (res, verdict);
            };
            match verdict {
                Check::Prune => {}
                Check::Accept { value } => {
                    if value < ub {
                        ub = value;
                    }
                }
                Check::Resolve => unreachable!(),
                Check::Fractional => {
                    let Some(j) = branching_column(rel, &res.x, limits.int_tol) else {
                        return Err(Error::NumericalFailure(
                            "no branching column at fractional node".into(),
                        ));
                    };
                    let v = res.x[j];
                    let (lo, up) = rel.bounds(j);
                    let mut down = node.changes.clone();
                    down.push((j, lo, libm::floor(v)));
                    let mut upc = node.changes;
                    upc.push((j, libm::ceil(v), up));
                    let lb = res.objective.max(node.lb);
                    let basis = Some(res.basis);
                    let make = |changes, seq| Node {
                        changes,
                        lb,
                        depth: node.depth + 1,
                        basis: basis.clone(),
                        seq,
                    };
                    let (first, second) = if v - libm::floor(v) >= 0.5 {
                        (upc, down)
                    } else {
                        (down, upc)
                    };
                    seq += 1;
                    heap.push(make(second, seq));
                    seq += 1;
                    next = Some(make(first, seq));
                }
            }
        }
    })();
    for &j in &touched {
        rel.set_bounds(j, root_bounds[j].0, root_bounds[j].1)?;
    }
    let status = result?;
    let lb = match status {
        SearchStatus::Finished => ub,
        _ => heap
            .iter()
            .map(|n| n.lb)
            .chain(next.map(|n| n.lb))
            .fold(ub, f64::min),
    };
    Ok(SearchOutcome {
        status,
        nodes,
        ub,
        lb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    /// Limit reached with a solution.
    Feasible,
    /// Limit reached without a solution.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpResult {
    pub status: MilpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub bound: f64,
    pub nodes: usize,
}

struct PlainLp<'m> {
    model: &'m mut LpModel,
    integer: &'m [bool],
    opts: LpOptions,
    best: Option<(f64, Vec<f64>)>,
}

impl Relaxation for PlainLp<'_> {
    fn num_cols(&self) -> usize {
        self.model.num_vars()
    }

    fn bounds(&self, j: usize) -> (f64, f64) {
        let c = self.model.col(j);
        (c.lower, c.upper)
    }

    fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> Result<()> {
        self.model.set_bounds(j, lower, upper)
    }

    fn priority(&self, j: usize) -> Option<u32> {
        self.integer[j].then_some(0)
    }

    fn solve(&mut self, warm: Option<&Basis>, stop: &dyn Fn() -> bool) -> Result<LpResult> {
        lp::solve_with(self.model, warm, &self.opts, Some(stop))
    }

    fn check(
        &mut self,
        res: &LpResult,
        integral: bool,
        _depth: usize,
        _round: usize,
    ) -> Result<Check> {
        if !integral {
            return Ok(Check::Fractional);
        }
        let mut x = res.x.clone();
        for (v, &int) in x.iter_mut().zip(self.integer) {
            if int {
                *v = libm::round(*v);
            }
        }
        let value = self.model.objective_value(&x);
        if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
            self.best = Some((value, x));
        }
        Ok(Check::Accept { value })
    }
}

/// Branch-and-bound for a minimization model whose columns flagged in
/// `integer` must take integral values.
pub fn solve_milp(
    model: &LpModel,
    integer: &[bool],
    node_limit: usize,
    deadline: &Deadline<'_>,
) -> Result<MilpResult> {
    if integer.len() != model.num_vars() {
        return Err(Error::DimensionMismatch {
            what: "integer flags",
            expected: model.num_vars(),
            got: integer.len(),
        });
    }
    if model.sense() != lp::ObjSense::Minimize {
        return Err(Error::InvalidData(
            "solve_milp expects a minimization model".into(),
        ));
    }
    let mut work = model.clone();
    let mut rel = PlainLp {
        model: &mut work,
        integer,
        opts: LpOptions::default(),
        best: None,
    };
    let limits = SearchLimits {
        node_limit,
        tol_gap: 1e-9,
        int_tol: 1e-6,
    };
    let out = search(&mut rel, f64::INFINITY, &limits, deadline)?;
    let (status, objective, x) = match (rel.best.take(), out.status) {
        (Some((v, x)), SearchStatus::Finished) => (MilpStatus::Optimal, v, x),
        (Some((v, x)), _) => (MilpStatus::Feasible, v, x),
        (None, SearchStatus::Finished) => (MilpStatus::Infeasible, f64::INFINITY, Vec::new()),
        (None, _) => (MilpStatus::Unknown, f64::INFINITY, Vec::new()),
    };
    Ok(MilpResult {
        status,
        x,
        objective,
        bound: out.lb,
        nodes: out.nodes,
    })
}

struct MasterRelaxation<'a, 'c> {
    state: &'a mut MasterState,
    inst: &'a Instance,
    ctx: &'a Context<'c>,
    nodes_seen: usize,
}

impl MasterRelaxation<'_, '_> {
    fn assignment(&self, x: &[f64]) -> Vec<usize> {
        let n = self.state.n();
        (0..n)
            .map(|i| {
                let row = &x[i * n..(i + 1) * n];
                (0..n).fold(0, |b, k| if row[k] > row[b] { k } else { b })
            })
            .collect()
    }
}

impl Relaxation for MasterRelaxation<'_, '_> {
    fn num_cols(&self) -> usize {
        self.state.model.num_vars()
    }

    fn bounds(&self, j: usize) -> (f64, f64) {
        let c = self.state.model.col(j);
        (c.lower, c.upper)
    }

    fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> Result<()> {
        self.state.model.set_bounds(j, lower, upper)
    }

    fn priority(&self, j: usize) -> Option<u32> {
        let n = self.state.n();
        if j >= n * n {
            None
        } else if j / n == j % n {
            Some(0)
        } else {
            Some(1)
        }
    }

    fn solve(&mut self, warm: Option<&Basis>, stop: &dyn Fn() -> bool) -> Result<LpResult> {
        if let Some(b) = warm {
            self.state.basis = Some(b.clone());
        }
        self.state.solve_lp(Some(stop))
    }

    fn check(
        &mut self,
        res: &LpResult,
        integral: bool,
        depth: usize,
        round: usize,
    ) -> Result<Check> {
        if round == 0 {
            self.nodes_seen += 1;
        }
        let n = self.state.n();
        let eta = res.x[self.state.eta_col()];
        let z = &res.x[..n * n];
        let params = &self.state.params;
        let (tol, wanted) = if integral {
            (1e-9 * (1.0 + eta.abs()), true)
        } else {
            let g = params.gamma.max(1);
            (
                params.eps_cut,
                depth.is_multiple_of(g) && round < params.upsilon,
            )
        };
        if wanted {
            let zr: Vec<f64> = if integral {
                z.iter().map(|v| libm::round(*v)).collect()
            } else {
                z.to_vec()
            };
            let sep = self.state.separate(self.inst, &zr, self.ctx)?;
            if sep.lhs(&zr) - eta > tol {
                self.state.add_cut(BendersCut {
                    g: sep.g,
                    iteration: self.nodes_seen,
                    point_hash: point_hash(z),
                })?;
                return Ok(Check::Resolve);
            }
        }
        if !integral {
            return Ok(Check::Fractional);
        }
        let sol = Solution::from_assignment(self.inst, self.assignment(z))?;
        let value = sol.total();
        self.state.offer(sol);
        Ok(Check::Accept { value })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
    NodeLimit,
    /// The search stopped on an error (LP size guard, numerical trouble);
    /// the incumbent is the best found before it.
    Aborted(String),
}

/// Per-run statistics, named after the usual report columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    /// Total wall time in seconds.
    pub time: f64,
    pub root_time: f64,
    /// Percent deviation of the first heuristic solution from the final UB.
    pub dev_heur: Option<f64>,
    /// Percent of nodes whose location variable was fixed at the root.
    pub fixed_plants: f64,
    /// Percent of the total time spent at the root.
    pub time_root: f64,
    /// Branch-and-bound nodes below the root.
    pub bb_nodes: usize,
    pub root_iterations: usize,
    pub root_lb: f64,
    pub cuts: usize,
    pub eliminated: usize,
    pub fixed_open: usize,
    pub lb: f64,
    pub ub: f64,
}

impl SolveStats {
    pub const CSV_HEADER: &'static str = "time(s),%Dev heur,%fixed plants,%time root,BB nodes";

    pub fn gap_percent(&self) -> f64 {
        if !self.ub.is_finite() {
            return f64::INFINITY;
        }
        100.0 * (self.ub - self.lb).max(0.0) / self.ub.abs().max(1e-9)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Solution,
    pub status: SolveStatus,
    pub stats: SolveStats,
    pub log: Vec<benders::IterationLog>,
}

/// Solves an instance: root cutting-plane loop, then branch-and-cut over the
/// reduced master.
pub fn solve(inst: &Instance, params: &SolverParams, ctx: &Context<'_>) -> Result<SolveReport> {
    let mut state = MasterState::new(inst, params)?;
    let mut status = SolveStatus::Optimal;
    let root = match benders::run_root(&mut state, inst, ctx) {
        Ok(s) => Some(s),
        Err(e @ (Error::SizeGuard { .. } | Error::NumericalFailure(_))) => {
            status = SolveStatus::Aborted(e.to_string());
            None
        }
        Err(e) => return Err(e),
    };
    let root_time = ctx.deadline.elapsed();
    let root_lb = state.lb;
    let mut nodes = 0;
    let mut lb = state.lb;
    match root {
        Some(RootStatus::Closed) | Some(RootStatus::Infeasible) => lb = state.ub,
        Some(RootStatus::TimeLimit) => status = SolveStatus::TimeLimit,
        Some(RootStatus::Converged) | Some(RootStatus::IterationLimit) => {
            let limits = SearchLimits {
                node_limit: params.node_limit,
                tol_gap: params.tol_gap,
                int_tol: params.int_tol,
            };
            let ub = state.ub;
            let mut rel = MasterRelaxation {
                state: &mut state,
                inst,
                ctx,
                nodes_seen: 0,
            };
            match search(&mut rel, ub, &limits, &ctx.deadline) {
                Ok(out) => {
                    nodes = out.nodes.saturating_sub(1);
                    lb = lb.max(out.lb.min(state.ub));
                    match out.status {
                        SearchStatus::Finished => lb = state.ub,
                        SearchStatus::NodeLimit => status = SolveStatus::NodeLimit,
                        SearchStatus::TimeLimit => status = SolveStatus::TimeLimit,
                    }
                }
                Err(Error::Interrupted) => status = SolveStatus::TimeLimit,
                Err(e @ (Error::SizeGuard { .. } | Error::NumericalFailure(_))) => {
                    status = SolveStatus::Aborted(e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        None => {}
    }
    if state.incumbent.is_none() && !matches!(status, SolveStatus::Optimal) {
        // stopped before any heuristic ran
        let cands = state.candidates();
        if let Some(sol) = matheur::greedy(inst, &cands) {
            state.offer(sol);
        }
    }
    let Some(solution) = state.incumbent.clone() else {
        return match status {
            SolveStatus::Optimal => Err(Error::InfeasibleInstance),
            SolveStatus::Aborted(msg) => Err(Error::NumericalFailure(msg)),
            _ => Err(Error::Interrupted),
        };
    };
    // the reported cost is always recomputed from the assignment
    let solution = Solution::new(inst, solution.open.clone(), solution.assign.clone())?;
    let ub = solution.total();
    let time = ctx.deadline.elapsed();
    let n = inst.n();
    let stats = SolveStats {
        time,
        root_time,
        dev_heur: state
            .heuristic_first
            .map(|h| 100.0 * (h - ub) / ub.abs().max(1e-9)),
        fixed_plants: 100.0
            * (state.eliminated_by_test + state.fixed_by_pe0 + state.fixed_by_pe1) as f64
            / n as f64,
        time_root: if time > 0.0 {
            100.0 * root_time / time
        } else {
            100.0
        },
        bb_nodes: nodes,
        root_iterations: state.iterations,
        root_lb,
        cuts: state.cuts_added,
        eliminated: state.num_eliminated(),
        fixed_open: state.num_fixed_open(),
        lb: lb.min(ub),
        ub,
    };
    Ok(SolveReport {
        solution,
        status,
        stats,
        log: core::mem::take(&mut state.log),
    })
}

/// Flags for [`solve_milp`] marking every column integral.
pub fn all_integer(model: &LpModel) -> Vec<bool> {
    vec![true; model.num_vars()]
}
