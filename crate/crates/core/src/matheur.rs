//! Matheuristic for upper bounds.
//!
//! A constructive phase solves a linear facility location MILP restricted
//! to the facilities in the support of the master LP. Its solution is then
//! improved by variable neighborhood descent over five neighborhoods (shift,
//! swap, open, close, exchange) and by re-solving the assignment for the
//! open facilities as a generalized assignment problem.
//!
//! Every move keeps the solution feasible and the objective never
//! increases.

use alloc::vec;
use alloc::vec::Vec;

use crate::bnc::{solve_milp, MilpStatus};
use crate::clock::Deadline;
use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::lp::{LpModel, ObjSense, RowSense};
use crate::params::SolverParams;

/// Above this many `(node, facility)` pairs the constructive MILP uses one
/// aggregated linking row per facility instead of one per pair.
pub const DISAGGREGATE_LIMIT: usize = 3000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    Shift,
    Swap,
    Open,
    Close,
    Exchange,
}

impl Neighborhood {
    pub const ALL: [Neighborhood; 5] = [
        Neighborhood::Shift,
        Neighborhood::Swap,
        Neighborhood::Open,
        Neighborhood::Close,
        Neighborhood::Exchange,
    ];
    pub const ASSIGNMENT: [Neighborhood; 2] = [Neighborhood::Shift, Neighborhood::Swap];
}

/// Limits for the MILP subproblems.
#[derive(Debug, Clone, Copy)]
pub struct MilpLimits<'a> {
    pub node_limit: usize,
    pub time_limit: f64,
    pub deadline: Deadline<'a>,
}

impl<'a> MilpLimits<'a> {
    pub fn from_params(params: &SolverParams, deadline: Deadline<'a>) -> Self {
        MilpLimits {
            node_limit: params.milp_node_limit,
            time_limit: params.milp_time_limit,
            deadline,
        }
    }

    fn child(&self) -> Deadline<'a> {
        self.deadline.child(self.time_limit)
    }
}

fn assignment_from_columns(n: usize, cols: &[(usize, usize)], x: &[f64]) -> Vec<usize> {
    let mut assign = vec![usize::MAX; n];
    for (c, &(i, k)) in cols.iter().enumerate() {
        if x[c] > 0.5 {
            assign[i] = k;
        }
    }
    assign
}

/// Solves the linear facility location MILP (setup plus assignment costs,
/// quadratic term dropped) over the facilities in `support` and evaluates
/// the result under the full objective.
pub fn constructive(
    inst: &Instance,
    support: &[usize],
    limits: &MilpLimits<'_>,
) -> Result<Solution> {
    let n = inst.n();
    let support: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&k| k < n && inst.can_open(k))
        .collect();
    if support.is_empty() {
        return Err(Error::RlfInfeasible);
    }
    let mut model = LpModel::new(ObjSense::Minimize);
    let mut cols = Vec::with_capacity(n * support.len());
    let mut col_of = vec![usize::MAX; n * n];
    for i in 0..n {
        for &k in &support {
            let cost = inst.linear(i, k) + if i == k { inst.setup(k) } else { 0.0 };
            col_of[i * n + k] = model.add_var(0.0, 1.0, cost);
            cols.push((i, k));
        }
    }
    for i in 0..n {
        model.add_row(
            support.iter().map(|&k| (col_of[i * n + k], 1.0)).collect(),
            RowSense::Eq,
            1.0,
        )?;
    }
    let disaggregate = n * support.len() <= DISAGGREGATE_LIMIT;
    for &k in &support {
        let kk = col_of[k * n + k];
        if disaggregate {
            for i in (0..n).filter(|&i| i != k) {
                model.add_row(
                    vec![(col_of[i * n + k], 1.0), (kk, -1.0)],
                    RowSense::Le,
                    0.0,
                )?;
            }
        }
        if inst.variant().capacitated || !disaggregate {
            let mut row: Vec<(usize, f64)> = (0..n)
                .filter(|&i| i != k)
                .map(|i| (col_of[i * n + k], inst.demand(i)))
                .collect();
            row.push((kk, -inst.residual_capacity(k)));
            model.add_row(row, RowSense::Le, 0.0)?;
        }
    }
    if inst.p() < support.len() {
        model.add_row(
            support.iter().map(|&k| (col_of[k * n + k], 1.0)).collect(),
            RowSense::Le,
            inst.p() as f64,
        )?;
    }
    let integer = vec![true; model.num_vars()];
    let res = solve_milp(&model, &integer, limits.node_limit, &limits.child())?;
    match res.status {
        MilpStatus::Optimal | MilpStatus::Feasible => {
            Solution::from_assignment(inst, assignment_from_columns(n, &cols, &res.x))
        }
        MilpStatus::Infeasible | MilpStatus::Unknown => Err(Error::RlfInfeasible),
    }
}

/// Opens facilities by decreasing residual capacity until demand fits, then
/// assigns nodes by decreasing demand to their cheapest facility with room.
pub fn greedy(inst: &Instance, allowed: &[usize]) -> Option<Solution> {
    let n = inst.n();
    let mut cands: Vec<usize> = allowed
        .iter()
        .copied()
        .filter(|&k| k < n && inst.can_open(k))
        .collect();
    cands.sort_by(|&a, &b| {
        inst.residual_capacity(b)
            .total_cmp(&inst.residual_capacity(a))
            .then(a.cmp(&b))
    });
    let order = demand_order(inst, 0..n);
    for count in 1..=inst.p().min(cands.len()) {
        let open = &cands[..count];
        let mut is_open = vec![false; n];
        let mut room = vec![0.0; n];
        for &k in open {
            is_open[k] = true;
            room[k] = inst.residual_capacity(k);
        }
        let mut assign = vec![usize::MAX; n];
        for &k in open {
            assign[k] = k;
        }
        let mut ok = true;
        for &j in &order {
            if is_open[j] {
                continue;
            }
            match cheapest_with_room(inst, j, open, &room, None) {
                Some(k) => {
                    assign[j] = k;
                    room[k] -= inst.demand(j);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Solution::new(inst, open.to_vec(), assign).ok();
        }
    }
    None
}

fn demand_order(inst: &Instance, nodes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = nodes.collect();
    v.sort_by(|&a, &b| inst.demand(b).total_cmp(&inst.demand(a)).then(a.cmp(&b)));
    v
}

/// `argmin c_jm` over `open` (minus `skip`) with room for `d_j`; ties go to
/// the lowest index.
fn cheapest_with_room(
    inst: &Instance,
    j: usize,
    open: &[usize],
    room: &[f64],
    skip: Option<usize>,
) -> Option<usize> {
    let d = inst.demand(j);
    let mut best: Option<(f64, usize)> = None;
    for &m in open {
        if Some(m) == skip || room[m] - d < -cap_tol(inst, m) {
            continue;
        }
        let c = inst.linear(j, m);
        if best.is_none_or(|(bc, bm)| c < bc || (c == bc && m < bm)) {
            best = Some((c, m));
        }
    }
    best.map(|(_, m)| m)
}

fn cap_tol(inst: &Instance, k: usize) -> f64 {
    1e-9 * (1.0 + inst.capacity(k).abs())
}

/// Local search state: assignment, open set and available capacities.
struct Search<'a> {
    inst: &'a Instance,
    assign: Vec<usize>,
    is_open: Vec<bool>,
    open: Vec<usize>,
    /// `h_k = b_k - sum_{a(i) = k} d_i` for open `k`.
    room: Vec<f64>,
    cost: f64,
    trace: Vec<f64>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, sol: &Solution) -> Self {
        let n = inst.n();
        let mut s = Search {
            inst,
            assign: sol.assign.clone(),
            is_open: vec![false; n],
            open: Vec::new(),
            room: vec![0.0; n],
            cost: sol.total(),
            trace: vec![sol.total()],
        };
        s.set_open(sol.open.clone());
        s
    }

    fn set_open(&mut self, open: Vec<usize>) {
        self.is_open.iter_mut().for_each(|o| *o = false);
        for &k in &open {
            self.is_open[k] = true;
        }
        self.open = open;
        self.room = room_of(self.inst, &self.assign, &self.open);
    }

    fn full_cost(&self, open: &[usize], assign: &[usize]) -> f64 {
        self.inst.cost_unchecked(open, assign).total
    }

    fn accept(&mut self, cost: f64) {
        self.cost = cost;
        self.trace.push(cost);
        debug_assert!(self.inst.evaluate(&self.open, &self.assign).is_ok());
        debug_assert!({
            let fresh = room_of(self.inst, &self.assign, &self.open);
            self.open
                .iter()
                .all(|&k| (fresh[k] - self.room[k]).abs() <= 1e-6 * (1.0 + fresh[k].abs()))
        });
    }

    fn improves(&self, cost: f64) -> bool {
        cost < self.cost - 1e-9 * self.cost.abs().max(1.0)
    }

    fn fits(&self, k: usize, d: f64) -> bool {
        self.room[k] - d >= -cap_tol(self.inst, k)
    }

    /// N1: first improving single reassignment.
    fn shift(&mut self) -> bool {
        let n = self.inst.n();
        for j in 0..n {
            if self.is_open[j] {
                continue;
            }
            let d = self.inst.demand(j);
            for idx in 0..self.open.len() {
                let i = self.open[idx];
                if self.assign[j] == i || !self.fits(i, d) {
                    continue;
                }
                let delta = self.inst.reassign_delta(&self.assign, j, i);
                if self.improves(self.cost + delta) {
                    let from = self.assign[j];
                    self.assign[j] = i;
                    self.room[from] += d;
                    self.room[i] -= d;
                    let c = self.cost + delta;
                    self.accept(c);
                    return true;
                }
            }
        }
        false
    }

    /// N2: first improving exchange of two nodes' facilities.
    fn swap(&mut self) -> bool {
        let n = self.inst.n();
        for i1 in 0..n {
            if self.is_open[i1] {
                continue;
            }
            for i2 in i1 + 1..n {
                if self.is_open[i2] {
                    continue;
                }
                let (k1, k2) = (self.assign[i1], self.assign[i2]);
                if k1 == k2 {
                    continue;
                }
                let (d1, d2) = (self.inst.demand(i1), self.inst.demand(i2));
                if !self.fits(k1, d2 - d1) || !self.fits(k2, d1 - d2) {
                    continue;
                }
                let delta1 = self.inst.reassign_delta(&self.assign, i1, k2);
                self.assign[i1] = k2;
                let delta2 = self.inst.reassign_delta(&self.assign, i2, k1);
                let c = self.cost + delta1 + delta2;
                if self.improves(c) {
                    self.assign[i2] = k1;
                    self.room[k1] += d1 - d2;
                    self.room[k2] += d2 - d1;
                    self.accept(c);
                    return true;
                }
                self.assign[i1] = k1;
            }
        }
        false
    }

    /// N3: open a closed facility and move to it the nodes (by decreasing
    /// demand) that are not more expensive there and fit.
    fn open_one(&mut self, allowed: &[bool]) -> bool {
        let inst = self.inst;
        let n = inst.n();
        if self.open.len() >= inst.p() {
            return false;
        }
        let order = demand_order(inst, 0..n);
        for k in 0..n {
            if self.is_open[k] || !allowed[k] || !inst.can_open(k) {
                continue;
            }
            let mut assign = self.assign.clone();
            let mut room = self.room.clone();
            room[assign[k]] += inst.demand(k);
            assign[k] = k;
            room[k] = inst.capacity(k) - inst.demand(k);
            for &j in &order {
                if j == k || self.is_open[j] {
                    continue;
                }
                let d = inst.demand(j);
                if inst.linear(j, k) <= inst.linear(j, assign[j])
                    && room[k] - d >= -cap_tol(inst, k)
                {
                    room[assign[j]] += d;
                    room[k] -= d;
                    assign[j] = k;
                }
            }
            let mut open = self.open.clone();
            open.push(k);
            open.sort_unstable();
            let c = self.full_cost(&open, &assign);
            if self.improves(c) {
                self.assign = assign;
                self.set_open(open);
                self.accept(c);
                return true;
            }
        }
        false
    }

    /// N4: close an open facility, moving its nodes (by decreasing demand)
    /// to their cheapest remaining facility with room.
    fn close_one(&mut self) -> bool {
        let inst = self.inst;
        let n = inst.n();
        if self.open.len() < 2 {
            return false;
        }
        for idx in 0..self.open.len() {
            let k = self.open[idx];
            let mut assign = self.assign.clone();
            let mut room = self.room.clone();
            let rest: Vec<usize> = self.open.iter().copied().filter(|&m| m != k).collect();
            let mut ok = true;
            for j in demand_order(inst, (0..n).filter(|&j| self.assign[j] == k)) {
                match cheapest_with_room(inst, j, &rest, &room, None) {
                    Some(m) => {
                        assign[j] = m;
                        room[m] -= inst.demand(j);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let c = self.full_cost(&rest, &assign);
            if self.improves(c) {
                self.assign = assign;
                self.set_open(rest);
                self.accept(c);
                return true;
            }
        }
        false
    }

    /// N5: replace an open facility by a closed one and reassign every node
    /// to its cheapest open facility with room. Exchanges whose reassignment
    /// runs out of capacity are skipped.
    fn exchange(&mut self, allowed: &[bool]) -> bool {
        let inst = self.inst;
        let n = inst.n();
        let order = demand_order(inst, 0..n);
        for i in 0..n {
            if self.is_open[i] || !allowed[i] || !inst.can_open(i) {
                continue;
            }
            for idx in 0..self.open.len() {
                let m = self.open[idx];
                let mut open: Vec<usize> = self.open.iter().copied().filter(|&k| k != m).collect();
                open.push(i);
                open.sort_unstable();
                let Some(assign) = nearest_assignment(inst, &open, &order) else {
                    continue;
                };
                let c = self.full_cost(&open, &assign);
                if self.improves(c) {
                    self.assign = assign;
                    self.set_open(open);
                    self.accept(c);
                    return true;
                }
            }
        }
        false
    }

    fn explore(&mut self, nb: Neighborhood, allowed: &[bool]) -> bool {
        match nb {
            Neighborhood::Shift => self.shift(),
            Neighborhood::Swap => self.swap(),
            Neighborhood::Open => self.open_one(allowed),
            Neighborhood::Close => self.close_one(),
            Neighborhood::Exchange => self.exchange(allowed),
        }
    }

    fn descend(
        &mut self,
        hoods: &[Neighborhood],
        allowed: &[bool],
        deadline: Option<&Deadline<'_>>,
    ) {
        let mut k = 0;
        while k < hoods.len() {
            if deadline.is_some_and(|d| d.expired()) {
                return;
            }
            if self.explore(hoods[k], allowed) {
                k = 0;
            } else {
                k += 1;
            }
        }
    }

    fn solution(&self) -> Solution {
        Solution::new(self.inst, self.open.clone(), self.assign.clone())
            .expect("local search keeps feasibility")
    }
}

fn room_of(inst: &Instance, assign: &[usize], open: &[usize]) -> Vec<f64> {
    let mut room = vec![0.0; inst.n()];
    for &k in open {
        room[k] = inst.capacity(k);
    }
    for (i, &k) in assign.iter().enumerate() {
        room[k] -= inst.demand(i);
    }
    room
}

/// Hubs serve themselves; other nodes, by decreasing demand, go to their
/// cheapest open facility with room.
fn nearest_assignment(inst: &Instance, open: &[usize], order: &[usize]) -> Option<Vec<usize>> {
    let n = inst.n();
    let mut assign = vec![usize::MAX; n];
    let mut room = vec![0.0; n];
    for &k in open {
        if !inst.can_open(k) {
            return None;
        }
        assign[k] = k;
        room[k] = inst.residual_capacity(k);
    }
    for &j in order {
        if assign[j] != usize::MAX {
            continue;
        }
        let m = cheapest_with_room(inst, j, open, &room, None)?;
        assign[j] = m;
        room[m] -= inst.demand(j);
    }
    Some(assign)
}

/// Result of a local search with the value after every accepted move.
#[derive(Debug, Clone, PartialEq)]
pub struct Traced {
    pub solution: Solution,
    /// Start value followed by the value after each accepted move.
    pub trace: Vec<f64>,
}

fn run_search(
    inst: &Instance,
    start: &Solution,
    hoods: &[Neighborhood],
    deadline: Option<&Deadline<'_>>,
) -> Traced {
    let allowed = vec![true; inst.n()];
    let mut s = Search::new(inst, start);
    s.descend(hoods, &allowed, deadline);
    Traced {
        solution: s.solution(),
        trace: s.trace,
    }
}

/// Variable neighborhood descent over shift, swap, open, close and exchange
/// with restart at shift after every improvement.
pub fn vnd(inst: &Instance, start: &Solution) -> Solution {
    vnd_traced(inst, start, None).solution
}

pub fn vnd_traced(inst: &Instance, start: &Solution, deadline: Option<&Deadline<'_>>) -> Traced {
    run_search(inst, start, &Neighborhood::ALL, deadline)
}

/// Descent restricted to shift and swap.
pub fn shift_swap_vns(
    inst: &Instance,
    start: &Solution,
    deadline: Option<&Deadline<'_>>,
) -> Traced {
    run_search(inst, start, &Neighborhood::ASSIGNMENT, deadline)
}

/// Optimal assignment to the facilities in `open` under the linear costs
/// and capacities. Hubs serve themselves.
pub fn solve_gap(inst: &Instance, open: &[usize], limits: &MilpLimits<'_>) -> Result<Solution> {
    let n = inst.n();
    let mut is_open = vec![false; n];
    for &k in open {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        if !inst.can_open(k) {
            return Err(Error::GapInfeasible);
        }
        is_open[k] = true;
    }
    if open.is_empty() {
        return Err(Error::GapInfeasible);
    }
    let mut model = LpModel::new(ObjSense::Minimize);
    let mut cols = Vec::new();
    let mut by_fac: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for i in (0..n).filter(|&i| !is_open[i]) {
        let mut row = Vec::with_capacity(open.len());
        for &k in open {
            let c = model.add_var(0.0, 1.0, inst.linear(i, k));
            cols.push((i, k));
            row.push((c, 1.0));
            by_fac[k].push((c, inst.demand(i)));
        }
        model.add_row(row, RowSense::Eq, 1.0)?;
    }
    if inst.variant().capacitated {
        for &k in open {
            let row = core::mem::take(&mut by_fac[k]);
            if !row.is_empty() {
                model.add_row(row, RowSense::Le, inst.residual_capacity(k))?;
            }
        }
    }
    let mut assign = vec![usize::MAX; n];
    if model.num_vars() > 0 {
        let integer = vec![true; model.num_vars()];
        let res = solve_milp(&model, &integer, limits.node_limit, &limits.child())?;
        match res.status {
            MilpStatus::Optimal | MilpStatus::Feasible => {
                assign = assignment_from_columns(n, &cols, &res.x)
            }
            MilpStatus::Infeasible | MilpStatus::Unknown => return Err(Error::GapInfeasible),
        }
    }
    for &k in open {
        assign[k] = k;
    }
    Solution::new(inst, open.to_vec(), assign)
}

/// Re-solves the assignment for the open facilities of `sol` as a GAP and,
/// if that changed any assignment, improves it by shift and swap. Returns
/// the better of `sol` and the result under the full objective.
pub fn gap_intensify(inst: &Instance, sol: &Solution, limits: &MilpLimits<'_>) -> Result<Solution> {
    let gap = solve_gap(inst, &sol.open, limits)?;
    if gap.assign == sol.assign {
        return Ok(sol.clone());
    }
    let improved = shift_swap_vns(inst, &gap, Some(&limits.deadline)).solution;
    Ok(if improved.total() < sol.total() {
        improved
    } else {
        sol.clone()
    })
}

/// Full pipeline run and the values it went through.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicRun {
    pub solution: Solution,
    pub constructive: f64,
    /// Objective after every accepted step, starting with the constructive
    /// solution.
    pub trace: Vec<f64>,
}

/// Constructive phase on `support` (widened to `allowed`, then to a greedy
/// start, when the restricted MILP has no solution), VND, GAP
/// intensification and a final VND when intensification helped.
pub fn pipeline(
    inst: &Instance,
    support: &[usize],
    allowed: &[usize],
    params: &SolverParams,
    deadline: &Deadline<'_>,
) -> Option<HeuristicRun> {
    let limits = MilpLimits::from_params(params, *deadline);
    let start = match constructive(inst, support, &limits) {
        Ok(s) => s,
        Err(_) => match constructive(inst, allowed, &limits) {
            Ok(s) => s,
            Err(_) => greedy(inst, allowed)?,
        },
    };
    let constructive_value = start.total();
    let first = vnd_traced(inst, &start, Some(deadline));
    let mut trace = first.trace;
    let mut best = first.solution;
    if let Ok(g) = gap_intensify(inst, &best, &limits) {
        if g.total() < best.total() {
            trace.push(g.total());
            let again = vnd_traced(inst, &g, Some(deadline));
            trace.extend_from_slice(&again.trace[1..]);
            best = again.solution;
        }
    }
    Some(HeuristicRun {
        solution: best,
        constructive: constructive_value,
        trace,
    })
}

/// [`pipeline`] returning only the solution.
pub fn run(
    inst: &Instance,
    support: &[usize],
    allowed: &[usize],
    params: &SolverParams,
    deadline: &Deadline<'_>,
) -> Option<Solution> {
    pipeline(inst, support, allowed, params, deadline).map(|r| r.solution)
}
