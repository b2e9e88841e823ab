//! Benders master over `(z, eta)`: cut pool, core points, stabilization and
//! the root cutting-plane loop.
//!
//! The master LP keeps `z_ik` in `[0, 1]` and `eta >= 0`. Assignment,
//! cardinality and capacity rows are present from the start; the `n(n-1)`
//! linking rows `z_ik <= z_kk` are added when violated. Every cut is stored
//! as `eta - sum g_ik z_ik >= 0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::clock::Deadline;
use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::lp::{self, Basis, LpModel, LpOptions, LpResult, LpStatus, ObjSense, RowSense};
use crate::params::SolverParams;
use crate::transport::{normalize_rows, PairExecutor, Separation, Separator};
use crate::{matheur, reduce};

/// Aggregated optimality cut `eta >= sum g_ik z_ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct BendersCut {
    pub g: Vec<f64>,
    /// Root iteration or branch-and-cut node count at creation.
    pub iteration: usize,
    /// Hash of the LP point the cut was separated at.
    pub point_hash: u64,
}

impl BendersCut {
    pub fn lhs(&self, z: &[f64]) -> f64 {
        self.g.iter().zip(z).map(|(g, z)| g * z).sum()
    }
}

/// FNV-1a over the bit patterns of `z`.
pub fn point_hash(z: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in z {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorePoint {
    pub z0: Vec<f64>,
    /// Candidate facilities, ascending.
    pub candidates: Vec<usize>,
    pub eps: f64,
}

/// Largest admissible `eps` for `h` candidates and cardinality `p >= 2`.
pub fn core_eps_bound(h: usize, p: usize) -> f64 {
    let a = 1.0 / h as f64;
    if h <= 2 {
        a
    } else {
        a.min((p as f64 - 1.0) / (h as f64 - 2.0))
    }
}

/// Interior point of the assignment polytope restricted to `candidates`.
///
/// Rows of candidates put `p/h - eps` on the diagonal and spread the rest
/// evenly over the other candidates; other rows are uniform over the
/// candidates. `p` is capped at `h`. For `p = 1` the diagonal is
/// `1/h - 1/(10h)` and `eps` is ignored.
pub fn make_core_point(
    n: usize,
    candidates: &[usize],
    p: usize,
    eps: Option<f64>,
) -> Result<CorePoint> {
    let h = candidates.len();
    if h < 2 || p == 0 {
        return Err(Error::InvalidCardinality { candidates: h, p });
    }
    if let Some(&k) = candidates.iter().find(|&&k| k >= n) {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    let p = p.min(h);
    let hf = h as f64;
    let (diag, eps) = if p == 1 {
        let e = 1.0 / (10.0 * hf);
        (1.0 / hf - e, e)
    } else {
        let bound = core_eps_bound(h, p);
        let e = eps.unwrap_or(0.5 * bound);
        if !(e > 0.0 && e < bound) {
            return Err(Error::InvalidData(alloc::format!(
                "core point eps {e} outside (0, {bound})"
            )));
        }
        (p as f64 / hf - e, e)
    };
    let off = (1.0 - diag) / (hf - 1.0);
    let mut is_cand = vec![false; n];
    for &k in candidates {
        is_cand[k] = true;
    }
    let mut z0 = vec![0.0; n * n];
    for i in 0..n {
        for &k in candidates {
            z0[i * n + k] = if !is_cand[i] {
                1.0 / hf
            } else if i == k {
                diag
            } else {
                off
            };
        }
    }
    let mut cands = candidates.to_vec();
    cands.sort_unstable();
    Ok(CorePoint {
        z0,
        candidates: cands,
        eps,
    })
}

/// Starting separation point for a candidate set: the core point, or the
/// only possible assignment when a single candidate is left.
pub fn initial_separation_point(
    n: usize,
    candidates: &[usize],
    p: usize,
    eps: Option<f64>,
) -> Result<Vec<f64>> {
    match candidates {
        [] => Err(Error::InfeasibleInstance),
        [k] => {
            let mut z = vec![0.0; n * n];
            for i in 0..n {
                z[i * n + k] = 1.0;
            }
            Ok(z)
        }
        _ => Ok(make_core_point(n, candidates, p, eps)?.z0),
    }
}

/// `phi * zhat + (1 - phi) * zbar`.
pub fn update_separation_point(zhat: &[f64], zbar: &[f64], phi: f64) -> Vec<f64> {
    zhat.iter()
        .zip(zbar)
        .map(|(h, b)| phi * h + (1.0 - phi) * b)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Base,
    Linking,
    Cut(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolEntry {
    pub cut: BendersCut,
    /// Model row while active, `None` while archived.
    pub row: Option<usize>,
    slack_age: usize,
}

/// One line of the root iteration log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    pub lb: f64,
    pub ub: f64,
    pub cuts: usize,
    pub eliminated: usize,
    pub fixed: usize,
    pub time: f64,
}

impl IterationLog {
    pub const CSV_HEADER: &'static str = "iter,LB,UB,cuts,eliminated,fixed,time";
}

impl core::fmt::Display for IterationLog {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{},{:.3}",
            self.iteration, self.lb, self.ub, self.cuts, self.eliminated, self.fixed, self.time
        )
    }
}

/// Shared resources of one solve.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    pub deadline: Deadline<'a>,
    pub exec: &'a dyn PairExecutor,
}

impl Context<'_> {
    pub fn expired(&self) -> bool {
        self.deadline.expired()
    }
}

/// The relaxed master problem and everything the search carries along.
pub struct MasterState {
    n: usize,
    pub model: LpModel,
    kinds: Vec<RowKind>,
    pub pool: Vec<PoolEntry>,
    linking: Vec<bool>,
    pub incumbent: Option<Solution>,
    pub ub: f64,
    pub lb: f64,
    /// Facilities whose column is fixed to zero.
    pub eliminated: Vec<bool>,
    pub fixed_open: Vec<bool>,
    /// Current separation point.
    pub zhat: Vec<f64>,
    zhat_candidates: Vec<usize>,
    pub basis: Option<Basis>,
    pub last: Option<LpResult>,
    pub log: Vec<IterationLog>,
    pub separator: Separator,
    pub params: SolverParams,
    pub lp_options: LpOptions,
    pub iterations: usize,
    pub timed_out: bool,
    /// First and best heuristic values.
    pub heuristic_first: Option<f64>,
    pub heuristic_best: Option<f64>,
    pub cuts_added: usize,
    /// Facilities eliminated by the reduced-cost test and by PE0.
    pub eliminated_by_test: usize,
    pub fixed_by_pe0: usize,
    pub fixed_by_pe1: usize,
}

/// Row tolerance for lazy linking rows.
const LINK_TOL: f64 = 1e-9;

impl MasterState {
    pub fn new(inst: &Instance, params: &SolverParams) -> Result<MasterState> {
        let n = inst.n();
        let mut model = LpModel::new(ObjSense::Minimize);
        for i in 0..n {
            for k in 0..n {
                let mut cost = inst.linear(i, k);
                if i == k {
                    cost += inst.setup(k);
                }
                let upper = if inst.can_open(k) { 1.0 } else { 0.0 };
                model.add_var(0.0, upper, cost);
            }
        }
        model.add_var(0.0, f64::INFINITY, 1.0);
        let mut kinds = Vec::new();
        for i in 0..n {
            model.add_row(
                (0..n).map(|k| (i * n + k, 1.0)).collect(),
                RowSense::Eq,
                1.0,
            )?;
            kinds.push(RowKind::Base);
        }
        model.add_row(
            (0..n).map(|k| (k * n + k, 1.0)).collect(),
            RowSense::Le,
            inst.p() as f64,
        )?;
        kinds.push(RowKind::Base);
        // capacity rows; without capacities they aggregate the linking rows
        for k in 0..n {
            let mut row: Vec<(usize, f64)> = (0..n)
                .filter(|&i| i != k)
                .map(|i| (i * n + k, inst.demand(i)))
                .collect();
            row.push((k * n + k, -inst.residual_capacity(k).max(0.0)));
            model.add_row(row, RowSense::Le, 0.0)?;
            kinds.push(RowKind::Base);
        }
        let mut eliminated = vec![false; n];
        for (k, e) in eliminated.iter_mut().enumerate() {
            *e = !inst.can_open(k);
        }
        let candidates: Vec<usize> = (0..n).filter(|&k| !eliminated[k]).collect();
        if candidates.is_empty() {
            return Err(Error::InfeasibleInstance);
        }
        let zhat = initial_separation_point(n, &candidates, inst.p(), params.core_eps)?;
        Ok(MasterState {
            n,
            model,
            kinds,
            pool: Vec::new(),
            linking: vec![false; n * n],
            incumbent: None,
            ub: f64::INFINITY,
            lb: f64::NEG_INFINITY,
            eliminated,
            fixed_open: vec![false; n],
            zhat,
            zhat_candidates: candidates,
            basis: None,
            last: None,
            log: Vec::new(),
            separator: Separator::new(inst, params.factorized_shortcut),
            params: params.clone(),
            lp_options: LpOptions::default(),
            iterations: 0,
            timed_out: false,
            heuristic_first: None,
            heuristic_best: None,
            cuts_added: 0,
            eliminated_by_test: 0,
            fixed_by_pe0: 0,
            fixed_by_pe1: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_col(&self, i: usize, k: usize) -> usize {
        i * self.n + k
    }

    pub fn eta_col(&self) -> usize {
        self.n * self.n
    }

    /// Facilities that may still open.
    pub fn candidates(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| !self.eliminated[k]).collect()
    }

    pub fn active_cuts(&self) -> usize {
        self.pool.iter().filter(|e| e.row.is_some()).count()
    }

    pub fn num_eliminated(&self) -> usize {
        self.eliminated.iter().filter(|&&e| e).count()
    }

    pub fn num_fixed_open(&self) -> usize {
        self.fixed_open.iter().filter(|&&e| e).count()
    }

    /// Absolute tolerance used for bound comparisons against the incumbent.
    pub fn ub_margin(&self) -> f64 {
        1e-6 * self.ub.abs().max(1.0)
    }

    /// Records `sol` if it improves the incumbent.
    pub fn offer(&mut self, sol: Solution) -> bool {
        if sol.total() < self.ub {
            self.ub = sol.total();
            self.incumbent = Some(sol);
            true
        } else {
            false
        }
    }

    /// Solves the master LP, adding violated linking rows and archived cuts
    /// until none is violated.
    pub fn solve_lp(&mut self, stop: Option<&dyn Fn() -> bool>) -> Result<LpResult> {
        loop {
            let res = lp::solve_with(&self.model, self.basis.as_ref(), &self.lp_options, stop)?;
            if res.status != LpStatus::Optimal {
                self.last = Some(res.clone());
                return Ok(res);
            }
            self.basis = Some(res.basis.clone());
            let added = self.add_violated_linking(&res.x)? + self.reactivate_archived(&res.x)?;
            if added == 0 {
                self.last = Some(res.clone());
                return Ok(res);
            }
        }
    }

    fn add_violated_linking(&mut self, x: &[f64]) -> Result<usize> {
        let n = self.n;
        let mut added = 0;
        for i in 0..n {
            for k in 0..n {
                if i == k || self.linking[i * n + k] {
                    continue;
                }
                if x[i * n + k] - x[k * n + k] > LINK_TOL {
                    self.model.add_row(
                        vec![(i * n + k, 1.0), (k * n + k, -1.0)],
                        RowSense::Le,
                        0.0,
                    )?;
                    self.kinds.push(RowKind::Linking);
                    self.linking[i * n + k] = true;
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    fn cut_row(&self, cut: &BendersCut) -> Vec<(usize, f64)> {
        let mut row = vec![(self.eta_col(), 1.0)];
        row.extend(
            cut.g
                .iter()
                .enumerate()
                .filter(|(_, g)| **g != 0.0)
                .map(|(c, g)| (c, -g)),
        );
        row
    }

    fn reactivate_archived(&mut self, x: &[f64]) -> Result<usize> {
        let eta = x[self.eta_col()];
        let z = &x[..self.n * self.n];
        let tol = 1e-9 * (1.0 + eta.abs());
        let mut added = 0;
        for p in 0..self.pool.len() {
            if self.pool[p].row.is_none() && self.pool[p].cut.lhs(z) > eta + tol {
                let row = self.cut_row(&self.pool[p].cut);
                let r = self.model.add_row(row, RowSense::Ge, 0.0)?;
                self.kinds.push(RowKind::Cut(p));
                self.pool[p].row = Some(r);
                self.pool[p].slack_age = 0;
                added += 1;
            }
        }
        Ok(added)
    }

    /// Adds a cut row; returns its pool index.
    pub fn add_cut(&mut self, cut: BendersCut) -> Result<usize> {
        let row = self.cut_row(&cut);
        let r = self.model.add_row(row, RowSense::Ge, 0.0)?;
        let p = self.pool.len();
        self.kinds.push(RowKind::Cut(p));
        self.pool.push(PoolEntry {
            cut,
            row: Some(r),
            slack_age: 0,
        });
        self.cuts_added += 1;
        Ok(p)
    }

    /// Ages active cuts by their slack in `res` and moves long-slack cuts
    /// out of the LP. Only cuts with a basic logical leave, so the stored
    /// basis stays valid.
    pub fn archive_slack_cuts(&mut self, res: &LpResult) -> Result<usize> {
        let limit = self.params.archive_slack_factor * self.params.eps_cut;
        let mut drop = Vec::new();
        for entry in self.pool.iter_mut() {
            let Some(r) = entry.row else { continue };
            let slack = res.row_activity.get(r).copied().unwrap_or(0.0);
            if slack > limit {
                entry.slack_age += 1;
            } else {
                entry.slack_age = 0;
            }
            let basic = self.basis.as_ref().is_some_and(|b| b.is_basic_row(r));
            if entry.slack_age >= self.params.archive_after && basic {
                drop.push(r);
            }
        }
        if drop.is_empty() {
            return Ok(0);
        }
        drop.sort_unstable();
        self.model.remove_rows(&drop)?;
        if let Some(b) = self.basis.as_mut() {
            b.remove_rows(&drop);
        }
        let mut keep = Vec::with_capacity(self.kinds.len());
        for (r, kind) in self.kinds.iter().enumerate() {
            if drop.binary_search(&r).is_err() {
                keep.push(*kind);
            }
        }
        self.kinds = keep;
        for entry in self.pool.iter_mut() {
            entry.row = None;
        }
        for (r, kind) in self.kinds.iter().enumerate() {
            if let RowKind::Cut(p) = kind {
                self.pool[*p].row = Some(r);
            }
        }
        // over the cap, forget the oldest archived cuts
        let excess = self.pool.len().saturating_sub(self.params.pool_cap);
        if excess > 0 {
            let mut removed = 0;
            let mut remap = vec![usize::MAX; self.pool.len()];
            let mut kept = Vec::with_capacity(self.pool.len());
            for (p, entry) in core::mem::take(&mut self.pool).into_iter().enumerate() {
                if entry.row.is_none() && removed < excess {
                    removed += 1;
                    continue;
                }
                remap[p] = kept.len();
                kept.push(entry);
            }
            self.pool = kept;
            for kind in self.kinds.iter_mut() {
                if let RowKind::Cut(p) = kind {
                    *p = remap[*p];
                }
            }
        }
        Ok(drop.len())
    }

    /// Fixes every `z_ik` with facility `k` to zero.
    pub fn eliminate_facility(&mut self, k: usize) -> Result<()> {
        if self.eliminated[k] || self.fixed_open[k] {
            return Ok(());
        }
        for i in 0..self.n {
            let c = self.z_col(i, k);
            self.model.set_bounds(c, 0.0, 0.0)?;
        }
        self.eliminated[k] = true;
        Ok(())
    }

    /// Fixes `z_kk = 1`.
    pub fn fix_open(&mut self, k: usize) -> Result<()> {
        if self.eliminated[k] || self.fixed_open[k] {
            return Ok(());
        }
        let c = self.z_col(k, k);
        self.model.set_bounds(c, 1.0, 1.0)?;
        for j in 0..self.n {
            if j != k {
                // k serves itself
                let c = self.z_col(k, j);
                self.model.set_bounds(c, 0.0, 0.0)?;
            }
        }
        self.fixed_open[k] = true;
        Ok(())
    }

    /// Resets the separation point when the candidate set changed.
    pub fn refresh_separation_point(&mut self, inst: &Instance) -> Result<bool> {
        let cands = self.candidates();
        if cands == self.zhat_candidates {
            return Ok(false);
        }
        self.zhat = initial_separation_point(self.n, &cands, inst.p(), self.params.core_eps)?;
        self.zhat_candidates = cands;
        Ok(true)
    }

    /// Separates at `zbar` with the current separation point as core point.
    pub fn separate(
        &mut self,
        inst: &Instance,
        zbar: &[f64],
        ctx: &Context<'_>,
    ) -> Result<Separation> {
        let n = self.n;
        let mut zb = zbar[..n * n].to_vec();
        normalize_rows(&mut zb, n);
        let mut z0 = self.zhat.clone();
        normalize_rows(&mut z0, n);
        let deadline = ctx.deadline;
        let stop = move || deadline.expired();
        self.separator.separate(inst, &zb, &z0, ctx.exec, &stop)
    }

    /// `zhat <- phi zhat + (1 - phi) zbar`.
    pub fn stabilize(&mut self, zbar: &[f64]) {
        let n = self.n;
        let mut zb = zbar[..n * n].to_vec();
        normalize_rows(&mut zb, n);
        self.zhat = update_separation_point(&self.zhat, &zb, self.params.phi);
    }

    fn push_log(&mut self, ctx: &Context<'_>) {
        self.log.push(IterationLog {
            iteration: self.iterations,
            lb: self.lb,
            ub: self.ub,
            cuts: self.active_cuts(),
            eliminated: self.num_eliminated(),
            fixed: self.num_fixed_open(),
            time: ctx.deadline.elapsed(),
        });
    }

    /// `H(zbar) = {k : zbar_kk > 0}`.
    pub fn support(&self, x: &[f64]) -> Vec<usize> {
        (0..self.n).filter(|&k| x[k * self.n + k] > 1e-9).collect()
    }
}

/// Outcome of [`root_loop`] besides the state itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootStatus {
    /// Cut loop converged or stalled below the improvement threshold.
    Converged,
    /// The LP is infeasible: the instance (after reductions) has no
    /// solution better than the incumbent, or none at all.
    Infeasible,
    /// LB reached UB.
    Closed,
    TimeLimit,
    IterationLimit,
}

/// Root cutting-plane loop: solve the master LP, run the matheuristic when
/// the LP support changes, apply the elimination test and periodic PE0,
/// add the cut from the stabilized separation point, and stop when no cut
/// is violated by more than `eps_cut` or the relative LB improvement falls
/// below `kappa`. PE1 then PE0 run once at the end.
pub fn root_loop(
    inst: &Instance,
    params: &SolverParams,
    ctx: &Context<'_>,
) -> Result<(MasterState, RootStatus)> {
    let mut state = MasterState::new(inst, params)?;
    let status = run_root(&mut state, inst, ctx)?;
    Ok((state, status))
}

pub(crate) fn run_root(
    state: &mut MasterState,
    inst: &Instance,
    ctx: &Context<'_>,
) -> Result<RootStatus> {
    let params = state.params.clone();
    let n = state.n;
    let deadline = ctx.deadline;
    let stop = move || deadline.expired();
    let mut last_support: Option<Vec<usize>> = None;
    let mut prev_lb = f64::NEG_INFINITY;
    let status = loop {
        if ctx.expired() {
            state.timed_out = true;
            break RootStatus::TimeLimit;
        }
        if state.iterations >= params.max_root_iterations {
            break RootStatus::IterationLimit;
        }
        let res = state.solve_lp(Some(&stop))?;
        match res.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => break RootStatus::Infeasible,
            LpStatus::IterLimit => {
                state.timed_out = true;
                break RootStatus::TimeLimit;
            }
            LpStatus::Unbounded => {
                return Err(Error::NumericalFailure("master LP unbounded".into()))
            }
        }
        // the LP value never decreases as cuts accumulate
        state.lb = state.lb.max(res.objective);
        state.iterations += 1;
        let iter = state.iterations;

        if params.use_matheuristic {
            let support = state.support(&res.x);
            if last_support.as_ref() != Some(&support) {
                let allowed = state.candidates();
                if let Some(sol) = matheur::run(inst, &support, &allowed, &params, &ctx.deadline) {
                    let v = sol.total();
                    if state.heuristic_first.is_none() {
                        state.heuristic_first = Some(v);
                    }
                    state.heuristic_best = Some(state.heuristic_best.map_or(v, |b: f64| b.min(v)));
                    state.offer(sol);
                }
                last_support = Some(support);
            }
        }
        state.push_log(ctx);
        if state.lb >= state.ub - state.ub_margin() {
            break RootStatus::Closed;
        }

        let mut changed = false;
        if params.use_elimination && state.ub.is_finite() {
            let removed = reduce::eliminate(state)?;
            state.eliminated_by_test += removed.len();
            changed |= !removed.is_empty();
        }
        if params.use_partial_enumeration
            && state.ub.is_finite()
            && params.pe0_every > 0
            && iter.is_multiple_of(params.pe0_every)
        {
            let fix = reduce::partial_enumeration(state, reduce::PeMode::Pe0, Some(&stop))?;
            changed |= !fix.is_empty();
        }
        let res = if changed {
            state.refresh_separation_point(inst)?;
            let r = state.solve_lp(Some(&stop))?;
            match r.status {
                LpStatus::Optimal => r,
                LpStatus::Infeasible => break RootStatus::Infeasible,
                _ => {
                    state.timed_out = true;
                    break RootStatus::TimeLimit;
                }
            }
        } else {
            res
        };
        state.lb = state.lb.max(res.objective);
        if state.lb >= state.ub - state.ub_margin() {
            break RootStatus::Closed;
        }

        state.stabilize(&res.x);
        let sep = match state.separate(inst, &res.x, ctx) {
            Ok(s) => s,
            Err(Error::Interrupted) => {
                state.timed_out = true;
                break RootStatus::TimeLimit;
            }
            Err(e) => return Err(e),
        };
        let eta = res.x[state.eta_col()];
        let z = &res.x[..n * n];
        let violation = sep.lhs(z) - eta;
        if violation <= params.eps_cut {
            break RootStatus::Converged;
        }
        let improvement = (state.lb - prev_lb) / state.lb.abs().max(1.0);
        if prev_lb.is_finite() && improvement < params.kappa {
            break RootStatus::Converged;
        }
        prev_lb = state.lb;
        state.add_cut(BendersCut {
            g: sep.g,
            iteration: iter,
            point_hash: point_hash(z),
        })?;
        if let Some(last) = state.last.clone() {
            state.archive_slack_cuts(&last)?;
        }
    };

    if matches!(status, RootStatus::Converged)
        && params.use_partial_enumeration
        && state.ub.is_finite()
    {
        let mut changed = false;
        if state.last.as_ref().is_some_and(|r| r.is_optimal()) {
            changed |=
                !reduce::partial_enumeration(state, reduce::PeMode::Pe1, Some(&stop))?.is_empty();
        }
        let r = state.solve_lp(Some(&stop))?;
        if r.is_optimal() {
            state.lb = state.lb.max(r.objective);
            changed |=
                !reduce::partial_enumeration(state, reduce::PeMode::Pe0, Some(&stop))?.is_empty();
        }
        if changed {
            state.refresh_separation_point(inst)?;
        }
        let r = state.solve_lp(Some(&stop))?;
        match r.status {
            LpStatus::Optimal => state.lb = state.lb.max(r.objective),
            LpStatus::Infeasible => return Ok(RootStatus::Infeasible),
            _ => {}
        }
        state.push_log(ctx);
    }
    Ok(status)
}
