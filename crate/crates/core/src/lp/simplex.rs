//! Bounded revised simplex with a dense explicit basis inverse.
//!
//! Variables `0..n` are structural, `n..n+m` are row logicals with column
//! `-e_i`. The inverse is stored column-major and updated by rank-one
//! pivots, then rebuilt from scratch every `refactor_every` pivots.

use alloc::vec;
use alloc::vec::Vec;

use super::{Basis, LpModel, LpOptions, LpResult, LpStatus, ObjSense, VarStatus};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

enum Outcome {
    Done,
    Infeasible,
    Unbounded,
    Limit,
}

pub(super) struct Kernel<'a> {
    model: &'a LpModel,
    opts: &'a LpOptions,
    stop: Option<&'a dyn Fn() -> bool>,
    m: usize,
    n: usize,
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    cost: Vec<f64>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    pos: Vec<usize>,
    x: Vec<f64>,
    binv: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    work_cost: Vec<f64>,
    alpha: Vec<f64>,
    tol_dual: f64,
    iterations: usize,
    max_iterations: usize,
    refactor_every: usize,
    since_refactor: usize,
}

impl<'a> Kernel<'a> {
    pub(super) fn new(
        model: &'a LpModel,
        opts: &'a LpOptions,
        stop: Option<&'a dyn Fn() -> bool>,
    ) -> Self {
        let m = model.num_rows();
        let n = model.num_vars();
        let mut counts = vec![0usize; n + 1];
        for row in model.rows() {
            for &(j, _) in &row.coeffs {
                counts[j + 1] += 1;
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_start = counts.clone();
        let nnz = counts[n];
        let mut fill = counts;
        let mut col_row = vec![0usize; nnz];
        let mut col_val = vec![0.0; nnz];
        for (i, row) in model.rows().iter().enumerate() {
            for &(j, a) in &row.coeffs {
                col_row[fill[j]] = i;
                col_val[fill[j]] = a;
                fill[j] += 1;
            }
        }
        let sign = match model.sense() {
            ObjSense::Minimize => 1.0,
            ObjSense::Maximize => -1.0,
        };
        let mut lb = Vec::with_capacity(n + m);
        let mut ub = Vec::with_capacity(n + m);
        let mut cost = Vec::with_capacity(n + m);
        for c in model.cols() {
            lb.push(c.lower);
            ub.push(c.upper);
            cost.push(sign * c.cost);
        }
        for r in model.rows() {
            let (lo, up) = r.bounds();
            lb.push(lo);
            ub.push(up);
            cost.push(0.0);
        }
        let cmax = cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let max_iterations = if opts.max_iterations == 0 {
            100 * (m + n) + 10_000
        } else {
            opts.max_iterations
        };
        let refactor_every = if opts.refactor_every == 0 {
            (m / 2).clamp(50, 200)
        } else {
            opts.refactor_every
        };
        Kernel {
            model,
            opts,
            stop,
            m,
            n,
            col_start,
            col_row,
            col_val,
            lb,
            ub,
            cost,
            status: vec![VarStatus::AtLower; n + m],
            head: vec![0; m],
            pos: vec![NONE; n + m],
            x: vec![0.0; n + m],
            binv: vec![0.0; m * m],
            y: vec![0.0; m],
            d: vec![0.0; n + m],
            work_cost: vec![0.0; n + m],
            alpha: vec![0.0; m],
            tol_dual: opts.tol_opt * (1.0 + cmax),
            iterations: 0,
            max_iterations,
            refactor_every,
            since_refactor: 0,
        }
    }

    pub(super) fn run(mut self, warm: Option<&Basis>) -> Result<LpResult> {
        for j in 0..self.n + self.m {
            if self.lb[j] > self.ub[j] + self.opts.tol_feas {
                return Ok(self.finish(LpStatus::Infeasible));
            }
        }
        let warm_ok = match warm {
            Some(b) => self.load_basis(b) && self.refactor().is_ok(),
            None => false,
        };
        if !warm_ok {
            self.slack_basis();
            self.refactor()?;
        }
        self.compute_x();

        let mut attempts = 0;
        loop {
            let outcome = self.solve_once()?;
            match outcome {
                Outcome::Done => {}
                Outcome::Infeasible => return Ok(self.finish(LpStatus::Infeasible)),
                Outcome::Unbounded => return Ok(self.finish(LpStatus::Unbounded)),
                Outcome::Limit => return Ok(self.finish(LpStatus::IterLimit)),
            }
            // verify from a fresh factorization
            self.refactor()?;
            self.compute_x();
            self.work_cost.copy_from_slice(&self.cost);
            self.compute_duals();
            if self.primal_infeasibility() <= self.opts.tol_feas
                && self.dual_infeasibility() <= self.tol_dual * 10.0
            {
                return Ok(self.finish(LpStatus::Optimal));
            }
            attempts += 1;
            if attempts > 3 {
                return Err(Error::NumericalFailure(
                    "simplex did not reach a verified optimum".into(),
                ));
            }
        }
    }

    fn solve_once(&mut self) -> Result<Outcome> {
        if self.primal_infeasibility() <= self.opts.tol_feas {
            return self.primal(false);
        }
        // try the dual simplex when the basis can be made dual feasible
        self.work_cost.copy_from_slice(&self.cost);
        self.compute_duals();
        let mut flipped = false;
        for j in 0..self.n + self.m {
            let dj = self.d[j];
            match self.status[j] {
                VarStatus::AtLower if dj < -self.tol_dual && self.ub[j].is_finite() => {
                    self.status[j] = VarStatus::AtUpper;
                    flipped = true;
                }
                VarStatus::AtUpper if dj > self.tol_dual && self.lb[j].is_finite() => {
                    self.status[j] = VarStatus::AtLower;
                    flipped = true;
                }
                _ => {}
            }
        }
        if flipped {
            self.compute_x();
        }
        if self.dual_infeasibility() <= self.tol_dual {
            match self.dual()? {
                Outcome::Done => {}
                other => return Ok(other),
            }
            return self.primal(false);
        }
        match self.primal(true)? {
            Outcome::Done => self.primal(false),
            other => Ok(other),
        }
    }

    // ---- basis handling ----

    fn slack_basis(&mut self) {
        for j in 0..self.n {
            self.status[j] = self.nonbasic_status(j, VarStatus::AtLower);
            self.pos[j] = NONE;
        }
        for i in 0..self.m {
            self.status[self.n + i] = VarStatus::Basic;
            self.head[i] = self.n + i;
            self.pos[self.n + i] = i;
        }
    }

    fn load_basis(&mut self, b: &Basis) -> bool {
        if b.cols.len() > self.n || b.rows.len() > self.m {
            return false;
        }
        let mut basic = 0;
        for j in 0..self.n + self.m {
            let s = if j < self.n {
                b.cols.get(j).copied().unwrap_or(VarStatus::AtLower)
            } else {
                b.rows.get(j - self.n).copied().unwrap_or(VarStatus::Basic)
            };
            if s == VarStatus::Basic {
                if basic == self.m {
                    return false;
                }
                self.status[j] = VarStatus::Basic;
                self.head[basic] = j;
                self.pos[j] = basic;
                basic += 1;
            } else {
                self.status[j] = self.nonbasic_status(j, s);
                self.pos[j] = NONE;
            }
        }
        basic == self.m
    }

    /// Closest valid nonbasic status to `want` for the bounds of `j`.
    fn nonbasic_status(&self, j: usize, want: VarStatus) -> VarStatus {
        let (lo, up) = (self.lb[j], self.ub[j]);
        match want {
            VarStatus::AtUpper if up.is_finite() => VarStatus::AtUpper,
            _ if lo.is_finite() => VarStatus::AtLower,
            _ if up.is_finite() => VarStatus::AtUpper,
            _ => VarStatus::Free,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtLower => self.lb[j],
            VarStatus::AtUpper => self.ub[j],
            _ => 0.0,
        }
    }

    /// Rebuilds the inverse of the basis matrix.
    ///
    /// Logical columns are unit vectors, so only the square block of
    /// structural columns on the rows without a basic logical is inverted
    /// (Gauss-Jordan); the logical rows follow by substitution.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return Ok(());
        }
        self.binv.iter_mut().for_each(|v| *v = 0.0);
        // basis position of the logical on each row, if basic
        let mut logical_pos = vec![NONE; m];
        let mut structural: Vec<usize> = Vec::new();
        for (r, &j) in self.head.iter().enumerate() {
            if j >= self.n {
                logical_pos[j - self.n] = r;
            } else {
                structural.push(r);
            }
        }
        let s = structural.len();
        let open_rows: Vec<usize> = (0..m).filter(|&i| logical_pos[i] == NONE).collect();
        if open_rows.len() != s {
            return Err(Error::NumericalFailure("singular basis".into()));
        }
        // B e_r = -e_i for a logical, so its inverse row is -e_i
        for (i, &r) in logical_pos.iter().enumerate() {
            if r != NONE {
                self.binv[i * m + r] = -1.0;
            }
        }
        if s == 0 {
            return Ok(());
        }
        let mut local = vec![NONE; m];
        for (t, &i) in open_rows.iter().enumerate() {
            local[i] = t;
        }
        // row-major block M = A[open_rows, structural] and its inverse
        let mut a = vec![0.0; s * s];
        for (c, &r) in structural.iter().enumerate() {
            let j = self.head[r];
            for k in self.col_start[j]..self.col_start[j + 1] {
                let t = local[self.col_row[k]];
                if t != NONE {
                    a[t * s + c] += self.col_val[k];
                }
            }
        }
        let mut inv = vec![0.0; s * s];
        for t in 0..s {
            inv[t * s + t] = 1.0;
        }
        for c in 0..s {
            let mut p = c;
            let mut best = a[c * s + c].abs();
            for r in c + 1..s {
                let v = a[r * s + c].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best < 1e-11 {
                return Err(Error::NumericalFailure("singular basis".into()));
            }
            if p != c {
                for k in 0..s {
                    a.swap(p * s + k, c * s + k);
                    inv.swap(p * s + k, c * s + k);
                }
            }
            let piv = a[c * s + c];
            for k in 0..s {
                a[c * s + k] /= piv;
                inv[c * s + k] /= piv;
            }
            for r in 0..s {
                if r == c {
                    continue;
                }
                let f = a[r * s + c];
                if f != 0.0 {
                    for k in 0..s {
                        a[r * s + k] -= f * a[c * s + k];
                        inv[r * s + k] -= f * inv[c * s + k];
                    }
                }
            }
        }
        // column i of B^-1 for an open row: structural part from M^-1,
        // logical rows from x_L(l) = A[l, S] x_S
        for (t, &i) in open_rows.iter().enumerate() {
            let col = &mut self.binv[i * m..(i + 1) * m];
            for (c, &r) in structural.iter().enumerate() {
                let v = inv[c * s + t];
                if v == 0.0 {
                    continue;
                }
                col[r] = v;
                let j = self.head[r];
                for k in self.col_start[j]..self.col_start[j + 1] {
                    let l = self.col_row[k];
                    let rl = logical_pos[l];
                    if rl != NONE {
                        col[rl] += self.col_val[k] * v;
                    }
                }
            }
        }
        Ok(())
    }

    /// alpha = B^-1 a_j
    fn ftran(&mut self, j: usize) {
        let m = self.m;
        self.alpha.iter_mut().for_each(|v| *v = 0.0);
        if j < self.n {
            for k in self.col_start[j]..self.col_start[j + 1] {
                let (i, a) = (self.col_row[k], self.col_val[k]);
                let col = &self.binv[i * m..(i + 1) * m];
                for (out, b) in self.alpha.iter_mut().zip(col) {
                    *out += a * b;
                }
            }
        } else {
            let i = j - self.n;
            let col = &self.binv[i * m..(i + 1) * m];
            for (out, b) in self.alpha.iter_mut().zip(col) {
                *out = -b;
            }
        }
    }

    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.n {
            let mut s = 0.0;
            for k in self.col_start[j]..self.col_start[j + 1] {
                s += self.col_val[k] * v[self.col_row[k]];
            }
            s
        } else {
            -v[j - self.n]
        }
    }

    /// Replaces the basic variable in position `r` by `q`, whose ftran'd
    /// column is in `alpha`.
    fn pivot(&mut self, r: usize, q: usize) -> Result<()> {
        let m = self.m;
        let ar = self.alpha[r];
        for c in 0..m {
            let col = &mut self.binv[c * m..(c + 1) * m];
            let v = col[r] / ar;
            if v != 0.0 {
                for (i, e) in col.iter_mut().enumerate() {
                    *e -= self.alpha[i] * v;
                }
            }
            col[r] = v;
        }
        let leaving = self.head[r];
        self.pos[leaving] = NONE;
        self.head[r] = q;
        self.pos[q] = r;
        self.status[q] = VarStatus::Basic;
        self.since_refactor += 1;
        if self.since_refactor >= self.refactor_every {
            self.refactor()?;
            self.compute_x();
        }
        Ok(())
    }

    fn compute_x(&mut self) {
        let m = self.m;
        let mut h = vec![0.0; m];
        for j in 0..self.n + self.m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v == 0.0 {
                continue;
            }
            if j < self.n {
                for k in self.col_start[j]..self.col_start[j + 1] {
                    h[self.col_row[k]] -= self.col_val[k] * v;
                }
            } else {
                h[j - self.n] += v;
            }
        }
        let mut xb = vec![0.0; m];
        for (i, &hi) in h.iter().enumerate() {
            if hi != 0.0 {
                let col = &self.binv[i * m..(i + 1) * m];
                for (out, b) in xb.iter_mut().zip(col) {
                    *out += hi * b;
                }
            }
        }
        for (r, &j) in self.head.iter().enumerate() {
            self.x[j] = xb[r];
        }
    }

    /// y = c_B B^-1 and d = c - y A for the current `work_cost`.
    fn compute_duals(&mut self) {
        let m = self.m;
        let costed: Vec<(usize, f64)> = self
            .head
            .iter()
            .enumerate()
            .filter(|(_, &j)| self.work_cost[j] != 0.0)
            .map(|(r, &j)| (r, self.work_cost[j]))
            .collect();
        for i in 0..m {
            let col = &self.binv[i * m..(i + 1) * m];
            self.y[i] = costed.iter().map(|&(r, c)| c * col[r]).sum();
        }
        for j in 0..self.n + self.m {
            self.d[j] = if self.status[j] == VarStatus::Basic {
                0.0
            } else {
                self.work_cost[j] - self.col_dot(j, &self.y)
            };
        }
    }

    fn infeas(&self, j: usize) -> f64 {
        let v = self.x[j];
        (self.lb[j] - v).max(v - self.ub[j]).max(0.0)
    }

    fn primal_infeasibility(&self) -> f64 {
        self.head
            .iter()
            .map(|&j| self.infeas(j))
            .fold(0.0, f64::max)
    }

    fn dual_infeasibility(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.n + self.m {
            let dj = self.d[j];
            let bad = match self.status[j] {
                VarStatus::Basic => 0.0,
                _ if self.lb[j] == self.ub[j] => 0.0,
                VarStatus::AtLower => (-dj).max(0.0),
                VarStatus::AtUpper => dj.max(0.0),
                VarStatus::Free => dj.abs(),
            };
            worst = worst.max(bad);
        }
        worst
    }

    fn should_stop(&self) -> bool {
        if self.iterations >= self.max_iterations {
            return true;
        }
        if self.iterations.is_multiple_of(32) {
            if let Some(f) = self.stop {
                return f();
            }
        }
        false
    }

    // ---- primal simplex ----

    /// Phase 1 minimizes the sum of bound violations of basic variables;
    /// phase 2 minimizes the true cost from a feasible basis.
    fn primal(&mut self, phase1: bool) -> Result<Outcome> {
        let tol = self.opts.tol_feas;
        let mut stalled = 0usize;
        let mut last_obj = f64::INFINITY;
        loop {
            if phase1 {
                self.work_cost.iter_mut().for_each(|c| *c = 0.0);
                let mut any = false;
                for &j in &self.head {
                    if self.x[j] < self.lb[j] - tol {
                        self.work_cost[j] = -1.0;
                        any = true;
                    } else if self.x[j] > self.ub[j] + tol {
                        self.work_cost[j] = 1.0;
                        any = true;
                    }
                }
                if !any {
                    return Ok(Outcome::Done);
                }
            } else {
                self.work_cost.copy_from_slice(&self.cost);
            }
            self.compute_duals();
            let obj: f64 = (0..self.n + self.m)
                .map(|j| self.work_cost[j] * self.x[j])
                .sum();
            if obj < last_obj - 1e-12 * (1.0 + obj.abs()) {
                stalled = 0;
                last_obj = obj;
            } else {
                stalled += 1;
            }
            let bland = stalled > self.opts.stall_limit;
            let tol_d = if phase1 {
                self.opts.tol_opt
            } else {
                self.tol_dual
            };

            // pricing
            let mut q = NONE;
            let mut best = 0.0;
            for j in 0..self.n + self.m {
                if self.lb[j] == self.ub[j] {
                    continue;
                }
                let dj = self.d[j];
                let score = match self.status[j] {
                    VarStatus::Basic => 0.0,
                    VarStatus::AtLower => (-dj).max(0.0),
                    VarStatus::AtUpper => dj.max(0.0),
                    VarStatus::Free => dj.abs(),
                };
                if score > tol_d {
                    if bland {
                        q = j;
                        break;
                    }
                    if score > best {
                        best = score;
                        q = j;
                    }
                }
            }
            if q == NONE {
                return Ok(if phase1 {
                    Outcome::Infeasible
                } else {
                    Outcome::Done
                });
            }
            if self.should_stop() {
                return Ok(Outcome::Limit);
            }
            self.iterations += 1;

            let dir = if self.d[q] < 0.0 { 1.0 } else { -1.0 };
            self.ftran(q);
            // ratio test over basics; x_B changes by -dir * alpha * t
            let mut t_max = self.ub[q] - self.lb[q];
            let mut leave = NONE;
            let mut leave_to_upper = false;
            let mut leave_alpha = 0.0;
            for r in 0..self.m {
                let a = self.alpha[r];
                if a.abs() <= self.opts.tol_pivot {
                    continue;
                }
                let j = self.head[r];
                let rate = -dir * a;
                let v = self.x[j];
                let (limit, to_upper) = if phase1 && v < self.lb[j] - tol {
                    if rate > 0.0 {
                        ((self.lb[j] - v) / rate, false)
                    } else {
                        continue;
                    }
                } else if phase1 && v > self.ub[j] + tol {
                    if rate < 0.0 {
                        ((self.ub[j] - v) / rate, true)
                    } else {
                        continue;
                    }
                } else if rate > 0.0 {
                    if !self.ub[j].is_finite() {
                        continue;
                    }
                    (((self.ub[j] - v) / rate).max(0.0), true)
                } else {
                    if !self.lb[j].is_finite() {
                        continue;
                    }
                    (((self.lb[j] - v) / rate).max(0.0), false)
                };
                let take = if limit < t_max - 1e-12 {
                    true
                } else if limit <= t_max + 1e-12 && leave != NONE {
                    if bland {
                        j < self.head[leave]
                    } else {
                        a.abs() > leave_alpha
                    }
                } else {
                    false
                };
                if take {
                    t_max = limit.min(t_max);
                    leave = r;
                    leave_to_upper = to_upper;
                    leave_alpha = a.abs();
                }
            }
            if !t_max.is_finite() {
                if phase1 {
                    return Err(Error::NumericalFailure("unbounded phase 1 ray".into()));
                }
                return Ok(Outcome::Unbounded);
            }
            let t = t_max;
            self.x[q] += dir * t;
            for r in 0..self.m {
                let j = self.head[r];
                self.x[j] -= dir * t * self.alpha[r];
            }
            if leave == NONE {
                self.status[q] = if dir > 0.0 {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                };
                self.x[q] = self.nonbasic_value(q);
                continue;
            }
            let l = self.head[leave];
            self.status[l] = if self.lb[l] == self.ub[l] {
                VarStatus::AtLower
            } else if leave_to_upper {
                VarStatus::AtUpper
            } else {
                VarStatus::AtLower
            };
            self.x[l] = self.nonbasic_value(l);
            self.pivot(leave, q)?;
        }
    }

    // ---- dual simplex ----

    fn dual(&mut self) -> Result<Outcome> {
        self.work_cost.copy_from_slice(&self.cost);
        let mut stalled = 0usize;
        let mut last_obj = f64::NEG_INFINITY;
        let mut rho = vec![0.0; self.m];
        loop {
            self.compute_duals();
            let obj: f64 = (0..self.n + self.m).map(|j| self.cost[j] * self.x[j]).sum();
            if obj > last_obj + 1e-12 * (1.0 + obj.abs()) {
                stalled = 0;
                last_obj = obj;
            } else {
                stalled += 1;
            }
            let bland = stalled > self.opts.stall_limit;

            let mut r = NONE;
            let mut worst = self.opts.tol_feas;
            for (pos, &j) in self.head.iter().enumerate() {
                let v = self.infeas(j);
                if v > worst {
                    worst = v;
                    r = pos;
                    if bland {
                        break;
                    }
                }
            }
            if r == NONE {
                return Ok(Outcome::Done);
            }
            if self.should_stop() {
                return Ok(Outcome::Limit);
            }
            self.iterations += 1;
            let l = self.head[r];
            let increase = self.x[l] < self.lb[l];
            let target = if increase { self.lb[l] } else { self.ub[l] };
            let s = if increase { 1.0 } else { -1.0 };
            let m = self.m;
            for (i, v) in rho.iter_mut().enumerate() {
                *v = self.binv[i * m + r];
            }

            let mut q = NONE;
            let mut best_ratio = f64::INFINITY;
            let mut best_alpha = 0.0;
            for j in 0..self.n + self.m {
                if self.status[j] == VarStatus::Basic || self.lb[j] == self.ub[j] {
                    continue;
                }
                let a = self.col_dot(j, &rho);
                if a.abs() <= self.opts.tol_pivot {
                    continue;
                }
                let eligible = match self.status[j] {
                    VarStatus::AtLower => s * a < 0.0,
                    VarStatus::AtUpper => s * a > 0.0,
                    _ => true,
                };
                if !eligible {
                    continue;
                }
                let ratio = self.d[j].abs() / a.abs();
                let better = if q == NONE {
                    true
                } else if bland {
                    ratio < best_ratio - 1e-12
                } else {
                    ratio < best_ratio - 1e-12
                        || (ratio <= best_ratio + 1e-12 && a.abs() > best_alpha)
                };
                if better {
                    q = j;
                    best_ratio = ratio;
                    best_alpha = a.abs();
                }
            }
            if q == NONE {
                return Ok(Outcome::Infeasible);
            }
            self.ftran(q);
            let ar = self.alpha[r];
            if ar.abs() <= self.opts.tol_pivot {
                // inverse drifted; rebuild and retry
                self.refactor()?;
                self.compute_x();
                continue;
            }
            let step = (self.x[l] - target) / ar;
            self.x[q] += step;
            for pos in 0..self.m {
                let j = self.head[pos];
                self.x[j] -= self.alpha[pos] * step;
            }
            self.status[l] = if increase {
                VarStatus::AtLower
            } else {
                VarStatus::AtUpper
            };
            self.x[l] = target;
            self.pivot(r, q)?;
        }
    }

    fn finish(mut self, status: LpStatus) -> LpResult {
        let sign = match self.model.sense() {
            ObjSense::Minimize => 1.0,
            ObjSense::Maximize => -1.0,
        };
        self.work_cost.copy_from_slice(&self.cost);
        self.compute_duals();
        let x = self.x[..self.n].to_vec();
        let row_activity = self.x[self.n..].to_vec();
        let objective = self.model.objective_value(&x);
        let basis = Basis {
            cols: self.status[..self.n].to_vec(),
            rows: self.status[self.n..].to_vec(),
        };
        LpResult {
            status,
            objective,
            x,
            row_activity,
            duals: self.y.iter().map(|v| sign * v).collect(),
            reduced_costs: self.d[..self.n].iter().map(|v| sign * v).collect(),
            basis,
            iterations: self.iterations,
        }
    }
}
