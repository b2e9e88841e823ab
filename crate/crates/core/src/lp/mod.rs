//! Linear programs with bounded variables and a revised simplex solver.
//!
//! Every row `i` gets a logical variable `r_i = a_i x` bounded by the row
//! sense, so the solver works on `A x - r = 0` with bounds on all of
//! `(x, r)`. Bases are exchanged as per-variable statuses ([`Basis`]) which
//! survive row and column additions, bound changes and removal of rows whose
//! logical is basic.

mod emit;
mod simplex;

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use emit::write_lp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub lower: f64,
    pub upper: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, sense: RowSense, rhs: f64) -> Row {
        Row { coeffs, sense, rhs }
    }

    /// `(lower, upper)` bounds of the row activity.
    pub fn bounds(&self) -> (f64, f64) {
        match self.sense {
            RowSense::Le => (f64::NEG_INFINITY, self.rhs),
            RowSense::Ge => (self.rhs, f64::INFINITY),
            RowSense::Eq => (self.rhs, self.rhs),
        }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    sense: ObjSense,
    cols: Vec<Column>,
    saved_bounds: Vec<Option<(f64, f64)>>,
    rows: Vec<Row>,
}

impl LpModel {
    pub fn new(sense: ObjSense) -> LpModel {
        LpModel {
            sense,
            cols: Vec::new(),
            saved_bounds: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn sense(&self) -> ObjSense {
        self.sense
    }

    pub fn add_var(&mut self, lower: f64, upper: f64, cost: f64) -> usize {
        self.cols.push(Column { lower, upper, cost });
        self.saved_bounds.push(None);
        self.cols.len() - 1
    }

    pub fn add_row(
        &mut self,
        coeffs: Vec<(usize, f64)>,
        sense: RowSense,
        rhs: f64,
    ) -> Result<usize> {
        for &(j, _) in &coeffs {
            if j >= self.cols.len() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: self.cols.len(),
                });
            }
        }
        self.rows.push(Row { coeffs, sense, rhs });
        Ok(self.rows.len() - 1)
    }

    /// Appends rows; returns the index of the first one.
    pub fn add_rows(&mut self, rows: impl IntoIterator<Item = Row>) -> Result<usize> {
        let first = self.rows.len();
        for row in rows {
            if let Err(e) = self.add_row(row.coeffs, row.sense, row.rhs) {
                self.rows.truncate(first);
                return Err(e);
            }
        }
        Ok(first)
    }

    /// Removes the given rows (any order, duplicates ignored). Indices of the
    /// remaining rows shift down.
    pub fn remove_rows(&mut self, rows: &[usize]) -> Result<()> {
        let mut drop = alloc::vec![false; self.rows.len()];
        for &r in rows {
            if r >= self.rows.len() {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    len: self.rows.len(),
                });
            }
            drop[r] = true;
        }
        let mut idx = 0;
        self.rows.retain(|_| {
            let keep = !drop[idx];
            idx += 1;
            keep
        });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.cols.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn col(&self, j: usize) -> &Column {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[Column] {
        &self.cols
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn set_cost(&mut self, j: usize, cost: f64) -> Result<()> {
        self.check_col(j)?;
        self.cols[j].cost = cost;
        Ok(())
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> Result<()> {
        self.check_col(j)?;
        self.cols[j].lower = lower;
        self.cols[j].upper = upper;
        Ok(())
    }

    /// Sets both bounds to `value`. The previous bounds are remembered by the
    /// first fix and restored by [`unfix_variable`](Self::unfix_variable).
    pub fn fix_variable(&mut self, j: usize, value: f64) -> Result<()> {
        self.check_col(j)?;
        let col = &mut self.cols[j];
        if self.saved_bounds[j].is_none() {
            self.saved_bounds[j] = Some((col.lower, col.upper));
        }
        col.lower = value;
        col.upper = value;
        Ok(())
    }

    pub fn unfix_variable(&mut self, j: usize) -> Result<()> {
        self.check_col(j)?;
        if let Some((lo, up)) = self.saved_bounds[j].take() {
            self.cols[j].lower = lo;
            self.cols[j].upper = up;
        }
        Ok(())
    }

    pub fn is_fixed(&self, j: usize) -> bool {
        self.cols[j].lower == self.cols[j].upper
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.cols.iter().zip(x).map(|(c, v)| c.cost * v).sum()
    }

    fn check_col(&self, j: usize) -> Result<()> {
        if j >= self.cols.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.cols.len(),
            });
        }
        Ok(())
    }

    pub fn solve(&self, warm: Option<&Basis>) -> Result<LpResult> {
        solve(self, warm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Free,
}

/// Basis snapshot: one status per column and one per row logical.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub cols: Vec<VarStatus>,
    pub rows: Vec<VarStatus>,
}

impl Basis {
    /// Drops the statuses of removed rows. Only valid when the logicals of
    /// those rows are basic, which keeps the basis square and nonsingular.
    pub fn remove_rows(&mut self, rows: &[usize]) {
        let mut drop = alloc::vec![false; self.rows.len()];
        for &r in rows {
            if r < drop.len() {
                drop[r] = true;
            }
        }
        let mut idx = 0;
        self.rows.retain(|_| {
            let keep = !drop[idx];
            idx += 1;
            keep
        });
    }

    pub fn is_basic_row(&self, r: usize) -> bool {
        self.rows.get(r) == Some(&VarStatus::Basic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration limit or interruption; values are those of the last basis.
    IterLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub row_activity: Vec<f64>,
    /// Row duals `y` with the usual sign convention for the objective sense
    /// (`d objective / d rhs`).
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub basis: Basis,
    pub iterations: usize,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    /// Absolute primal feasibility tolerance.
    pub tol_feas: f64,
    /// Smallest pivot accepted in ratio tests.
    pub tol_pivot: f64,
    /// Reduced cost tolerance, relative to the largest cost.
    pub tol_opt: f64,
    /// Pivots without objective change before switching to Bland's rule.
    pub stall_limit: usize,
    /// 0 picks a limit from the model size.
    pub max_iterations: usize,
    /// 0 picks an interval from the model size.
    pub refactor_every: usize,
    /// The basis inverse is dense; larger models are refused.
    pub max_rows: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            tol_feas: 1e-7,
            tol_pivot: 1e-9,
            tol_opt: 1e-9,
            stall_limit: 2000,
            max_iterations: 0,
            refactor_every: 0,
            max_rows: 6000,
        }
    }
}

pub fn solve(model: &LpModel, warm: Option<&Basis>) -> Result<LpResult> {
    solve_with(model, warm, &LpOptions::default(), None)
}

/// Solves `model`, optionally from a previous basis. `stop` is polled
/// periodically; when it returns true the solve ends with
/// [`LpStatus::IterLimit`].
pub fn solve_with(
    model: &LpModel,
    warm: Option<&Basis>,
    opts: &LpOptions,
    stop: Option<&dyn Fn() -> bool>,
) -> Result<LpResult> {
    if model.num_rows() > opts.max_rows {
        return Err(Error::SizeGuard {
            what: "LP rows",
            got: model.num_rows(),
            limit: opts.max_rows,
        });
    }
    simplex::Kernel::new(model, opts, stop).run(warm)
}
