//! Brute force ground truth for tiny instances and tiny LPs.
//!
//! Deliberately naive: the objective is summed term by term from the raw
//! cost accessors and nothing here calls into the solver modules.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{CostBreakdown, Instance, Solution};
use crate::lp::{LpModel, ObjSense, RowSense};

pub const ORACLE_MAX_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: Solution,
    pub value: f64,
    /// Every assignment whose cost ties the optimum within `1e-9` relative.
    pub optima: Vec<Vec<usize>>,
}

struct Search<'a> {
    inst: &'a Instance,
    n: usize,
    hubs: Vec<usize>,
    is_hub: Vec<bool>,
    assign: Vec<usize>,
    load: Vec<f64>,
    best: f64,
    pool: Vec<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn tol(&self, v: f64) -> f64 {
        if v.is_finite() {
            1e-9 * v.abs().max(1.0)
        } else {
            0.0
        }
    }

    /// Assigns non-hub nodes from `i` on; `partial` is the cost of
    /// everything fixed so far (all cost terms are nonnegative).
    fn dfs(&mut self, i: usize, partial: f64) {
        if partial > self.best + self.tol(self.best) {
            return;
        }
        if i == self.n {
            if !self.best.is_finite() || partial < self.best - self.tol(self.best) {
                self.best = partial;
                let best = self.best;
                let tol = 1e-9 * best.abs().max(1.0);
                self.pool.retain(|(v, _)| *v <= best + tol);
            }
            self.pool.push((partial, self.assign.clone()));
            return;
        }
        if self.is_hub[i] {
            self.dfs(i + 1, partial);
            return;
        }
        for h in 0..self.hubs.len() {
            let k = self.hubs[h];
            let d = self.inst.demand(i);
            if self.inst.variant().capacitated
                && self.load[k] + d
                    > self.inst.residual_capacity(k) + 1e-9 * (1.0 + self.inst.capacity(k))
            {
                continue;
            }
            let mut add = self.inst.linear(i, k);
            for j in 0..self.n {
                if j != i && (self.is_hub[j] || j < i) {
                    add += self.inst.q(i, k, j, self.assign[j]);
                }
            }
            self.assign[i] = k;
            self.load[k] += d;
            self.dfs(i + 1, partial + add);
            self.load[k] -= d;
            self.assign[i] = usize::MAX;
        }
    }
}

/// Exhaustive search over all open sets `|H| <= p` and all capacity
/// feasible assignments.
pub fn enumerate_optimal(inst: &Instance) -> Result<OracleResult> {
    let n = inst.n();
    if n > ORACLE_MAX_NODES {
        return Err(Error::SizeGuard {
            what: "oracle nodes",
            got: n,
            limit: ORACLE_MAX_NODES,
        });
    }
    let mut search = Search {
        inst,
        n,
        hubs: Vec::new(),
        is_hub: vec![false; n],
        assign: vec![usize::MAX; n],
        load: vec![0.0; n],
        best: f64::INFINITY,
        pool: Vec::new(),
    };
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() as usize > inst.p() {
            continue;
        }
        let hubs: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).collect();
        if hubs.iter().any(|&k| !inst.can_open(k)) {
            continue;
        }
        search.is_hub = (0..n).map(|k| mask & (1 << k) != 0).collect();
        let mut base = 0.0;
        for &k in &hubs {
            search.assign[k] = k;
            base += inst.setup(k) + inst.linear(k, k);
        }
        for (a, &k) in hubs.iter().enumerate() {
            for &m in &hubs[a + 1..] {
                base += inst.q(k, k, m, m);
            }
        }
        search.hubs = hubs;
        search.load.iter_mut().for_each(|l| *l = 0.0);
        search.dfs(0, base);
        for k in 0..n {
            search.assign[k] = usize::MAX;
        }
    }
    if search.pool.is_empty() {
        return Err(Error::InfeasibleInstance);
    }
    let value = search.best;
    let tol = 1e-9 * value.abs().max(1.0);
    let mut optima: Vec<Vec<usize>> = search
        .pool
        .into_iter()
        .filter(|(v, _)| *v <= value + tol)
        .map(|(_, a)| a)
        .collect();
    optima.sort();
    optima.dedup();
    let assign = optima[0].clone();
    let mut open: Vec<usize> = assign.clone();
    open.sort_unstable();
    open.dedup();
    let cost = naive_cost(inst, &open, &assign);
    let best = Solution { open, assign, cost };
    Ok(OracleResult {
        best,
        value,
        optima,
    })
}

/// Term by term objective of a (not checked) solution.
pub fn naive_cost(inst: &Instance, open: &[usize], assign: &[usize]) -> CostBreakdown {
    let n = inst.n();
    let mut setup = 0.0;
    for &k in open {
        setup += inst.setup(k);
    }
    let mut linear = 0.0;
    for i in 0..n {
        linear += inst.linear(i, assign[i]);
    }
    let mut quadratic = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            quadratic += inst.q(i, assign[i], j, assign[j]);
        }
    }
    CostBreakdown::new(setup, linear, quadratic)
}

pub const VERTEX_ORACLE_MAX: usize = 6;

/// Optimal value of a tiny LP with finite variable bounds by enumerating
/// every choice of `n` active constraints. `None` when infeasible.
pub fn lp_vertex_oracle(model: &LpModel) -> Result<Option<f64>> {
    let n = model.num_vars();
    if n > VERTEX_ORACLE_MAX || model.num_rows() > VERTEX_ORACLE_MAX {
        return Err(Error::SizeGuard {
            what: "vertex oracle size",
            got: n.max(model.num_rows()),
            limit: VERTEX_ORACLE_MAX,
        });
    }
    if model
        .cols()
        .iter()
        .any(|c| !c.lower.is_finite() || !c.upper.is_finite())
    {
        return Err(Error::InvalidData(
            "vertex oracle needs finite bounds".into(),
        ));
    }
    // hyperplanes a x = b
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in model.rows() {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] += v;
        }
        planes.push((a, row.rhs));
    }
    for (j, c) in model.cols().iter().enumerate() {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), c.lower));
        planes.push((e, c.upper));
    }
    let sign = match model.sense() {
        ObjSense::Minimize => 1.0,
        ObjSense::Maximize => -1.0,
    };
    let mut best: Option<f64> = None;
    let mut chosen = Vec::with_capacity(n);
    combos(planes.len(), n, 0, &mut chosen, &mut |idx| {
        let Some(x) = solve_square(idx.iter().map(|&t| &planes[t]), n) else {
            return;
        };
        if !feasible(model, &x) {
            return;
        }
        let v = sign * model.objective_value(&x);
        if best.is_none_or(|b| v < b) {
            best = Some(v);
        }
    });
    Ok(best.map(|v| sign * v))
}

fn combos(
    total: usize,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for t in start..total {
        chosen.push(t);
        combos(total, k, t + 1, chosen, f);
        chosen.pop();
    }
}

fn solve_square<'p>(
    planes: impl Iterator<Item = &'p (Vec<f64>, f64)>,
    n: usize,
) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = planes
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(*b);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(p, c);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for t in c..=n {
                    a[r][t] -= f * a[c][t];
                }
            }
        }
    }
    Some((0..n).map(|c| a[c][n] / a[c][c]).collect())
}

fn feasible(model: &LpModel, x: &[f64]) -> bool {
    let tol = 1e-9;
    for (j, c) in model.cols().iter().enumerate() {
        if x[j] < c.lower - tol || x[j] > c.upper + tol {
            return false;
        }
    }
    model.rows().iter().all(|row| {
        let act = row.activity(x);
        match row.sense {
            RowSense::Le => act <= row.rhs + tol,
            RowSense::Ge => act >= row.rhs - tol,
            RowSense::Eq => (act - row.rhs).abs() <= tol,
        }
    })
}
