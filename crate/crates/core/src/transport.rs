//! Transportation problems by network simplex, and the Benders separation
//! built on them.
//!
//! For a pair `i < j` the subproblem is a transportation problem shipping the
//! assignment mass of `i` (supplies, indexed by `k`) to that of `j` (demands,
//! indexed by `m`) at cost `q_ikjm`. Its dual gives `alpha_m` for demands and
//! `beta_k` for supplies with `alpha_m + beta_k <= q_ikjm`, and the pair adds
//! `beta_k` to the cut coefficient of `z_ik` and `alpha_m` to that of `z_jm`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Instance, QuadCost};

/// Balanced transportation problem, costs row-major `supply x demand`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    pub supply: Vec<f64>,
    pub demand: Vec<f64>,
    pub cost: Vec<f64>,
}

impl TransportProblem {
    pub fn new(supply: Vec<f64>, demand: Vec<f64>, cost: Vec<f64>) -> Result<Self> {
        if cost.len() != supply.len() * demand.len() {
            return Err(Error::DimensionMismatch {
                what: "transportation cost matrix",
                expected: supply.len() * demand.len(),
                got: cost.len(),
            });
        }
        if supply
            .iter()
            .chain(&demand)
            .any(|v| !(v.is_finite() && *v >= 0.0))
            || cost.iter().any(|c| !c.is_finite())
        {
            return Err(Error::InvalidData(
                "transportation data must be finite, masses nonnegative".into(),
            ));
        }
        Ok(TransportProblem {
            supply,
            demand,
            cost,
        })
    }

    pub fn objective(&self, flow: &[f64]) -> f64 {
        self.cost.iter().zip(flow).map(|(c, x)| c * x).sum()
    }
}

/// Dual solution: `alpha` per demand node, `beta` per supply node.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub value: f64,
}

impl DualPair {
    /// `sum_m demand_m alpha_m + sum_k supply_k beta_k`.
    pub fn evaluate(&self, supply: &[f64], demand: &[f64]) -> f64 {
        let a: f64 = demand.iter().zip(&self.alpha).map(|(t, a)| t * a).sum();
        let b: f64 = supply.iter().zip(&self.beta).map(|(s, b)| s * b).sum();
        a + b
    }

    /// Largest `alpha_m + beta_k - cost_km` (nonpositive when feasible).
    pub fn max_violation(&self, cost: &[f64]) -> f64 {
        let t = self.alpha.len();
        let mut worst = f64::NEG_INFINITY;
        for (k, b) in self.beta.iter().enumerate() {
            for (m, a) in self.alpha.iter().enumerate() {
                worst = worst.max(a + b - cost[k * t + m]);
            }
        }
        worst
    }

    fn scaled(&self, s: f64) -> DualPair {
        DualPair {
            alpha: self.alpha.iter().map(|a| a * s).collect(),
            beta: self.beta.iter().map(|b| b * s).collect(),
            value: self.value * s,
        }
    }
}

/// Real arcs `(supply, demand)` of an optimal spanning tree, reusable as a
/// warm start for a problem with the same dimensions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeBasis {
    arcs: Vec<(u32, u32)>,
}

impl TreeBasis {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    /// Row-major `supply x demand` flows.
    pub flow: Vec<f64>,
    pub duals: DualPair,
    pub objective: f64,
    pub tree: TreeBasis,
    pub pivots: usize,
}

const BALANCE_TOL: f64 = 1e-9;

pub fn solve_transport(
    problem: &TransportProblem,
    warm: Option<&TreeBasis>,
) -> Result<TransportSolution> {
    let ts: f64 = problem.supply.iter().sum();
    let td: f64 = problem.demand.iter().sum();
    if (ts - td).abs() > BALANCE_TOL * ts.max(td).max(1.0) {
        return Err(Error::UnbalancedProblem {
            supply: ts,
            demand: td,
        });
    }
    let mut net = Network::new(problem);
    if !(warm.is_some_and(|w| net.init(&w.arcs)) || net.init(&[])) {
        return Err(Error::NumericalFailure(
            "cannot build an initial transportation tree".into(),
        ));
    }
    net.optimize()?;
    net.finish()
}

const NONE: usize = usize::MAX;

#[derive(Clone, Copy)]
struct Arc {
    from: usize,
    to: usize,
    cost: f64,
    flow: f64,
    real: bool,
}

/// Spanning tree over the positive-mass supply nodes `0..ns`, demand nodes
/// `ns..ns+nt` and an artificial root. Every non-root node owns the arc to
/// its parent. Zero-flow tree arcs always point towards the root (strongly
/// feasible tree), which with the last-blocking-arc rule prevents cycling.
struct Network<'a> {
    p: &'a TransportProblem,
    t_full: usize,
    s_nodes: Vec<usize>,
    t_nodes: Vec<usize>,
    ns: usize,
    nt: usize,
    root: usize,
    mass: Vec<f64>,
    big_m: f64,
    cmax: f64,
    parent: Vec<usize>,
    arc: Vec<Arc>,
    depth: Vec<usize>,
    pi: Vec<f64>,
    order: Vec<usize>,
    next_arc: usize,
    pivots: usize,
    // scratch for tree rebuilds
    adj_start: Vec<usize>,
    adj: Vec<usize>,
    edges: Vec<Arc>,
}

impl<'a> Network<'a> {
    fn new(p: &'a TransportProblem) -> Self {
        let s_nodes: Vec<usize> = (0..p.supply.len()).filter(|&k| p.supply[k] > 0.0).collect();
        let t_nodes: Vec<usize> = (0..p.demand.len()).filter(|&m| p.demand[m] > 0.0).collect();
        let ns = s_nodes.len();
        let nt = t_nodes.len();
        let v = ns + nt + 1;
        let mut mass = vec![0.0; v];
        for (a, &k) in s_nodes.iter().enumerate() {
            mass[a] = p.supply[k];
        }
        for (b, &m) in t_nodes.iter().enumerate() {
            mass[ns + b] = -p.demand[m];
        }
        mass[ns + nt] = -mass.iter().sum::<f64>();
        let cmax = p.cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        Network {
            p,
            t_full: p.demand.len(),
            s_nodes,
            t_nodes,
            ns,
            nt,
            root: ns + nt,
            mass,
            big_m: (cmax + 1.0) * (v as f64 + 1.0),
            cmax,
            parent: vec![NONE; v],
            arc: vec![
                Arc {
                    from: 0,
                    to: 0,
                    cost: 0.0,
                    flow: 0.0,
                    real: false,
                };
                v
            ],
            depth: vec![0; v],
            pi: vec![0.0; v],
            order: Vec::with_capacity(v),
            next_arc: 0,
            pivots: 0,
            adj_start: vec![0; v + 1],
            adj: Vec::new(),
            edges: Vec::with_capacity(v),
        }
    }

    fn real_cost(&self, a: usize, b: usize) -> f64 {
        self.p.cost[self.s_nodes[a] * self.t_full + self.t_nodes[b]]
    }

    fn flow_tol(&self) -> f64 {
        1e-12 * (1.0 + self.mass.iter().fold(0.0f64, |a, m| a.max(m.abs())))
    }

    /// Builds a strongly feasible tree from warm arcs (empty for a cold
    /// start). Returns false when the arcs do not give one.
    fn init(&mut self, warm: &[(u32, u32)]) -> bool {
        let v = self.root + 1;
        let mut s_pos = vec![NONE; self.p.supply.len()];
        for (a, &k) in self.s_nodes.iter().enumerate() {
            s_pos[k] = a;
        }
        let mut t_pos = vec![NONE; self.p.demand.len()];
        for (b, &m) in self.t_nodes.iter().enumerate() {
            t_pos[m] = b;
        }
        let mut uf: Vec<usize> = (0..v).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        self.edges.clear();
        for &(k, m) in warm {
            let (k, m) = (k as usize, m as usize);
            if k >= s_pos.len() || m >= t_pos.len() || s_pos[k] == NONE || t_pos[m] == NONE {
                continue;
            }
            let (a, b) = (s_pos[k], self.ns + t_pos[m]);
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra != rb {
                uf[ra] = rb;
                self.edges.push(Arc {
                    from: a,
                    to: b,
                    cost: self.real_cost(a, b - self.ns),
                    flow: 0.0,
                    real: true,
                });
            }
        }
        // one artificial arc per component, oriented by the component's net mass
        let mut net = vec![0.0; v];
        let mut rep = vec![NONE; v];
        for x in 0..self.root {
            let r = find(&mut uf, x);
            net[r] += self.mass[x];
            if rep[r] == NONE {
                rep[r] = x;
            }
        }
        let tol = self.flow_tol();
        for x in 0..self.root {
            if rep[x] == NONE || find(&mut uf, x) != x {
                continue;
            }
            let node = rep[x];
            let (from, to) = if net[x] < -tol {
                (self.root, node)
            } else {
                (node, self.root)
            };
            self.edges.push(Arc {
                from,
                to,
                cost: self.big_m,
                flow: 0.0,
                real: false,
            });
        }
        if !self.rebuild() {
            return false;
        }
        // flows from subtree masses
        let mut sub = self.mass.clone();
        for idx in (1..self.order.len()).rev() {
            let y = self.order[idx];
            let par = self.parent[y];
            sub[par] += sub[y];
            let up = self.arc[y].from == y;
            let f = if up { sub[y] } else { -sub[y] };
            if f < -tol {
                return false;
            }
            let f = f.max(0.0);
            if f <= tol && !up {
                return false;
            }
            self.arc[y].flow = if f <= tol { 0.0 } else { f };
        }
        true
    }

    /// Recomputes parent, depth, potentials and BFS order from `edges`.
    fn rebuild(&mut self) -> bool {
        let v = self.root + 1;
        if self.edges.len() != v - 1 {
            return false;
        }
        self.adj_start.iter_mut().for_each(|s| *s = 0);
        for e in &self.edges {
            self.adj_start[e.from + 1] += 1;
            self.adj_start[e.to + 1] += 1;
        }
        for x in 0..v {
            self.adj_start[x + 1] += self.adj_start[x];
        }
        self.adj.clear();
        self.adj.resize(2 * self.edges.len(), 0);
        let mut fill: Vec<usize> = self.adj_start[..v].to_vec();
        for (idx, e) in self.edges.iter().enumerate() {
            self.adj[fill[e.from]] = idx;
            fill[e.from] += 1;
            self.adj[fill[e.to]] = idx;
            fill[e.to] += 1;
        }
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.order.clear();
        self.order.push(self.root);
        self.parent[self.root] = self.root;
        self.depth[self.root] = 0;
        self.pi[self.root] = 0.0;
        let mut head = 0;
        while head < self.order.len() {
            let x = self.order[head];
            head += 1;
            for t in self.adj_start[x]..self.adj_start[x + 1] {
                let e = self.edges[self.adj[t]];
                let y = if e.from == x { e.to } else { e.from };
                if self.parent[y] != NONE {
                    continue;
                }
                self.parent[y] = x;
                self.depth[y] = self.depth[x] + 1;
                self.arc[y] = e;
                // zero reduced cost on tree arcs: c + pi_from - pi_to = 0
                self.pi[y] = if e.from == y {
                    self.pi[x] - e.cost
                } else {
                    self.pi[x] + e.cost
                };
                self.order.push(y);
            }
        }
        self.order.len() == v
    }

    fn reduced_cost(&self, a: usize, b: usize) -> f64 {
        self.real_cost(a, b) + self.pi[a] - self.pi[self.ns + b]
    }

    /// Block pricing: scans blocks of arcs cyclically and returns the most
    /// negative reduced cost arc of the first block containing one.
    fn price(&mut self, tol: f64) -> Option<(usize, usize)> {
        let total = self.ns * self.nt;
        if total == 0 {
            return None;
        }
        let block = (libm::sqrt(total as f64) as usize).max(8).min(total);
        let mut scanned = 0;
        let mut best = -tol;
        let mut pick = None;
        let mut e = self.next_arc % total;
        while scanned < total {
            let (a, b) = (e / self.nt, e % self.nt);
            let rc = self.reduced_cost(a, b);
            if rc < best {
                best = rc;
                pick = Some((a, b));
            }
            scanned += 1;
            e += 1;
            if e == total {
                e = 0;
            }
            if scanned % block == 0 && pick.is_some() {
                break;
            }
        }
        self.next_arc = e;
        pick
    }

    fn optimize(&mut self) -> Result<()> {
        let tol = 1e-11 * (1.0 + self.cmax);
        let v = self.root + 1;
        let limit = 50 * v * v + 1000;
        let mut path_u = Vec::new();
        let mut path_v = Vec::new();
        while let Some((a, b)) = self.price(tol) {
            self.pivots += 1;
            if self.pivots > limit {
                return Err(Error::NumericalFailure(
                    "network simplex pivot limit".into(),
                ));
            }
            let (u, w0) = (a, self.ns + b);
            // climb to the apex
            path_u.clear();
            path_v.clear();
            let (mut x, mut y) = (u, w0);
            while self.depth[x] > self.depth[y] {
                path_u.push(x);
                x = self.parent[x];
            }
            while self.depth[y] > self.depth[x] {
                path_v.push(y);
                y = self.parent[y];
            }
            while x != y {
                path_u.push(x);
                path_v.push(y);
                x = self.parent[x];
                y = self.parent[y];
            }
            // traverse apex -> u (down), entering arc, v -> apex (up);
            // keep the last blocking arc among ties
            let mut delta = f64::INFINITY;
            let mut leave = NONE;
            for &z in path_u.iter().rev() {
                if self.arc[z].from == z && self.arc[z].flow <= delta {
                    delta = self.arc[z].flow;
                    leave = z;
                }
            }
            for &z in path_v.iter() {
                if self.arc[z].from != z && self.arc[z].flow <= delta {
                    delta = self.arc[z].flow;
                    leave = z;
                }
            }
            if leave == NONE {
                return Err(Error::NumericalFailure(
                    "unbounded transportation cycle".into(),
                ));
            }
            for &z in &path_u {
                if self.arc[z].from == z {
                    self.arc[z].flow -= delta;
                } else {
                    self.arc[z].flow += delta;
                }
            }
            for &z in &path_v {
                if self.arc[z].from == z {
                    self.arc[z].flow += delta;
                } else {
                    self.arc[z].flow -= delta;
                }
            }
            self.arc[leave].flow = 0.0;
            self.edges.clear();
            for z in 0..self.root {
                if z != leave {
                    self.edges.push(self.arc[z]);
                }
            }
            self.edges.push(Arc {
                from: u,
                to: w0,
                cost: self.real_cost(a, b),
                flow: delta,
                real: true,
            });
            if !self.rebuild() {
                return Err(Error::NumericalFailure(
                    "network simplex lost its spanning tree".into(),
                ));
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<TransportSolution> {
        let s_full = self.p.supply.len();
        let t_full = self.t_full;
        let ftol = 1e-9 * (1.0 + self.mass.iter().fold(0.0f64, |a, m| a.max(m.abs())));
        let mut flow = vec![0.0; s_full * t_full];
        let mut tree = TreeBasis::default();
        let mut artificial = 0;
        for z in 0..self.root {
            let e = self.arc[z];
            if e.real {
                let (a, b) = (e.from, e.to - self.ns);
                let (k, m) = (self.s_nodes[a], self.t_nodes[b]);
                flow[k * t_full + m] = e.flow.max(0.0);
                tree.arcs.push((k as u32, m as u32));
            } else {
                artificial += 1;
                if e.flow > ftol {
                    return Err(Error::NumericalFailure(
                        "artificial flow left in transportation optimum".into(),
                    ));
                }
            }
        }
        if artificial > 1 {
            self.reanchor()?;
        }

        let mut alpha = vec![f64::NAN; t_full];
        let mut beta = vec![f64::NAN; s_full];
        for (b, &m) in self.t_nodes.iter().enumerate() {
            alpha[m] = self.pi[self.ns + b];
        }
        for (a, &k) in self.s_nodes.iter().enumerate() {
            beta[k] = -self.pi[a];
        }
        if let Some(&m0) = self.t_nodes.first() {
            let shift = alpha[m0];
            for &m in &self.t_nodes {
                alpha[m] -= shift;
            }
            for &k in &self.s_nodes {
                beta[k] += shift;
            }
        }
        let cost = &self.p.cost;
        // zero-mass nodes: largest values keeping dual feasibility
        let any_alpha = !self.t_nodes.is_empty();
        for k in 0..s_full {
            if beta[k].is_nan() {
                beta[k] = if any_alpha {
                    self.t_nodes
                        .iter()
                        .map(|&m| cost[k * t_full + m] - alpha[m])
                        .fold(f64::INFINITY, f64::min)
                } else {
                    (0..t_full)
                        .map(|m| cost[k * t_full + m])
                        .fold(f64::INFINITY, f64::min)
                };
                if !beta[k].is_finite() {
                    beta[k] = 0.0;
                }
            }
        }
        for m in 0..t_full {
            if alpha[m].is_nan() {
                alpha[m] = (0..s_full)
                    .map(|k| cost[k * t_full + m] - beta[k])
                    .fold(f64::INFINITY, f64::min);
                if !alpha[m].is_finite() {
                    alpha[m] = 0.0;
                }
            }
        }
        let objective = self.p.objective(&flow);
        let mut duals = DualPair {
            alpha,
            beta,
            value: 0.0,
        };
        duals.value = duals.evaluate(&self.p.supply, &self.p.demand);
        let scale = 1.0 + self.cmax;
        if s_full > 0 && t_full > 0 && duals.max_violation(cost) > 1e-9 * scale {
            return Err(Error::NumericalFailure(
                "transportation duals infeasible".into(),
            ));
        }
        Ok(TransportSolution {
            flow,
            duals,
            objective,
            tree,
            pivots: self.pivots,
        })
    }

    /// With several artificial arcs in the final tree the potentials carry
    /// different multiples of the big-M cost. Components joined by positive
    /// flow keep their relative potentials; their offsets are found as a
    /// shortest path solution of the dual difference constraints.
    fn reanchor(&mut self) -> Result<()> {
        let v = self.root;
        let ftol = self.flow_tol();
        let mut uf: Vec<usize> = (0..v).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for z in 0..v {
            let e = self.arc[z];
            if e.real && e.flow > ftol {
                let (ra, rb) = (find(&mut uf, e.from), find(&mut uf, e.to));
                if ra != rb {
                    uf[ra] = rb;
                }
            }
        }
        let mut comp = vec![NONE; v];
        let mut count = 0;
        for x in 0..v {
            let r = find(&mut uf, x);
            if comp[r] == NONE {
                comp[r] = count;
                count += 1;
            }
            comp[x] = comp[r];
        }
        // edge weights between components: o_cm - o_ck <= c + pi_k - pi_m
        let mut w = vec![f64::INFINITY; count * count];
        for a in 0..self.ns {
            for b in 0..self.nt {
                let (ca, cb) = (comp[a], comp[self.ns + b]);
                if ca != cb {
                    let rc = self.reduced_cost(a, b);
                    let slot = &mut w[ca * count + cb];
                    if rc < *slot {
                        *slot = rc;
                    }
                }
            }
        }
        let mut off = vec![0.0; count];
        let tol = 1e-11 * (1.0 + self.cmax);
        let mut changed = true;
        let mut rounds = 0;
        while changed {
            changed = false;
            rounds += 1;
            if rounds > count + 1 {
                return Err(Error::NumericalFailure(
                    "inconsistent transportation duals".into(),
                ));
            }
            for x in 0..count {
                for y in 0..count {
                    let wt = w[x * count + y];
                    if wt.is_finite() && off[x] + wt < off[y] - tol {
                        off[y] = off[x] + wt;
                        changed = true;
                    }
                }
            }
        }
        for x in 0..v {
            self.pi[x] += off[comp[x]];
        }
        Ok(())
    }
}

/// Point-independent data needed to separate one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSlice<'c> {
    pub n: usize,
    /// Row-major `k x m` costs `q_ikjm`.
    pub cost: &'c [f64],
}

/// Largest weight put on the current point in the Pareto solve.
pub const MAX_PARETO_WEIGHT: f64 = 1e6;

/// Pareto-optimal duals of pair `(i, j)`.
///
/// One transportation problem with supplies `z0_ik + delta zbar_ik`,
/// demands `z0_jm + delta zbar_jm` and cost `q_ikjm` is solved. Its duals
/// are optimal at `zbar` and, among those, maximize the value at `z0` as
/// soon as `delta > 1 / x_min`, where `x_min` is the smallest positive flow
/// of an optimal shipment at `zbar`: the extra supply `z0` (total mass one)
/// can then be rerouted against any arc used at `zbar`. For integral rows
/// `x_min = 1`; otherwise a plain solve at `zbar` provides it. We use
/// `delta = 2 / x_min`. If the weight would exceed [`MAX_PARETO_WEIGHT`] or
/// the result misses the optimum at `zbar`, the plain duals are returned.
///
/// `value` of the result is `Gamma(zbar)`, the dual objective at `zbar`.
pub fn separate_pair(
    i: usize,
    j: usize,
    zbar: &[f64],
    z0: &[f64],
    slice: &PairSlice<'_>,
    warm: Option<&TreeBasis>,
) -> Result<(DualPair, TreeBasis)> {
    let n = slice.n;
    let (zi, zj) = (&zbar[i * n..(i + 1) * n], &zbar[j * n..(j + 1) * n]);
    let (z0i, z0j) = (&z0[i * n..(i + 1) * n], &z0[j * n..(j + 1) * n]);
    let integral = is_unit_row(zi) && is_unit_row(zj);
    let mut plain = None;
    let delta = if integral {
        2.0
    } else {
        let problem = TransportProblem {
            supply: zi.to_vec(),
            demand: zj.to_vec(),
            cost: slice.cost.to_vec(),
        };
        let sol = solve_transport(&problem, warm)?;
        let x_min = sol
            .flow
            .iter()
            .filter(|&&x| x > 1e-12)
            .fold(f64::INFINITY, |a, &x| a.min(x));
        let delta = 2.0 / x_min;
        plain = Some(sol);
        delta
    };
    if delta.is_finite() && delta <= MAX_PARETO_WEIGHT && z0i.iter().chain(z0j).any(|&v| v > 0.0) {
        let problem = TransportProblem {
            supply: (0..n).map(|k| z0i[k] + delta * zi[k]).collect(),
            demand: (0..n).map(|m| z0j[m] + delta * zj[m]).collect(),
            cost: slice.cost.to_vec(),
        };
        let warm_tree = plain.as_ref().map(|p| &p.tree).or(warm);
        let sol = solve_transport(&problem, warm_tree)?;
        let mut duals = sol.duals;
        duals.value = duals.evaluate(zi, zj);
        let on_face = match &plain {
            Some(p) => (duals.value - p.duals.value).abs() <= 1e-9 * (1.0 + p.duals.value.abs()),
            None => true,
        };
        if on_face {
            return Ok((duals, sol.tree));
        }
    }
    let sol = match plain {
        Some(p) => p,
        None => {
            let problem = TransportProblem {
                supply: zi.to_vec(),
                demand: zj.to_vec(),
                cost: slice.cost.to_vec(),
            };
            solve_transport(&problem, warm)?
        }
    };
    let mut duals = sol.duals;
    duals.value = duals.evaluate(zi, zj);
    Ok((duals, sol.tree))
}

/// Duals of the plain subproblem at `zbar`, without the core point.
pub fn separate_pair_plain(
    i: usize,
    j: usize,
    zbar: &[f64],
    slice: &PairSlice<'_>,
) -> Result<DualPair> {
    let n = slice.n;
    let problem = TransportProblem {
        supply: zbar[i * n..(i + 1) * n].to_vec(),
        demand: zbar[j * n..(j + 1) * n].to_vec(),
        cost: slice.cost.to_vec(),
    };
    Ok(solve_transport(&problem, None)?.duals)
}

fn is_unit_row(row: &[f64]) -> bool {
    let mut ones = 0;
    for &v in row {
        if v == 1.0 {
            ones += 1;
        } else if v != 0.0 {
            return false;
        }
    }
    ones == 1
}

/// Aggregated cut `eta >= sum g_ik z_ik` and `sum Gamma_ij(zbar)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub g: Vec<f64>,
    pub value: f64,
}

impl Separation {
    pub fn zero(n: usize) -> Self {
        Separation {
            g: vec![0.0; n * n],
            value: 0.0,
        }
    }

    pub fn lhs(&self, z: &[f64]) -> f64 {
        self.g.iter().zip(z).map(|(g, z)| g * z).sum()
    }

    fn add(&mut self, other: &Separation) {
        for (a, b) in self.g.iter_mut().zip(&other.g) {
            *a += b;
        }
        self.value += other.value;
    }
}

/// Partial result of one separation task.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPart {
    pub sep: Separation,
    pub trees: Vec<(usize, TreeBasis)>,
    pub solves: usize,
}

/// Runs independent separation tasks. Implementations may use threads but
/// must return results in task order.
pub trait PairExecutor: Sync {
    fn map(
        &self,
        tasks: usize,
        f: &(dyn Fn(usize) -> Result<CutPart> + Sync),
    ) -> Vec<Result<CutPart>>;

    fn workers(&self) -> usize {
        1
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PairExecutor for Sequential {
    fn map(
        &self,
        tasks: usize,
        f: &(dyn Fn(usize) -> Result<CutPart> + Sync),
    ) -> Vec<Result<CutPart>> {
        (0..tasks).map(f).collect()
    }
}

/// Clamps to `[0, 1]` and rescales each row to sum to one, so separation
/// sees exactly balanced transportation problems.
pub fn normalize_rows(z: &mut [f64], n: usize) {
    for row in z.chunks_mut(n) {
        let mut s = 0.0;
        for v in row.iter_mut() {
            *v = v.clamp(0.0, 1.0);
            s += *v;
        }
        if s > 0.0 {
            for v in row.iter_mut() {
                *v /= s;
            }
        }
    }
}

/// Stateful separator: keeps one warm tree per pair between rounds and
/// reuses solutions between pairs with identical masses when all pair cost
/// blocks are multiples of one matrix.
pub struct Separator {
    n: usize,
    pairs: Vec<(usize, usize)>,
    warm: Vec<Option<TreeBasis>>,
    keep_warm: bool,
    shortcut: bool,
    pub solves: usize,
}

/// Above this many nodes warm trees are not kept (memory is quadratic in
/// pairs times nodes).
pub const WARM_TREE_MAX_NODES: usize = 60;

impl Separator {
    pub fn new(inst: &Instance, factorized_shortcut: bool) -> Separator {
        let n = inst.n();
        let quad = inst.quad();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !quad.pair_is_zero(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        let keep_warm = n <= WARM_TREE_MAX_NODES;
        let warm = if keep_warm {
            vec![None; pairs.len()]
        } else {
            Vec::new()
        };
        Separator {
            n,
            shortcut: factorized_shortcut && quad.base_matrix().is_some(),
            pairs,
            warm,
            keep_warm,
            solves: 0,
        }
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Separates at `zbar` with core point `z0`. Both must have rows that sum
    /// to one (see [`normalize_rows`]).
    pub fn separate(
        &mut self,
        inst: &Instance,
        zbar: &[f64],
        z0: &[f64],
        exec: &dyn PairExecutor,
        stop: &(dyn Fn() -> bool + Sync),
    ) -> Result<Separation> {
        let n = self.n;
        check_rows(zbar, n)?;
        check_rows(z0, n)?;
        if self.pairs.is_empty() {
            return Ok(Separation::zero(n));
        }
        let classes = if self.shortcut {
            mass_classes(zbar, z0, n)
        } else {
            Vec::new()
        };
        let tasks = (exec.workers() * 4).clamp(1, self.pairs.len());
        let chunk = self.pairs.len().div_ceil(tasks);
        let pairs = &self.pairs;
        let warm = &self.warm;
        let keep_warm = self.keep_warm;
        let factorized = match inst.quad() {
            QuadCost::Factorized { flow, units, .. } if self.shortcut => inst
                .quad()
                .base_matrix()
                .map(|base| (base, flow.as_slice(), units.transfer)),
            _ => None,
        };
        let task = |t: usize| -> Result<CutPart> {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(pairs.len());
            let mut part = CutPart {
                sep: Separation::zero(n),
                trees: Vec::new(),
                solves: 0,
            };
            let mut block = Vec::new();
            let mut cache: Vec<((usize, usize), DualPair)> = Vec::new();
            for (idx, &(i, j)) in pairs.iter().enumerate().take(hi).skip(lo) {
                if (idx - lo).is_multiple_of(64) && stop() {
                    return Err(Error::Interrupted);
                }
                let duals = if let Some((base, flow, transfer)) = factorized {
                    let scale = transfer * (flow[i * n + j] + flow[j * n + i]);
                    let key = (classes[i], classes[j]);
                    let unit = match cache.iter().find(|(k, _)| *k == key) {
                        Some((_, d)) => d.clone(),
                        None => {
                            let slice = PairSlice { n, cost: base };
                            let (mut d, _) = separate_pair(i, j, zbar, z0, &slice, None)?;
                            part.solves += 1;
                            d.value = 0.0;
                            cache.push((key, d.clone()));
                            d
                        }
                    };
                    let mut d = unit.scaled(scale);
                    d.value = d.evaluate(&zbar[i * n..(i + 1) * n], &zbar[j * n..(j + 1) * n]);
                    d
                } else {
                    inst.quad().pair_block(i, j, &mut block);
                    let slice = PairSlice { n, cost: &block };
                    let w = if keep_warm { warm[idx].as_ref() } else { None };
                    let (d, tree) = separate_pair(i, j, zbar, z0, &slice, w)?;
                    part.solves += 1;
                    if keep_warm {
                        part.trees.push((idx, tree));
                    }
                    d
                };
                for k in 0..n {
                    part.sep.g[i * n + k] += duals.beta[k];
                    part.sep.g[j * n + k] += duals.alpha[k];
                }
                part.sep.value += duals.value;
            }
            Ok(part)
        };
        let results = exec.map(tasks, &task);
        let mut total = Separation::zero(n);
        for r in results {
            let part = r?;
            total.add(&part.sep);
            self.solves += part.solves;
            for (idx, tree) in part.trees {
                self.warm[idx] = Some(tree);
            }
        }
        Ok(total)
    }
}

/// Sequential separation without state.
pub fn separate_all(inst: &Instance, zbar: &[f64], z0: &[f64]) -> Result<Separation> {
    Separator::new(inst, false).separate(inst, zbar, z0, &Sequential, &|| false)
}

fn check_rows(z: &[f64], n: usize) -> Result<()> {
    if z.len() != n * n {
        return Err(Error::DimensionMismatch {
            what: "assignment matrix",
            expected: n * n,
            got: z.len(),
        });
    }
    for row in z.chunks(n) {
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::UnbalancedProblem {
                supply: s,
                demand: 1.0,
            });
        }
    }
    Ok(())
}

/// Class id per node; nodes share a class when their rows of `zbar` and of
/// `z0` are both bitwise equal.
fn mass_classes(zbar: &[f64], z0: &[f64], n: usize) -> Vec<usize> {
    let rows: Vec<Vec<(u64, u64)>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (zbar[i * n + k].to_bits(), z0[i * n + k].to_bits()))
                .collect()
        })
        .collect();
    let mut class = vec![0; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        match reps.iter().position(|&r| rows[r] == rows[i]) {
            Some(c) => class[i] = c,
            None => {
                class[i] = reps.len();
                reps.push(i);
            }
        }
    }
    class
}
