//! Problem data, solutions and objective evaluation.
//!
//! Nodes are both customers and potential facilities. `z_ik = 1` means node
//! `i` is served by facility `k`; `z_kk = 1` means `k` is open (and serves
//! itself). The objective is
//!
//! ```text
//! sum_k f_k z_kk + sum_{i,k} c_ik z_ik + sum_{i<j} sum_{k,m} q_ikjm z_ik z_jm
//! ```
//!
//! subject to single assignment, assignment only to open facilities, at most
//! `p` open facilities and `sum_{i != k} d_i z_ik <= (b_k - d_k) z_kk`.

mod generate;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Violation};

pub use generate::{class_counts, generate_dense, generate_set1, NodeClass, SetIConfig, Tightness};

/// Above this node count the dense interaction tensor is refused.
pub const DENSE_MAX_NODES: usize = 60;

/// Which side constraints are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub capacitated: bool,
    /// When false, `p` is ignored and treated as `n`.
    pub cardinality: bool,
}

impl Variant {
    pub const GENERAL: Variant = Variant {
        capacitated: true,
        cardinality: true,
    };
}

/// The four single-allocation hub location problems covered by the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariantKind {
    /// Uncapacitated hub location: setup costs, no capacities, no `p`.
    Uhlpsa,
    /// Uncapacitated p-hub median: no setup costs, no capacities.
    Uphmpsa,
    /// Capacitated hub location: setup costs and capacities, no `p`.
    Chlpsa,
    /// Capacitated p-hub median: capacities and `p`, no setup costs.
    Cphmpsa,
}

impl VariantKind {
    pub const ALL: [VariantKind; 4] = [
        VariantKind::Uhlpsa,
        VariantKind::Uphmpsa,
        VariantKind::Chlpsa,
        VariantKind::Cphmpsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantKind::Uhlpsa => "uhlpsa",
            VariantKind::Uphmpsa => "uphmpsa",
            VariantKind::Chlpsa => "chlpsa",
            VariantKind::Cphmpsa => "cphmpsa",
        }
    }

    pub fn parse(s: &str) -> Option<VariantKind> {
        VariantKind::ALL
            .iter()
            .copied()
            .find(|v| v.name().eq_ignore_ascii_case(s))
    }

    pub fn variant(self) -> Variant {
        match self {
            VariantKind::Uhlpsa => Variant {
                capacitated: false,
                cardinality: false,
            },
            VariantKind::Uphmpsa => Variant {
                capacitated: false,
                cardinality: true,
            },
            VariantKind::Chlpsa => Variant {
                capacitated: true,
                cardinality: false,
            },
            VariantKind::Cphmpsa => Variant {
                capacitated: true,
                cardinality: true,
            },
        }
    }

    pub fn has_setup_costs(self) -> bool {
        matches!(self, VariantKind::Uhlpsa | VariantKind::Chlpsa)
    }
}

/// Unit collection, transfer and distribution costs of a hub network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostUnits {
    pub collection: f64,
    pub transfer: f64,
    pub distribution: f64,
}

impl Default for CostUnits {
    fn default() -> Self {
        CostUnits {
            collection: 2.0,
            transfer: 0.75,
            distribution: 3.0,
        }
    }
}

/// Interaction costs `q_ikjm` for `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadCost {
    /// Explicit tensor; one `n x n` block (rows `k`, columns `m`) per pair `i < j`.
    Dense { n: usize, values: Vec<f64> },
    /// `q_ikjm = transfer * (w_ij dist_km + w_ji dist_mk)`.
    Factorized {
        n: usize,
        flow: Vec<f64>,
        dist: Vec<f64>,
        units: CostUnits,
    },
}

/// Position of the unordered pair `i < j` in row-major upper-triangle order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl QuadCost {
    pub fn zero_dense(n: usize) -> Result<QuadCost> {
        QuadCost::dense(n, vec![0.0; num_pairs(n) * n * n])
    }

    pub fn dense(n: usize, values: Vec<f64>) -> Result<QuadCost> {
        if n > DENSE_MAX_NODES {
            return Err(Error::SizeGuard {
                what: "dense interaction tensor nodes",
                got: n,
                limit: DENSE_MAX_NODES,
            });
        }
        let expected = num_pairs(n) * n * n;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "dense interaction tensor",
                expected,
                got: values.len(),
            });
        }
        check_nonnegative("dense interaction tensor", &values)?;
        Ok(QuadCost::Dense { n, values })
    }

    pub fn factorized(
        n: usize,
        flow: Vec<f64>,
        dist: Vec<f64>,
        units: CostUnits,
    ) -> Result<QuadCost> {
        check_len("flow", &flow, n * n)?;
        check_len("dist", &dist, n * n)?;
        check_nonnegative("flow", &flow)?;
        check_nonnegative("dist", &dist)?;
        if !(units.collection >= 0.0 && units.transfer >= 0.0 && units.distribution >= 0.0) {
            return Err(Error::InvalidData("negative unit cost".into()));
        }
        Ok(QuadCost::Factorized {
            n,
            flow,
            dist,
            units,
        })
    }

    pub fn n(&self) -> usize {
        match self {
            QuadCost::Dense { n, .. } | QuadCost::Factorized { n, .. } => *n,
        }
    }

    /// `q_ikjm`; requests with `i > j` are answered as `q_jmik`, `i == j` is zero.
    #[inline]
    pub fn get(&self, i: usize, k: usize, j: usize, m: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        if i > j {
            return self.get(j, m, i, k);
        }
        match self {
            QuadCost::Dense { n, values } => values[(pair_index(*n, i, j) * n + k) * n + m],
            QuadCost::Factorized {
                n,
                flow,
                dist,
                units,
            } => {
                let n = *n;
                units.transfer
                    * (flow[i * n + j] * dist[k * n + m] + flow[j * n + i] * dist[m * n + k])
            }
        }
    }

    /// True when every `q_ikjm` of the pair is zero.
    pub fn pair_is_zero(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        match self {
            QuadCost::Dense { n, values } => {
                let base = pair_index(*n, i, j) * n * n;
                values[base..base + n * n].iter().all(|&v| v == 0.0)
            }
            QuadCost::Factorized { n, flow, units, .. } => {
                units.transfer == 0.0 || (flow[i * n + j] == 0.0 && flow[j * n + i] == 0.0)
            }
        }
    }

    /// Writes the `n x n` cost block of pair `i < j` (rows `k`, columns `m`).
    pub fn pair_block(&self, i: usize, j: usize, out: &mut Vec<f64>) {
        debug_assert!(i < j);
        out.clear();
        match self {
            QuadCost::Dense { n, values } => {
                let base = pair_index(*n, i, j) * n * n;
                out.extend_from_slice(&values[base..base + n * n]);
            }
            QuadCost::Factorized {
                n,
                flow,
                dist,
                units,
            } => {
                let n = *n;
                let a = units.transfer * flow[i * n + j];
                let b = units.transfer * flow[j * n + i];
                for k in 0..n {
                    for m in 0..n {
                        out.push(a * dist[k * n + m] + b * dist[m * n + k]);
                    }
                }
            }
        }
    }

    /// For factorized costs over a symmetric distance matrix every pair block
    /// is `scale * dist`. Returns that scale, or `None` when the shortcut does
    /// not apply.
    pub fn pair_scale(&self, i: usize, j: usize) -> Option<f64> {
        match self {
            QuadCost::Factorized {
                n,
                flow,
                dist,
                units,
            } if is_symmetric(*n, dist) => {
                let n = *n;
                Some(units.transfer * (flow[i * n + j] + flow[j * n + i]))
            }
            _ => None,
        }
    }

    /// The common matrix scaled by [`pair_scale`](Self::pair_scale).
    pub fn base_matrix(&self) -> Option<&[f64]> {
        match self {
            QuadCost::Factorized { n, dist, .. } if is_symmetric(*n, dist) => Some(dist),
            _ => None,
        }
    }

    /// Materializes the tensor. Fails above [`DENSE_MAX_NODES`].
    pub fn to_dense(&self) -> Result<QuadCost> {
        let n = self.n();
        let mut values = Vec::with_capacity(num_pairs(n) * n * n);
        let mut block = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                self.pair_block(i, j, &mut block);
                values.extend_from_slice(&block);
            }
        }
        QuadCost::dense(n, values)
    }

    pub fn is_zero(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.pair_is_zero(i, j)))
    }
}

fn is_symmetric(n: usize, m: &[f64]) -> bool {
    (0..n).all(|i| (i + 1..n).all(|j| m[i * n + j] == m[j * n + i]))
}

fn check_len(what: &'static str, v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

fn check_nonnegative(what: &'static str, v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidData(alloc::format!("{what} contains {x}")));
    }
    Ok(())
}

/// Cost fields derived from flows and distances.
#[derive(Debug, Clone, PartialEq)]
pub struct ApCosts {
    pub linear: Vec<f64>,
    pub quad: QuadCost,
    /// `O_i = sum_j w_ij`
    pub outflow: Vec<f64>,
    /// `D_i = sum_j w_ji`
    pub inflow: Vec<f64>,
}

/// Hub-location cost construction: `c_ik = (chi O_i + delta D_i) dist_ik` and
/// `q_ikjm = tau w_ij dist_km` (plus the reverse flow `w_ji` for the pair).
pub fn build_ap_costs(n: usize, dist: &[f64], flow: &[f64], units: CostUnits) -> Result<ApCosts> {
    check_len("dist", dist, n * n)?;
    check_len("flow", flow, n * n)?;
    let mut outflow = vec![0.0; n];
    let mut inflow = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            outflow[i] += flow[i * n + j];
            inflow[j] += flow[i * n + j];
        }
    }
    let mut linear = vec![0.0; n * n];
    for i in 0..n {
        let w = units.collection * outflow[i] + units.distribution * inflow[i];
        for k in 0..n {
            linear[i * n + k] = w * dist[i * n + k];
        }
    }
    let quad = QuadCost::factorized(n, flow.to_vec(), dist.to_vec(), units)?;
    Ok(ApCosts {
        linear,
        quad,
        outflow,
        inflow,
    })
}

/// Euclidean distance matrix from planar coordinates.
pub fn euclidean_distances(coords: &[(f64, f64)]) -> Vec<f64> {
    let n = coords.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let dx = coords[i].0 - coords[j].0;
            let dy = coords[i].1 - coords[j].1;
            dist[i * n + j] = libm::sqrt(dx * dx + dy * dy);
        }
    }
    dist
}

/// Immutable problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    p: usize,
    variant: Variant,
    setup: Vec<f64>,
    capacity: Vec<f64>,
    demand: Vec<f64>,
    linear: Vec<f64>,
    quad: QuadCost,
    total_demand: f64,
}

impl Instance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        p: usize,
        variant: Variant,
        setup: Vec<f64>,
        capacity: Vec<f64>,
        demand: Vec<f64>,
        linear: Vec<f64>,
        quad: QuadCost,
    ) -> Result<Instance> {
        if n == 0 {
            return Err(Error::InvalidData("instance has no nodes".into()));
        }
        if p == 0 {
            return Err(Error::InvalidCardinality { candidates: n, p });
        }
        check_len("setup", &setup, n)?;
        check_len("capacity", &capacity, n)?;
        check_len("demand", &demand, n)?;
        check_len("linear", &linear, n * n)?;
        if quad.n() != n {
            return Err(Error::DimensionMismatch {
                what: "interaction cost",
                expected: n,
                got: quad.n(),
            });
        }
        check_nonnegative("setup", &setup)?;
        check_nonnegative("capacity", &capacity)?;
        check_nonnegative("demand", &demand)?;
        check_nonnegative("linear", &linear)?;
        let total_demand = demand.iter().sum();
        Ok(Instance {
            n,
            p: p.min(n),
            variant,
            setup,
            capacity,
            demand,
            linear,
            quad,
            total_demand,
        })
    }

    /// Hub-location instance from flows and distances. Demands are the node
    /// outflows `O_i`.
    pub fn from_flows(
        n: usize,
        p: usize,
        variant: Variant,
        setup: Vec<f64>,
        capacity: Vec<f64>,
        dist: &[f64],
        flow: &[f64],
        units: CostUnits,
    ) -> Result<Instance> {
        let costs = build_ap_costs(n, dist, flow, units)?;
        Instance::new(
            n,
            p,
            variant,
            setup,
            capacity,
            costs.outflow,
            costs.linear,
            costs.quad,
        )
    }

    /// Reconfigures the instance as one of the four hub location variants.
    /// Setup costs are zeroed for the p-median variants; `p` is only kept
    /// where the variant has a cardinality bound.
    pub fn with_variant(&self, kind: VariantKind, p: usize) -> Result<Instance> {
        let variant = kind.variant();
        let setup = if kind.has_setup_costs() {
            self.setup.clone()
        } else {
            vec![0.0; self.n]
        };
        let p = if variant.cardinality { p } else { self.n };
        Instance::new(
            self.n,
            p,
            variant,
            setup,
            self.capacity.clone(),
            self.demand.clone(),
            self.linear.clone(),
            self.quad.clone(),
        )
    }

    /// Same data with the interaction tensor materialized.
    pub fn to_dense(&self) -> Result<Instance> {
        let mut inst = self.clone();
        inst.quad = self.quad.to_dense()?;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective cardinality bound (`n` for cardinality-free variants).
    pub fn p(&self) -> usize {
        if self.variant.cardinality {
            self.p
        } else {
            self.n
        }
    }

    /// The stored `p`, regardless of the variant.
    pub fn raw_p(&self) -> usize {
        self.p
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn setup(&self, k: usize) -> f64 {
        self.setup[k]
    }

    pub fn setups(&self) -> &[f64] {
        &self.setup
    }

    pub fn demand(&self, i: usize) -> f64 {
        self.demand[i]
    }

    pub fn demands(&self) -> &[f64] {
        &self.demand
    }

    pub fn total_demand(&self) -> f64 {
        self.total_demand
    }

    /// Stored capacity `b_k`, regardless of the variant.
    pub fn raw_capacity(&self, k: usize) -> f64 {
        self.capacity[k]
    }

    pub fn raw_capacities(&self) -> &[f64] {
        &self.capacity
    }

    /// Effective capacity. Uncapacitated variants get `sum_i d_i + d_k`,
    /// which never binds.
    pub fn capacity(&self, k: usize) -> f64 {
        if self.variant.capacitated {
            self.capacity[k]
        } else {
            self.total_demand + self.demand[k]
        }
    }

    /// `b_k - d_k`: capacity left for other nodes once `k` serves itself.
    pub fn residual_capacity(&self, k: usize) -> f64 {
        self.capacity(k) - self.demand[k]
    }

    pub fn can_open(&self, k: usize) -> bool {
        self.residual_capacity(k) >= 0.0
    }

    #[inline]
    pub fn linear(&self, i: usize, k: usize) -> f64 {
        self.linear[i * self.n + k]
    }

    pub fn linear_costs(&self) -> &[f64] {
        &self.linear
    }

    pub fn quad(&self) -> &QuadCost {
        &self.quad
    }

    #[inline]
    pub fn q(&self, i: usize, k: usize, j: usize, m: usize) -> f64 {
        self.quad.get(i, k, j, m)
    }

    /// Checks the solution invariants and returns the cost breakdown.
    pub fn evaluate(&self, open: &[usize], assign: &[usize]) -> Result<CostBreakdown> {
        self.check(open, assign)
            .map_err(Error::InfeasibleSolution)?;
        Ok(self.cost_unchecked(open, assign))
    }

    /// Evaluation without feasibility checks.
    pub fn cost_unchecked(&self, open: &[usize], assign: &[usize]) -> CostBreakdown {
        let n = self.n;
        let setup: f64 = open.iter().map(|&k| self.setup[k]).sum();
        let linear: f64 = (0..n).map(|i| self.linear(i, assign[i])).sum();
        let quadratic = self.quadratic_cost(assign);
        CostBreakdown::new(setup, linear, quadratic)
    }

    pub fn quadratic_cost(&self, assign: &[usize]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        match &self.quad {
            QuadCost::Factorized {
                flow, dist, units, ..
            } => {
                for i in 0..n {
                    let ki = assign[i];
                    let mut row = 0.0;
                    for j in i + 1..n {
                        let kj = assign[j];
                        row += flow[i * n + j] * dist[ki * n + kj]
                            + flow[j * n + i] * dist[kj * n + ki];
                    }
                    total += row;
                }
                total * units.transfer
            }
            QuadCost::Dense { values, .. } => {
                let mut pair = 0;
                for i in 0..n {
                    let ki = assign[i];
                    for j in i + 1..n {
                        total += values[(pair * n + ki) * n + assign[j]];
                        pair += 1;
                    }
                }
                total
            }
        }
    }

    /// Change of the linear plus quadratic cost when node `i` moves to
    /// facility `to`, all other assignments fixed. Setup costs are untouched.
    pub fn reassign_delta(&self, assign: &[usize], i: usize, to: usize) -> f64 {
        let from = assign[i];
        if from == to {
            return 0.0;
        }
        let mut delta = self.linear(i, to) - self.linear(i, from);
        for j in 0..self.n {
            if j != i {
                let kj = assign[j];
                delta += self.q(i, to, j, kj) - self.q(i, from, j, kj);
            }
        }
        delta
    }

    fn check(&self, open: &[usize], assign: &[usize]) -> core::result::Result<(), Violation> {
        let n = self.n;
        if assign.len() != n {
            return Err(Violation::Length {
                expected: n,
                got: assign.len(),
            });
        }
        let mut is_open = vec![false; n];
        for &k in open {
            if k >= n {
                return Err(Violation::OutOfRange(k));
            }
            is_open[k] = true;
        }
        let count = is_open.iter().filter(|&&o| o).count();
        if count > self.p() {
            return Err(Violation::TooManyFacilities {
                open: count,
                p: self.p(),
            });
        }
        for k in 0..n {
            if is_open[k] {
                if assign[k] != k {
                    return Err(Violation::HubNotSelfAssigned {
                        facility: k,
                        assigned: assign[k],
                    });
                }
                if !self.can_open(k) {
                    return Err(Violation::NotOpenable { facility: k });
                }
            }
        }
        let mut load = vec![0.0; n];
        for (i, &k) in assign.iter().enumerate() {
            if k >= n {
                return Err(Violation::OutOfRange(k));
            }
            if !is_open[k] {
                return Err(Violation::AssignedToClosed {
                    node: i,
                    facility: k,
                });
            }
            if i != k {
                load[k] += self.demand[i];
            }
        }
        if self.variant.capacitated {
            for k in 0..n {
                if is_open[k]
                    && load[k] > self.residual_capacity(k) + 1e-9 * (1.0 + self.capacity[k])
                {
                    return Err(Violation::CapacityExceeded {
                        facility: k,
                        load: load[k] + self.demand[k],
                        capacity: self.capacity[k],
                    });
                }
            }
        }
        Ok(())
    }
}

/// Setup, linear and quadratic parts of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub setup: f64,
    pub linear: f64,
    pub quadratic: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(setup: f64, linear: f64, quadratic: f64) -> Self {
        CostBreakdown {
            setup,
            linear,
            quadratic,
            total: setup + linear + quadratic,
        }
    }
}

/// A feasible location-allocation decision with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Open facilities, ascending.
    pub open: Vec<usize>,
    /// `assign[i]` is the facility serving node `i`.
    pub assign: Vec<usize>,
    pub cost: CostBreakdown,
}

impl Solution {
    /// Builds a solution from an assignment; the open set is the image of
    /// the assignment.
    pub fn from_assignment(instance: &Instance, assign: Vec<usize>) -> Result<Solution> {
        let n = instance.n();
        let mut is_open = vec![false; n];
        for &k in &assign {
            if k >= n {
                return Err(Error::InfeasibleSolution(Violation::OutOfRange(k)));
            }
            is_open[k] = true;
        }
        let open: Vec<usize> = (0..n).filter(|&k| is_open[k]).collect();
        Solution::new(instance, open, assign)
    }

    pub fn new(instance: &Instance, mut open: Vec<usize>, assign: Vec<usize>) -> Result<Solution> {
        open.sort_unstable();
        open.dedup();
        let cost = instance.evaluate(&open, &assign)?;
        Ok(Solution { open, assign, cost })
    }

    pub fn total(&self) -> f64 {
        self.cost.total
    }

    /// `z` as a dense `n x n` 0/1 matrix.
    pub fn to_z(&self) -> Vec<f64> {
        let n = self.assign.len();
        let mut z = vec![0.0; n * n];
        for (i, &k) in self.assign.iter().enumerate() {
            z[i * n + k] = 1.0;
        }
        z
    }
}
