//! Seeded generator for large flow instances with low/medium/high level nodes.
//!
//! Node classes: 2% high level (total outflow in `[100, 1000]`), 38% medium
//! level (`[10, 100]`) and the remainder low level (`[1, 10]`). Class counts
//! are `round(0.02 n)` and `round(0.38 n)`; low level nodes take the rest.
//!
//! Setup costs and capacities are defined here, not taken from any external
//! generator, so optimal values are self-benchmarks:
//!
//! * Coordinates are uniform on `[0, 100]^2`; distances are Euclidean.
//! * Each node's outflow is split over the other nodes with uniform random
//!   weights.
//! * `f_k = s * L * sqrt(O_k / mean O) * u`, where `L = (sum O) * mean dist / n`,
//!   `u` uniform on `[0.8, 1.2]` and `s = 1` (loose) or `s = 2` (tight).
//! * `b_k = r * max(D / h, O_k)` with `h = max(2, round(sqrt n))` expected
//!   open facilities, `D` the total demand and `r = 1.5` (loose) or
//!   `r = 1.1` (tight).

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CostUnits, Instance, QuadCost, Variant, VariantKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tightness {
    Loose,
    Tight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    Low,
    Medium,
    High,
}

impl NodeClass {
    pub fn outflow_range(self) -> (f64, f64) {
        match self {
            NodeClass::Low => (1.0, 10.0),
            NodeClass::Medium => (10.0, 100.0),
            NodeClass::High => (100.0, 1000.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetIConfig {
    pub n: usize,
    pub seed: u64,
    pub setup: Tightness,
    pub capacity: Tightness,
    pub units: CostUnits,
}

impl SetIConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SetIConfig {
            n,
            seed,
            setup: Tightness::Loose,
            capacity: Tightness::Tight,
            units: CostUnits::default(),
        }
    }
}

/// Number of high, medium and low level nodes. Nodes are numbered in that
/// order.
pub fn class_counts(n: usize) -> (usize, usize, usize) {
    let high = libm::round(0.02 * n as f64) as usize;
    let medium = libm::round(0.38 * n as f64) as usize;
    (high, medium, n - high - medium)
}

/// Generates a capacitated, cardinality-free instance; use
/// [`Instance::with_variant`] to select another hub location variant.
pub fn generate_set1(config: &SetIConfig) -> Result<(Instance, Vec<NodeClass>)> {
    let n = config.n;
    if n < 10 {
        return Err(Error::InvalidData(alloc::format!(
            "generator needs n >= 10, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (high, medium, _) = class_counts(n);
    let classes: Vec<NodeClass> = (0..n)
        .map(|i| {
            if i < high {
                NodeClass::High
            } else if i < high + medium {
                NodeClass::Medium
            } else {
                NodeClass::Low
            }
        })
        .collect();

    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let dist = super::euclidean_distances(&coords);

    let mut flow = vec![0.0; n * n];
    let mut weights = vec![0.0; n];
    for (i, class) in classes.iter().enumerate() {
        let (lo, hi) = class.outflow_range();
        // keep a margin so the floating point row sum stays inside [lo, hi]
        let total = rng.gen_range(lo * (1.0 + 1e-9)..hi * (1.0 - 1e-9));
        let mut sum = 0.0;
        for (j, w) in weights.iter_mut().enumerate() {
            *w = if j == i { 0.0 } else { rng.gen_range(0.0..1.0) };
            sum += *w;
        }
        for j in 0..n {
            flow[i * n + j] = total * weights[j] / sum;
        }
    }

    let outflow: Vec<f64> = (0..n)
        .map(|i| flow[i * n..(i + 1) * n].iter().sum())
        .collect();
    let total_flow: f64 = outflow.iter().sum();
    let mean_outflow = total_flow / n as f64;
    let mean_dist = dist.iter().sum::<f64>() / (n * n) as f64;
    let level = total_flow * mean_dist / n as f64;
    let setup_scale = match config.setup {
        Tightness::Loose => 1.0,
        Tightness::Tight => 2.0,
    };
    let setup: Vec<f64> = outflow
        .iter()
        .map(|&o| setup_scale * level * libm::sqrt(o / mean_outflow) * rng.gen_range(0.8..1.2))
        .collect();

    let expected_open = core::cmp::max(2, libm::round(libm::sqrt(n as f64)) as usize) as f64;
    let cap_scale = match config.capacity {
        Tightness::Loose => 1.5,
        Tightness::Tight => 1.1,
    };
    let capacity: Vec<f64> = outflow
        .iter()
        .map(|&o| cap_scale * (total_flow / expected_open).max(o))
        .collect();

    let variant = Variant {
        capacitated: true,
        cardinality: false,
    };
    let inst = Instance::from_flows(n, n, variant, setup, capacity, &dist, &flow, config.units)?;
    Ok((inst, classes))
}

/// Small instance with an explicit random interaction tensor, used for
/// exhaustive cross-checks. Demands are integers in `[1, 10]`, capacities
/// leave room for a few facilities, costs are small integers.
pub fn generate_dense(n: usize, p: usize, kind: VariantKind, seed: u64) -> Result<Instance> {
    if n > super::DENSE_MAX_NODES {
        return Err(Error::SizeGuard {
            what: "dense nodes",
            got: n,
            limit: super::DENSE_MAX_NODES,
        });
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let demand: Vec<f64> = (0..n).map(|_| r.gen_range(1..=10) as f64).collect();
    let total: f64 = demand.iter().sum();
    let setup: Vec<f64> = (0..n)
        .map(|_| {
            if kind.has_setup_costs() {
                r.gen_range(20..=80) as f64
            } else {
                0.0
            }
        })
        .collect();
    let capacity: Vec<f64> = (0..n)
        .map(|k| demand[k] + r.gen_range(0.35..0.8) * total)
        .collect();
    let linear: Vec<f64> = (0..n * n).map(|_| r.gen_range(0..=20) as f64).collect();
    let q: Vec<f64> = (0..super::num_pairs(n) * n * n)
        .map(|_| r.gen_range(0..=15) as f64)
        .collect();
    Instance::new(
        n,
        p,
        kind.variant(),
        setup,
        capacity,
        demand,
        linear,
        QuadCost::dense(n, q)?,
    )
}
