#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use qploc_core::instance::{Instance, VariantKind};
use qploc_core::lp::{LpModel, ObjSense, RowSense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance with an explicit interaction tensor.
pub fn random_dense(n: usize, p: usize, kind: VariantKind, seed: u64) -> Instance {
    qploc_core::instance::generate_dense(n, p, kind, seed).unwrap()
}

/// Random fractional point: rows sum to one and respect `z_ik <= z_kk`
/// loosely (not needed by separation).
pub fn random_stochastic(n: usize, r: &mut ChaCha8Rng, sparsity: f64) -> Vec<f64> {
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        let mut s = 0.0;
        for k in 0..n {
            if r.gen_bool(sparsity) {
                let v = r.gen_range(0.0..1.0);
                z[i * n + k] = v;
                s += v;
            }
        }
        if s == 0.0 {
            z[i * n + r.gen_range(0..n)] = 1.0;
            s = 1.0;
        }
        for k in 0..n {
            z[i * n + k] /= s;
        }
    }
    z
}

/// Transportation problem as an LP: rows for supplies then demands.
pub fn transport_lp(supply: &[f64], demand: &[f64], cost: &[f64]) -> LpModel {
    let (s, t) = (supply.len(), demand.len());
    let mut m = LpModel::new(ObjSense::Minimize);
    for c in cost {
        m.add_var(0.0, f64::INFINITY, *c);
    }
    for k in 0..s {
        m.add_row(
            (0..t).map(|j| (k * t + j, 1.0)).collect(),
            RowSense::Eq,
            supply[k],
        )
        .unwrap();
    }
    for j in 0..t {
        m.add_row(
            (0..s).map(|k| (k * t + j, 1.0)).collect(),
            RowSense::Eq,
            demand[j],
        )
        .unwrap();
    }
    m
}

/// Dual of a pair subproblem: max zbar_j . alpha + zbar_i . beta subject to
/// alpha_m + beta_k <= q_km. Variables: alpha (n) then beta (n).
pub fn dual_subproblem_lp(n: usize, zi: &[f64], zj: &[f64], cost: &[f64]) -> LpModel {
    let mut m = LpModel::new(ObjSense::Maximize);
    for v in zj {
        m.add_var(f64::NEG_INFINITY, f64::INFINITY, *v);
    }
    for v in zi {
        m.add_var(f64::NEG_INFINITY, f64::INFINITY, *v);
    }
    for k in 0..n {
        for mm in 0..n {
            m.add_row(
                vec![(mm, 1.0), (n + k, 1.0)],
                RowSense::Le,
                cost[k * n + mm],
            )
            .unwrap();
        }
    }
    m
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Every assignment `a` with `a(k) = k` for the image and `|H| <= p`,
/// capacities respected. Calls `f` with the assignment.
pub fn for_each_feasible(inst: &Instance, f: &mut dyn FnMut(&[usize])) {
    let n = inst.n();
    let mut a = vec![0usize; n];
    loop {
        let mut ok = true;
        let mut open = vec![false; n];
        for &k in &a {
            open[k] = true;
        }
        for k in 0..n {
            if open[k] && a[k] != k {
                ok = false;
            }
        }
        if ok
            && inst
                .evaluate(&(0..n).filter(|&k| open[k]).collect::<Vec<_>>(), &a)
                .is_ok()
        {
            f(&a);
        }
        let mut t = 0;
        loop {
            if t == n {
                return;
            }
            a[t] += 1;
            if a[t] < n {
                break;
            }
            a[t] = 0;
            t += 1;
        }
    }
}

/// Wall clock for tests.
pub struct TestClock(std::time::Instant);

impl TestClock {
    pub fn new() -> Self {
        TestClock(std::time::Instant::now())
    }
}

impl qploc_core::clock::Clock for TestClock {
    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Runs the full solver with `params` and no time limit.
pub fn solve(inst: &Instance, params: &qploc_core::SolverParams) -> qploc_core::bnc::SolveReport {
    let clock = TestClock::new();
    let ctx = qploc_core::benders::Context {
        deadline: qploc_core::clock::Deadline::new(&clock, params.time_limit),
        exec: &qploc_core::transport::Sequential,
    };
    qploc_core::bnc::solve(inst, params, &ctx).unwrap()
}
