//! Oracle equivalence suite: random small instances solved by
//! branch-and-cut and by enumeration.

use qploc_core::benders::Context;
use qploc_core::bnc;
use qploc_core::clock::{Clock, Deadline};
use qploc_core::instance::{generate_dense, VariantKind};
use qploc_core::oracle::enumerate_optimal;
use qploc_core::transport::Sequential;
use qploc_core::{Error, Instance, SolverParams};

use crate::runtime::WallClock;

/// One instance of the suite.
#[derive(Debug, Clone)]
pub struct Case {
    pub n: usize,
    pub p: usize,
    pub kind: VariantKind,
    pub seed: u64,
}

impl Case {
    pub fn instance(&self) -> Instance {
        generate_dense(self.n, self.p, self.kind, self.seed).expect("small dense instance")
    }
}

/// `count` feasible cases cycling through `n` in 5..=8, `p` in 1..=3 and the
/// four variants. Seeds whose instance is infeasible are skipped.
pub fn cases(count: usize, base_seed: u64) -> Vec<Case> {
    let mut out = Vec::with_capacity(count);
    let mut seed = base_seed;
    let mut i = 0usize;
    while out.len() < count {
        let case = Case {
            n: 5 + i % 4,
            p: 1 + (i / 4) % 3,
            kind: VariantKind::ALL[(i / 12 + i) % 4],
            seed,
        };
        seed += 1;
        if enumerate_optimal(&case.instance()).is_ok() {
            out.push(case);
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case: Case,
    pub oracle: f64,
    pub solver: f64,
    pub seconds: f64,
}

impl CaseResult {
    pub fn matches(&self) -> bool {
        (self.solver - self.oracle).abs() <= 1e-6 * self.oracle.abs().max(1.0)
    }
}

pub fn solve_case(case: &Case, params: &SolverParams) -> Result<CaseResult, Error> {
    let inst = case.instance();
    let oracle = enumerate_optimal(&inst)?.value;
    let clock = WallClock::new();
    let ctx = Context {
        deadline: Deadline::new(&clock, params.time_limit),
        exec: &Sequential,
    };
    let rep = bnc::solve(&inst, params, &ctx)?;
    Ok(CaseResult {
        case: case.clone(),
        oracle,
        solver: rep.solution.total(),
        seconds: clock.seconds(),
    })
}
