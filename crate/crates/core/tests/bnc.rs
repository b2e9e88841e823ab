#![allow(clippy::needless_range_loop)]
mod common;

use common::{random_dense, solve};
use qploc_core::instance::VariantKind;
use qploc_core::oracle::enumerate_optimal;
use qploc_core::{Instance, SolverParams};

fn settings() -> Vec<(&'static str, SolverParams)> {
    let base = SolverParams::default();
    vec![
        ("default", base.clone()),
        ("converged root", SolverParams::converged_root()),
        (
            "no reductions",
            SolverParams {
                use_elimination: false,
                use_partial_enumeration: false,
                ..base.clone()
            },
        ),
        (
            "no heuristic",
            SolverParams {
                use_matheuristic: false,
                eps_cut: 1e-6,
                ..base
            },
        ),
    ]
}

#[test]
fn matches_oracle() {
    let mut count = 0;
    for seed in 0..24u64 {
        let kind = VariantKind::ALL[seed as usize % 4];
        let n = 5 + (seed as usize % 4);
        let p = 1 + (seed as usize % 3);
        let inst = random_dense(n, p, kind, 500 + seed);
        let Ok(opt) = enumerate_optimal(&inst) else {
            continue;
        };
        for (name, params) in settings() {
            // a fully converged root takes hundreds of rounds at n = 8
            if n == 8 && name != "default" && name != "no reductions" {
                continue;
            }
            let rep = solve(&inst, &params);
            let v = rep.solution.total();
            assert!(
                (v - opt.value).abs() <= 1e-6 * opt.value.abs().max(1.0),
                "seed {seed} {} [{name}]: {v} vs {}",
                kind.name(),
                opt.value
            );
            assert!(rep.stats.lb <= v + 1e-6 * v.abs().max(1.0));
        }
        count += 1;
    }
    assert!(count > 16);
}

#[test]
fn integral_root_needs_no_branching() {
    // only facility 0 can open, so the root LP is integral
    let base = random_dense(5, 2, VariantKind::Chlpsa, 3);
    let mut caps = base.raw_capacities().to_vec();
    for k in 1..5 {
        caps[k] = base.demand(k) * 0.5;
    }
    caps[0] = base.total_demand();
    let inst = Instance::new(
        5,
        2,
        base.variant(),
        base.setups().to_vec(),
        caps,
        base.demands().to_vec(),
        base.linear_costs().to_vec(),
        base.quad().clone(),
    )
    .unwrap();
    let rep = solve(
        &inst,
        &SolverParams {
            use_matheuristic: false,
            ..SolverParams::converged_root()
        },
    );
    let opt = enumerate_optimal(&inst).unwrap();
    assert!((rep.solution.total() - opt.value).abs() <= 1e-6 * opt.value);
    assert_eq!(rep.solution.open, vec![0]);
    assert_eq!(rep.stats.bb_nodes, 0);
}

#[test]
fn reported_cost_matches_evaluation() {
    for kind in VariantKind::ALL {
        let inst = random_dense(6, 2, kind, 77);
        let rep = solve(&inst, &SolverParams::default());
        let eval = inst
            .evaluate(&rep.solution.open, &rep.solution.assign)
            .unwrap();
        assert_eq!(eval.total, rep.solution.total());
        assert!(rep.stats.lb <= rep.stats.ub + 1e-9);
        assert!(rep.stats.fixed_plants >= 0.0 && rep.stats.fixed_plants <= 100.0);
    }
}

#[test]
fn node_limit_returns_incumbent() {
    let inst = random_dense(8, 3, VariantKind::Cphmpsa, 523);
    let params = SolverParams {
        node_limit: 3,
        ..SolverParams::default()
    };
    let rep = solve(&inst, &params);
    assert!(inst
        .evaluate(&rep.solution.open, &rep.solution.assign)
        .is_ok());
    assert!(rep.stats.bb_nodes <= 2);
}
