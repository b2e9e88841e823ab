mod common;

use common::{for_each_feasible, random_dense, TestClock};
use proptest::prelude::*;
use qploc_core::clock::Deadline;
use qploc_core::instance::{QuadCost, VariantKind};
use qploc_core::matheur::{
    constructive, gap_intensify, greedy, pipeline, shift_swap_vns, solve_gap, vnd, vnd_traced,
    MilpLimits,
};
use qploc_core::oracle::enumerate_optimal;
use qploc_core::{Instance, Solution, SolverParams};

fn limits(clock: &TestClock) -> MilpLimits<'_> {
    MilpLimits::from_params(&SolverParams::default(), Deadline::unlimited(clock))
}

fn without_interaction(inst: &Instance) -> Instance {
    Instance::new(
        inst.n(),
        inst.raw_p(),
        inst.variant(),
        inst.setups().to_vec(),
        inst.raw_capacities().to_vec(),
        inst.demands().to_vec(),
        inst.linear_costs().to_vec(),
        QuadCost::zero_dense(inst.n()).unwrap(),
    )
    .unwrap()
}

fn all_nodes(inst: &Instance) -> Vec<usize> {
    (0..inst.n()).collect()
}

#[test]
fn single_facility_support() {
    let inst = random_dense(5, 2, VariantKind::Uhlpsa, 2);
    let clock = TestClock::new();
    let sol = constructive(&inst, &[3], &limits(&clock)).unwrap();
    assert_eq!(sol.open, vec![3]);
    assert!(sol.assign.iter().all(|&k| k == 3));
}

#[test]
fn zero_interaction_constructive_is_optimal() {
    for (s, kind) in VariantKind::ALL.iter().enumerate() {
        let inst = without_interaction(&random_dense(6, 2, *kind, 20 + s as u64));
        let clock = TestClock::new();
        let sol = constructive(&inst, &all_nodes(&inst), &limits(&clock)).unwrap();
        let opt = enumerate_optimal(&inst).unwrap().value;
        assert!(
            (sol.total() - opt).abs() <= 1e-9 * opt.max(1.0),
            "{}: {} vs {opt}",
            kind.name(),
            sol.total()
        );
    }
}

/// The constructive MILP over all facilities minimizes setup plus linear
/// cost; compare with enumeration of that objective.
#[test]
fn constructive_matches_linear_enumeration() {
    for seed in 0..6u64 {
        let kind = VariantKind::ALL[seed as usize % 4];
        let inst = random_dense(6, 1 + seed as usize % 3, kind, 60 + seed);
        let clock = TestClock::new();
        let Ok(sol) = constructive(&inst, &all_nodes(&inst), &limits(&clock)) else {
            assert!(enumerate_optimal(&inst).is_err());
            continue;
        };
        let lin = |s: &Solution| s.cost.setup + s.cost.linear;
        let mut best = f64::INFINITY;
        for_each_feasible(&inst, &mut |a| {
            let mut open = a.to_vec();
            open.sort_unstable();
            open.dedup();
            let c = inst.evaluate(&open, a).unwrap();
            best = best.min(c.setup + c.linear);
        });
        assert!(
            (lin(&sol) - best).abs() <= 1e-9 * best.max(1.0),
            "{} vs {best}",
            lin(&sol)
        );
    }
}

#[test]
fn vnd_never_worsens_and_stays_feasible() {
    for seed in 0..10u64 {
        let kind = VariantKind::ALL[seed as usize % 4];
        let inst = random_dense(7, 3, kind, 80 + seed);
        let Some(start) = greedy(&inst, &all_nodes(&inst)) else {
            continue;
        };
        let out = vnd_traced(&inst, &start, None);
        assert!(inst
            .evaluate(&out.solution.open, &out.solution.assign)
            .is_ok());
        assert_eq!(out.trace[0], start.total());
        for w in out.trace.windows(2) {
            assert!(w[1] < w[0], "trace not decreasing: {:?}", out.trace);
        }
        assert!(
            (out.trace.last().unwrap() - out.solution.total()).abs()
                <= 1e-7 * out.solution.total().max(1.0)
        );
        // a local optimum is a fixed point
        let again = vnd_traced(&inst, &out.solution, None);
        assert_eq!(again.trace.len(), 1);
        assert_eq!(again.solution.assign, out.solution.assign);
    }
}

#[test]
fn vnd_from_every_start_is_above_optimum() {
    let inst = random_dense(5, 2, VariantKind::Cphmpsa, 11);
    let opt = enumerate_optimal(&inst).unwrap().value;
    let (mut hits, mut total) = (0, 0);
    for_each_feasible(&inst, &mut |a| {
        let start = Solution::from_assignment(&inst, a.to_vec()).unwrap();
        let v = vnd(&inst, &start).total();
        assert!(v >= opt - 1e-9 * opt);
        total += 1;
        if v <= opt + 1e-9 * opt {
            hits += 1;
        }
    });
    println!("vnd reached the optimum from {hits} of {total} starts");
    assert!(hits > 0);
}

#[test]
fn gap_single_facility_is_identity() {
    let inst = random_dense(5, 2, VariantKind::Uphmpsa, 5);
    let clock = TestClock::new();
    let sol = solve_gap(&inst, &[2], &limits(&clock)).unwrap();
    assert!(sol.assign.iter().all(|&k| k == 2));
}

/// GAP optimum over a fixed open set against enumeration of the assignment.
#[test]
fn gap_matches_enumeration() {
    for seed in 0..5u64 {
        let inst = random_dense(7, 3, VariantKind::Cphmpsa, 120 + seed);
        let open = vec![0, 3, 5];
        let clock = TestClock::new();
        let Ok(sol) = solve_gap(&inst, &open, &limits(&clock)) else {
            continue;
        };
        let mut best = f64::INFINITY;
        let others: Vec<usize> = (0..7).filter(|i| !open.contains(i)).collect();
        let mut a = vec![0usize; 7];
        for &k in &open {
            a[k] = k;
        }
        for code in 0..3usize.pow(others.len() as u32) {
            let mut c = code;
            for &i in &others {
                a[i] = open[c % 3];
                c /= 3;
            }
            if let Ok(v) = inst.evaluate(&open, &a) {
                best = best.min(v.linear);
            }
        }
        assert!((sol.cost.linear - best).abs() <= 1e-9 * best.max(1.0));
    }
}

#[test]
fn zero_interaction_gap_is_optimal_for_fixed_set() {
    let inst = without_interaction(&random_dense(6, 2, VariantKind::Chlpsa, 31));
    let clock = TestClock::new();
    let start = greedy(&inst, &all_nodes(&inst)).unwrap();
    let g = gap_intensify(&inst, &start, &limits(&clock)).unwrap();
    let fixed = solve_gap(&inst, &start.open, &limits(&clock)).unwrap();
    assert!(g.total() <= fixed.total() + 1e-9);
    assert!(g.total() <= start.total());
}

#[test]
fn shift_swap_keeps_open_set() {
    let inst = random_dense(7, 3, VariantKind::Cphmpsa, 7);
    let start = greedy(&inst, &all_nodes(&inst)).unwrap();
    let out = shift_swap_vns(&inst, &start, None);
    assert_eq!(out.solution.open, start.open);
    assert!(out.solution.total() <= start.total());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn pipeline_is_feasible_and_monotone(seed in 0u64..10_000, kind_ix in 0usize..4, n in 5usize..9, p in 1usize..4) {
        let inst = random_dense(n, p, VariantKind::ALL[kind_ix], seed);
        let clock = TestClock::new();
        let support: Vec<usize> = (0..n).filter(|k| (seed >> k) & 1 == 1).collect();
        let run = pipeline(&inst, &support, &all_nodes(&inst), &SolverParams::default(), &Deadline::unlimited(&clock));
        match run {
            Some(r) => {
                prop_assert!(inst.evaluate(&r.solution.open, &r.solution.assign).is_ok());
                prop_assert!(r.solution.total() <= r.constructive + 1e-9);
                for w in r.trace.windows(2) {
                    prop_assert!(w[1] < w[0]);
                }
            }
            None => prop_assert!(enumerate_optimal(&inst).is_err()),
        }
    }
}
