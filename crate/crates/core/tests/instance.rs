use qploc_core::instance::*;
use qploc_core::{Error, Instance, Violation};

fn naive_quadratic(inst: &Instance, assign: &[usize]) -> f64 {
    let n = inst.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i < j {
                for k in 0..n {
                    for m in 0..n {
                        if assign[i] == k && assign[j] == m {
                            s += inst.q(i, k, j, m);
                        }
                    }
                }
            }
        }
    }
    s
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*seed >> 11) as f64) / ((1u64 << 53) as f64)
}

fn random_dense(n: usize, seed: u64) -> Instance {
    let mut s = seed;
    let q: Vec<f64> = (0..num_pairs(n) * n * n)
        .map(|_| (lcg(&mut s) * 10.0).floor())
        .collect();
    let lin: Vec<f64> = (0..n * n).map(|_| (lcg(&mut s) * 20.0).floor()).collect();
    Instance::new(
        n,
        n,
        Variant::GENERAL,
        vec![5.0; n],
        vec![100.0; n],
        vec![1.0; n],
        lin,
        QuadCost::dense(n, q).unwrap(),
    )
    .unwrap()
}

#[test]
fn single_node() {
    let inst = Instance::new(
        1,
        1,
        Variant::GENERAL,
        vec![5.0],
        vec![1.0],
        vec![1.0],
        vec![0.0],
        QuadCost::zero_dense(1).unwrap(),
    )
    .unwrap();
    let cost = inst.evaluate(&[0], &[0]).unwrap();
    assert_eq!(cost.total, 5.0);
    assert_eq!(cost.quadratic, 0.0);
}

#[test]
fn zero_flow_gives_zero_quadratic() {
    let n = 4;
    let dist: Vec<f64> = (0..n * n).map(|x| (x % 7) as f64).collect();
    let inst = Instance::from_flows(
        n,
        n,
        Variant::GENERAL,
        vec![1.0; n],
        vec![10.0; n],
        &dist,
        &vec![0.0; n * n],
        CostUnits::default(),
    )
    .unwrap();
    for assign in [[0, 0, 0, 0], [0, 1, 2, 3], [1, 1, 3, 3]] {
        let open: Vec<usize> = (0..n).filter(|&k| assign.contains(&k)).collect();
        assert_eq!(inst.evaluate(&open, &assign).unwrap().quadratic, 0.0);
    }
}

#[test]
fn six_node_against_naive_loops() {
    let inst = random_dense(6, 11);
    let assigns = [
        [0, 0, 2, 2, 4, 4],
        [1, 1, 1, 3, 3, 3],
        [0, 1, 2, 3, 4, 5],
        [5, 5, 5, 5, 5, 5],
    ];
    for a in assigns {
        let open: Vec<usize> = (0..6).filter(|&k| a.contains(&k)).collect();
        let c = inst.evaluate(&open, &a).unwrap();
        let q = naive_quadratic(&inst, &a);
        assert!((c.quadratic - q).abs() < 1e-9);
        assert_eq!(c.total, c.setup + c.linear + c.quadratic);
    }
}

#[test]
fn ap_zero_distance() {
    let n = 3;
    let flow: Vec<f64> = (0..9).map(|x| x as f64).collect();
    let costs = build_ap_costs(n, &[0.0; 9], &flow, CostUnits::default()).unwrap();
    assert!(costs.linear.iter().all(|&c| c == 0.0));
    assert!(
        costs.quad.is_zero()
            || (0..n).all(|i| (0..n)
                .all(|k| (0..n).all(|j| (0..n).all(|m| costs.quad.get(i, k, j, m) == 0.0))))
    );
}

#[test]
fn ap_single_pair_formula() {
    let n = 4;
    let mut flow = vec![0.0; 16];
    flow[1] = 4.0; // w_01
    let mut dist = vec![0.0; 16];
    dist[2 * 4 + 3] = 10.0; // dist_23
    let costs = build_ap_costs(n, &dist, &flow, CostUnits::default()).unwrap();
    assert_eq!(costs.quad.get(0, 2, 1, 3), 30.0);
    assert_eq!(costs.quad.get(1, 3, 0, 2), 30.0);
}

#[test]
fn ap_row_and_column_sums() {
    let n = 5;
    let mut s = 3u64;
    let flow: Vec<f64> = (0..n * n).map(|_| (lcg(&mut s) * 50.0).floor()).collect();
    let dist: Vec<f64> = (0..n * n).map(|_| lcg(&mut s) * 9.0).collect();
    let costs = build_ap_costs(n, &dist, &flow, CostUnits::default()).unwrap();
    for i in 0..n {
        let mut o = 0.0;
        let mut d = 0.0;
        for j in 0..n {
            o += flow[i * n + j];
            d += flow[j * n + i];
        }
        assert_eq!(costs.outflow[i], o);
        assert_eq!(costs.inflow[i], d);
        for k in 0..n {
            let expect = (2.0 * o + 3.0 * d) * dist[i * n + k];
            assert!((costs.linear[i * n + k] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}

#[test]
fn dimension_mismatch() {
    let err = build_ap_costs(3, &[0.0; 8], &[0.0; 9], CostUnits::default()).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }));
}

#[test]
fn infeasible_solutions_are_rejected() {
    let inst = random_dense(4, 1);
    assert!(matches!(
        inst.evaluate(&[0], &[0, 0, 1, 0]),
        Err(Error::InfeasibleSolution(Violation::AssignedToClosed {
            node: 2,
            facility: 1
        }))
    ));
    assert!(matches!(
        inst.evaluate(&[0, 1], &[0, 0, 0, 0]),
        Err(Error::InfeasibleSolution(Violation::HubNotSelfAssigned {
            facility: 1,
            ..
        }))
    ));
    let capped = Instance::new(
        4,
        1,
        Variant::GENERAL,
        vec![0.0; 4],
        vec![2.0; 4],
        vec![1.0; 4],
        vec![0.0; 16],
        QuadCost::zero_dense(4).unwrap(),
    )
    .unwrap();
    assert!(matches!(
        capped.evaluate(&[0], &[0, 0, 0, 0]),
        Err(Error::InfeasibleSolution(Violation::CapacityExceeded {
            facility: 0,
            ..
        }))
    ));
    assert!(matches!(
        capped.evaluate(&[0, 2], &[0, 0, 2, 2]),
        Err(Error::InfeasibleSolution(Violation::TooManyFacilities {
            open: 2,
            p: 1
        }))
    ));
}

#[test]
fn uncapacitated_equals_loose_capacitated() {
    let base = random_dense(5, 9);
    let unc = base.with_variant(VariantKind::Uhlpsa, 5).unwrap();
    let caps: Vec<f64> = (0..5)
        .map(|k| base.total_demand() + base.demand(k))
        .collect();
    let cap = Instance::new(
        5,
        5,
        Variant {
            capacitated: true,
            cardinality: false,
        },
        base.setups().to_vec(),
        caps,
        base.demands().to_vec(),
        base.linear_costs().to_vec(),
        base.quad().clone(),
    )
    .unwrap();
    let a = [0, 0, 0, 0, 0];
    assert_eq!(
        unc.evaluate(&[0], &a).unwrap(),
        cap.evaluate(&[0], &a).unwrap()
    );
    for k in 0..5 {
        assert_eq!(unc.capacity(k), cap.capacity(k));
    }
}

#[test]
fn dense_guard() {
    assert!(matches!(
        QuadCost::zero_dense(DENSE_MAX_NODES + 1),
        Err(Error::SizeGuard { .. })
    ));
}

#[test]
fn symmetric_access() {
    let inst = random_dense(5, 4);
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                for m in 0..5 {
                    assert_eq!(inst.q(i, k, j, m), inst.q(j, m, i, k));
                }
            }
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn reassignment_delta_is_exact(seed in 0u64..1000, node in 0usize..6, to in 0usize..6) {
            let inst = random_dense(6, seed);
            // all nodes open, then move `node` (not a hub any more) to `to`
            let mut assign: Vec<usize> = (0..6).map(|i| if i % 2 == 0 { i } else { i - 1 }).collect();
            let hubs = [0usize, 2, 4];
            let node = if hubs.contains(&node) { node + 1 } else { node };
            let to = hubs[to % 3];
            let before = inst.cost_unchecked(&hubs, &assign);
            let delta = inst.reassign_delta(&assign, node, to);
            assign[node] = to;
            let after = inst.cost_unchecked(&hubs, &assign);
            prop_assert!((after.total - before.total - delta).abs() < 1e-9);
        }
    }
}

#[test]
fn class_counts_for_100() {
    assert_eq!(class_counts(100), (2, 38, 60));
    let (_, classes) = generate_set1(&SetIConfig::new(100, 5)).unwrap();
    assert_eq!(classes.iter().filter(|c| **c == NodeClass::High).count(), 2);
    assert_eq!(
        classes.iter().filter(|c| **c == NodeClass::Medium).count(),
        38
    );
    assert_eq!(classes.iter().filter(|c| **c == NodeClass::Low).count(), 60);
}

#[test]
fn deterministic() {
    let a = generate_set1(&SetIConfig::new(40, 17)).unwrap();
    let b = generate_set1(&SetIConfig::new(40, 17)).unwrap();
    assert_eq!(a, b);
    let c = generate_set1(&SetIConfig::new(40, 18)).unwrap();
    assert_ne!(a.0, c.0);
}

#[test]
fn outflows_inside_class_intervals() {
    for seed in 0..5 {
        let (inst, classes) = generate_set1(&SetIConfig::new(100, seed)).unwrap();
        for (i, class) in classes.iter().enumerate() {
            let (lo, hi) = class.outflow_range();
            let o = inst.demand(i);
            assert!(o >= lo && o <= hi, "node {i} {class:?} outflow {o}");
        }
    }
}

#[test]
fn every_node_can_open() {
    let (inst, _) = generate_set1(&SetIConfig::new(50, 2)).unwrap();
    assert!((0..50).all(|k| inst.can_open(k)));
}

#[test]
fn rejects_small_n() {
    assert!(generate_set1(&SetIConfig::new(9, 0)).is_err());
}
