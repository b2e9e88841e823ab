mod common;

use common::{for_each_feasible, random_dense};
use qploc_core::instance::{QuadCost, Variant, VariantKind};
use qploc_core::lp::{LpModel, ObjSense, RowSense};
use qploc_core::oracle::{enumerate_optimal, lp_vertex_oracle, naive_cost};
use qploc_core::{Error, Instance};

#[test]
fn two_nodes_by_inspection() {
    // opening both costs 2; opening one costs 1 plus the other node's
    // assignment cost 5
    let inst = Instance::new(
        2,
        2,
        Variant {
            capacitated: false,
            cardinality: true,
        },
        vec![1.0, 1.0],
        vec![10.0, 10.0],
        vec![1.0, 1.0],
        vec![0.0, 5.0, 5.0, 0.0],
        QuadCost::zero_dense(2).unwrap(),
    )
    .unwrap();
    let r = enumerate_optimal(&inst).unwrap();
    assert_eq!(r.value, 2.0);
    assert_eq!(r.best.open, vec![0, 1]);
}

#[test]
fn infeasible_capacities() {
    let inst = Instance::new(
        3,
        1,
        Variant {
            capacitated: true,
            cardinality: true,
        },
        vec![1.0; 3],
        vec![2.0, 2.0, 2.0],
        vec![3.0, 1.0, 1.0],
        vec![1.0; 9],
        QuadCost::zero_dense(3).unwrap(),
    )
    .unwrap();
    assert!(matches!(
        enumerate_optimal(&inst),
        Err(Error::InfeasibleInstance)
    ));
}

#[test]
fn size_guard() {
    let inst = random_dense(11, 2, VariantKind::Uphmpsa, 1);
    assert!(matches!(
        enumerate_optimal(&inst),
        Err(Error::SizeGuard { .. })
    ));
}

/// Plain enumeration of every assignment agrees with the pruned search,
/// including the pool of optima.
#[test]
fn agrees_with_full_enumeration() {
    for seed in 0..12u64 {
        let kind = VariantKind::ALL[seed as usize % 4];
        let n = 4 + seed as usize % 3;
        let inst = random_dense(n, 1 + seed as usize % 3, kind, 900 + seed);
        let mut best = f64::INFINITY;
        let mut all = Vec::new();
        for_each_feasible(&inst, &mut |a| {
            let mut open: Vec<usize> = a.to_vec();
            open.sort_unstable();
            open.dedup();
            let v = naive_cost(&inst, &open, a).total;
            all.push((v, a.to_vec()));
            best = best.min(v);
        });
        match enumerate_optimal(&inst) {
            Ok(r) => {
                assert!(best.is_finite());
                assert!(
                    (r.value - best).abs() <= 1e-9 * best.max(1.0),
                    "{} vs {best}",
                    r.value
                );
                assert!((r.best.total() - best).abs() <= 1e-9 * best.max(1.0));
                let mut want: Vec<Vec<usize>> = all
                    .into_iter()
                    .filter(|(v, _)| *v <= best + 1e-9 * best.max(1.0))
                    .map(|(_, a)| a)
                    .collect();
                want.sort();
                assert_eq!(r.optima, want);
            }
            Err(Error::InfeasibleInstance) => assert!(best.is_infinite()),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn naive_cost_matches_evaluate() {
    let inst = random_dense(6, 3, VariantKind::Chlpsa, 4);
    for_each_feasible(&inst, &mut |a| {
        let mut open: Vec<usize> = a.to_vec();
        open.sort_unstable();
        open.dedup();
        let x = naive_cost(&inst, &open, a).total;
        let y = inst.evaluate(&open, a).unwrap().total;
        assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
    });
}

#[test]
fn vertex_oracle_matches_simplex() {
    let mut m = LpModel::new(ObjSense::Minimize);
    let x = m.add_var(0.0, 4.0, -1.0);
    let y = m.add_var(0.0, 3.0, -2.0);
    m.add_row(vec![(x, 1.0), (y, 1.0)], RowSense::Le, 5.0)
        .unwrap();
    let v = lp_vertex_oracle(&m).unwrap().unwrap();
    assert!((v - m.solve(None).unwrap().objective).abs() < 1e-9);
    assert!((v + 8.0).abs() < 1e-9);
}
