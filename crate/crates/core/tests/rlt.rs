mod common;

use common::{for_each_feasible, random_dense};
use qploc_core::instance::{QuadCost, VariantKind};
use qploc_core::lp::{LpModel, ObjSense, RowSense};
use qploc_core::oracle::enumerate_optimal;
use qploc_core::rlt::{build_lp, lp_bound, Family, RltConfig, XIndex};
use qploc_core::{Error, Instance};

fn tol(v: f64) -> f64 {
    1e-7 * (1.0 + v.abs())
}

#[test]
fn assignment_family_sizes() {
    let inst = random_dense(5, 2, VariantKind::Chlpsa, 1);
    let m = build_lp(&inst, RltConfig::Rl2).unwrap();
    let n = 5;
    for fam in [Family::AssignmentFirst, Family::AssignmentSecond] {
        assert_eq!(m.rows_of(fam).unwrap().len(), n * n * (n - 1) / 2);
    }
    assert_eq!(m.model.num_vars(), n * n + n * n * n * (n - 1) / 2);
}

#[test]
fn full_model_contains_reduced_rows() {
    let inst = random_dense(5, 3, VariantKind::Cphmpsa, 2);
    let small = build_lp(&inst, RltConfig::Rl2).unwrap();
    let full = build_lp(&inst, RltConfig::Rl1).unwrap();
    for r in small.model.rows() {
        assert!(full.model.rows().contains(r));
    }
    for cfg in RltConfig::ALL {
        if cfg == RltConfig::Std {
            continue;
        }
        let part = build_lp(&inst, cfg).unwrap();
        assert!(part.model.num_rows() <= full.model.num_rows());
        for r in part.model.rows() {
            assert!(
                full.model.rows().contains(r),
                "{} row missing from RL1",
                cfg.name()
            );
        }
    }
}

/// Every feasible integral point, lifted with `x = z z`, satisfies every
/// row of every relaxation.
#[test]
fn integral_points_satisfy_all_rows() {
    for (seed, kind) in VariantKind::ALL.iter().enumerate() {
        let inst = random_dense(4, 2, *kind, 10 + seed as u64);
        let idx = XIndex::new(4);
        let models: Vec<_> = RltConfig::ALL
            .iter()
            .map(|c| build_lp(&inst, *c).unwrap())
            .collect();
        let mut count = 0;
        for_each_feasible(&inst, &mut |a| {
            count += 1;
            let n = 4;
            let mut x = vec![0.0; idx.num_z() + idx.num_x()];
            for i in 0..n {
                x[idx.z(i, a[i])] = 1.0;
                for j in i + 1..n {
                    x[idx.x(i, a[i], j, a[j])] = 1.0;
                }
            }
            for built in &models {
                for (r, row) in built.model.rows().iter().enumerate() {
                    let act = row.activity(&x);
                    let ok = match row.sense {
                        RowSense::Le => act <= row.rhs + 1e-9,
                        RowSense::Ge => act >= row.rhs - 1e-9,
                        RowSense::Eq => (act - row.rhs).abs() <= 1e-9,
                    };
                    assert!(ok, "row {r} violated at {a:?}: {act} vs {}", row.rhs);
                }
                // objective of the lifted point is the true cost
                let open: Vec<usize> = (0..n).filter(|&k| a[k] == k).collect();
                let cost = inst.evaluate(&open, a).unwrap().total;
                assert!((built.model.objective_value(&x) - cost).abs() < 1e-9);
            }
        });
        assert!(count > 0);
    }
}

fn location_relaxation(inst: &Instance) -> f64 {
    let n = inst.n();
    let mut m = LpModel::new(ObjSense::Minimize);
    for i in 0..n {
        for k in 0..n {
            let c = inst.linear(i, k) + if i == k { inst.setup(k) } else { 0.0 };
            m.add_var(0.0, if inst.can_open(k) { 1.0 } else { 0.0 }, c);
        }
    }
    for i in 0..n {
        m.add_row(
            (0..n).map(|k| (i * n + k, 1.0)).collect(),
            RowSense::Eq,
            1.0,
        )
        .unwrap();
        for k in 0..n {
            if i != k {
                m.add_row(vec![(i * n + k, 1.0), (k * n + k, -1.0)], RowSense::Le, 0.0)
                    .unwrap();
            }
        }
    }
    m.add_row(
        (0..n).map(|k| (k * n + k, 1.0)).collect(),
        RowSense::Le,
        inst.p() as f64,
    )
    .unwrap();
    if inst.variant().capacitated {
        for k in 0..n {
            let mut row: Vec<(usize, f64)> = (0..n)
                .filter(|&i| i != k)
                .map(|i| (i * n + k, inst.demand(i)))
                .collect();
            row.push((k * n + k, -inst.residual_capacity(k)));
            m.add_row(row, RowSense::Le, 0.0).unwrap();
        }
    }
    m.solve(None).unwrap().objective
}

#[test]
fn zero_interaction_reduces_to_location_relaxation() {
    let base = random_dense(5, 2, VariantKind::Chlpsa, 3);
    let inst = Instance::new(
        5,
        2,
        base.variant(),
        base.setups().to_vec(),
        base.raw_capacities().to_vec(),
        base.demands().to_vec(),
        base.linear_costs().to_vec(),
        QuadCost::zero_dense(5).unwrap(),
    )
    .unwrap();
    let want = location_relaxation(&inst);
    let opt = enumerate_optimal(&inst).unwrap().value;
    // x = z z (fractional) satisfies the assignment and linking products,
    // so these relaxations project onto the plain location relaxation
    for cfg in [
        RltConfig::Std,
        RltConfig::Rl2,
        RltConfig::Rl3,
        RltConfig::Rl4,
        RltConfig::Rl5,
    ] {
        let v = lp_bound(&inst, cfg).unwrap();
        assert!(
            (v - want).abs() <= tol(want),
            "{}: {v} vs {want}",
            cfg.name()
        );
    }
    // capacity products can cut off fractional location points
    for cfg in [RltConfig::Rl6, RltConfig::Rl7, RltConfig::Rl8] {
        let v = lp_bound(&inst, cfg).unwrap();
        assert!(
            v >= want - tol(want) && v <= opt + tol(opt),
            "{}: {v}",
            cfg.name()
        );
    }
}

#[test]
fn bounds_are_ordered_below_optimum() {
    let mut strict = 0;
    for seed in 0..4u64 {
        let kind = if seed % 2 == 0 {
            VariantKind::Chlpsa
        } else {
            VariantKind::Cphmpsa
        };
        let inst = random_dense(6, 2 + (seed as usize % 2), kind, 100 + seed);
        let opt = enumerate_optimal(&inst).unwrap().value;
        let b = |c| lp_bound(&inst, c).unwrap();
        let std = b(RltConfig::Std);
        let rl2 = b(RltConfig::Rl2);
        let rl1 = b(RltConfig::Rl1);
        assert!(std <= rl2 + tol(rl2));
        assert!(rl1 <= opt + tol(opt), "RL1 {rl1} above optimum {opt}");
        let mut by = std::collections::HashMap::new();
        for cfg in [
            RltConfig::Rl3,
            RltConfig::Rl4,
            RltConfig::Rl5,
            RltConfig::Rl6,
            RltConfig::Rl7,
            RltConfig::Rl8,
        ] {
            let v = b(cfg);
            assert!(rl2 <= v + tol(v), "{} below RL2", cfg.name());
            assert!(v <= rl1 + tol(rl1), "{} above RL1", cfg.name());
            by.insert(cfg, v);
        }
        // families are nested
        assert!(by[&RltConfig::Rl3] <= by[&RltConfig::Rl5] + tol(rl1));
        assert!(by[&RltConfig::Rl4] <= by[&RltConfig::Rl5] + tol(rl1));
        assert!(by[&RltConfig::Rl6] <= by[&RltConfig::Rl8] + tol(rl1));
        assert!(by[&RltConfig::Rl7] <= by[&RltConfig::Rl8] + tol(rl1));
        if rl1 > rl2 + 1e-6 * (1.0 + rl2.abs()) {
            strict += 1;
        }
    }
    assert!(strict > 0, "RL1 never improved on RL2");
}

#[test]
fn size_guard() {
    let (inst, _) =
        qploc_core::instance::generate_set1(&qploc_core::instance::SetIConfig::new(40, 1)).unwrap();
    assert!(matches!(
        build_lp(&inst, RltConfig::Rl2),
        Err(Error::SizeGuard { .. })
    ));
}

#[test]
fn config_names_round_trip() {
    for c in RltConfig::ALL {
        assert_eq!(RltConfig::parse(c.name()), Some(c));
    }
    assert_eq!(RltConfig::parse("rl9"), None);
}
