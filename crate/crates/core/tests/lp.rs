use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qploc_core::lp::*;
use qploc_core::oracle::lp_vertex_oracle;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Dual objective of an optimal result: `y b + sum of bound terms`.
fn dual_objective(model: &LpModel, res: &LpResult) -> f64 {
    let mut v = 0.0;
    for (i, row) in model.rows().iter().enumerate() {
        v += res.duals[i] * row.rhs;
    }
    for j in 0..model.num_vars() {
        let d = res.reduced_costs[j];
        if d != 0.0 {
            // nonbasic at a bound carries its reduced cost times that bound
            v += d * res.x[j];
        }
    }
    v
}

fn random_lp(rng: &mut ChaCha8Rng, nv: usize, nr: usize) -> LpModel {
    let sense = if rng.gen_bool(0.5) {
        ObjSense::Minimize
    } else {
        ObjSense::Maximize
    };
    let mut m = LpModel::new(sense);
    for _ in 0..nv {
        let lo = rng.gen_range(-3..=1) as f64;
        let up = lo + rng.gen_range(1..=6) as f64;
        m.add_var(lo, up, rng.gen_range(-10.0..10.0));
    }
    for _ in 0..nr {
        let mut coeffs = Vec::new();
        for j in 0..nv {
            if rng.gen_bool(0.8) {
                coeffs.push((j, rng.gen_range(-5.0..5.0)));
            }
        }
        let s = match rng.gen_range(0..5) {
            0 => RowSense::Eq,
            1 | 2 => RowSense::Le,
            _ => RowSense::Ge,
        };
        m.add_row(coeffs, s, rng.gen_range(-6.0..6.0)).unwrap();
    }
    m
}

#[test]
fn single_lower_bound_row() {
    let mut m = LpModel::new(ObjSense::Minimize);
    let x = m.add_var(0.0, f64::INFINITY, 1.0);
    m.add_row(vec![(x, 1.0)], RowSense::Ge, 3.0).unwrap();
    let r = m.solve(None).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    assert!((r.x[0] - 3.0).abs() < 1e-12);
    assert!((r.duals[0] - 1.0).abs() < 1e-12);
}

#[test]
fn contradictory_rows_are_infeasible() {
    let mut m = LpModel::new(ObjSense::Minimize);
    let x = m.add_var(f64::NEG_INFINITY, f64::INFINITY, 0.0);
    m.add_row(vec![(x, 1.0)], RowSense::Le, 1.0).unwrap();
    m.add_row(vec![(x, 1.0)], RowSense::Ge, 2.0).unwrap();
    assert_eq!(m.solve(None).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn unbounded_ray() {
    let mut m = LpModel::new(ObjSense::Maximize);
    let x = m.add_var(0.0, f64::INFINITY, 1.0);
    let y = m.add_var(0.0, f64::INFINITY, 0.0);
    m.add_row(vec![(x, 1.0), (y, -1.0)], RowSense::Le, 1.0)
        .unwrap();
    assert_eq!(m.solve(None).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut feasible = 0;
    while checked < 200 {
        let nv = rng.gen_range(1..=6);
        let nr = rng.gen_range(1..=6);
        let m = random_lp(&mut rng, nv, nr);
        let oracle = lp_vertex_oracle(&m).unwrap();
        let r = m.solve(None).unwrap();
        match oracle {
            None => assert_eq!(r.status, LpStatus::Infeasible, "{m:?}"),
            Some(v) => {
                feasible += 1;
                assert_eq!(r.status, LpStatus::Optimal, "{m:?}");
                assert!(close(r.objective, v, 1e-7), "{} vs {v}", r.objective);
                assert!(close(dual_objective(&m, &r), r.objective, 1e-7));
            }
        }
        checked += 1;
    }
    assert!(feasible >= 20);
}

#[test]
fn redundant_row_keeps_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 10 {
        let mut m = random_lp(&mut rng, 5, 4);
        let r0 = m.solve(None).unwrap();
        if r0.status != LpStatus::Optimal {
            continue;
        }
        let coeffs: Vec<(usize, f64)> = (0..5).map(|j| (j, 1.0)).collect();
        let ub: f64 = m.cols().iter().map(|c| c.upper).sum();
        m.add_row(coeffs, RowSense::Le, ub + 1.0).unwrap();
        let r1 = m.solve(Some(&r0.basis)).unwrap();
        assert_eq!(r1.status, LpStatus::Optimal);
        assert!(close(r0.objective, r1.objective, 1e-9));
        done += 1;
    }
}

#[test]
fn fix_then_unfix_restores_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 10 {
        let mut m = random_lp(&mut rng, 6, 4);
        let r0 = m.solve(None).unwrap();
        if r0.status != LpStatus::Optimal {
            continue;
        }
        let j = match r0.basis.cols.iter().position(|s| *s == VarStatus::Basic) {
            Some(j) => j,
            None => continue,
        };
        let mid = 0.5 * (m.col(j).lower + m.col(j).upper);
        m.fix_variable(j, mid).unwrap();
        let r1 = m.solve(Some(&r0.basis)).unwrap();
        if r1.status == LpStatus::Optimal {
            let worse = match m.sense() {
                ObjSense::Minimize => r1.objective >= r0.objective - 1e-9,
                ObjSense::Maximize => r1.objective <= r0.objective + 1e-9,
            };
            assert!(worse);
        }
        m.unfix_variable(j).unwrap();
        let r2 = m.solve(Some(&r1.basis)).unwrap();
        assert_eq!(r2.status, LpStatus::Optimal);
        assert!(close(r0.objective, r2.objective, 1e-9));
        done += 1;
    }
}

#[test]
fn probe_pattern_is_monotone() {
    // min sum c x over a small assignment polytope, probe x0 = 1
    let mut m = LpModel::new(ObjSense::Minimize);
    let costs = [4.0, 1.0, 3.0, 2.0, 5.0, 1.5];
    for &c in &costs {
        m.add_var(0.0, 1.0, c);
    }
    m.add_row(vec![(0, 1.0), (1, 1.0), (2, 1.0)], RowSense::Eq, 1.0)
        .unwrap();
    m.add_row(vec![(3, 1.0), (4, 1.0), (5, 1.0)], RowSense::Eq, 1.0)
        .unwrap();
    m.add_row(vec![(1, 1.0), (5, 1.0)], RowSense::Le, 1.0)
        .unwrap();
    let base = m.solve(None).unwrap();
    m.fix_variable(0, 1.0).unwrap();
    let probe = m.solve(Some(&base.basis)).unwrap();
    m.unfix_variable(0).unwrap();
    assert!(probe.objective >= base.objective - 1e-12);
    let again = m.solve(Some(&probe.basis)).unwrap();
    assert_eq!(again.objective, base.objective);
}

#[test]
fn added_cuts_never_decrease_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut m = LpModel::new(ObjSense::Minimize);
    for _ in 0..8 {
        m.add_var(0.0, 1.0, rng.gen_range(-5.0..5.0));
    }
    m.add_row((0..8).map(|j| (j, 1.0)).collect(), RowSense::Le, 4.0)
        .unwrap();
    let mut last = m.solve(None).unwrap();
    for _ in 0..30 {
        let coeffs: Vec<(usize, f64)> = (0..8).map(|j| (j, rng.gen_range(-1.0..1.0))).collect();
        m.add_row(coeffs, RowSense::Ge, rng.gen_range(-2.0..0.5))
            .unwrap();
        let r = m.solve(Some(&last.basis)).unwrap();
        if r.status == LpStatus::Infeasible {
            break;
        }
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.objective >= last.objective - 1e-9);
        let cold = m.solve(None).unwrap();
        assert!(close(cold.objective, r.objective, 1e-9));
        last = r;
    }
}

#[test]
fn removing_slack_rows_keeps_basis_usable() {
    let mut m = LpModel::new(ObjSense::Minimize);
    let x = m.add_var(0.0, 10.0, 1.0);
    let y = m.add_var(0.0, 10.0, 2.0);
    m.add_row(vec![(x, 1.0), (y, 1.0)], RowSense::Ge, 2.0)
        .unwrap();
    m.add_row(vec![(x, 1.0)], RowSense::Le, 9.0).unwrap();
    let r = m.solve(None).unwrap();
    assert!(r.basis.is_basic_row(1));
    let mut basis = r.basis.clone();
    basis.remove_rows(&[1]);
    m.remove_rows(&[1]).unwrap();
    let r2 = m.solve(Some(&basis)).unwrap();
    assert_eq!(r2.objective, 2.0);
}

#[test]
fn repeated_solves_are_bitwise_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let m = random_lp(&mut rng, 6, 6);
    let a = m.solve(None).unwrap();
    let b = m.solve(None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn out_of_range_indices_are_rejected() {
    let mut m = LpModel::new(ObjSense::Minimize);
    m.add_var(0.0, 1.0, 0.0);
    assert!(m.add_row(vec![(3, 1.0)], RowSense::Le, 1.0).is_err());
    assert!(m.fix_variable(2, 0.0).is_err());
    assert!(m.remove_rows(&[0]).is_err());
}

#[test]
fn emitter_writes_all_sections() {
    let mut m = LpModel::new(ObjSense::Maximize);
    let x = m.add_var(0.0, 1.0, 2.0);
    let y = m.add_var(f64::NEG_INFINITY, f64::INFINITY, -1.0);
    m.add_row(vec![(x, 1.0), (y, -3.5)], RowSense::Eq, 0.5)
        .unwrap();
    let mut s = String::new();
    write_lp(&m, &mut s).unwrap();
    assert_eq!(
        s,
        "Maximize\n obj: 2 x0 - 1 x1\nSubject To\n r0: 1 x0 - 3.5 x1 = 0.5\nBounds\n 0 <= x0 <= 1\n x1 free\nEnd\n"
    );
}

#[test]
fn degenerate_assignment_lp() {
    // 6x6 assignment LP: highly degenerate, optimum is integral
    let n = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut m = LpModel::new(ObjSense::Minimize);
    for _ in 0..n * n {
        m.add_var(0.0, f64::INFINITY, rng.gen_range(0..20) as f64);
    }
    for i in 0..n {
        m.add_row(
            (0..n).map(|k| (i * n + k, 1.0)).collect(),
            RowSense::Eq,
            1.0,
        )
        .unwrap();
        m.add_row(
            (0..n).map(|k| (k * n + i, 1.0)).collect(),
            RowSense::Eq,
            1.0,
        )
        .unwrap();
    }
    let r = m.solve(None).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    // brute force over permutations
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let c: f64 = (0..n).map(|i| m.col(i * n + p[i]).cost).sum();
        best = best.min(c);
    });
    assert!((r.objective - best).abs() < 1e-9);
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for t in k..p.len() {
        p.swap(k, t);
        permute(p, k + 1, f);
        p.swap(k, t);
    }
}
