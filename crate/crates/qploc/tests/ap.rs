use qploc::ap::{parse_ap, ApOptions};
use qploc_core::instance::{CostUnits, VariantKind};
use qploc_core::oracle::enumerate_optimal;

/// Ten nodes on a line at x = 0..9, unit flows between distinct nodes.
fn ten_node_file(tail: &str) -> String {
    let n = 10;
    let mut s = format!("{n}\n");
    for i in 0..n {
        s.push_str(&format!("{i}.0 0.0\n"));
    }
    for i in 0..n {
        let row: Vec<&str> = (0..n).map(|j| if i == j { "0" } else { "1" }).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s.push_str(tail);
    s
}

#[test]
fn plain_file_uses_default_units() {
    let opts = ApOptions::default();
    let data = parse_ap(&ten_node_file(""), &opts).unwrap();
    assert_eq!(data.n, 10);
    assert_eq!(data.coords[3], (3.0, 0.0));
    assert_eq!(data.p, None);
    let inst = data
        .to_instance(VariantKind::Uphmpsa, Some(2), &opts)
        .unwrap();
    assert_eq!(inst.p(), 2);
    // c_ik = (chi O_i + delta D_i) d_ik with O_i = D_i = 9
    let u = CostUnits::default();
    let want = (u.collection * 9.0 + u.distribution * 9.0) * 4.0;
    assert!((inst.linear(1, 5) - want).abs() < 1e-9);
    // pair (0, 1) carries flow both ways: tau (w_01 d_27 + w_10 d_72)
    assert!((inst.q(0, 2, 1, 7) - u.transfer * 10.0).abs() < 1e-9);
}

#[test]
fn tail_with_units_and_facility_data() {
    let mut tail = String::from("3 1 0.5 2\n");
    for k in 0..10 {
        tail.push_str(&format!("{} {}\n", 100 + k, 50));
    }
    let opts = ApOptions::default();
    let data = parse_ap(&ten_node_file(&tail), &opts).unwrap();
    assert_eq!(data.p, Some(3));
    assert_eq!(data.units.unwrap().transfer, 0.5);
    assert_eq!(data.setup.as_ref().unwrap()[4], 104.0);
    assert_eq!(data.capacity.as_ref().unwrap()[4], 50.0);
    let swapped = parse_ap(
        &ten_node_file(&tail),
        &ApOptions {
            capacity_first: true,
            ..opts
        },
    )
    .unwrap();
    assert_eq!(swapped.setup.unwrap()[4], 50.0);
}

#[test]
fn scaling_is_linear_in_the_objective() {
    let text = ten_node_file("");
    let base = ApOptions::default();
    let scaled = ApOptions {
        dist_scale: 0.5,
        flow_scale: 4.0,
        ..base
    };
    let a = parse_ap(&text, &base)
        .unwrap()
        .to_instance(VariantKind::Uphmpsa, Some(2), &base)
        .unwrap();
    let b = parse_ap(&text, &scaled)
        .unwrap()
        .to_instance(VariantKind::Uphmpsa, Some(2), &scaled)
        .unwrap();
    let va = enumerate_optimal(&a.to_dense().unwrap()).unwrap().value;
    let vb = enumerate_optimal(&b.to_dense().unwrap()).unwrap().value;
    assert!((vb - 2.0 * va).abs() <= 1e-9 * va);
}

#[test]
fn malformed_files_are_rejected() {
    let opts = ApOptions::default();
    assert!(parse_ap("", &opts).is_err());
    assert!(parse_ap("2.5\n", &opts).is_err());
    let text = ten_node_file("1 2 3\n");
    assert!(parse_ap(&text, &opts).is_err());
    let full = ten_node_file("");
    let cut: String = full.lines().take(15).collect::<Vec<_>>().join("\n");
    assert!(parse_ap(&cut, &opts).is_err());
}
