//! Linearized reformulations of the quadratic model and their LP bounds.
//!
//! Every product `z_ik z_jm` with `i != j` is replaced by a continuous
//! variable stored once under the key with the smaller node first. The RLT
//! rows are built by multiplying an original constraint with `z_jm` or
//! `1 - z_jm` and linearizing each product through [`XIndex::product`], so
//! terms where the two nodes coincide collapse to `z_ik` (same facility) or
//! vanish (different facilities), exactly as they do at integral points.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LpModel, LpResult, LpStatus, ObjSense, RowSense};

/// Largest node count accepted by [`build_lp`].
pub const RLT_MAX_NODES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `x <= z_ik`, `x <= z_jm`, `x >= z_ik + z_jm - 1`.
    Standard,
    /// Assignment rows times `z_jm`, one family per side of the pair.
    AssignmentFirst,
    AssignmentSecond,
    /// Linking rows times `z_jm`.
    LinkingTimesZ,
    /// `z_ik z_jm <= z_jm`.
    BoundTimesZ,
    /// Cardinality row times `z_jm`.
    CardinalityTimesZ,
    /// Capacity rows times `z_jm`.
    CapacityTimesZ,
    /// Linking rows times `1 - z_jm`.
    LinkingTimesCompl,
    /// Cardinality row times `1 - z_jm`.
    CardinalityTimesCompl,
    /// Capacity rows times `1 - z_jm`.
    CapacityTimesCompl,
}

/// Relaxation levels. `Rl2` keeps only the assignment products; `Rl1` is
/// the full level-1 reformulation; the others add single families on top
/// of `Rl2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RltConfig {
    Std,
    Rl1,
    Rl2,
    Rl3,
    Rl4,
    Rl5,
    Rl6,
    Rl7,
    Rl8,
}

impl RltConfig {
    pub const ALL: [RltConfig; 9] = [
        RltConfig::Std,
        RltConfig::Rl2,
        RltConfig::Rl3,
        RltConfig::Rl4,
        RltConfig::Rl5,
        RltConfig::Rl6,
        RltConfig::Rl7,
        RltConfig::Rl8,
        RltConfig::Rl1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RltConfig::Std => "STD",
            RltConfig::Rl1 => "RL1",
            RltConfig::Rl2 => "RL2",
            RltConfig::Rl3 => "RL3",
            RltConfig::Rl4 => "RL4",
            RltConfig::Rl5 => "RL5",
            RltConfig::Rl6 => "RL6",
            RltConfig::Rl7 => "RL7",
            RltConfig::Rl8 => "RL8",
        }
    }

    pub fn parse(s: &str) -> Option<RltConfig> {
        RltConfig::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
    }

    pub fn families(self) -> Vec<Family> {
        use Family::*;
        let base = [AssignmentFirst, AssignmentSecond];
        let extra: &[Family] = match self {
            RltConfig::Std => return vec![Standard],
            RltConfig::Rl2 => &[],
            RltConfig::Rl3 => &[LinkingTimesZ],
            RltConfig::Rl4 => &[LinkingTimesCompl],
            RltConfig::Rl5 => &[LinkingTimesZ, LinkingTimesCompl],
            RltConfig::Rl6 => &[CapacityTimesZ],
            RltConfig::Rl7 => &[CapacityTimesCompl],
            RltConfig::Rl8 => &[CapacityTimesZ, CapacityTimesCompl],
            RltConfig::Rl1 => &[
                LinkingTimesZ,
                BoundTimesZ,
                CardinalityTimesZ,
                CapacityTimesZ,
                LinkingTimesCompl,
                CardinalityTimesCompl,
                CapacityTimesCompl,
            ],
        };
        base.iter().chain(extra).copied().collect()
    }
}

/// Column layout: `z_ik` at `i * n + k`, then the product variables.
#[derive(Debug, Clone, Copy)]
pub struct XIndex {
    n: usize,
}

impl XIndex {
    pub fn new(n: usize) -> Self {
        XIndex { n }
    }

    pub fn num_z(&self) -> usize {
        self.n * self.n
    }

    pub fn num_x(&self) -> usize {
        self.n * self.n * self.n * (self.n - 1) / 2
    }

    pub fn z(&self, i: usize, k: usize) -> usize {
        i * self.n + k
    }

    /// Column of `x_ikjm` for `i < j`.
    pub fn x(&self, i: usize, k: usize, j: usize, m: usize) -> usize {
        debug_assert!(i < j);
        let n = self.n;
        let pair = crate::instance::pair_index(n, i, j);
        self.num_z() + pair * n * n + k * n + m
    }

    /// Linearization of `z_ik z_jm` as a single term, or `None` when the
    /// product is identically zero.
    pub fn product(&self, i: usize, k: usize, j: usize, m: usize) -> Option<usize> {
        use core::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => Some(self.x(i, k, j, m)),
            Greater => Some(self.x(j, m, i, k)),
            Equal => (k == m).then(|| self.z(i, k)),
        }
    }
}

/// A built relaxation with the row range of every family.
#[derive(Debug, Clone)]
pub struct RltModel {
    pub model: LpModel,
    pub index: XIndex,
    pub families: Vec<(Family, Range<usize>)>,
    /// Rows of the original constraints (assignment, linking, cardinality,
    /// capacity).
    pub base_rows: Range<usize>,
}

impl RltModel {
    pub fn rows_of(&self, family: Family) -> Option<Range<usize>> {
        self.families
            .iter()
            .find(|(f, _)| *f == family)
            .map(|(_, r)| r.clone())
    }
}

/// Sparse row under construction; duplicate columns are merged.
struct RowBuf {
    terms: Vec<(usize, f64)>,
}

impl RowBuf {
    fn new() -> Self {
        RowBuf { terms: Vec::new() }
    }

    fn add(&mut self, col: usize, v: f64) {
        if v != 0.0 {
            self.terms.push((col, v));
        }
    }

    fn add_product(&mut self, idx: &XIndex, i: usize, k: usize, j: usize, m: usize, v: f64) {
        if let Some(col) = idx.product(i, k, j, m) {
            self.add(col, v);
        }
    }

    fn finish(mut self) -> Vec<(usize, f64)> {
        self.terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(self.terms.len());
        for (c, v) in self.terms {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|t| t.1 != 0.0);
        out
    }
}

struct Builder<'a> {
    inst: &'a Instance,
    idx: XIndex,
    model: LpModel,
}

impl Builder<'_> {
    fn push(&mut self, row: RowBuf, sense: RowSense, rhs: f64) -> Result<()> {
        let coeffs = row.finish();
        // an empty row is either trivially satisfied or a modelling bug
        if coeffs.is_empty() {
            let ok = match sense {
                RowSense::Le => rhs >= -1e-12,
                RowSense::Ge => rhs <= 1e-12,
                RowSense::Eq => rhs.abs() <= 1e-12,
            };
            return if ok {
                Ok(())
            } else {
                Err(Error::InvalidData(
                    "empty RLT row with violated right-hand side".into(),
                ))
            };
        }
        self.model.add_row(coeffs, sense, rhs)?;
        Ok(())
    }

    fn base(&mut self) -> Result<()> {
        let (inst, idx, n) = (self.inst, self.idx, self.inst.n());
        for i in 0..n {
            let mut r = RowBuf::new();
            for k in 0..n {
                r.add(idx.z(i, k), 1.0);
            }
            self.push(r, RowSense::Eq, 1.0)?;
        }
        for i in 0..n {
            for k in 0..n {
                if i != k {
                    let mut r = RowBuf::new();
                    r.add(idx.z(i, k), 1.0);
                    r.add(idx.z(k, k), -1.0);
                    self.push(r, RowSense::Le, 0.0)?;
                }
            }
        }
        let mut r = RowBuf::new();
        for k in 0..n {
            r.add(idx.z(k, k), 1.0);
        }
        self.push(r, RowSense::Le, inst.p() as f64)?;
        if inst.variant().capacitated {
            for k in 0..n {
                let mut r = RowBuf::new();
                for i in (0..n).filter(|&i| i != k) {
                    r.add(idx.z(i, k), inst.demand(i));
                }
                r.add(idx.z(k, k), -inst.residual_capacity(k).max(0.0));
                self.push(r, RowSense::Le, 0.0)?;
            }
        }
        Ok(())
    }

    fn family(&mut self, fam: Family) -> Result<()> {
        let (inst, idx, n) = (self.inst, self.idx, self.inst.n());
        let p = inst.p() as f64;
        let cap = inst.variant().capacitated;
        let bbar = |k: usize| inst.residual_capacity(k).max(0.0);
        match fam {
            Family::Standard => {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in 0..n {
                            for m in 0..n {
                                let x = idx.x(i, k, j, m);
                                let mut r = RowBuf::new();
                                r.add(x, 1.0);
                                r.add(idx.z(i, k), -1.0);
                                self.push(r, RowSense::Le, 0.0)?;
                                let mut r = RowBuf::new();
                                r.add(x, 1.0);
                                r.add(idx.z(j, m), -1.0);
                                self.push(r, RowSense::Le, 0.0)?;
                                let mut r = RowBuf::new();
                                r.add(x, 1.0);
                                r.add(idx.z(i, k), -1.0);
                                r.add(idx.z(j, m), -1.0);
                                self.push(r, RowSense::Ge, -1.0)?;
                            }
                        }
                    }
                }
            }
            Family::AssignmentFirst | Family::AssignmentSecond => {
                // sum_k z_ik z_jm = z_jm, for i < j or i > j
                for i in 0..n {
                    for j in 0..n {
                        let keep = match fam {
                            Family::AssignmentFirst => i < j,
                            _ => i > j,
                        };
                        if !keep {
                            continue;
                        }
                        for m in 0..n {
                            let mut r = RowBuf::new();
                            for k in 0..n {
                                r.add_product(&idx, i, k, j, m, 1.0);
                            }
                            r.add(idx.z(j, m), -1.0);
                            self.push(r, RowSense::Eq, 0.0)?;
                        }
                    }
                }
            }
            Family::LinkingTimesZ | Family::LinkingTimesCompl => {
                let compl = fam == Family::LinkingTimesCompl;
                for i in 0..n {
                    for k in (0..n).filter(|&k| k != i) {
                        for j in (0..n).filter(|&j| j != i && j != k) {
                            for m in 0..n {
                                // z_ik * t <= z_kk * t with t = z_jm or 1 - z_jm
                                let mut r = RowBuf::new();
                                if compl {
                                    r.add(idx.z(i, k), 1.0);
                                    r.add(idx.z(k, k), -1.0);
                                    r.add_product(&idx, i, k, j, m, -1.0);
                                    r.add_product(&idx, k, k, j, m, 1.0);
                                } else {
                                    r.add_product(&idx, i, k, j, m, 1.0);
                                    r.add_product(&idx, k, k, j, m, -1.0);
                                }
                                self.push(r, RowSense::Le, 0.0)?;
                            }
                        }
                    }
                }
            }
            Family::BoundTimesZ => {
                for i in 0..n {
                    for k in (0..n).filter(|&k| k != i) {
                        for j in (i + 1..n).filter(|&j| k < j) {
                            for m in 0..n {
                                let mut r = RowBuf::new();
                                r.add(idx.x(i, k, j, m), 1.0);
                                r.add(idx.z(j, m), -1.0);
                                self.push(r, RowSense::Le, 0.0)?;
                            }
                        }
                    }
                }
            }
            Family::CardinalityTimesZ | Family::CardinalityTimesCompl => {
                let compl = fam == Family::CardinalityTimesCompl;
                for j in 0..n {
                    for m in 0..n {
                        let mut r = RowBuf::new();
                        let rhs = if compl {
                            for k in 0..n {
                                r.add(idx.z(k, k), 1.0);
                                r.add_product(&idx, k, k, j, m, -1.0);
                            }
                            r.add(idx.z(j, m), p);
                            p
                        } else {
                            for k in 0..n {
                                r.add_product(&idx, k, k, j, m, 1.0);
                            }
                            r.add(idx.z(j, m), -p);
                            0.0
                        };
                        self.push(r, RowSense::Le, rhs)?;
                    }
                }
            }
            Family::CapacityTimesZ | Family::CapacityTimesCompl => {
                if !cap {
                    return Ok(());
                }
                let compl = fam == Family::CapacityTimesCompl;
                for k in 0..n {
                    for j in (0..n).filter(|&j| j != k) {
                        for m in 0..n {
                            let mut r = RowBuf::new();
                            for i in (0..n).filter(|&i| i != k) {
                                let d = inst.demand(i);
                                if compl {
                                    r.add(idx.z(i, k), d);
                                }
                                r.add_product(&idx, i, k, j, m, if compl { -d } else { d });
                            }
                            if compl {
                                r.add(idx.z(k, k), -bbar(k));
                                r.add_product(&idx, k, k, j, m, bbar(k));
                            } else {
                                r.add_product(&idx, k, k, j, m, -bbar(k));
                            }
                            self.push(r, RowSense::Le, 0.0)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the LP relaxation of `config` (all variables continuous).
pub fn build_lp(inst: &Instance, config: RltConfig) -> Result<RltModel> {
    let n = inst.n();
    if n > RLT_MAX_NODES {
        return Err(Error::SizeGuard {
            what: "RLT nodes",
            got: n,
            limit: RLT_MAX_NODES,
        });
    }
    if n < 2 {
        return Err(Error::InvalidData(
            "RLT models need at least two nodes".into(),
        ));
    }
    let idx = XIndex::new(n);
    let mut model = LpModel::new(ObjSense::Minimize);
    for i in 0..n {
        for k in 0..n {
            let mut cost = inst.linear(i, k);
            if i == k {
                cost += inst.setup(k);
            }
            let upper = if inst.can_open(k) { 1.0 } else { 0.0 };
            model.add_var(0.0, upper, cost);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for m in 0..n {
                    model.add_var(0.0, f64::INFINITY, inst.q(i, k, j, m));
                }
            }
        }
    }
    debug_assert_eq!(model.num_vars(), idx.num_z() + idx.num_x());
    let mut b = Builder { inst, idx, model };
    b.base()?;
    let base_rows = 0..b.model.num_rows();
    let mut families = Vec::new();
    for fam in config.families() {
        let start = b.model.num_rows();
        b.family(fam)?;
        families.push((fam, start..b.model.num_rows()));
    }
    Ok(RltModel {
        model: b.model,
        index: idx,
        families,
        base_rows,
    })
}

/// Optimal value of the relaxation, or an error if the LP is not optimal.
pub fn lp_bound(inst: &Instance, config: RltConfig) -> Result<f64> {
    Ok(solve_relaxation(inst, config)?.objective)
}

pub fn solve_relaxation(inst: &Instance, config: RltConfig) -> Result<LpResult> {
    let built = build_lp(inst, config)?;
    let res = built.model.solve(None)?;
    match res.status {
        LpStatus::Optimal => Ok(res),
        LpStatus::Infeasible => Err(Error::InfeasibleInstance),
        other => Err(Error::NumericalFailure(alloc::format!(
            "{} relaxation ended with status {other:?}",
            config.name()
        ))),
    }
}

/// `(opt - bound) / opt` in percent.
pub fn gap_percent(opt: f64, bound: f64) -> f64 {
    if opt == 0.0 {
        0.0
    } else {
        100.0 * (opt - bound) / opt
    }
}
