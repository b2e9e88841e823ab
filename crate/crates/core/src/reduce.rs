//! Model reduction on the Benders master: reduced-cost elimination of
//! facilities and partial enumeration probes on location variables.

use alloc::vec::Vec;

use crate::benders::MasterState;
use crate::error::Result;
use crate::lp::{LpStatus, VarStatus};

/// Removes every facility `k` whose `z_kk` is nonbasic at zero with
/// `LB + rc_k > UB`. Any solution opening `k` costs more than the
/// incumbent. Needs an optimal master LP in `state.last`.
pub fn eliminate(state: &mut MasterState) -> Result<Vec<usize>> {
    let Some(res) = state.last.as_ref().filter(|r| r.is_optimal()) else {
        return Ok(Vec::new());
    };
    if !state.ub.is_finite() {
        return Ok(Vec::new());
    }
    let n = state.n();
    let lb = res.objective;
    let limit = state.ub + state.ub_margin();
    let mut removed = Vec::new();
    for k in 0..n {
        if state.eliminated[k] || state.fixed_open[k] {
            continue;
        }
        let c = state.z_col(k, k);
        if res.basis.cols[c] != VarStatus::AtLower || res.x[c] > 1e-12 {
            continue;
        }
        if lb + res.reduced_costs[c] > limit {
            removed.push(k);
        }
    }
    for &k in &removed {
        state.eliminate_facility(k)?;
    }
    Ok(removed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeMode {
    /// Probe facilities with `z_kk <= 0.2` by forcing them open.
    Pe0,
    /// Probe facilities with `z_kk >= 0.8` by forcing them closed.
    Pe1,
}

pub const PE0_THRESHOLD: f64 = 0.2;
pub const PE1_THRESHOLD: f64 = 0.8;

/// Runs the probes of `mode` at the last master LP point and returns the
/// facilities fixed (closed for PE0, open for PE1). A probe that fails to
/// solve never fixes anything. The master LP is left as it was apart from
/// the fixings and any linking rows the probes added.
pub fn partial_enumeration(
    state: &mut MasterState,
    mode: PeMode,
    stop: Option<&dyn Fn() -> bool>,
) -> Result<Vec<usize>> {
    let Some(res) = state.last.clone().filter(|r| r.is_optimal()) else {
        return Ok(Vec::new());
    };
    if !state.ub.is_finite() {
        return Ok(Vec::new());
    }
    let n = state.n();
    let targets: Vec<usize> = (0..n)
        .filter(|&k| !state.eliminated[k] && !state.fixed_open[k])
        .filter(|&k| {
            let v = res.x[state.z_col(k, k)];
            match mode {
                PeMode::Pe0 => v <= PE0_THRESHOLD,
                PeMode::Pe1 => v >= PE1_THRESHOLD,
            }
        })
        .collect();
    let saved_basis = state.basis.clone();
    let mut fixed = Vec::new();
    for k in targets {
        if stop.is_some_and(|s| s()) {
            break;
        }
        let cols: Vec<usize> = match mode {
            PeMode::Pe0 => alloc::vec![state.z_col(k, k)],
            // closing k empties its whole column
            PeMode::Pe1 => (0..n).map(|i| state.z_col(i, k)).collect(),
        };
        let value = match mode {
            PeMode::Pe0 => 1.0,
            PeMode::Pe1 => 0.0,
        };
        for &c in &cols {
            state.model.fix_variable(c, value)?;
        }
        state.basis = saved_basis.clone();
        let probe = state.solve_lp(stop);
        for &c in &cols {
            state.model.unfix_variable(c)?;
        }
        let exceeds = match &probe {
            Ok(r) => match r.status {
                LpStatus::Infeasible => true,
                LpStatus::Optimal => r.objective > state.ub + state.ub_margin(),
                _ => false,
            },
            Err(_) => false,
        };
        if exceeds {
            fixed.push(k);
        }
    }
    state.basis = saved_basis;
    state.last = Some(res);
    for &k in &fixed {
        match mode {
            PeMode::Pe0 => {
                state.eliminate_facility(k)?;
                state.fixed_by_pe0 += 1;
            }
            PeMode::Pe1 => {
                state.fix_open(k)?;
                state.fixed_by_pe1 += 1;
            }
        }
    }
    Ok(fixed)
}
