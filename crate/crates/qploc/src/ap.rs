//! Reader for raw hub-location data files in the layout used by the public
//! postal benchmark: node count, one coordinate pair per node, the `n x n`
//! flow matrix, then an optional tail.
//!
//! The tail may hold `p` and the three unit costs (4 values), one
//! `(setup, capacity)` pair per node (`2n` values), or both in that order.
//! Set [`ApOptions::capacity_first`] for files that list capacity before
//! setup.

use std::path::Path;

use qploc_core::instance::{euclidean_distances, CostUnits, VariantKind};
use qploc_core::Instance;

use crate::format::ParseError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApOptions {
    /// Multiplies every Euclidean distance.
    pub dist_scale: f64,
    /// Multiplies every flow.
    pub flow_scale: f64,
    /// Tail pairs are `(capacity, setup)` instead of `(setup, capacity)`.
    pub capacity_first: bool,
    /// Unit costs used when the file has none.
    pub units: CostUnits,
}

impl Default for ApOptions {
    fn default() -> Self {
        ApOptions {
            dist_scale: 1.0,
            flow_scale: 1.0,
            capacity_first: false,
            units: CostUnits::default(),
        }
    }
}

/// Raw contents of an AP file.
#[derive(Debug, Clone, PartialEq)]
pub struct ApData {
    pub n: usize,
    pub coords: Vec<(f64, f64)>,
    pub flow: Vec<f64>,
    pub p: Option<usize>,
    pub units: Option<CostUnits>,
    pub setup: Option<Vec<f64>>,
    pub capacity: Option<Vec<f64>>,
}

pub fn parse_ap(text: &str, opts: &ApOptions) -> Result<ApData, ParseError> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| ParseError::Syntax {
                line: idx + 1,
                message: format!("`{tok}` is not a number"),
            })?;
            tokens.push(v);
        }
    }
    let Some(&first) = tokens.first() else {
        return Err(ParseError::MissingSection("node count"));
    };
    if first < 1.0 || first.fract() != 0.0 {
        return Err(ParseError::Syntax {
            line: 1,
            message: format!("invalid node count {first}"),
        });
    }
    let n = first as usize;
    let body = &tokens[1..];
    let need = 2 * n + n * n;
    if body.len() < need {
        let section = if body.len() < 2 * n {
            "coordinates"
        } else {
            "flows"
        };
        return Err(ParseError::MissingSection(section));
    }
    let coords: Vec<(f64, f64)> = body[..2 * n].chunks(2).map(|c| (c[0], c[1])).collect();
    let flow: Vec<f64> = body[2 * n..need]
        .iter()
        .map(|w| w * opts.flow_scale)
        .collect();
    let tail = &body[need..];
    let (head, pairs) = match tail.len() {
        0 => (None, None),
        4 => (Some(tail), None),
        l if l == 2 * n => (None, Some(tail)),
        l if l == 4 + 2 * n => (Some(&tail[..4]), Some(&tail[4..])),
        l => {
            return Err(ParseError::Count {
                section: "tail",
                expected: 4 + 2 * n,
                found: l,
            })
        }
    };
    let (p, units) = match head {
        Some(h) => (
            Some(h[0] as usize),
            Some(CostUnits {
                collection: h[1],
                transfer: h[2],
                distribution: h[3],
            }),
        ),
        None => (None, None),
    };
    let (setup, capacity) = match pairs {
        Some(pr) => {
            let a: Vec<f64> = pr.chunks(2).map(|c| c[0]).collect();
            let b: Vec<f64> = pr.chunks(2).map(|c| c[1]).collect();
            if opts.capacity_first {
                (Some(b), Some(a))
            } else {
                (Some(a), Some(b))
            }
        }
        None => (None, None),
    };
    Ok(ApData {
        n,
        coords,
        flow,
        p,
        units,
        setup,
        capacity,
    })
}

impl ApData {
    /// Builds an instance of `kind` with cardinality `p` (falls back to the
    /// file's `p`, then to `n`). Missing setups are zero and missing
    /// capacities never bind.
    pub fn to_instance(
        &self,
        kind: VariantKind,
        p: Option<usize>,
        opts: &ApOptions,
    ) -> Result<Instance, ParseError> {
        let n = self.n;
        let dist: Vec<f64> = euclidean_distances(&self.coords)
            .into_iter()
            .map(|d| d * opts.dist_scale)
            .collect();
        let total: f64 = self.flow.iter().sum();
        let setup = self.setup.clone().unwrap_or_else(|| vec![0.0; n]);
        let capacity = self
            .capacity
            .clone()
            .unwrap_or_else(|| vec![2.0 * total + 1.0; n]);
        let units = self.units.unwrap_or(opts.units);
        let p = p.or(self.p).unwrap_or(n);
        let base = Instance::from_flows(
            n,
            p,
            kind.variant(),
            setup,
            capacity,
            &dist,
            &self.flow,
            units,
        )?;
        Ok(base.with_variant(kind, p)?)
    }
}

pub fn load_ap(path: &Path, opts: &ApOptions) -> Result<ApData, ParseError> {
    parse_ap(&std::fs::read_to_string(path)?, opts)
}
