//! Plain-text instance files.
//!
//! ```text
//! # comment
//! 6 2 cphmpsa          n, p, variant
//! SETUP     n values
//! CAPACITY  n values
//! DEMAND    n values
//! LINEAR    n*n values, row i holds c_i0 .. c_i(n-1)   (optional with FLOW)
//! UNITS     collection transfer distribution           (optional, FLOW only)
//! DIST      n*n values                                 (FLOW only)
//! FLOW      n*n values
//! QDENSE    n*n values per pair i<j in lexicographic order, block row k, column m
//! ```
//!
//! Exactly one of `FLOW` and `QDENSE` must be present. Values are
//! whitespace separated and may span lines. Without `LINEAR`, linear costs
//! of a `FLOW` instance are derived from the flows and distances.

use std::fmt::Write as _;
use std::path::Path;

use qploc_core::instance::{build_ap_costs, num_pairs, CostUnits, QuadCost, Variant, VariantKind};
use qploc_core::Instance;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("section {section}: expected {expected} values, found {found}")]
    Count {
        section: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("invalid instance: {0}")]
    Invalid(#[from] qploc_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const SECTIONS: [&str; 8] = [
    "SETUP", "CAPACITY", "DEMAND", "LINEAR", "UNITS", "DIST", "FLOW", "QDENSE",
];

/// Variant names accepted in the header.
pub fn variant_name(v: Variant) -> &'static str {
    VariantKind::ALL
        .iter()
        .find(|k| k.variant() == v)
        .map(|k| k.name())
        .expect("every flag combination is a named variant")
}

pub fn parse_variant(s: &str) -> Option<Variant> {
    VariantKind::parse(s).map(|k| k.variant())
}

fn fmt_values(out: &mut String, name: &str, values: &[f64], per_line: usize) {
    out.push_str(name);
    out.push('\n');
    for chunk in values.chunks(per_line.max(1)) {
        let line: Vec<String> = chunk.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// Serializes an instance. Floats use the shortest exact representation,
/// so reading the text back gives an identical instance.
pub fn to_string(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        n,
        inst.raw_p(),
        variant_name(inst.variant())
    );
    fmt_values(&mut out, "SETUP", inst.setups(), n);
    fmt_values(&mut out, "CAPACITY", inst.raw_capacities(), n);
    fmt_values(&mut out, "DEMAND", inst.demands(), n);
    fmt_values(&mut out, "LINEAR", inst.linear_costs(), n);
    match inst.quad() {
        QuadCost::Factorized {
            flow, dist, units, ..
        } => {
            let _ = writeln!(
                out,
                "UNITS\n{} {} {}",
                units.collection, units.transfer, units.distribution
            );
            fmt_values(&mut out, "DIST", dist, n);
            fmt_values(&mut out, "FLOW", flow, n);
        }
        QuadCost::Dense { values, .. } => fmt_values(&mut out, "QDENSE", values, n),
    }
    out
}

pub fn save(inst: &Instance, path: &Path) -> Result<(), ParseError> {
    std::fs::write(path, to_string(inst))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Instance, ParseError> {
    parse(&std::fs::read_to_string(path)?)
}

struct Section {
    line: usize,
    values: Vec<f64>,
}

fn take(sections: &mut [(&'static str, Option<Section>)], name: &'static str) -> Option<Section> {
    sections
        .iter_mut()
        .find(|(s, _)| *s == name)
        .and_then(|(_, v)| v.take())
}

fn expect_len(section: &'static str, s: Section, expected: usize) -> Result<Vec<f64>, ParseError> {
    if s.values.len() != expected {
        return Err(ParseError::Count {
            section,
            expected,
            found: s.values.len(),
        });
    }
    Ok(s.values)
}

pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, Variant)> = None;
    let mut sections: Vec<(&'static str, Option<Section>)> =
        SECTIONS.iter().map(|s| (*s, None)).collect();
    let mut current: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if header.is_none() {
            let parts: Vec<&str> = content.split_whitespace().collect();
            let [n, p, v] = parts[..] else {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("expected header `n p variant`, found `{content}`"),
                });
            };
            let bad = |what: &str| ParseError::Syntax {
                line,
                message: format!("invalid {what} in header"),
            };
            let n: usize = n.parse().map_err(|_| bad("n"))?;
            let p: usize = p.parse().map_err(|_| bad("p"))?;
            let variant = parse_variant(v).ok_or_else(|| ParseError::Syntax {
                line,
                message: format!("unknown variant `{v}`"),
            })?;
            header = Some((n, p, variant));
            continue;
        }
        let first = content.split_whitespace().next().unwrap_or("");
        if first
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic())
            && first.parse::<f64>().is_err()
        {
            let Some(pos) = SECTIONS.iter().position(|s| s.eq_ignore_ascii_case(first)) else {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unknown section `{first}`"),
                });
            };
            if sections[pos].1.is_some() {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("duplicate section {}", SECTIONS[pos]),
                });
            }
            sections[pos].1 = Some(Section {
                line,
                values: Vec::new(),
            });
            current = Some(pos);
            let rest = content[first.len()..].trim();
            if rest.is_empty() {
                continue;
            }
            return Err(ParseError::Syntax {
                line,
                message: format!("values must start on the line after {}", SECTIONS[pos]),
            });
        }
        let Some(pos) = current else {
            return Err(ParseError::Syntax {
                line,
                message: "values before the first section".into(),
            });
        };
        let sec = sections[pos].1.as_mut().expect("current section exists");
        for tok in content.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| ParseError::Syntax {
                line,
                message: format!("`{tok}` is not a number (section {})", SECTIONS[pos]),
            })?;
            sec.values.push(v);
        }
    }
    let (n, p, variant) = header.ok_or(ParseError::MissingSection("header"))?;
    let mut need = |name: &'static str, len: usize| -> Result<Vec<f64>, ParseError> {
        let s = take(&mut sections, name).ok_or(ParseError::MissingSection(name))?;
        expect_len(name, s, len)
    };
    let setup = need("SETUP", n)?;
    let capacity = need("CAPACITY", n)?;
    let demand = need("DEMAND", n)?;
    let linear = take(&mut sections, "LINEAR")
        .map(|s| expect_len("LINEAR", s, n * n))
        .transpose()?;
    let units = take(&mut sections, "UNITS")
        .map(|s| expect_len("UNITS", s, 3))
        .transpose()?;
    let dist = take(&mut sections, "DIST");
    let flow = take(&mut sections, "FLOW");
    let dense = take(&mut sections, "QDENSE");
    let (linear, quad) = match (flow, dense) {
        (Some(_), Some(d)) => {
            return Err(ParseError::Syntax {
                line: d.line,
                message: "FLOW and QDENSE are mutually exclusive".into(),
            })
        }
        (None, None) => return Err(ParseError::MissingSection("FLOW or QDENSE")),
        (Some(f), None) => {
            let flow = expect_len("FLOW", f, n * n)?;
            let dist = expect_len(
                "DIST",
                dist.ok_or(ParseError::MissingSection("DIST"))?,
                n * n,
            )?;
            let units = units.map_or_else(CostUnits::default, |u| CostUnits {
                collection: u[0],
                transfer: u[1],
                distribution: u[2],
            });
            match linear {
                Some(l) => (l, QuadCost::factorized(n, flow, dist, units)?),
                None => {
                    let costs = build_ap_costs(n, &dist, &flow, units)?;
                    (costs.linear, costs.quad)
                }
            }
        }
        (None, Some(d)) => {
            let values = expect_len("QDENSE", d, num_pairs(n) * n * n)?;
            let linear = linear.ok_or(ParseError::MissingSection("LINEAR"))?;
            (linear, QuadCost::dense(n, values)?)
        }
    };
    Ok(Instance::new(
        n, p, variant, setup, capacity, demand, linear, quad,
    )?)
}
