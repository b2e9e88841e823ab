//! Plain-text LP format writer (CPLEX LP dialect) for debugging models with
//! external solvers. Columns are named `x<j>`, rows `r<i>`.

use core::fmt::{self, Write};

use super::{LpModel, ObjSense, RowSense};

fn write_terms<W: Write>(out: &mut W, terms: impl Iterator<Item = (usize, f64)>) -> fmt::Result {
    let mut first = true;
    for (j, a) in terms {
        if a == 0.0 {
            continue;
        }
        if first {
            if a < 0.0 {
                write!(out, "- ")?;
            }
        } else if a < 0.0 {
            write!(out, " - ")?;
        } else {
            write!(out, " + ")?;
        }
        write!(out, "{} x{}", a.abs(), j)?;
        first = false;
    }
    if first {
        write!(out, "0 x0")?;
    }
    Ok(())
}

pub fn write_lp<W: Write>(model: &LpModel, out: &mut W) -> fmt::Result {
    match model.sense() {
        ObjSense::Minimize => writeln!(out, "Minimize")?,
        ObjSense::Maximize => writeln!(out, "Maximize")?,
    }
    write!(out, " obj: ")?;
    write_terms(
        out,
        model.cols().iter().enumerate().map(|(j, c)| (j, c.cost)),
    )?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for (i, row) in model.rows().iter().enumerate() {
        write!(out, " r{i}: ")?;
        write_terms(out, row.coeffs.iter().copied())?;
        let op = match row.sense {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        };
        writeln!(out, " {op} {}", row.rhs)?;
    }
    writeln!(out, "Bounds")?;
    for (j, c) in model.cols().iter().enumerate() {
        match (c.lower.is_finite(), c.upper.is_finite()) {
            (true, true) if c.lower == c.upper => writeln!(out, " x{j} = {}", c.lower)?,
            (true, true) => writeln!(out, " {} <= x{j} <= {}", c.lower, c.upper)?,
            (true, false) => writeln!(out, " x{j} >= {}", c.lower)?,
            (false, true) => writeln!(out, " -inf <= x{j} <= {}", c.upper)?,
            (false, false) => writeln!(out, " x{j} free")?,
        }
    }
    writeln!(out, "End")
}
