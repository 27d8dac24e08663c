use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::GridInstance;
use crate::error::{Error, Result};
use crate::numfmt::sig;

/// Significant digits of model coefficients.
const DIGITS: usize = 6;
/// Continuation lines start once a row would pass this width.
const LINE_WIDTH: usize = 100;

/// Variable and row counts of an exported model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MipCounts {
    pub x_vars: usize,
    pub y_vars: usize,
    pub z_vars: usize,
    pub u_vars: usize,
    /// One row per customer: served exactly once.
    pub assignment_rows: usize,
    /// `Y_ij ≤ X_j`.
    pub linking_rows: usize,
    pub in_degree_rows: usize,
    pub out_degree_rows: usize,
    pub mtz_rows: usize,
    /// Depot forced open.
    pub depot_rows: usize,
}

impl MipCounts {
    pub fn rows(&self) -> usize {
        self.assignment_rows
            + self.linking_rows
            + self.in_degree_rows
            + self.out_degree_rows
            + self.mtz_rows
            + self.depot_rows
    }
}

/// Accumulates `coef name` terms and wraps long rows.
struct Row {
    text: String,
    line_start: usize,
}

impl Row {
    fn new(label: &str) -> Self {
        let text = format!(" {label}:");
        Self { text, line_start: 0 }
    }

    fn term(&mut self, coef: f64, var: &str) {
        let first = self.text.ends_with(':');
        let sign = if coef < 0.0 {
            "-"
        } else if first {
            ""
        } else {
            "+"
        };
        let mag = coef.abs();
        let body = if mag == 1.0 {
            var.to_string()
        } else {
            format!("{} {var}", sig(mag, DIGITS))
        };
        let piece = if sign.is_empty() {
            format!(" {body}")
        } else {
            format!(" {sign} {body}")
        };
        if self.text.len() - self.line_start + piece.len() > LINE_WIDTH {
            self.text.push_str("\n  ");
            self.line_start = self.text.len() - 2;
        }
        self.text.push_str(&piece);
    }

    fn expression(mut self) -> String {
        self.text.push('\n');
        self.text
    }

    fn finish(mut self, rel: &str, rhs: f64) -> String {
        self.text.push_str(&format!(" {rel} {}\n", sig(rhs, DIGITS)));
        self.text
    }
}

/// Writes the grid location-routing model in LP format.
///
/// Rows: objective over facility, assignment and tour costs; one assignment
/// row per customer; `Y_ij ≤ X_j`; tour in- and out-degree equal to `X`;
/// Miller–Tucker–Zemlin rows `u_i − u_j + M² Z_ij ≤ M² − 1` for every
/// successor `j` other than the depot; the depot is open with `u = 0`.
pub fn write_mip<W: Write>(inst: &GridInstance, w: &mut W, preamble: &[String]) -> io::Result<MipCounts> {
    let n = inst.len();
    let o = inst.depot;
    let big = (inst.m * inst.m) as f64;
    let mut counts = MipCounts {
        x_vars: n,
        y_vars: n * n,
        z_vars: n * n,
        u_vars: n,
        ..MipCounts::default()
    };
    for line in preamble {
        writeln!(w, "\\ {line}")?;
    }
    writeln!(
        w,
        "\\ {}x{} grid, {} metric, depot {o}; Y_i_j sends customer i to facility j, Z_i_j is tour arc i -> j",
        inst.m,
        inst.m,
        inst.metric.name()
    )?;

    writeln!(w, "Minimize")?;
    let mut obj = Row::new("obj");
    for i in 0..n {
        obj.term(inst.facility_cost, &format!("X_{i}"));
    }
    for (rate, v) in [(inst.outbound_rate, "Y"), (inst.inbound_rate, "Z")] {
        for i in 0..n {
            for j in 0..n {
                let d = inst.distance(i, j);
                if d > 0.0 {
                    obj.term(rate * d, &format!("{v}_{i}_{j}"));
                }
            }
        }
    }
    w.write_all(obj.expression().as_bytes())?;

    writeln!(w, "Subject To")?;
    writeln!(w, "\\ each customer is served exactly once (the single-assignment and single-sourcing rows coincide; written once)")?;
    for i in 0..n {
        let mut row = Row::new(&format!("assign_{i}"));
        for j in 0..n {
            row.term(1.0, &format!("Y_{i}_{j}"));
        }
        w.write_all(row.finish("=", 1.0).as_bytes())?;
        counts.assignment_rows += 1;
    }
    for i in 0..n {
        for j in 0..n {
            let mut row = Row::new(&format!("link_{i}_{j}"));
            row.term(1.0, &format!("Y_{i}_{j}"));
            row.term(-1.0, &format!("X_{j}"));
            w.write_all(row.finish("<=", 0.0).as_bytes())?;
            counts.linking_rows += 1;
        }
    }
    for j in 0..n {
        let mut row = Row::new(&format!("in_{j}"));
        for i in 0..n {
            row.term(1.0, &format!("Z_{i}_{j}"));
        }
        row.term(-1.0, &format!("X_{j}"));
        w.write_all(row.finish("=", 0.0).as_bytes())?;
        counts.in_degree_rows += 1;
    }
    for i in 0..n {
        let mut row = Row::new(&format!("out_{i}"));
        for j in 0..n {
            row.term(1.0, &format!("Z_{i}_{j}"));
        }
        row.term(-1.0, &format!("X_{i}"));
        w.write_all(row.finish("=", 0.0).as_bytes())?;
        counts.out_degree_rows += 1;
    }
    writeln!(
        w,
        "\\ subtour elimination; with i = j the row forbids a self-loop away from the depot"
    )?;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != o) {
            let mut row = Row::new(&format!("mtz_{i}_{j}"));
            if i != j {
                row.term(1.0, &format!("u_{i}"));
                row.term(-1.0, &format!("u_{j}"));
            }
            row.term(big, &format!("Z_{i}_{j}"));
            w.write_all(row.finish("<=", big - 1.0).as_bytes())?;
            counts.mtz_rows += 1;
        }
    }
    let mut row = Row::new("depot");
    row.term(1.0, &format!("X_{o}"));
    w.write_all(row.finish("=", 1.0).as_bytes())?;
    counts.depot_rows += 1;

    writeln!(w, "Bounds")?;
    for i in 0..n {
        let hi = if i == o { 0.0 } else { big - 1.0 };
        writeln!(w, " 0 <= u_{i} <= {}", sig(hi, DIGITS))?;
    }
    writeln!(w, "Binaries")?;
    let mut names: Vec<String> = (0..n).map(|i| format!("X_{i}")).collect();
    for v in ["Y", "Z"] {
        for i in 0..n {
            names.extend((0..n).map(|j| format!("{v}_{i}_{j}")));
        }
    }
    let mut line = String::new();
    for name in names {
        if line.len() + name.len() + 1 > LINE_WIDTH {
            writeln!(w, "{line}")?;
            line.clear();
        }
        line.push(' ');
        line.push_str(&name);
    }
    if !line.is_empty() {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "End")?;
    Ok(counts)
}

/// Writes the model to `path`.
pub fn export_mip(inst: &GridInstance, path: &Path, preamble: &[String]) -> Result<MipCounts> {
    inst.validate()?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let counts = write_mip(inst, &mut w, preamble).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(counts)
}
