use std::fmt::{self, Write};

use super::{LinearProgram, Relation};

fn term_list(out: &mut String, coeffs: &[f64]) {
    let mut first = true;
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        if first {
            let _ = write!(out, "{} x{}", c, j);
            first = false;
        } else if c < 0.0 {
            let _ = write!(out, " - {} x{}", -c, j);
        } else {
            let _ = write!(out, " + {} x{}", c, j);
        }
    }
    if first {
        out.push('0');
    }
}

impl LinearProgram {
    /// Human-readable listing in an LP-file-like layout, for debugging.
    pub fn to_text(&self) -> String {
        let mut out = String::from("maximize\n  obj: ");
        term_list(&mut out, &self.objective);
        out.push_str("\nsubject to\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "  r{}: ", i);
            term_list(&mut out, row);
            let rel = match self.relations.get(i) {
                Some(Relation::Le) => "<=",
                Some(Relation::Eq) => "=",
                Some(Relation::Ge) => ">=",
                None => "?",
            };
            let _ = writeln!(out, " {} {}", rel, self.rhs.get(i).copied().unwrap_or(f64::NAN));
        }
        out.push_str("bounds\n");
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            let _ = writeln!(out, "  {} <= x{} <= {}", lo, j, hi);
        }
        out.push_str("end\n");
        out
    }
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
