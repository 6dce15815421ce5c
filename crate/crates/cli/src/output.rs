//! CSV helpers shared by the subcommands.

use std::io::Write;

/// 17 significant digits, enough to round-trip an f64. Negative zero is
/// printed as zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}
