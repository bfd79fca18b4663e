use std::io::{Read, Write};

use crate::invariants::{Signature, VertexInvariants};

pub const HEADER: [&str; 4] = ["vertex", "kappa", "kappa_bar", "tau"];

/// One row per vertex at full precision.
pub fn write_signature_csv<W: Write>(writer: W, signature: &Signature) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    for (j, e) in signature.entries.iter().enumerate() {
        let vertex = j as isize + signature.offset;
        w.write_record([vertex.to_string(), e.kappa.to_string(), e.kappa_bar.to_string(), e.tau.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_signature_csv`]. The result is marked cyclic with the
/// offset of the first row.
pub fn read_signature_csv<R: Read>(reader: R) -> Result<Signature, csv::Error> {
    let mut r = csv::Reader::from_reader(reader);
    let mut entries = Vec::new();
    let mut offset = None;
    for row in r.deserialize::<(isize, f64, f64, f64)>() {
        let (v, kappa, kappa_bar, tau) = row?;
        offset.get_or_insert(v);
        entries.push(VertexInvariants::new(kappa, kappa_bar, tau));
    }
    Ok(Signature { entries, cyclic: true, offset: offset.unwrap_or(0) })
}

/// Human-readable table rounded to four decimals.
pub fn format_signature_table(signature: &Signature) -> String {
    let mut out = format!("{:>6} {:>12} {:>12} {:>12}\n", "vertex", "kappa", "kappa_bar", "tau");
    for (j, e) in signature.entries.iter().enumerate() {
        out.push_str(&format!("{:>6} {:>12.4} {:>12.4} {:>12.4}\n", j as isize + signature.offset, e.kappa, e.kappa_bar, e.tau));
    }
    out
}
