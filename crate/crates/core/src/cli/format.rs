//! CSV formatting shared by the subcommands: '.' decimal separator,
//! 17 significant digits, LF line endings.

use std::io::{self, Write};

use nalgebra::DMatrix;

/// A float with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_row<W: Write + ?Sized>(out: &mut W, fields: &[String]) -> io::Result<()> {
    out.write_all(fields.join(",").as_bytes())?;
    out.write_all(b"\n")
}

pub fn write_header<W: Write + ?Sized>(out: &mut W, names: &[&str]) -> io::Result<()> {
    out.write_all(names.join(",").as_bytes())?;
    out.write_all(b"\n")
}

/// Rows `label,row,c0..c{k−1}` for one k × k block.
pub fn write_block<W: Write + ?Sized>(out: &mut W, label: &str, m: &DMatrix<f64>) -> io::Result<()> {
    for i in 0..m.nrows() {
        let mut fields = vec![label.to_string(), i.to_string()];
        fields.extend(m.row(i).iter().map(|v| num(*v)));
        write_row(out, &fields)?;
    }
    Ok(())
}

pub fn block_header(k: usize) -> Vec<String> {
    let mut names = vec!["block".to_string(), "row".to_string()];
    names.extend((0..k).map(|j| format!("c{j}")));
    names
}
