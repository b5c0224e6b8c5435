//! CSV export of traces.

use std::io::{self, Write};

use super::trace::EnergyTrace;

pub const CSV_HEADER: &str = "t,reU1,imU1,reU2,imU2,reU3,imU3,E,cancel_resid,keiyaku_resid,err_est";

/// Shortest round-trip decimal form of a binary64.
pub fn fmt_f64(buf: &mut ryu::Buffer, v: f64) -> &str {
    if v.is_nan() {
        "NaN"
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf"
        } else {
            "-inf"
        }
    } else {
        buf.format_finite(v)
    }
}

pub fn write_trace_csv<W: Write>(trace: &EnergyTrace, mut out: W) -> io::Result<()> {
    let mut buf = ryu::Buffer::new();
    writeln!(out, "{CSV_HEADER}")?;
    for r in &trace.records {
        let vals = [
            r.t,
            r.u[0].re,
            r.u[0].im,
            r.u[1].re,
            r.u[1].im,
            r.u[2].re,
            r.u[2].im,
            r.energy,
            r.cancel_resid,
            r.keiyaku_resid,
            r.err_est,
        ];
        for (i, v) in vals.into_iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            out.write_all(fmt_f64(&mut buf, v).as_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `mode_<index>.csv`.
pub fn mode_file_name(index: usize) -> String {
    format!("mode_{index}.csv")
}
