use std::io::Write;

use num_complex::Complex64;

use crate::disc::{AutomorphismFlow, DiscPoint};
use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 5] = ["t", "re_z0", "im_z0", "re_zt", "im_zt"];

/// Writes one CSV row `(t, z0, φ_t(z0))` per time and starting point.
pub fn emit_flow_trace<W: Write>(flow: &AutomorphismFlow, z_list: &[DiscPoint], t_grid: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(TRACE_HEADER).map_err(io)?;
    for &z in z_list {
        for &t in t_grid {
            let zt: Complex64 = flow.at(t).map(z.value());
            let z0 = z.value();
            w.serialize((t, z0.re, z0.im, zt.re, zt.im)).map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `n` evenly spaced times covering `[t0, t1]`.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect(),
    }
}
