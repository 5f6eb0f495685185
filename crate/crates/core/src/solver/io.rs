use std::io::{Read, Write};

use super::SolutionGrid;
use crate::error::{Pi2Error, Result};

pub const CSV_HEADER: [&str; 8] = ["x", "u", "ux", "uxx", "uxxx", "H1", "H2", "residual"];

/// Writes the grid with 17 significant digits per value.
pub fn write_csv<W: Write>(sol: &SolutionGrid, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for i in 0..sol.len() {
        let row = [sol.x[i], sol.u[i], sol.ux[i], sol.uxx[i], sol.uxxx[i], sol.h1[i], sol.h2[i], sol.residual[i]];
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a grid written by [`write_csv`]; `t` is not stored in the file.
pub fn read_csv<R: Read>(input: R, t: f64) -> Result<SolutionGrid> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Pi2Error::GridMismatch(format!("unexpected columns {header:?}")));
    }
    let mut sol = SolutionGrid {
        t,
        x: vec![],
        u: vec![],
        ux: vec![],
        uxx: vec![],
        uxxx: vec![],
        h1: vec![],
        h2: vec![],
        residual: vec![],
        newton_iterations: 0,
    };
    for rec in r.records() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| Pi2Error::GridMismatch(format!("`{s}`: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != 8 {
            return Err(Pi2Error::GridMismatch(format!("row with {} fields", v.len())));
        }
        for (col, val) in [
            &mut sol.x,
            &mut sol.u,
            &mut sol.ux,
            &mut sol.uxx,
            &mut sol.uxxx,
            &mut sol.h1,
            &mut sol.h2,
            &mut sol.residual,
        ]
        .into_iter()
        .zip(v)
        {
            col.push(val);
        }
    }
    if sol.len() < 2 {
        return Err(Pi2Error::GridMismatch("fewer than two rows".into()));
    }
    Ok(sol)
}
