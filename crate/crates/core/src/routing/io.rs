//! Plain-text full cost matrix: a line with `n`, then `n` rows of `n`
//! space-separated costs.

use crate::error::{Error, Result};
use crate::model::round_sig;
use std::io::{BufRead, Write};

pub fn write_cost_matrix<W: Write>(mut w: W, cost: &[Vec<f64>]) -> std::io::Result<()> {
    writeln!(w, "{}", cost.len())?;
    for row in cost {
        let line: Vec<String> = row.iter().map(|&c| round_sig(c).to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_cost_matrix<R: BufRead>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut lines = r.lines().map(|l| l.map_err(|e| Error::Validation(e.to_string())));
    let header = lines.next().ok_or_else(|| Error::Validation("empty cost matrix".into()))??;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("bad matrix header {header:?}")))?;
    let mut rows = Vec::with_capacity(n);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|_| Error::Validation(format!("bad cost {tok:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(Error::Shape { expected: n, got: row.len() });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Shape { expected: n, got: rows.len() });
    }
    Ok(rows)
}
