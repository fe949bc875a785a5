//! Plain-text CSV export of grid data, 12 significant digits.

use super::{Grid1D, GridWavefunction, WignerGrid};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::io::{BufRead, Write};

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("write failed: {e}"))
}

/// `# n,dq,center` followed by `q,re,im` rows (one-mode), or
/// `# n1,dq1,c1,n2,dq2,c2` followed by `q1,q2,re,im` rows (two-mode).
pub fn write_wavefunction(psi: &GridWavefunction, out: &mut impl Write) -> Result<()> {
    let header: Vec<String> =
        psi.grids().iter().flat_map(|g| [g.n().to_string(), num(g.dq()), num(g.center())]).collect();
    writeln!(out, "# {}", header.join(",")).map_err(io_err)?;
    let points: Vec<Vec<f64>> = psi.grids().iter().map(|g| g.points()).collect();
    for (flat, v) in psi.values().iter().enumerate() {
        let idx = psi.unravel(flat);
        let mut row: Vec<String> = idx.iter().enumerate().map(|(m, &i)| num(points[m][i])).collect();
        row.push(num(v.re));
        row.push(num(v.im));
        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
    }
    Ok(())
}

fn parse_err(line: usize, what: &str) -> Error {
    Error::InvalidParameter(format!("line {line}: {what}"))
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| parse_err(line, &format!("not a number: {s:?}")))
}

/// Reads the format written by `write_wavefunction`.
pub fn read_wavefunction(input: impl BufRead) -> Result<GridWavefunction> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header.map_err(io_err)?;
    let fields = header.strip_prefix("# ").ok_or_else(|| parse_err(1, "missing `# ` header"))?;
    let fields: Vec<&str> = fields.split(',').collect();
    if !fields.len().is_multiple_of(3) || fields.is_empty() {
        return Err(parse_err(1, "header must hold n,dq,center per mode"));
    }
    let mut grids = Vec::new();
    for chunk in fields.chunks(3) {
        let n: usize = chunk[0].trim().parse().map_err(|_| parse_err(1, "bad point count"))?;
        grids.push(Grid1D::new(n, parse_f64(chunk[1], 1)?, parse_f64(chunk[2], 1)?)?);
    }
    let rank = grids.len();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != rank + 2 {
            return Err(parse_err(i + 1, &format!("expected {} columns", rank + 2)));
        }
        values.push(C64::new(parse_f64(cols[rank], i + 1)?, parse_f64(cols[rank + 1], i + 1)?));
    }
    GridWavefunction::new(grids, values)
}

/// `q,p,w` rows.
pub fn write_wigner(w: &WignerGrid, out: &mut impl Write) -> Result<()> {
    writeln!(out, "q,p,w").map_err(io_err)?;
    let qs = w.q.points();
    let ps = w.p.points();
    for (i, q) in qs.iter().enumerate() {
        for (k, p) in ps.iter().enumerate() {
            writeln!(out, "{},{},{}", num(*q), num(*p), num(w.get(i, k))).map_err(io_err)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_mode_layout() {
        let g = Grid1D::with_extent(16, 4.0).unwrap();
        let psi = GridWavefunction::from_fn_1d(g, |q| C64::new(q, -q));
        let mut buf = Vec::new();
        write_wavefunction(&psi, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# 16,5.00000000000e-1,0.00000000000e0");
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[1], "-4.00000000000e0,-4.00000000000e0,4.00000000000e0");
    }

    #[test]
    fn two_mode_layout_is_deterministic() {
        let g = Grid1D::with_extent(16, 4.0).unwrap();
        let psi = GridWavefunction::from_fn_2d(g, g, |a, b| C64::new(a * b, 0.0));
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_wavefunction(&psi, &mut a).unwrap();
        write_wavefunction(&psi, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# 16,"));
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 4);
        assert_eq!(text.lines().count(), 257);
    }

    #[test]
    fn round_trip() {
        let g = Grid1D::with_extent(32, 4.0).unwrap();
        let psi = GridWavefunction::from_fn_2d(g, g, |a, b| C64::new((-(a * a + b)).exp(), a - b));
        let mut buf = Vec::new();
        write_wavefunction(&psi, &mut buf).unwrap();
        let back = read_wavefunction(buf.as_slice()).unwrap();
        assert_eq!(back.shape(), psi.shape());
        for (x, y) in back.values().iter().zip(psi.values()) {
            assert!((x - y).norm() <= 1e-11 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(read_wavefunction("# 16,0.5,0\n1,2\n".as_bytes()).is_err());
        assert!(read_wavefunction("16,0.5,0\n".as_bytes()).is_err());
    }
}
