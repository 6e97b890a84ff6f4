//! MatrixMarket coordinate format for integer matrices.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseMatrix;

pub fn write<W: Write>(m: &SparseMatrix, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate integer general")?;
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(out, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}

pub fn to_string(m: &SparseMatrix) -> String {
    let mut buf = Vec::new();
    write(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

pub fn read<R: BufRead>(input: R) -> Result<SparseMatrix> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty MatrixMarket input".into()))?.map_err(parse_io)?;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket matrix coordinate") || !(h.contains("integer") || h.contains("real")) {
        return Err(Error::Parse(format!("unsupported MatrixMarket header {header:?}")));
    }
    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in lines {
        let line = line.map_err(parse_io)?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("expected three fields in {t:?}")));
        }
        let num = |s: &str| s.parse::<i64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        match size {
            None => size = Some((num(f[0])? as usize, num(f[1])? as usize, num(f[2])? as usize)),
            Some(_) => {
                let (r, c) = (num(f[0])?, num(f[1])?);
                if r < 1 || c < 1 {
                    return Err(Error::Parse(format!("indices are 1-based: {t:?}")));
                }
                triplets.push((r as usize - 1, c as usize - 1, num(f[2])?));
            }
        }
    }
    let (nr, nc, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if triplets.len() != nnz {
        return Err(Error::Parse(format!("declared {nnz} entries, found {}", triplets.len())));
    }
    SparseMatrix::from_triplets(nr, nc, &triplets)
}

fn parse_io(e: std::io::Error) -> Error {
    Error::Parse(e.to_string())
}
