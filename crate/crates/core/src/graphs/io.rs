//! Plain-text adjacency format.
//!
//! ```text
//! 3          # node count
//! 1 2        # edge 1 -> 2, weight 1
//! 1 3 0.5    # edge 1 -> 3, weight 0.5
//! ```
//!
//! Nodes are 1-indexed and an edge `i j w` sets `A[j][i] = w`. Text after
//! `#` is ignored.

use std::fmt::Write;

use crate::densela::Matrix;
use crate::error::{Error, Result};

pub fn read_adjacency(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| Error::Parse("empty adjacency file".into()))?;
    let n: usize =
        header.parse().map_err(|_| Error::Parse(format!("line {line_no}: expected node count, got '{header}'")))?;
    if n == 0 || n > super::MAX_SIZE {
        return Err(Error::Parse(format!("line {line_no}: node count {n} out of range")));
    }

    let mut a = Matrix::zeros(n, n);
    let mut seen = vec![false; n * n];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse(format!("line {line_no}: expected 'i j [weight]'")));
        }
        let node = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                _ => Err(Error::Parse(format!("line {line_no}: node '{s}' not in 1..={n}"))),
            }
        };
        let from = node(fields[0])?;
        let to = node(fields[1])?;
        let weight = match fields.get(2) {
            None => 1.0,
            Some(w) => match w.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => return Err(Error::Parse(format!("line {line_no}: bad weight '{w}'"))),
            },
        };
        let slot = to * n + from;
        if seen[slot] {
            return Err(Error::Parse(format!("line {line_no}: duplicate edge {} -> {}", from + 1, to + 1)));
        }
        seen[slot] = true;
        a[(to, from)] = weight;
    }
    Ok(a)
}

/// Serializes every nonzero entry as an edge, ordered by source then target.
/// Unit weights are omitted.
pub fn write_adjacency(a: &Matrix) -> Result<String> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square adjacency".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    let mut out = format!("{n}\n");
    for from in 0..n {
        for to in 0..n {
            let w = a[(to, from)];
            if w == 0.0 {
                continue;
            }
            if w == 1.0 {
                writeln!(out, "{} {}", from + 1, to + 1).unwrap();
            } else {
                writeln!(out, "{} {} {:?}", from + 1, to + 1, w).unwrap();
            }
        }
    }
    Ok(out)
}
