//! Dense square complex matrices and their plain-text exchange format.
//!
//! Entries are stored row-major with 0-based indices. Row `j` is the output
//! port and column `i` the input port, so `get(j, i)` is the amplitude for a
//! particle entering port `i + 1` to leave through port `j + 1`.
//!
//! The text format is a header line holding `N` followed by `N` lines of `N`
//! whitespace-separated entries written as `re+imj`:
//!
//! ```text
//! 2
//! 0.7071067811865476+0j 0.7071067811865476+0j
//! 0.7071067811865476+0j -0.7071067811865476+0j
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    /// Builds a matrix entry by entry from a closure of `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for i in 0..dim {
                entries.push(f(j, i));
            }
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let dim = diag.len();
        Self::from_fn(dim, |j, i| if j == i { diag[j] } else { Complex64::new(0.0, 0.0) })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    /// Returns a copy with a single entry replaced.
    pub fn with_entry(&self, row: usize, col: usize, value: Complex64) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries[row * self.dim + col] = value;
        Self::new(self.dim, entries)
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                let a = self.get(j, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..n {
                    out[j * n + i] += a * rhs.get(k, i);
                }
            }
        }
        Self::new(n, out)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|idx| self.get(idx % n, idx / n)).collect();
        Self { dim: n, entries }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|idx| self.get(idx % n, idx / n).conj()).collect();
        Self { dim: n, entries }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max-norm of `M†M - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(k, a).conj() * self.get(k, b);
                }
                if a == b {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Renders the matrix in the text exchange format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim);
        for j in 0..self.dim {
            let line: Vec<String> = self.row(j).iter().map(|z| format_complex(*z)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension header".into(),
        })?;
        let dim: usize = header.parse().map_err(|_| Error::Parse {
            line: header_line,
            msg: format!("bad dimension {header:?}"),
        })?;
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        let mut rows = 0;
        for (line, content) in lines {
            if rows == dim {
                return Err(Error::Parse {
                    line,
                    msg: "trailing data after the last row".into(),
                });
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != dim {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {dim} entries, found {}", tokens.len()),
                });
            }
            for tok in tokens {
                entries.push(parse_complex(tok).map_err(|msg| Error::Parse { line, msg })?);
            }
            rows += 1;
        }
        if rows != dim {
            return Err(Error::Parse {
                line: header_line,
                msg: format!("expected {dim} rows, found {rows}"),
            });
        }
        Self::new(dim, entries)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ComplexMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

/// Shortest representation that parses back to the same `f64`.
///
/// Integral values print without a fractional part (`1`, `-2`); everything
/// else uses Rust's round-trip formatting, which never exceeds 17
/// significant digits. Negative zero prints as `0`.
pub fn format_real(x: f64) -> String {
    let x = x + 0.0;
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let im = z.im + 0.0;
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", format_real(z.re), sign, format_real(im.abs()))
}

/// Parses `re`, `re±imj` or `±imj`.
pub fn parse_complex(tok: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("malformed complex entry {tok:?}");
    let Some(body) = tok.strip_suffix('j') else {
        let re: f64 = tok.parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, 0.0));
    };
    // The real/imaginary split is the last sign that is neither leading nor
    // part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (
            body[..k].parse::<f64>().map_err(|_| bad())?,
            parse_imag(&body[k..]).ok_or_else(bad)?,
        ),
        None => (0.0, parse_imag(body).ok_or_else(bad)?),
    };
    Ok(Complex64::new(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}
