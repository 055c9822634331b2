//! Permanent and determinant kernels.
//!
//! The permanent uses Ryser's inclusion-exclusion formula walked in Gray-code
//! order, so consecutive subsets differ by one column and each step costs
//! O(N). The outer sum is accumulated with Neumaier compensation: for the
//! DFT at even N the exact answer is a total cancellation, and uncompensated
//! rounding would swamp it.
//!
//! Large instances split the Gray-code index range into a fixed number of
//! contiguous chunks that are evaluated in parallel and reduced in chunk
//! order. The chunk count depends only on N, so results are bit-identical
//! whatever the worker count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::multiport::build_lambda;

/// Default largest dimension accepted by the permanent kernels.
pub const DEFAULT_PERMANENT_CAP: usize = 24;

/// Widest instance the 64-bit subset masks can represent.
pub const MAX_PERMANENT_DIM: usize = 63;

/// Per-dimension scale of the vanishing tolerance.
pub const VANISHING_TOL_PER_DIM: f64 = 1e-9;

const PARALLEL_MIN_DIM: usize = 14;
const PARALLEL_CHUNKS: u64 = 64;

/// A permanent is treated as zero when `|perm| ≤ 1e-9 · n`.
pub fn vanishing_threshold(n: usize) -> f64 {
    VANISHING_TOL_PER_DIM * n as f64
}

pub fn is_vanishing(value: Complex64, n: usize) -> bool {
    value.norm() <= vanishing_threshold(n)
}

/// Neumaier-compensated complex sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    re: f64,
    re_err: f64,
    im: f64,
    im_err: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_err, z.re);
        neumaier(&mut self.im, &mut self.im_err, z.im);
    }

    fn merge(&mut self, other: &CompensatedSum) {
        self.add(Complex64::new(other.re, other.im));
        self.add(Complex64::new(other.re_err, other.im_err));
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_err, self.im + self.im_err)
    }
}

#[inline]
fn neumaier(sum: &mut f64, err: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *err += (*sum - t) + x;
    } else {
        *err += (x - t) + *sum;
    }
    *sum = t;
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_PERMANENT_DIM);
    if n > cap {
        Err(Error::OverCap { dim: n, cap })
    } else {
        Ok(())
    }
}

/// Permanent with the default dimension cap.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    permanent_capped(m, DEFAULT_PERMANENT_CAP)
}

/// Permanent `Σ_σ Π_i M[σ(i)][i]`, rejecting dimensions above `cap`.
pub fn permanent_capped(m: &ComplexMatrix, cap: usize) -> Result<Complex64> {
    let n = m.dim();
    check_cap(n, cap)?;
    let total: u64 = 1 << n;
    let chunks = if n >= PARALLEL_MIN_DIM { PARALLEL_CHUNKS } else { 1 };
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (1 + (total - 1) * c / chunks, 1 + (total - 1) * (c + 1) / chunks))
        .collect();
    let partials: Vec<CompensatedSum> = if chunks > 1 {
        bounds.par_iter().map(|&(lo, hi)| ryser_range(m, lo, hi)).collect()
    } else {
        bounds.iter().map(|&(lo, hi)| ryser_range(m, lo, hi)).collect()
    };
    let mut acc = CompensatedSum::default();
    for p in &partials {
        acc.merge(p);
    }
    let value = acc.value();
    Ok(if n % 2 == 1 { -value } else { value })
}

/// Sum of `(-1)^{|S|} Π_r Σ_{c∈S} M[r][c]` over Gray codes `g(k)`, `k ∈ [lo, hi)`.
fn ryser_range(m: &ComplexMatrix, lo: u64, hi: u64) -> CompensatedSum {
    let n = m.dim();
    let mut acc = CompensatedSum::default();
    if lo >= hi {
        return acc;
    }
    let start = lo ^ (lo >> 1);
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    for c in (0..n).filter(|c| start >> c & 1 == 1) {
        for (r, s) in row_sums.iter_mut().enumerate() {
            *s += m.get(r, c);
        }
    }
    let mut odd = start.count_ones() % 2 == 1;
    let mut gray = start;
    for k in lo..hi {
        if k > lo {
            let c = k.trailing_zeros() as usize;
            let adding = gray >> c & 1 == 0;
            gray ^= 1 << c;
            odd = !odd;
            for (r, s) in row_sums.iter_mut().enumerate() {
                if adding {
                    *s += m.get(r, c);
                } else {
                    *s -= m.get(r, c);
                }
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        acc.add(if odd { -prod } else { prod });
    }
    acc
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .unwrap();
        let p = a[pivot * n + col];
        if p == Complex64::new(0.0, 0.0) {
            return p;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= factor * v;
            }
        }
    }
    det
}

/// A base matrix whose row `j` is repeated `row_multiplicities[j]` times,
/// with every column kept.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmatrixSpec {
    base: ComplexMatrix,
    row_multiplicities: Vec<usize>,
}

impl SubmatrixSpec {
    pub fn new(base: ComplexMatrix, row_multiplicities: Vec<usize>) -> Result<Self> {
        let n = base.dim();
        if row_multiplicities.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row_multiplicities.len(),
            });
        }
        let total: usize = row_multiplicities.iter().sum();
        if total != n {
            return Err(Error::ParticleCount { expected: n, found: total });
        }
        Ok(Self { base, row_multiplicities })
    }

    pub fn base(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn row_multiplicities(&self) -> &[usize] {
        &self.row_multiplicities
    }

    /// The explicit `N × N` matrix with repeated rows.
    pub fn expanded(&self) -> ComplexMatrix {
        let rows: Vec<Vec<Complex64>> = self
            .row_multiplicities
            .iter()
            .enumerate()
            .flat_map(|(j, &count)| std::iter::repeat_n(self.base.row(j).to_vec(), count))
            .collect();
        ComplexMatrix::from_rows(&rows).expect("multiplicities sum to the dimension")
    }
}

pub fn permanent_of_spec(spec: &SubmatrixSpec) -> Result<Complex64> {
    permanent_of_spec_capped(spec, DEFAULT_PERMANENT_CAP)
}

/// Permanent of the row-repeated matrix.
///
/// With every multiplicity equal to one this is the plain kernel. Otherwise
/// a multiplicity-aware Ryser sum runs over `0 ≤ k_j ≤ n_j`, weighting each
/// term by `Π_j C(n_j, k_j)`; its cost is `Π_j (n_j + 1)` steps instead of
/// `2^N`, which matters for strongly bunched outputs.
pub fn permanent_of_spec_capped(spec: &SubmatrixSpec, cap: usize) -> Result<Complex64> {
    let n = spec.base.dim();
    check_cap(n, cap)?;
    if spec.row_multiplicities.iter().all(|&m| m == 1) {
        return permanent_capped(&spec.base, cap);
    }

    let rows: Vec<(usize, usize)> = spec
        .row_multiplicities
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(j, &m)| (j, m))
        .collect();
    let binom = binomial_table(n);

    let mut counts = vec![0usize; rows.len()];
    let mut up = vec![true; rows.len()];
    let mut col_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut picked = 0usize;
    let mut acc = CompensatedSum::default();
    loop {
        if picked > 0 {
            let weight: f64 = rows
                .iter()
                .zip(&counts)
                .map(|(&(_, m), &k)| binom[m][k])
                .product();
            let prod: Complex64 = col_sums.iter().product();
            let term = prod * weight;
            acc.add(if picked % 2 == 1 { -term } else { term });
        }
        // Reflected mixed-radix Gray code: move the lowest digit that can
        // still travel in its direction and reverse every digit below it.
        let Some(d) = (0..rows.len()).find(|&d| {
            if up[d] {
                counts[d] < rows[d].1
            } else {
                counts[d] > 0
            }
        }) else {
            break;
        };
        for flip in up.iter_mut().take(d) {
            *flip = !*flip;
        }
        let row = spec.base.row(rows[d].0);
        if up[d] {
            counts[d] += 1;
            picked += 1;
            for (s, a) in col_sums.iter_mut().zip(row) {
                *s += a;
            }
        } else {
            counts[d] -= 1;
            picked -= 1;
            for (s, a) in col_sums.iter_mut().zip(row) {
                *s -= a;
            }
        }
    }
    let value = acc.value();
    Ok(if n % 2 == 1 { -value } else { value })
}

fn binomial_table(n: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; n + 1]; n + 1];
    for a in 0..=n {
        table[a][0] = 1.0;
        for b in 1..=a {
            table[a][b] = table[a - 1][b - 1] + if b < a { table[a - 1][b] } else { 0.0 };
        }
    }
    table
}

/// `perm Λ` in closed form: `ω_n^{n(n+1)/2} = e^{iπ(n+1)}`, i.e. `+1` for odd
/// `n` and `-1` for even `n`.
pub fn perm_lambda_parity(n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 }, 0.0))
}

/// Distance between the closed form and the kernel's `perm(Λ)`.
pub fn perm_lambda_cross_check(n: usize) -> Result<f64> {
    let closed = perm_lambda_parity(n)?;
    let computed = permanent(&build_lambda(n)?)?;
    Ok((closed - computed).norm())
}

/// Brute-force permutation sums, used to cross-check the fast kernels.
pub mod reference {
    use num_complex::Complex64;

    use crate::matrix::ComplexMatrix;

    /// Every permutation of `0..n` in lexicographic order.
    pub fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = vec![current.clone()];
        loop {
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
            out.push(current.clone());
        }
    }

    /// Parity from the cycle decomposition: `n - #cycles` transpositions.
    pub fn is_odd_permutation(perm: &[usize]) -> bool {
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = perm[k];
            }
        }
        (perm.len() - cycles) % 2 == 1
    }

    pub fn naive_permanent(m: &ComplexMatrix) -> Complex64 {
        permutations(m.dim())
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, &r)| m.get(r, i)).product::<Complex64>())
            .sum()
    }

    pub fn naive_determinant(m: &ComplexMatrix) -> Complex64 {
        permutations(m.dim())
            .iter()
            .map(|s| {
                let term: Complex64 = s.iter().enumerate().map(|(i, &r)| m.get(r, i)).product();
                if is_odd_permutation(s) {
                    -term
                } else {
                    term
                }
            })
            .sum()
    }
}
