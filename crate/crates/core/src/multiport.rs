//! Transition matrices for passive multiport beam splitters.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default tolerance for accepting a matrix or 2×2 block as unitary.
pub const EPS_UNITARY: f64 = 1e-10;

/// `ω_n^k` with `ω_n = e^{+2πi/n}`.
///
/// The exponent is reduced modulo `n` first, and quarter turns come out
/// exact, so `ω_2 = -1` and `ω_4 = i` carry no rounding noise.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // Signed representative keeps the angle in (-π, π].
    let signed = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
    let (s, c) = (2.0 * PI * signed / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// The symmetric Bell multiport: `U[j][i] = ω_n^{j·i} / √n` (0-based).
pub fn build_dft(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let scale = (n as f64).recip().sqrt();
    ComplexMatrix::from_fn(n, |j, i| root_of_unity(j * i, n) * scale)
}

/// `Λ = diag(1, ω_n, ω_n², …, ω_n^{n-1})`.
pub fn build_lambda(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let diag: Vec<Complex64> = (0..n).map(|j| root_of_unity(j, n)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Diagonal phase matrix `diag(e^{iφ_1}, …)`.
pub fn phase_diagonal(phases: &[f64]) -> Result<ComplexMatrix> {
    let diag: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Moves column `i + 1` into position `i`, cyclically. For the DFT matrix
/// this reproduces `Λ·U`.
pub fn cycle_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    ComplexMatrix::from_fn(n, |j, i| m.get(j, (i + 1) % n)).expect("same shape as a valid matrix")
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.unitarity_deviation() <= tol
}

/// Fails with [`Error::NotUnitary`] unless `m` is unitary to `tol`.
pub fn ensure_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = m.unitarity_deviation();
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

/// One optical component acting on a subset of the `n` ports.
///
/// Port numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NetworkElement {
    /// A 2×2 unitary coupling port `ports.0` and port `ports.1`. The block is
    /// indexed `[out][in]` in the order of the pair.
    BeamSplitter {
        ports: (usize, usize),
        block: [[Complex64; 2]; 2],
    },
    /// Multiplies the amplitude in `port` by `e^{i·phase}`.
    PhasePlate { port: usize, phase: f64 },
}

impl NetworkElement {
    pub fn beam_splitter(p: usize, q: usize, block: [[Complex64; 2]; 2]) -> Self {
        Self::BeamSplitter { ports: (p, q), block }
    }

    /// Balanced splitter with the Hadamard block `[[1, 1], [1, -1]] / √2`.
    pub fn hadamard(p: usize, q: usize) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::beam_splitter(p, q, [[h, h], [h, -h]])
    }

    pub fn phase_plate(port: usize, phase: f64) -> Self {
        Self::PhasePlate { port, phase }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let check = |port: usize| {
            if (1..=n).contains(&port) {
                Ok(())
            } else {
                Err(Error::PortOutOfRange { port, n })
            }
        };
        match self {
            Self::BeamSplitter { ports: (p, q), block } => {
                check(*p)?;
                check(*q)?;
                if p == q {
                    return Err(Error::DuplicatePort(*p));
                }
                let m = ComplexMatrix::from_rows(&[block[0].to_vec(), block[1].to_vec()])?;
                ensure_unitary(&m, EPS_UNITARY)
            }
            Self::PhasePlate { port, phase } => {
                check(*port)?;
                if phase.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonFinitePhase)
                }
            }
        }
    }

    /// The element embedded into the `n × n` identity.
    pub fn embed(&self, n: usize) -> Result<ComplexMatrix> {
        self.validate(n)?;
        let mut entries = ComplexMatrix::identity(n)?.as_slice().to_vec();
        match self {
            Self::BeamSplitter { ports: (p, q), block } => {
                let (p, q) = (p - 1, q - 1);
                entries[p * n + p] = block[0][0];
                entries[p * n + q] = block[0][1];
                entries[q * n + p] = block[1][0];
                entries[q * n + q] = block[1][1];
            }
            Self::PhasePlate { port, phase } => {
                entries[(port - 1) * n + (port - 1)] = Complex64::from_polar(1.0, *phase);
            }
        }
        ComplexMatrix::new(n, entries)
    }
}

/// Transition matrix of a network whose elements act in list order: the
/// first element sees the particles first, so later elements multiply on
/// the left.
pub fn compose_network(n: usize, elements: &[NetworkElement]) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::identity(n)?;
    for element in elements {
        acc = element.embed(n)?.mul(&acc)?;
    }
    Ok(acc)
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    // Modified Gram-Schmidt; dividing by the (real, positive) norm matches a
    // QR with a positive diagonal.
    for a in 0..n {
        for b in 0..a {
            let (done, rest) = cols.split_at_mut(a);
            let proj: Complex64 = done[b].iter().zip(&rest[0]).map(|(q, v)| q.conj() * v).sum();
            for (v, q) in rest[0].iter_mut().zip(&done[b]) {
                *v -= proj * q;
            }
        }
        let norm = cols[a].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[a].iter_mut() {
            *v /= norm;
        }
    }
    ComplexMatrix::from_fn(n, |j, i| cols[i][j])
}
