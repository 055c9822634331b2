//! Brute-force expansion of the scattered output state.
//!
//! Every input particle `i` is sent to every output port `j` with amplitude
//! `U[j][i]`, giving `N^N` creation-operator monomials. Each monomial is put
//! into normal order by adjacent transpositions: bosonic operators commute
//! freely, fermionic ones pick up a sign per swap, and a fermionic monomial
//! holding the same operator twice vanishes. No permanent or determinant is
//! evaluated anywhere, so this module checks [`crate::fock`] independently.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{FockConfig, ParticleStatistics};
use crate::matrix::ComplexMatrix;

/// Largest port count the expansion accepts (`7^7 ≈ 8.2e5` monomials).
pub const ORACLE_MAX_DIM: usize = 7;

/// One term `coefficient · b†_{modes[0]} b†_{modes[1]} …` (0-based ports).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMonomial {
    pub modes: Vec<usize>,
    pub coefficient: Complex64,
}

impl OperatorMonomial {
    /// Sorts the operator string by adjacent swaps and returns the normal-ordered
    /// occupation together with its signed coefficient, or `None` when the
    /// monomial is zero by Pauli exclusion.
    pub fn normal_order(&self, stats: ParticleStatistics, ports: usize) -> Option<(FockConfig, Complex64)> {
        let mut modes = self.modes.clone();
        let swaps = sort_counting_swaps(&mut modes);
        let mut occupations = vec![0usize; ports];
        for &m in &modes {
            occupations[m] += 1;
        }
        let coefficient = match stats {
            ParticleStatistics::Boson => self.coefficient,
            ParticleStatistics::Fermion => {
                if modes.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                if swaps % 2 == 1 {
                    -self.coefficient
                } else {
                    self.coefficient
                }
            }
        };
        Some((FockConfig::new(occupations), coefficient))
    }
}

/// Stable bubble sort; returns the number of adjacent transpositions made.
pub fn sort_counting_swaps(seq: &mut [usize]) -> usize {
    let mut swaps = 0;
    for end in (1..seq.len()).rev() {
        for k in 0..end {
            if seq[k] > seq[k + 1] {
                seq.swap(k, k + 1);
                swaps += 1;
            }
        }
    }
    swaps
}

/// Output state in normal order, keyed by occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    n: usize,
    stats: ParticleStatistics,
    coefficients: BTreeMap<FockConfig, Complex64>,
    monomials: u64,
    annihilated: u64,
}

impl NormalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stats(&self) -> ParticleStatistics {
        self.stats
    }

    /// Number of monomials expanded; always `N^N`.
    pub fn monomials_processed(&self) -> u64 {
        self.monomials
    }

    /// Fermionic monomials dropped for holding a repeated operator.
    pub fn annihilated(&self) -> u64 {
        self.annihilated
    }

    /// Coefficient of `Π_j (b_j†)^{n_j} |0⟩`, before Fock normalization.
    pub fn raw_coefficient(&self, config: &FockConfig) -> Complex64 {
        self.coefficients.get(config).copied().unwrap_or_default()
    }

    /// Amplitude on the normalized Fock state, using `(b†)^k|0⟩ = √(k!)|k⟩`.
    pub fn amplitude(&self, config: &FockConfig) -> Complex64 {
        self.raw_coefficient(config) * config.factorial_product().sqrt()
    }

    /// Configurations with a recorded coefficient, ascending.
    pub fn configs(&self) -> impl Iterator<Item = &FockConfig> {
        self.coefficients.keys()
    }

    pub fn total_probability(&self) -> f64 {
        self.coefficients.keys().map(|c| self.amplitude(c).norm_sqr()).sum()
    }
}

pub fn expand_output_state(u: &ComplexMatrix, stats: ParticleStatistics) -> Result<NormalForm> {
    let n = u.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::OverCap {
            dim: n,
            cap: ORACLE_MAX_DIM,
        });
    }
    // Split on the first particle's output port; partial forms are merged
    // in port order so the result does not depend on scheduling.
    let partials: Vec<NormalForm> = (0..n).into_par_iter().map(|first| expand_from(u, stats, first)).collect();
    let mut merged = NormalForm {
        n,
        stats,
        coefficients: BTreeMap::new(),
        monomials: 0,
        annihilated: 0,
    };
    for p in partials {
        merged.monomials += p.monomials;
        merged.annihilated += p.annihilated;
        for (config, c) in p.coefficients {
            *merged.coefficients.entry(config).or_default() += c;
        }
    }
    Ok(merged)
}

fn expand_from(u: &ComplexMatrix, stats: ParticleStatistics, first: usize) -> NormalForm {
    let n = u.dim();
    let mut form = NormalForm {
        n,
        stats,
        coefficients: BTreeMap::new(),
        monomials: 0,
        annihilated: 0,
    };
    let mut modes = vec![0usize; n];
    modes[0] = first;
    loop {
        let coefficient = modes.iter().enumerate().map(|(i, &j)| u.get(j, i)).product();
        let monomial = OperatorMonomial {
            modes: modes.clone(),
            coefficient,
        };
        form.monomials += 1;
        match monomial.normal_order(stats, n) {
            Some((config, c)) => *form.coefficients.entry(config).or_default() += c,
            None => form.annihilated += 1,
        }
        // Odometer over particles 2..N.
        let Some(pos) = (1..n).rev().find(|&p| modes[p] + 1 < n) else {
            break;
        };
        modes[pos] += 1;
        for m in modes.iter_mut().skip(pos + 1) {
            *m = 0;
        }
    }
    form
}

/// Squared modulus of the one-particle-per-port coefficient.
pub fn coincidence_from_expansion(u: &ComplexMatrix, stats: ParticleStatistics) -> Result<f64> {
    let form = expand_output_state(u, stats)?;
    Ok(form.amplitude(&FockConfig::coincidence(u.dim())).norm_sqr())
}
