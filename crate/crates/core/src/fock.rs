//! Output occupation configurations and exact scattering amplitudes for one
//! particle entering each input port.
//!
//! Bosonic amplitudes are permanents of the transition matrix with row `j`
//! repeated `n_j` times, divided by `√(Π n_j!)` so that they refer to
//! normalized Fock states. Fermionic amplitudes are determinants; Pauli
//! exclusion leaves the all-ones configuration as the only reachable output.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::matrixfn::{self, SubmatrixSpec};
use crate::multiport::{ensure_unitary, EPS_UNITARY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticleStatistics {
    Boson,
    Fermion,
}

impl fmt::Display for ParticleStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Boson => "boson",
            Self::Fermion => "fermion",
        })
    }
}

/// Particle counts per output port.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockConfig(Vec<usize>);

impl FockConfig {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    /// One particle in each of `n` ports.
    pub fn coincidence(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn ports(&self) -> usize {
        self.0.len()
    }

    pub fn particles(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_coincidence(&self) -> bool {
        self.0.iter().all(|&k| k == 1)
    }

    /// `Π_j n_j!`
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(|x| x as f64).product::<f64>())
            .product()
    }

    /// Checks particle conservation against `n` ports and, for fermions,
    /// single occupancy.
    pub fn validate(&self, n: usize, stats: ParticleStatistics) -> Result<()> {
        if self.ports() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.ports(),
            });
        }
        if self.particles() != n {
            return Err(Error::ParticleCount {
                expected: n,
                found: self.particles(),
            });
        }
        if stats == ParticleStatistics::Fermion {
            if let Some((port, &count)) = self.0.iter().enumerate().find(|(_, &k)| k > 1) {
                return Err(Error::PauliViolation { port: port + 1, count });
            }
        }
        Ok(())
    }
}

/// Space-separated occupations, e.g. `2 0`.
impl fmt::Display for FockConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Dimension limits applied before any exponential-cost evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest boson port count for [`full_distribution_with`].
    pub distribution: usize,
    /// Largest boson port count for [`coincidence_probability_with`].
    pub coincidence: usize,
    /// Largest dimension handed to the permanent kernels.
    pub permanent: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            distribution: 12,
            coincidence: 16,
            permanent: matrixfn::DEFAULT_PERMANENT_CAP,
        }
    }
}

impl Caps {
    /// Lifts every cap to what the kernels can represent.
    pub fn forced() -> Self {
        Self {
            distribution: matrixfn::MAX_PERMANENT_DIM,
            coincidence: matrixfn::MAX_PERMANENT_DIM,
            permanent: matrixfn::MAX_PERMANENT_DIM,
        }
    }
}

/// All reachable output configurations in descending lexicographic order.
///
/// Bosons reach every weak composition of `n` into `n` parts; fermions only
/// reach the all-ones vector.
pub fn enumerate_configs(n: usize, stats: ParticleStatistics) -> Vec<FockConfig> {
    match stats {
        ParticleStatistics::Fermion => vec![FockConfig::coincidence(n)],
        ParticleStatistics::Boson => {
            let mut out = Vec::new();
            let mut current = Vec::with_capacity(n);
            compositions(n, n, &mut current, &mut out);
            out
        }
    }
}

fn compositions(remaining: usize, parts: usize, current: &mut Vec<usize>, out: &mut Vec<FockConfig>) {
    if parts == 1 {
        current.push(remaining);
        out.push(FockConfig(current.clone()));
        current.pop();
        return;
    }
    for first in (0..=remaining).rev() {
        current.push(first);
        compositions(remaining - first, parts - 1, current, out);
        current.pop();
    }
}

/// Amplitude of the normalized output Fock state `config`.
pub fn amplitude(u: &ComplexMatrix, config: &FockConfig, stats: ParticleStatistics) -> Result<Complex64> {
    config.validate(u.dim(), stats)?;
    ensure_unitary(u, EPS_UNITARY)?;
    amplitude_unchecked(u, config, stats, Caps::default().permanent)
}

fn amplitude_unchecked(
    u: &ComplexMatrix,
    config: &FockConfig,
    stats: ParticleStatistics,
    permanent_cap: usize,
) -> Result<Complex64> {
    match stats {
        ParticleStatistics::Boson => {
            let spec = SubmatrixSpec::new(u.clone(), config.occupations().to_vec())?;
            let perm = matrixfn::permanent_of_spec_capped(&spec, permanent_cap)?;
            Ok(perm / config.factorial_product().sqrt())
        }
        ParticleStatistics::Fermion => {
            if config.is_coincidence() {
                Ok(matrixfn::determinant(u))
            } else {
                Ok(Complex64::new(0.0, 0.0))
            }
        }
    }
}

/// `perm U` for bosons or `det U` for fermions: the amplitude of one particle
/// in every output port.
pub fn coincidence_amplitude(u: &ComplexMatrix, stats: ParticleStatistics) -> Result<Complex64> {
    coincidence_amplitude_with(u, stats, &Caps::default())
}

pub fn coincidence_amplitude_with(u: &ComplexMatrix, stats: ParticleStatistics, caps: &Caps) -> Result<Complex64> {
    ensure_unitary(u, EPS_UNITARY)?;
    match stats {
        ParticleStatistics::Boson => {
            let n = u.dim();
            if n > caps.coincidence {
                return Err(Error::OverCap {
                    dim: n,
                    cap: caps.coincidence,
                });
            }
            matrixfn::permanent_capped(u, caps.permanent)
        }
        ParticleStatistics::Fermion => Ok(matrixfn::determinant(u)),
    }
}

/// Probability that every output port registers exactly one particle.
pub fn coincidence_probability(u: &ComplexMatrix, stats: ParticleStatistics) -> Result<f64> {
    coincidence_probability_with(u, stats, &Caps::default())
}

pub fn coincidence_probability_with(u: &ComplexMatrix, stats: ParticleStatistics, caps: &Caps) -> Result<f64> {
    coincidence_amplitude_with(u, stats, caps).map(|a| a.norm_sqr())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionEntry {
    pub config: FockConfig,
    pub probability: f64,
    pub amplitude: Complex64,
}

/// Exact output statistics of one scattering run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputDistribution {
    n: usize,
    stats: ParticleStatistics,
    entries: Vec<DistributionEntry>,
}

impl OutputDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stats(&self) -> ParticleStatistics {
        self.stats
    }

    /// Entries in enumeration order.
    pub fn entries(&self) -> &[DistributionEntry] {
        &self.entries
    }

    pub fn probability(&self, config: &FockConfig) -> Option<f64> {
        self.entries.iter().find(|e| &e.config == config).map(|e| e.probability)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

pub fn full_distribution(u: &ComplexMatrix, stats: ParticleStatistics) -> Result<OutputDistribution> {
    full_distribution_with(u, stats, &Caps::default())
}

/// Probabilities of every reachable configuration. Amplitudes are evaluated
/// in parallel; entries keep the enumeration order.
pub fn full_distribution_with(u: &ComplexMatrix, stats: ParticleStatistics, caps: &Caps) -> Result<OutputDistribution> {
    let n = u.dim();
    if stats == ParticleStatistics::Boson && n > caps.distribution {
        return Err(Error::OverCap {
            dim: n,
            cap: caps.distribution,
        });
    }
    ensure_unitary(u, EPS_UNITARY)?;
    let entries = enumerate_configs(n, stats)
        .into_par_iter()
        .map(|config| {
            let amplitude = amplitude_unchecked(u, &config, stats, caps.permanent)?;
            Ok(DistributionEntry {
                probability: amplitude.norm_sqr(),
                config,
                amplitude,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OutputDistribution { n, stats, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixfn::reference::naive_permanent;
    use crate::multiport::{build_dft, random_unitary};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use ParticleStatistics::{Boson, Fermion};

    fn cfg(v: &[usize]) -> FockConfig {
        FockConfig::new(v.to_vec())
    }

    #[test]
    fn config_enumeration() {
        assert_eq!(enumerate_configs(2, Boson), vec![cfg(&[2, 0]), cfg(&[1, 1]), cfg(&[0, 2])]);
        assert_eq!(enumerate_configs(2, Fermion), vec![cfg(&[1, 1])]);
        assert_eq!(enumerate_configs(1, Boson), vec![cfg(&[1])]);
        let three = enumerate_configs(3, Boson);
        assert_eq!(three.len(), 10);
        assert_eq!(three.first(), Some(&cfg(&[3, 0, 0])));
        assert_eq!(three.last(), Some(&cfg(&[0, 0, 3])));
    }

    #[test]
    fn enumeration_is_sorted_complete_and_unique() {
        for n in 1..=7usize {
            let configs = enumerate_configs(n, Boson);
            // C(2n-1, n-1)
            let expected = (1..n).fold(1u64, |acc, k| acc * (n + k) as u64 / k as u64);
            assert_eq!(configs.len() as u64, expected, "n={n}");
            assert!(configs.windows(2).all(|w| w[0] > w[1]));
            assert!(configs.iter().all(|c| c.particles() == n && c.ports() == n));
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(cfg(&[1, 1]).validate(2, Fermion), Ok(()));
        assert_eq!(
            cfg(&[2, 0]).validate(2, Fermion),
            Err(Error::PauliViolation { port: 1, count: 2 })
        );
        assert_eq!(
            cfg(&[1, 1, 0]).validate(2, Boson),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
        assert_eq!(
            cfg(&[2, 1]).validate(2, Boson),
            Err(Error::ParticleCount { expected: 2, found: 3 })
        );
        assert_eq!(cfg(&[3, 0, 1]).to_string(), "3 0 1");
    }

    #[test]
    fn two_port_amplitudes() {
        let u = build_dft(2).unwrap();
        assert_eq!(amplitude(&u, &cfg(&[1, 1]), Boson).unwrap().norm(), 0.0);
        let bunched = amplitude(&u, &cfg(&[2, 0]), Boson).unwrap();
        assert!((bunched - Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let other = amplitude(&u, &cfg(&[0, 2]), Boson).unwrap();
        assert!((other + bunched).norm() < 1e-15);
        let fermion = amplitude(&u, &cfg(&[1, 1]), Fermion).unwrap();
        assert!((fermion.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn amplitude_errors() {
        let u = build_dft(2).unwrap();
        assert!(matches!(
            amplitude(&u, &cfg(&[1, 1, 1]), Boson),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            amplitude(&u, &cfg(&[2, 0]), Fermion),
            Err(Error::PauliViolation { .. })
        ));
        let ones = ComplexMatrix::new(2, vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(
            amplitude(&ones, &cfg(&[1, 1]), Boson),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            coincidence_probability(&ones, Fermion),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            full_distribution(&ones, Boson),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn coincidence_cases() {
        assert!(coincidence_probability(&build_dft(4).unwrap(), Boson).unwrap() <= 1e-18);
        let p3 = coincidence_probability(&build_dft(3).unwrap(), Boson).unwrap();
        assert!((p3 - 1.0 / 3.0).abs() < 1e-10);
        let p7 = coincidence_probability(&build_dft(7).unwrap(), Fermion).unwrap();
        assert!((p7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let u = ComplexMatrix::identity(17).unwrap();
        assert_eq!(
            coincidence_probability(&u, Boson),
            Err(Error::OverCap { dim: 17, cap: 16 })
        );
        assert_eq!(coincidence_probability(&u, Fermion), Ok(1.0));
        assert_eq!(coincidence_probability_with(&u, Boson, &Caps::forced()), Ok(1.0));
        let u13 = ComplexMatrix::identity(13).unwrap();
        assert_eq!(full_distribution(&u13, Boson), Err(Error::OverCap { dim: 13, cap: 12 }));
        assert_eq!(full_distribution(&u13, Fermion).unwrap().entries().len(), 1);
    }

    #[test]
    fn two_port_distributions() {
        let u = build_dft(2).unwrap();
        let d = full_distribution(&u, Boson).unwrap();
        let probs: Vec<f64> = d.entries().iter().map(|e| e.probability).collect();
        assert!((probs[0] - 0.5).abs() < 1e-15);
        assert_eq!(probs[1], 0.0);
        assert!((probs[2] - 0.5).abs() < 1e-15);
        let f = full_distribution(&u, Fermion).unwrap();
        assert_eq!(f.entries().len(), 1);
        assert!((f.entries()[0].probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_has_no_mixing() {
        let d = full_distribution(&ComplexMatrix::identity(3).unwrap(), Boson).unwrap();
        for e in d.entries() {
            let want = if e.config.is_coincidence() { 1.0 } else { 0.0 };
            assert_eq!(e.probability, want, "{}", e.config);
        }
    }

    #[test]
    fn three_port_dft_distribution() {
        // Frozen from brute-force permanents of the row-repeated matrices:
        // 1/3 on (1,1,1), 2/9 on each fully bunched output, 0 elsewhere.
        let u = build_dft(3).unwrap();
        let d = full_distribution(&u, Boson).unwrap();
        for e in d.entries() {
            let spec = SubmatrixSpec::new(u.clone(), e.config.occupations().to_vec()).unwrap();
            let oracle = naive_permanent(&spec.expanded()).norm_sqr() / e.config.factorial_product();
            assert!((e.probability - oracle).abs() < 1e-12);
            let want = match e.config.occupations() {
                [1, 1, 1] => 1.0 / 3.0,
                [3, 0, 0] | [0, 3, 0] | [0, 0, 3] => 2.0 / 9.0,
                _ => 0.0,
            };
            assert!((e.probability - want).abs() < 1e-12, "{}", e.config);
        }
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distributions_are_normalized() {
        let mut rng = StdRng::seed_from_u64(21);
        for n in 1..=6 {
            let u = random_unitary(n, &mut rng).unwrap();
            for stats in [Boson, Fermion] {
                let d = full_distribution(&u, stats).unwrap();
                assert!((d.total() - 1.0).abs() < 1e-10, "n={n} {stats}");
            }
        }
    }

    #[test]
    fn distribution_lookup() {
        let d = full_distribution(&build_dft(2).unwrap(), Boson).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.stats(), Boson);
        assert_eq!(d.probability(&cfg(&[1, 1])), Some(0.0));
        assert_eq!(d.probability(&cfg(&[3, 0])), None);
    }
}
