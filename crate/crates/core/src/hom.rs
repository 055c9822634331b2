//! Parity sweeps, cyclic-symmetry checks and statistics discrimination on
//! the Bell multiport.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock::{self, Caps, ParticleStatistics};
use crate::matrix::ComplexMatrix;
use crate::matrixfn::{self, is_vanishing, vanishing_threshold};
use crate::multiport::{build_dft, build_lambda, cycle_columns, ensure_unitary, EPS_UNITARY};

/// Default upper end of a parity sweep.
pub const SWEEP_CAP: usize = 16;

/// Largest `n` accepted by [`verify_cyclic_symmetry`].
pub const CYCLIC_CHECK_CAP: usize = 12;

/// Tolerance for `Λ·U` against the column-cycled `U`.
pub const COLUMN_CYCLE_TOL: f64 = 1e-15;

/// Tolerance for the permanent identities of the cyclic-symmetry chain.
pub const PERMANENT_IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

pub(crate) fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Parts {
        re: f64,
        im: f64,
    }
    Parts { re: z.re, im: z.im }.serialize(s)
}

/// Coincidence outcome for one port count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DipReport {
    pub n: usize,
    pub stats: ParticleStatistics,
    pub coincidence_probability: f64,
    /// `perm U` for bosons, `det U` for fermions.
    #[serde(serialize_with = "serialize_complex")]
    pub permanent_or_determinant_value: Complex64,
    pub is_dip: bool,
    pub parity: Parity,
    /// Vanishing threshold applied to `|perm U|`.
    pub threshold: f64,
}

impl DipReport {
    /// Report for an arbitrary transition matrix.
    pub fn for_matrix(u: &ComplexMatrix, stats: ParticleStatistics, caps: &Caps) -> Result<Self> {
        let n = u.dim();
        let value = fock::coincidence_amplitude_with(u, stats, caps)?;
        let is_dip = stats == ParticleStatistics::Boson && is_vanishing(value, n);
        Ok(Self {
            n,
            stats,
            coincidence_probability: value.norm_sqr(),
            permanent_or_determinant_value: value,
            is_dip,
            parity: Parity::of(n),
            threshold: vanishing_threshold(n),
        })
    }
}

pub fn parity_sweep(n_min: usize, n_max: usize, stats: ParticleStatistics) -> Result<Vec<DipReport>> {
    parity_sweep_with(n_min, n_max, stats, SWEEP_CAP)
}

/// One [`DipReport`] per `n` in `n_min..=n_max` for the DFT multiport,
/// ordered by `n`.
pub fn parity_sweep_with(n_min: usize, n_max: usize, stats: ParticleStatistics, cap: usize) -> Result<Vec<DipReport>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidRange { min: n_min, max: n_max });
    }
    if n_max > cap {
        return Err(Error::OverCap { dim: n_max, cap });
    }
    let caps = Caps {
        coincidence: cap,
        permanent: cap.max(matrixfn::DEFAULT_PERMANENT_CAP),
        ..Caps::default()
    };
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| DipReport::for_matrix(&build_dft(n)?, stats, &caps))
        .collect()
}

/// Deviations measured along the `Λ·U` argument for one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicCheck {
    pub n: usize,
    /// Max entrywise `|Λ·U − U·P|` with `P` cycling columns left by one.
    pub column_cycle_deviation: f64,
    /// `|perm(Λ·U) − perm(U)|`
    pub cyclic_permanent_deviation: f64,
    /// `|perm(Λ·U) − perm(Λ)·perm(U)|`
    pub multiplicativity_deviation: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub perm_lambda: Complex64,
    /// `e^{iπ(n+1)}`, i.e. `+1` for odd and `-1` for even `n`.
    #[serde(serialize_with = "serialize_complex")]
    pub closed_form: Complex64,
    pub parity_deviation: f64,
}

impl CyclicCheck {
    pub fn passed(&self) -> bool {
        self.column_cycle_deviation <= COLUMN_CYCLE_TOL
            && self.cyclic_permanent_deviation <= PERMANENT_IDENTITY_TOL
            && self.multiplicativity_deviation <= PERMANENT_IDENTITY_TOL
            && self.parity_deviation <= PERMANENT_IDENTITY_TOL
    }
}

/// Checks that `Λ·U` is `U` with its columns cycled, that the permanent is
/// multiplicative over the diagonal factor, and that `perm Λ` matches the
/// parity closed form. Together these force `perm U = 0` for even `n`.
pub fn verify_cyclic_symmetry(n: usize) -> Result<CyclicCheck> {
    if n > CYCLIC_CHECK_CAP {
        return Err(Error::OverCap {
            dim: n,
            cap: CYCLIC_CHECK_CAP,
        });
    }
    let u = build_dft(n)?;
    let lambda = build_lambda(n)?;
    let lu = lambda.mul(&u)?;
    let column_cycle_deviation = lu.max_abs_diff(&cycle_columns(&u))?;

    let perm_u = matrixfn::permanent(&u)?;
    let perm_lu = matrixfn::permanent(&lu)?;
    let perm_lambda = matrixfn::permanent(&lambda)?;
    let closed_form = matrixfn::perm_lambda_parity(n)?;
    Ok(CyclicCheck {
        n,
        column_cycle_deviation,
        cyclic_permanent_deviation: (perm_lu - perm_u).norm(),
        multiplicativity_deviation: (perm_lu - perm_lambda * perm_u).norm(),
        perm_lambda,
        closed_form,
        parity_deviation: (perm_lambda - closed_form).norm(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Discrimination {
    ConsistentWithBoson,
    ConsistentWithFermion,
    Inconclusive,
}

/// Classifies an observed coincidence rate by comparing it with the boson
/// prediction `|perm U|²` and the fermion prediction `1`.
pub fn discriminate_statistics(u: &ComplexMatrix, observed_coincidence: f64, tol: f64) -> Result<Discrimination> {
    if !(0.0..=1.0).contains(&observed_coincidence) {
        return Err(Error::InvalidProbability(observed_coincidence));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidProbability(tol));
    }
    ensure_unitary(u, EPS_UNITARY)?;
    let boson = fock::coincidence_probability(u, ParticleStatistics::Boson)?;
    let fermion = fock::coincidence_probability(u, ParticleStatistics::Fermion)?;
    let boson_ok = (observed_coincidence - boson).abs() <= tol;
    let fermion_ok = (observed_coincidence - fermion).abs() <= tol;
    Ok(match (boson_ok, fermion_ok) {
        (true, false) => Discrimination::ConsistentWithBoson,
        (false, true) => Discrimination::ConsistentWithFermion,
        _ => Discrimination::Inconclusive,
    })
}
