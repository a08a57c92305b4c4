//! Spin-j pure states in the Dicke basis, reduced-state purities,
//! anticoherence measures, SU(2) invariants and the catalog of named states.

mod catalog;
mod purity;

pub use catalog::{
    catalog_ids, named_state, named_state_with_chi, random_state, random_state_with,
};
pub use purity::{
    anticoherence_measure, dicke_measure, dicke_measure_exact, kappa, profile, purity,
    AnticoherenceProfile, KappaInvariants, PurityKernel,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{angular_momentum, rotation_matrix, SpinQuantum};

/// Normalized pure state `Σ_m c_m |j,m⟩`; `amps[i]` holds `c_{j-i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct SpinState {
    j: SpinQuantum,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    two_j: u32,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<StateJson> for SpinState {
    type Error = Error;
    fn try_from(s: StateJson) -> Result<Self> {
        if s.re.len() != s.im.len() {
            return Err(Error::Serialization(format!(
                "re has {} entries but im has {}",
                s.re.len(),
                s.im.len()
            )));
        }
        let amps =
            s.re.iter()
                .zip(&s.im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect();
        SpinState::new(SpinQuantum::new(s.two_j)?, amps)
    }
}

impl From<SpinState> for StateJson {
    fn from(s: SpinState) -> Self {
        StateJson {
            two_j: s.j.two_j(),
            re: s.amps.iter().map(|c| c.re).collect(),
            im: s.amps.iter().map(|c| c.im).collect(),
        }
    }
}

impl SpinState {
    /// Normalizes `amps`; fails if the length is not `2j+1` or the norm is
    /// below `1e-10`.
    pub fn new(j: SpinQuantum, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != j.dim() {
            return Err(Error::DimensionMismatch {
                spin: j.to_string(),
                expected: j.dim(),
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm >= 1e-10) || !norm.is_finite() {
            return Err(Error::Unnormalizable { norm });
        }
        let amps = amps.into_iter().map(|c| c / norm).collect();
        Ok(Self { j, amps })
    }

    /// Real amplitudes, for convenience.
    pub fn from_real(j: SpinQuantum, amps: &[f64]) -> Result<Self> {
        Self::new(j, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Dicke state `|j,m⟩` with `m = two_m / 2`.
    pub fn dicke(j: SpinQuantum, two_m: i64) -> Result<Self> {
        let i = j.index_of_two_m(two_m)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); j.dim()];
        amps[i] = Complex64::new(1.0, 0.0);
        Ok(Self { j, amps })
    }

    /// Spin-coherent state `|j,j⟩`.
    pub fn coherent(j: SpinQuantum) -> Self {
        Self::dicke(j, i64::from(j.two_j())).expect("m = j is always valid")
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude `c_m` for `m = two_m / 2`.
    pub fn amplitude(&self, two_m: i64) -> Result<Complex64> {
        Ok(self.amps[self.j.index_of_two_m(two_m)?])
    }

    /// `R_n(η)|ψ⟩`.
    pub fn rotate(&self, eta: f64, axis: [f64; 3]) -> Result<Self> {
        let r = rotation_matrix(self.j, eta, axis)?;
        Ok(Self {
            j: self.j,
            amps: r.apply(&self.amps),
        })
    }

    /// `|⟨ψ|φ⟩|²`.
    pub fn overlap_sqr(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Spin expectation vector `(⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)`.
    pub fn spin_expectation(&self) -> [f64; 3] {
        angular_momentum(self.j).map(|op| {
            op.apply(&self.amps)
                .iter()
                .zip(&self.amps)
                .map(|(a, c)| c.conj() * a)
                .sum::<Complex64>()
                .re
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
