use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::SpinState;
use crate::error::{Error, Result};
use crate::specfun::{binomial_int, binomial_table_f64, rational_to_f64, SpinQuantum};

/// Precomputed `Γ_k^{ℓq}` weights of the purity formula for one spin.
#[derive(Clone, Debug)]
pub struct PurityKernel {
    j: SpinQuantum,
    /// `gamma[t][(q * (t+1) + l) * (N-t+1) + k]`
    gamma: Vec<Vec<f64>>,
}

impl PurityKernel {
    pub fn new(j: SpinQuantum) -> Self {
        let n = j.two_j() as usize;
        let binom = binomial_table_f64(n);
        let gamma = (0..=n)
            .map(|t| {
                let len_k = n - t + 1;
                let mut g = vec![0.0; (t + 1) * (t + 1) * len_k];
                for q in 0..=t {
                    for l in 0..=t {
                        for k in 0..len_k {
                            let prod = binom[n - k - q][t - q]
                                * binom[n - k - l][t - l]
                                * binom[k + q][k]
                                * binom[k + l][k];
                            g[(q * (t + 1) + l) * len_k + k] = prod.sqrt() / binom[n][t];
                        }
                    }
                }
                g
            })
            .collect();
        Self { j, gamma }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    /// `tr ρ_t²` for raw normalized amplitudes in descending-m order.
    pub fn purity_of(&self, amps: &[Complex64], t: usize) -> f64 {
        let n = self.j.two_j() as usize;
        let len_k = n - t + 1;
        let g = &self.gamma[t];
        let mut total = 0.0;
        for q in 0..=t {
            for l in 0..=t {
                let w = &g[(q * (t + 1) + l) * len_k..][..len_k];
                let inner: Complex64 = (0..len_k)
                    .map(|k| amps[k + l].conj() * amps[k + q] * w[k])
                    .sum();
                total += inner.norm_sqr();
            }
        }
        total
    }

    /// `A_1 … A_⌊j⌋` for raw normalized amplitudes.
    pub fn measures_of(&self, amps: &[Complex64]) -> Vec<f64> {
        (1..=self.j.floor_j())
            .map(|t| measure_from_purity(t, self.purity_of(amps, t)))
            .collect()
    }

    pub fn profile(&self, state: &SpinState) -> AnticoherenceProfile {
        let n = self.j.two_j() as usize;
        let purities: Vec<f64> = (0..=n).map(|t| self.purity_of(state.amps(), t)).collect();
        let measures = (1..=self.j.floor_j())
            .map(|t| measure_from_purity(t, purities[t]))
            .collect();
        AnticoherenceProfile {
            j: self.j,
            purities,
            measures,
        }
    }
}

fn measure_from_purity(t: usize, p: f64) -> f64 {
    let t = t as f64;
    (t + 1.0) / t * (1.0 - p)
}

fn check_t(name: &'static str, t: usize, lo: usize, hi: usize) -> Result<()> {
    if t < lo || t > hi {
        return Err(Error::OutOfRange {
            name,
            value: t as i64,
            lo: lo as i64,
            hi: hi as i64,
        });
    }
    Ok(())
}

/// Purity `tr ρ_t²` of the t-qubit reduction, `0 ≤ t ≤ 2j`.
pub fn purity(state: &SpinState, t: usize) -> Result<f64> {
    let j = state.spin();
    check_t("t", t, 0, j.two_j() as usize)?;
    Ok(PurityKernel::new(j).purity_of(state.amps(), t))
}

/// Anticoherence measure `A_t = (t+1)/t (1 - tr ρ_t²)`, `1 ≤ t ≤ ⌊j⌋`.
pub fn anticoherence_measure(state: &SpinState, t: usize) -> Result<f64> {
    check_t("t", t, 1, state.spin().floor_j())?;
    Ok(measure_from_purity(t, purity(state, t)?))
}

/// All purities and anticoherence measures of `state`.
pub fn profile(state: &SpinState) -> AnticoherenceProfile {
    PurityKernel::new(state.spin()).profile(state)
}

/// Purities `tr ρ_t²` (t = 0…2j) and measures `A_t` (t = 1…⌊j⌋) of a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnticoherenceProfile {
    j: SpinQuantum,
    purities: Vec<f64>,
    measures: Vec<f64>,
}

impl AnticoherenceProfile {
    /// Builds a profile from `A_1 … A_⌊j⌋`; purities follow from the
    /// definition and the symmetry `t ↔ 2j - t`.
    pub fn from_measures(j: SpinQuantum, measures: &[f64]) -> Result<Self> {
        if measures.len() != j.floor_j() {
            return Err(Error::ProfileLength {
                expected: j.floor_j(),
                got: measures.len(),
            });
        }
        let n = j.two_j() as usize;
        let mut purities = vec![1.0; n + 1];
        for (i, &a) in measures.iter().enumerate() {
            let t = i + 1;
            let p = 1.0 - t as f64 / (t as f64 + 1.0) * a;
            purities[t] = p;
            purities[n - t] = p;
        }
        Ok(Self {
            j,
            purities,
            measures: measures.to_vec(),
        })
    }

    /// Profile of a spin-coherent state.
    pub fn coherent(j: SpinQuantum) -> Self {
        Self::from_measures(j, &vec![0.0; j.floor_j()]).expect("length matches")
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    pub fn purities(&self) -> &[f64] {
        &self.purities
    }

    /// `A_1 … A_⌊j⌋`.
    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    /// `A_t` for `1 ≤ t ≤ ⌊j⌋`.
    pub fn measure(&self, t: usize) -> Option<f64> {
        t.checked_sub(1).and_then(|i| self.measures.get(i).copied())
    }

    /// Largest component-wise difference of the measures.
    pub fn max_measure_diff(&self, other: &Self) -> f64 {
        self.measures
            .iter()
            .zip(&other.measures)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Degree-2 SU(2) invariants `κ_0 … κ_{2j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaInvariants {
    values: Vec<f64>,
}

impl KappaInvariants {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Purities recovered as `tr ρ_t² = 2^{-t} Σ_r C(t,r) κ_r`.
    pub fn purities(&self) -> Vec<f64> {
        let n = self.values.len() - 1;
        let binom = binomial_table_f64(n);
        (0..=n)
            .map(|t| {
                let s: f64 = (0..=t).map(|r| binom[t][r] * self.values[r]).sum();
                s / 2f64.powi(t as i32)
            })
            .collect()
    }
}

/// `κ_r = Σ_{t≤r} (-1)^{t+r} 2^t C(r,t) tr ρ_t²`.
pub fn kappa(profile: &AnticoherenceProfile) -> KappaInvariants {
    let p = profile.purities();
    let n = p.len() - 1;
    let binom = binomial_table_f64(n);
    let values = (0..=n)
        .map(|r| {
            (0..=r)
                .map(|t| {
                    let sign = if (t + r) % 2 == 1 { -1.0 } else { 1.0 };
                    sign * 2f64.powi(t as i32) * binom[r][t] * p[t]
                })
                .sum()
        })
        .collect();
    KappaInvariants { values }
}

/// Exact `A_t(|j,m⟩)` for `m = two_m / 2`, `1 ≤ t ≤ 2j`.
pub fn dicke_measure_exact(j: SpinQuantum, two_m: i64, t: usize) -> Result<BigRational> {
    j.index_of_two_m(two_m)?;
    let n = j.two_j() as usize;
    check_t("t", t, 1, n)?;
    let jpm = ((i64::from(j.two_j()) + two_m) / 2) as u64;
    let jmm = ((i64::from(j.two_j()) - two_m) / 2) as u64;
    let num: BigInt = (0..=t as i64)
        .map(|l| {
            let a = binomial_int(jpm, t as i64 - l);
            let b = binomial_int(jmm, l);
            (a * b).pow(2u32)
        })
        .sum();
    let den = binomial_int(n as u64, t as i64).pow(2u32);
    let tt = BigInt::from(t);
    Ok(BigRational::new(tt.clone() + 1, tt) * (BigRational::one() - BigRational::new(num, den)))
}

/// `A_t(|j,m⟩)` from the closed binomial sum.
pub fn dicke_measure(j: SpinQuantum, two_m: i64, t: usize) -> Result<f64> {
    Ok(rational_to_f64(&dicke_measure_exact(j, two_m, t)?))
}
