use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::specfun::{
    clebsch_gordan, generalized_character, rational_to_f64, HalfInt, SpinQuantum,
};
use crate::spin_state::dicke_measure_exact;

/// Squared Clebsch–Gordan weights `(2ℓ+1) (C^{jm}_{jmℓ0})²` for `ℓ = 0…2j`.
fn dicke_weights(j: SpinQuantum, two_m: i64) -> Result<Vec<f64>> {
    j.index_of_two_m(two_m)?;
    let tj = HalfInt::from_twice(i64::from(j.two_j()));
    let m = HalfInt::from_twice(two_m);
    (0..=j.two_j() as i64)
        .map(|l| {
            let c = clebsch_gordan(
                tj,
                m,
                HalfInt::from_twice(2 * l),
                HalfInt::from_twice(0),
                tj,
                m,
            )?;
            Ok((2 * l + 1) as f64 * c * c)
        })
        .collect()
}

fn dicke_fidelity_from_weights(j: SpinQuantum, weights: &[f64], eta: f64) -> f64 {
    let d = j.dim() as f64;
    let sum: f64 = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(l, w)| {
            let chi = generalized_character(j, l, eta).expect("l <= 2j");
            w * chi * chi
        })
        .sum();
    sum / (d * d)
}

/// Average fidelity of the Dicke state `|j,m⟩`, `m = two_m / 2`, from
/// Clebsch–Gordan coefficients and generalized characters.
pub fn dicke_average_fidelity(j: SpinQuantum, two_m: i64, eta: f64) -> Result<f64> {
    let w = dicke_weights(j, two_m)?;
    Ok(dicke_fidelity_from_weights(j, &w, eta))
}

/// The linear system `F_{|j,m⟩} = φ_0 + Σ_t φ_t A_t(|j,m⟩)` over
/// `m = j, j-1, …, j-⌊j⌋`, inverted once in exact arithmetic.
#[derive(Clone, Debug)]
pub struct DickeSystem {
    j: SpinQuantum,
    inverse: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
    condition: f64,
}

impl DickeSystem {
    pub fn new(j: SpinQuantum) -> Result<Self> {
        let size = j.floor_j() + 1;
        let top = i64::from(j.two_j());
        let mut matrix = Vec::with_capacity(size);
        let mut weights = Vec::with_capacity(size);
        for r in 0..size {
            let two_m = top - 2 * r as i64;
            let mut row = vec![BigRational::one()];
            for t in 1..size {
                row.push(dicke_measure_exact(j, two_m, t)?);
            }
            matrix.push(row);
            weights.push(dicke_weights(j, two_m)?);
        }
        let norm1 = |m: &[Vec<BigRational>]| -> f64 {
            (0..size)
                .map(|c| {
                    m.iter()
                        .map(|row| rational_to_f64(&row[c].abs()))
                        .sum::<f64>()
                })
                .fold(0.0, f64::max)
        };
        let a_norm = norm1(&matrix);
        let inverse = invert_exact(matrix).ok_or(Error::SingularSystem {
            spin: j.to_string(),
            condition: f64::INFINITY,
        })?;
        let condition = a_norm * norm1(&inverse);
        let inverse = inverse
            .iter()
            .map(|r| r.iter().map(rational_to_f64).collect())
            .collect();
        Ok(Self {
            j,
            inverse,
            weights,
            condition,
        })
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    /// 1-norm condition number of the system matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `φ_0(η) … φ_⌊j⌋(η)` solving the system.
    pub fn phi(&self, eta: f64) -> Vec<f64> {
        let f: Vec<f64> = self
            .weights
            .iter()
            .map(|w| dicke_fidelity_from_weights(self.j, w, eta))
            .collect();
        self.inverse
            .iter()
            .map(|row| row.iter().zip(&f).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `φ_0(η) … φ_⌊j⌋(η)` from the Dicke-state linear system.
pub fn phi_via_dicke(j: SpinQuantum, eta: f64) -> Result<Vec<f64>> {
    Ok(DickeSystem::new(j)?.phi(eta))
}

/// Gauss–Jordan inverse over the rationals; `None` if singular.
fn invert_exact(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if i == k {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for k in 0..n {
            a[col][k] /= &p;
            inv[col][k] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in 0..n {
                let (x, y) = (&a[col][k] * &f, &inv[col][k] * &f);
                a[r][k] -= x;
                inv[r][k] -= y;
            }
        }
    }
    Some(inv)
}
