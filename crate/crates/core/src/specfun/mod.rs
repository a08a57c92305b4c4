//! Exact combinatorics and the special functions of SU(2): binomials,
//! Clebsch–Gordan coefficients, Jacobi polynomials, (generalized) characters
//! and spin-j rotation matrices.

mod clebsch;
mod jacobi;
mod rotation;

pub use clebsch::clebsch_gordan;
pub use jacobi::{character, generalized_character, jacobi_poly};
pub use rotation::{
    angular_momentum, rotation_matrix, rotation_matrix_from_polar, wigner_small_d, ComplexMatrix,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spin quantum number `j`, stored as the integer `N = 2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct SpinQuantum {
    two_j: u32,
}

impl SpinQuantum {
    /// `two_j` must be at least 1 (j >= 1/2).
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin("j must be at least 1/2".into()));
        }
        Ok(Self { two_j })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    /// Hilbert space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// `⌊j⌋`, the number of independent anticoherence measures.
    pub fn floor_j(self) -> usize {
        (self.two_j / 2) as usize
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    /// Magnetic quantum number (doubled) of amplitude index `i`: `m = j - i`.
    pub fn two_m_of_index(self, i: usize) -> i64 {
        i64::from(self.two_j) - 2 * i as i64
    }

    /// Amplitude index of the doubled magnetic quantum number `two_m`.
    pub fn index_of_two_m(self, two_m: i64) -> Result<usize> {
        let n = i64::from(self.two_j);
        if two_m.abs() > n || (n - two_m) % 2 != 0 {
            return Err(Error::InconsistentAngularMomenta(format!(
                "m = {} is not a projection of j = {}",
                HalfInt::from_twice(two_m),
                self
            )));
        }
        Ok(((n - two_m) / 2) as usize)
    }
}

impl TryFrom<u32> for SpinQuantum {
    type Error = Error;
    fn try_from(two_j: u32) -> Result<Self> {
        Self::new(two_j)
    }
}

impl From<SpinQuantum> for u32 {
    fn from(j: SpinQuantum) -> u32 {
        j.two_j
    }
}

impl fmt::Display for SpinQuantum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

impl FromStr for SpinQuantum {
    type Err = Error;

    /// Accepts `"3"`, `"7/2"` and decimal forms such as `"2.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let h: HalfInt = s.parse().map_err(|_| Error::InvalidSpin(s.to_string()))?;
        if h.twice() <= 0 {
            return Err(Error::InvalidSpin(s.to_string()));
        }
        Self::new(h.twice() as u32)
    }
}

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidHalfInteger(s.to_string());
        let t = s.trim().replace('\u{2212}', "-");
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = t.parse::<i64>() {
            Ok(HalfInt(2 * n))
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            let twice = (2.0 * x).round();
            if (2.0 * x - twice).abs() > 1e-9 || !twice.is_finite() {
                return Err(bad());
            }
            Ok(HalfInt(twice as i64))
        }
    }
}

/// Exact binomial coefficient `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial_exact(n: u64, k: i64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

pub(crate) fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by i + 1 at this point.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Table `C(n, k)` for `0 <= k <= n <= max` in double precision.
pub(crate) fn binomial_table_f64(max: usize) -> Vec<Vec<f64>> {
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        t.push(row);
    }
    t
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
