use num_bigint::BigInt;
use num_rational::BigRational;

use super::{factorial, rational_to_f64, SpinQuantum};
use crate::error::{Error, Result};

/// Jacobi polynomial `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn jacobi_poly(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let c2 = 2.0 * k + ab;
        let a = 2.0 * k * (k + ab) * (c2 - 2.0);
        let b = (c2 - 1.0) * (c2 * (c2 - 2.0) * x + alpha * alpha - beta * beta);
        let c = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c2;
        let next = (b * p - c * p_prev) / a;
        p_prev = p;
        p = next;
    }
    p
}

/// `(4j+2)!! / (2 (4j+1)!!)`, the normalization turning `P_{2j}^{(1/2,1/2)}`
/// into the character.
fn character_prefactor(two_j: u32) -> f64 {
    (1..=two_j).fold(1.0, |acc, n| {
        acc * 2.0 * f64::from(n + 1) / f64::from(2 * n + 1)
    })
}

/// Character `χ^j(η)` of the spin-j representation.
pub fn character(j: SpinQuantum, eta: f64) -> f64 {
    let n = j.two_j();
    character_prefactor(n) * jacobi_poly(n as usize, 0.5, 0.5, (0.5 * eta).cos())
}

/// Generalized character `χ_λ^j(η)` of order `λ`.
///
/// The λ-fold derivative in `cos(η/2)` is taken analytically: each derivative of
/// `P_n^{(α,β)}` yields `(n+α+β+1)/2 · P_{n-1}^{(α+1,β+1)}`.
pub fn generalized_character(j: SpinQuantum, lambda: usize, eta: f64) -> Result<f64> {
    let n = j.two_j() as usize;
    if lambda > n {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda as i64,
            lo: 0,
            hi: n as i64,
        });
    }
    if lambda == 0 {
        return Ok(character(j, eta));
    }
    let half = 0.5 * eta;
    let a = 0.5 + lambda as f64;
    let poly = jacobi_poly(n - lambda, a, a, half.cos());
    Ok(generalized_character_coefficient(n, lambda) * half.sin().powi(lambda as i32) * poly)
}

/// sqrt((N+1)(N-λ)!/(N+λ+1)!) · ∏_{i<λ} (N+2+i)/2 · prefactor(N), evaluated exactly
/// under the square root.
fn generalized_character_coefficient(n: usize, lambda: usize) -> f64 {
    let n64 = n as u64;
    let l64 = lambda as u64;
    // ((N+λ+1)!/(N+1)!)^2 · (N+1)(N-λ)!/(N+λ+1)! / 4^λ
    //   = (N+λ+1)! (N+1) (N-λ)! / ((N+1)!^2 4^λ)
    let num = factorial(n64 + l64 + 1) * BigInt::from(n64 + 1) * factorial(n64 - l64);
    let den = factorial(n64 + 1).pow(2u32) * BigInt::from(4u64).pow(lambda as u32);
    let sq = rational_to_f64(&BigRational::new(num, den));
    character_prefactor(n as u32) * sq.sqrt()
}
