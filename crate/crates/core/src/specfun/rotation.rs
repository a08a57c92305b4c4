use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use super::{binomial_table_f64, jacobi_poly, SpinQuantum};
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries; panics if `data.len() != dim²`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data has the wrong length");
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

/// Wigner small-d matrix `d^j_{m'm}(θ) = ⟨j m'|e^{-iθJ_y}|j m⟩`, rows and
/// columns in descending m.
///
/// Evaluated through the Jacobi-polynomial form, which avoids the alternating
/// factorial sum.
pub fn wigner_small_d(j: SpinQuantum, theta: f64) -> ComplexMatrix {
    let n = j.two_j() as usize;
    let binom = binomial_table_f64(n);
    let (sh, ch) = (0.5 * theta).sin_cos();
    let x = theta.cos();
    let mut out = ComplexMatrix::zeros(n + 1);
    for r in 0..=n {
        // j + m' = n - r, j - m' = r
        for c in 0..=n {
            let (jpm, jmm) = ((n - c) as i64, c as i64);
            let (jpmp, jmmp) = ((n - r) as i64, r as i64);
            let mp_minus_m = c as i64 - r as i64;
            let k = jpm.min(jmm).min(jpmp).min(jmmp);
            let (a, lambda) = if k == jpm || k == jmmp {
                (mp_minus_m, mp_minus_m)
            } else {
                (-mp_minus_m, 0)
            };
            let b = n as i64 - 2 * k - a;
            let (k, a, b) = (k as usize, a as usize, b as usize);
            let ratio = binom[n - k][k + a] / binom[k + b][b];
            let sign = if lambda.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            let val = sign
                * ratio.sqrt()
                * sh.powi(a as i32)
                * ch.powi(b as i32)
                * jacobi_poly(k, a as f64, b as f64, x);
            out[(r, c)] = Complex64::new(val, 0.0);
        }
    }
    out
}

/// `e^{-iη J·n}` for the axis with polar angles `(theta, phi)`.
pub fn rotation_matrix_from_polar(j: SpinQuantum, eta: f64, theta: f64, phi: f64) -> ComplexMatrix {
    let n = j.two_j() as usize;
    let d = wigner_small_d(j, theta);
    let mut big_d = ComplexMatrix::zeros(n + 1);
    for r in 0..=n {
        let m = 0.5 * j.two_m_of_index(r) as f64;
        let phase = Complex64::from_polar(1.0, -phi * m);
        for c in 0..=n {
            big_d[(r, c)] = phase * d[(r, c)];
        }
    }
    let diag: Vec<Complex64> = (0..=n)
        .map(|i| Complex64::from_polar(1.0, -eta * 0.5 * j.two_m_of_index(i) as f64))
        .collect();
    let inner = &big_d * &ComplexMatrix::from_diagonal(&diag);
    &inner * &big_d.adjoint()
}

/// Rotation operator `R_n(η) = e^{-iη J·n}`; the axis must be a unit vector.
pub fn rotation_matrix(j: SpinQuantum, eta: f64, axis: [f64; 3]) -> Result<ComplexMatrix> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis { norm });
    }
    let theta = axis[2].clamp(-1.0, 1.0).acos();
    let phi = axis[1].atan2(axis[0]);
    Ok(rotation_matrix_from_polar(j, eta, theta, phi))
}

/// Spin operators `[J_x, J_y, J_z]` in the descending-m Dicke basis.
pub fn angular_momentum(j: SpinQuantum) -> [ComplexMatrix; 3] {
    let n = j.two_j() as usize;
    let jf = j.as_f64();
    let mut jx = ComplexMatrix::zeros(n + 1);
    let mut jy = ComplexMatrix::zeros(n + 1);
    let mut jz = ComplexMatrix::zeros(n + 1);
    for i in 0..=n {
        let m = 0.5 * j.two_m_of_index(i) as f64;
        jz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> has index i-1
            let up = (jf * (jf + 1.0) - m * (m + 1.0)).sqrt();
            jx[(i - 1, i)] += Complex64::new(0.5 * up, 0.0);
            jx[(i, i - 1)] += Complex64::new(0.5 * up, 0.0);
            jy[(i - 1, i)] += Complex64::new(0.0, -0.5 * up);
            jy[(i, i - 1)] += Complex64::new(0.0, 0.5 * up);
        }
    }
    [jx, jy, jz]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn spin(two_j: u32) -> SpinQuantum {
        SpinQuantum::new(two_j).unwrap()
    }

    fn fact(n: i64) -> f64 {
        (1..=n).fold(1.0, |a, i| a * i as f64)
    }

    /// The textbook factorial sum for `d^j_{m'm}`.
    fn d_factorial_sum(two_j: i64, two_mp: i64, two_m: i64, theta: f64) -> f64 {
        let (jpm, jmm) = ((two_j + two_m) / 2, (two_j - two_m) / 2);
        let (jpmp, jmmp) = ((two_j + two_mp) / 2, (two_j - two_mp) / 2);
        let mpm = (two_mp - two_m) / 2;
        let pref = (fact(jpm) * fact(jmm) * fact(jpmp) * fact(jmmp)).sqrt();
        let (s_, c_) = (0.5 * theta).sin_cos();
        let mut sum = 0.0;
        for s in 0..=two_j {
            if jpm - s < 0 || mpm + s < 0 || jmmp - s < 0 {
                continue;
            }
            let sign = if (mpm + s).rem_euclid(2) == 1 {
                -1.0
            } else {
                1.0
            };
            sum += sign / (fact(jpm - s) * fact(s) * fact(mpm + s) * fact(jmmp - s))
                * c_.powi((two_j - mpm - 2 * s) as i32)
                * s_.powi((mpm + 2 * s) as i32);
        }
        pref * sum
    }

    #[test]
    fn jacobi_form_matches_factorial_sum() {
        for two_j in 1..=16i64 {
            for &theta in &[0.0, 0.3, 1.1, 2.0, PI, 4.5] {
                let d = wigner_small_d(spin(two_j as u32), theta);
                for r in 0..=two_j {
                    for c in 0..=two_j {
                        let want = d_factorial_sum(two_j, two_j - 2 * r, two_j - 2 * c, theta);
                        let got = d[(r as usize, c as usize)].re;
                        assert!(
                            (got - want).abs() < 1e-12,
                            "2j={two_j} θ={theta} ({r},{c}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spin_half_small_d() {
        let theta = 0.7;
        let d = wigner_small_d(spin(1), theta);
        let (s, c) = (theta / 2.0).sin_cos();
        let want = [[c, -s], [s, c]];
        for r in 0..2 {
            for k in 0..2 {
                assert!((d[(r, k)].re - want[r][k]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn small_d_orthogonal_and_identity_at_zero() {
        for two_j in [1, 2, 5, 12, 52] {
            let j = spin(two_j);
            let id = ComplexMatrix::identity(j.dim());
            assert!(wigner_small_d(j, 0.0).max_abs_diff(&id) < 1e-15);
            for &theta in &[0.4, 1.9, 3.0] {
                let prod = &wigner_small_d(j, theta) * &wigner_small_d(j, -theta);
                assert!(prod.max_abs_diff(&id) < 1e-12, "2j={two_j} θ={theta}");
            }
        }
    }

    fn random_axis(rng: &mut ChaCha8Rng) -> [f64; 3] {
        let z: f64 = rng.random_range(-1.0..1.0);
        let p: f64 = rng.random_range(0.0..2.0 * PI);
        let r = (1.0 - z * z).sqrt();
        [r * p.cos(), r * p.sin(), z]
    }

    #[test]
    fn rotation_unitary_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_j in 1..=20 {
            let j = spin(two_j);
            let id = ComplexMatrix::identity(j.dim());
            for _ in 0..4 {
                let axis = random_axis(&mut rng);
                let (e1, e2) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                let r1 = rotation_matrix(j, e1, axis).unwrap();
                assert!((&r1.adjoint() * &r1).max_abs_diff(&id) < 1e-12);
                let r2 = rotation_matrix(j, e2, axis).unwrap();
                let r12 = rotation_matrix(j, e1 + e2, axis).unwrap();
                assert!((&r1 * &r2).max_abs_diff(&r12) < 1e-10);
            }
        }
    }

    #[test]
    fn full_turn_is_parity_sign() {
        let axis = [0.6, 0.0, 0.8];
        for two_j in 1..=8u32 {
            let j = spin(two_j);
            let r = rotation_matrix(j, 2.0 * PI, axis).unwrap();
            let sign = if two_j % 2 == 1 { -1.0 } else { 1.0 };
            let want = ComplexMatrix::identity(j.dim()).scale(Complex64::new(sign, 0.0));
            assert!(r.max_abs_diff(&want) < 1e-12);
            assert!(
                rotation_matrix(j, 0.0, axis)
                    .unwrap()
                    .max_abs_diff(&ComplexMatrix::identity(j.dim()))
                    < 1e-14
            );
        }
    }

    #[test]
    fn z_axis_is_diagonal() {
        let j = spin(3);
        let eta = 0.9;
        let r = rotation_matrix(j, eta, [0.0, 0.0, 1.0]).unwrap();
        for i in 0..4 {
            let m = 1.5 - i as f64;
            for c in 0..4 {
                let want = if i == c {
                    Complex64::from_polar(1.0, -eta * m)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((r[(i, c)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_non_unit_axis() {
        assert!(matches!(
            rotation_matrix(spin(2), 1.0, [1.0, 1.0, 0.0]),
            Err(Error::NonUnitAxis { .. })
        ));
    }

    /// exp(-iη J·n) by scaling and squaring of a Taylor series.
    fn expm_oracle(j: SpinQuantum, eta: f64, axis: [f64; 3]) -> ComplexMatrix {
        let [jx, jy, jz] = angular_momentum(j);
        let gen = jx
            .scale(Complex64::new(axis[0], 0.0))
            .add(&jy.scale(Complex64::new(axis[1], 0.0)))
            .add(&jz.scale(Complex64::new(axis[2], 0.0)));
        let squarings = 10;
        let h = eta / f64::from(1u32 << squarings);
        let a = gen.scale(Complex64::new(0.0, -h));
        let mut term = ComplexMatrix::identity(j.dim());
        let mut sum = term.clone();
        for k in 1..30 {
            term = (&term * &a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn matches_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for two_j in 1..=8 {
            let j = spin(two_j);
            let axis = random_axis(&mut rng);
            let eta = rng.random_range(-3.0..3.0);
            let got = rotation_matrix(j, eta, axis).unwrap();
            assert!(got.max_abs_diff(&expm_oracle(j, eta, axis)) < 1e-10);
        }
    }

    #[test]
    fn angular_momentum_commutator() {
        let j = spin(5);
        let [jx, jy, jz] = angular_momentum(j);
        let comm = (&jx * &jy).add(&(&jy * &jx).scale(Complex64::new(-1.0, 0.0)));
        assert!(comm.max_abs_diff(&jz.scale(Complex64::new(0.0, 1.0))) < 1e-13);
    }
}
