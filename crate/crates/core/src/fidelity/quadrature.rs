use std::f64::consts::PI;
use std::str::FromStr;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{wigner_small_d, SpinQuantum};
use crate::spin_state::SpinState;

/// Product rule on the sphere: Gauss–Legendre in `cos θ` times a uniform
/// rule in `φ`. Integrates spherical polynomials of degree `≤ d` exactly when
/// `n_theta ≥ ⌈(d+1)/2⌉` and `n_phi ≥ d + 1`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    /// `(θ, weight)` with weights normalized to sum to one over the sphere.
    theta: Vec<(f64, f64)>,
    n_phi: usize,
}

impl QuadratureGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 1 {
            return Err(Error::InvalidGrid(format!(
                "quadrature needs n_theta >= 2 and n_phi >= 1, got {n_theta} x {n_phi}"
            )));
        }
        let rule = GaussLegendre::new(n_theta).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        let theta = rule
            .iter()
            .map(|&(x, w)| (x.clamp(-1.0, 1.0).acos(), 0.5 * w / n_phi as f64))
            .collect();
        Ok(Self { theta, n_phi })
    }

    /// Default grid for polynomial degree `degree`: one node above the
    /// exactness bound in each direction.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree / 2 + 2, degree + 2).expect("sizes are valid")
    }

    /// Default grid for `|⟨ψ|R|ψ⟩|²` at spin `j` (degree `2N`):
    /// `n_theta = N+2`, `n_phi = 2N+2`.
    pub fn for_spin(j: SpinQuantum) -> Self {
        Self::for_degree(2 * j.two_j() as usize)
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// Whether the rule is exact for degree `degree`.
    pub fn is_exact_for(&self, degree: usize) -> bool {
        2 * self.n_theta() > degree && self.n_phi > degree
    }

    fn require(&self, degree: usize) -> Result<()> {
        if self.is_exact_for(degree) {
            return Ok(());
        }
        Err(Error::UndersizedGrid {
            need_theta: degree / 2 + 1,
            need_phi: degree + 1,
            n_theta: self.n_theta(),
            n_phi: self.n_phi,
        })
    }

    /// Calls `f(weight, p)` at each node, where `p[i] = |⟨j,m_i|D(n)†|ψ⟩|²` is
    /// the distribution of `J·n` in the state.
    fn for_each_distribution(&self, state: &SpinState, mut f: impl FnMut(f64, &[f64])) {
        let j = state.spin();
        let dim = j.dim();
        let amps = state.amps();
        let ms: Vec<f64> = (0..dim).map(|i| 0.5 * j.two_m_of_index(i) as f64).collect();
        let mut p = vec![0.0; dim];
        for &(theta, w) in &self.theta {
            let d = wigner_small_d(j, theta);
            for l in 0..self.n_phi {
                let phi = 2.0 * PI * l as f64 / self.n_phi as f64;
                // e^{iφm'} ψ_{m'}
                let shifted: Vec<Complex64> = amps
                    .iter()
                    .zip(&ms)
                    .map(|(c, &m)| c * Complex64::from_polar(1.0, phi * m))
                    .collect();
                for (col, slot) in p.iter_mut().enumerate() {
                    let v: Complex64 = (0..dim).map(|r| shifted[r] * d[(r, col)].re).sum();
                    *slot = v.norm_sqr();
                }
                f(w, &p);
            }
        }
    }
}

/// Generator applied to `J·n` in the generalized fidelity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `e^{-iη J·n}`
    Identity,
    /// `e^{-iη (J·n)²}`
    Square,
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "square" => Ok(Self::Square),
            other => Err(Error::UnsupportedGenerator(other.to_string())),
        }
    }
}

/// Average fidelity by direct integration over rotation axes.
pub fn quadrature_fidelity(state: &SpinState, eta: f64, grid: &QuadratureGrid) -> Result<f64> {
    Ok(quadrature_fidelity_curve(state, &[eta], grid)?[0])
}

/// [`quadrature_fidelity`] at several angles, sharing the node work.
pub fn quadrature_fidelity_curve(
    state: &SpinState,
    etas: &[f64],
    grid: &QuadratureGrid,
) -> Result<Vec<f64>> {
    grid.require(2 * state.spin().two_j() as usize)?;
    Ok(integrate_curve(state, etas, grid, Generator::Identity, 1))
}

/// Closed-form and quadrature values of the average fidelity at one angle.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct RouteComparison {
    pub eta: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub difference: f64,
}

/// Evaluates both routes at every angle in `etas`.
pub fn compare_routes(state: &SpinState, etas: &[f64]) -> Result<Vec<RouteComparison>> {
    let quad = quadrature_fidelity_curve(state, etas, &QuadratureGrid::for_spin(state.spin()))?;
    Ok(etas
        .iter()
        .zip(quad)
        .map(|(&eta, quadrature)| {
            let closed_form = super::average_fidelity(state, eta);
            RouteComparison {
                eta,
                closed_form,
                quadrature,
                difference: closed_form - quadrature,
            }
        })
        .collect())
}

fn integrate_curve(
    state: &SpinState,
    etas: &[f64],
    grid: &QuadratureGrid,
    generator: Generator,
    power: u32,
) -> Vec<f64> {
    let j = state.spin();
    let phases: Vec<Vec<Complex64>> = etas
        .iter()
        .map(|&eta| {
            (0..j.dim())
                .map(|i| {
                    let m = 0.5 * j.two_m_of_index(i) as f64;
                    let f = match generator {
                        Generator::Identity => m,
                        Generator::Square => m * m,
                    };
                    Complex64::from_polar(1.0, -eta * f)
                })
                .collect()
        })
        .collect();
    let mut acc = vec![0.0; etas.len()];
    grid.for_each_distribution(state, |w, p| {
        for (slot, ph) in acc.iter_mut().zip(&phases) {
            let amp: Complex64 = ph.iter().zip(p).map(|(e, &pm)| e * pm).sum();
            *slot += w * amp.norm_sqr().powi(power as i32);
        }
    });
    acc
}

/// `(4π)^{-1} ∮ |⟨ψ|e^{-iη f(J·n)}|ψ⟩|^{2p} dn` on a grid sized for degree `2Np`.
pub fn generalized_quadrature_fidelity(
    state: &SpinState,
    eta: f64,
    power: u32,
    generator: Generator,
) -> Result<f64> {
    if power == 0 {
        return Err(Error::OutOfRange {
            name: "p",
            value: 0,
            lo: 1,
            hi: i64::from(u32::MAX),
        });
    }
    let grid = QuadratureGrid::for_degree(2 * state.spin().two_j() as usize * power as usize);
    Ok(integrate_curve(state, &[eta], &grid, generator, power)[0])
}

/// Direction-averaged variance `V = (4π)^{-1} ∮ (⟨J_n²⟩ - ⟨J_n⟩²) dn`.
pub fn averaged_variance(state: &SpinState) -> f64 {
    let j = state.spin();
    let ms: Vec<f64> = (0..j.dim())
        .map(|i| 0.5 * j.two_m_of_index(i) as f64)
        .collect();
    let mut v = 0.0;
    QuadratureGrid::for_degree(2).for_each_distribution(state, |w, p| {
        let mean: f64 = p.iter().zip(&ms).map(|(a, m)| a * m).sum();
        let sq: f64 = p.iter().zip(&ms).map(|(a, m)| a * m * m).sum();
        v += w * (sq - mean * mean);
    });
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let j = SpinQuantum::new(6).unwrap();
        let g = QuadratureGrid::for_spin(j);
        assert_eq!((g.n_theta(), g.n_phi()), (8, 14));
        assert!(g.is_exact_for(12));
        let small = QuadratureGrid::new(6, 13).unwrap();
        assert!(!small.is_exact_for(12));
        let s = SpinState::coherent(j);
        assert!(matches!(
            quadrature_fidelity(&s, 0.3, &small),
            Err(Error::UndersizedGrid { .. })
        ));
        assert!(QuadratureGrid::new(1, 5).is_err());
    }

    #[test]
    fn weights_sum_to_one() {
        let g = QuadratureGrid::new(5, 7).unwrap();
        let total: f64 = g.theta.iter().map(|(_, w)| w).sum::<f64>() * g.n_phi as f64;
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spin_half_variance() {
        let s = SpinState::coherent(SpinQuantum::new(1).unwrap());
        assert!((averaged_variance(&s) - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn generator_parse() {
        assert_eq!("square".parse::<Generator>().unwrap(), Generator::Square);
        assert!(matches!(
            "cube".parse::<Generator>(),
            Err(Error::UnsupportedGenerator(_))
        ));
    }
}
