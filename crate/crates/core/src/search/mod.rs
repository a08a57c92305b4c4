//! Optimal rotosensors: minimization (or maximization) of the average fidelity
//! over states at fixed rotation angle, sweeps in the angle, and the critical
//! angles at which the optimal state changes.

mod brent;
mod export;
mod nelder_mead;

pub use brent::{brent, Root};
pub use export::{write_sweep_csv, write_sweep_json};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fidelity::{angular_table, average_fidelity, AngularTable};
use crate::specfun::SpinQuantum;
use crate::spin_state::{
    profile, random_state_with, AnticoherenceProfile, PurityKernel, SpinState,
};

/// Restarts whose optimum lies within this of the best count as hits.
const HIT_TOLERANCE: f64 = 1e-8;
/// Profiles differing by more than this in any `A_t` mark a transition.
pub const TRANSITION_THRESHOLD: f64 = 1e-3;

/// Multi-start settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tolerance: f64,
    pub simplex_scale: f64,
    pub seed: u64,
    /// In sweeps, also start from the previous angle's optimum.
    pub warm_start: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            tolerance: 1e-12,
            simplex_scale: 0.3,
            seed: 0,
            warm_start: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if !(self.simplex_scale > 0.0) {
            return Err(Error::InvalidConfig(
                "simplex scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Optimum found at one angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub eta: f64,
    pub best_value: f64,
    pub best_state: SpinState,
    pub profile: AnticoherenceProfile,
    pub restarts_hitting_best: usize,
    /// Whether the best restart met the tolerance within its budget.
    pub converged: bool,
}

impl SweepRecord {
    /// Checks that the stored value and profile are those of the stored state.
    pub fn is_self_consistent(&self) -> bool {
        let f = average_fidelity(&self.best_state, self.eta);
        let p = profile(&self.best_state);
        (f - self.best_value).abs() <= 1e-12
            && p.max_measure_diff(&self.profile) <= 1e-9
            && (-1e-12..=1.0 + 1e-12).contains(&self.best_value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sense {
    Minimize,
    Maximize,
}

fn to_params(state: &SpinState) -> Vec<f64> {
    state.amps().iter().flat_map(|c| [c.re, c.im]).collect()
}

fn to_amps(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

fn project(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Seed stream for restart `restart` at sweep position `eta_index`.
fn restart_rng(seed: u64, eta_index: usize, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((eta_index as u64) << 32) | restart as u64);
    rng
}

struct RunOutcome {
    value: f64,
    params: Vec<f64>,
    converged: bool,
}

fn optimize_at(
    j: SpinQuantum,
    table: &AngularTable,
    eta: f64,
    eta_index: usize,
    cfg: &SearchConfig,
    sense: Sense,
    warm: Option<&SpinState>,
) -> Result<SweepRecord> {
    cfg.validate()?;
    let kernel = PurityKernel::new(j);
    let phi = table.phi_all(eta);
    let sign = if sense == Sense::Minimize { 1.0 } else { -1.0 };
    let objective = |x: &[f64]| -> f64 {
        let mut amps = to_amps(x);
        let n = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|c| *c /= n);
        let a = kernel.measures_of(&amps);
        sign * (phi[0] + phi[1..].iter().zip(&a).map(|(p, m)| p * m).sum::<f64>())
    };
    let opts = NelderMeadOptions {
        scale: cfg.simplex_scale,
        max_iters: cfg.max_iters,
        ftol: cfg.tolerance,
        ..Default::default()
    };
    let starts = cfg.restarts + usize::from(warm.is_some());
    let outcomes: Vec<RunOutcome> = (0..starts)
        .into_par_iter()
        .map(|r| {
            let x0 = match warm {
                Some(s) if r == cfg.restarts => to_params(s),
                _ => to_params(&random_state_with(
                    j,
                    &mut restart_rng(cfg.seed, eta_index, r),
                )),
            };
            let res = nelder_mead(objective, &x0, &opts, project);
            RunOutcome {
                value: sign * res.fx,
                params: res.x,
                converged: res.converged,
            }
        })
        .collect();
    let better = |a: f64, b: f64| {
        if sense == Sense::Minimize {
            a < b
        } else {
            a > b
        }
    };
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if better(o.value, outcomes[best].value) {
            best = i;
        }
    }
    let best_value = outcomes[best].value;
    let hits = outcomes
        .iter()
        .filter(|o| (o.value - best_value).abs() <= HIT_TOLERANCE)
        .count();
    let best_state = SpinState::new(j, to_amps(&outcomes[best].params))?;
    let profile = kernel.profile(&best_state);
    Ok(SweepRecord {
        eta,
        best_value: average_fidelity(&best_state, eta),
        best_state,
        profile,
        restarts_hitting_best: hits,
        converged: outcomes[best].converged,
    })
}

/// State minimizing the average fidelity at `eta` (the optimal rotosensor).
pub fn minimize_fidelity(j: SpinQuantum, eta: f64, cfg: &SearchConfig) -> Result<SweepRecord> {
    optimize_at(j, &angular_table(j), eta, 0, cfg, Sense::Minimize, None)
}

/// State maximizing the average fidelity at `eta`.
pub fn maximize_fidelity(j: SpinQuantum, eta: f64, cfg: &SearchConfig) -> Result<SweepRecord> {
    optimize_at(j, &angular_table(j), eta, 0, cfg, Sense::Maximize, None)
}

/// Minimizes at every angle of a strictly increasing grid inside `(0, π]`.
///
/// With `warm_start`, each angle also starts from the previous optimum, in
/// addition to the full cold batch.
pub fn sweep(j: SpinQuantum, grid: &[f64], cfg: &SearchConfig) -> Result<Vec<SweepRecord>> {
    check_grid(grid)?;
    cfg.validate()?;
    let table = angular_table(j);
    if !cfg.warm_start {
        return grid
            .par_iter()
            .enumerate()
            .map(|(i, &eta)| optimize_at(j, &table, eta, i, cfg, Sense::Minimize, None))
            .collect();
    }
    let mut out: Vec<SweepRecord> = Vec::with_capacity(grid.len());
    for (i, &eta) in grid.iter().enumerate() {
        let warm = out.last().map(|r| r.best_state.clone());
        out.push(optimize_at(
            j,
            &table,
            eta,
            i,
            cfg,
            Sense::Minimize,
            warm.as_ref(),
        )?);
    }
    Ok(out)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("angle grid is empty".into()));
    }
    if grid
        .iter()
        .any(|&e| !(e > 0.0 && e <= std::f64::consts::PI + 1e-12))
    {
        return Err(Error::InvalidGrid("angles must lie in (0, π]".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "angles must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Root of `Σ_t φ_t(η) (A_t¹ - A_t²) = 0`: the angle at which two profiles
/// give the same fidelity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalAngle {
    pub eta_star: f64,
    pub left_profile: AnticoherenceProfile,
    pub right_profile: AnticoherenceProfile,
    pub bracket: (f64, f64),
    pub residual: f64,
}

fn profile_gap(table: &AngularTable, left: &[f64], right: &[f64], eta: f64) -> f64 {
    let phi = table.phi_all(eta);
    phi[1..]
        .iter()
        .zip(left.iter().zip(right))
        .map(|(p, (a, b))| p * (a - b))
        .sum()
}

/// Solves for the critical angle between two profiles inside `bracket`.
pub fn critical_angle(
    table: &AngularTable,
    left: &AnticoherenceProfile,
    right: &AnticoherenceProfile,
    bracket: (f64, f64),
) -> Result<CriticalAngle> {
    let expected = table.spin().floor_j();
    for p in [left, right] {
        if p.measures().len() != expected {
            return Err(Error::ProfileLength {
                expected,
                got: p.measures().len(),
            });
        }
    }
    let (a, b) = (left.measures(), right.measures());
    let root = brent(
        |eta| profile_gap(table, a, b, eta),
        bracket.0,
        bracket.1,
        1e-10,
        1e-9,
    )?;
    Ok(CriticalAngle {
        eta_star: root.x,
        left_profile: left.clone(),
        right_profile: right.clone(),
        bracket: root.bracket,
        residual: root.residual,
    })
}

/// Adjacent sweep points whose optimal profiles differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub lo_index: usize,
    pub hi_index: usize,
    /// Present when the profile equation changes sign between the two points.
    pub critical: Option<CriticalAngle>,
}

/// Flags profile jumps above [`TRANSITION_THRESHOLD`] and solves each one.
pub fn detect_transitions(table: &AngularTable, records: &[SweepRecord]) -> Vec<Transition> {
    records
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].profile.max_measure_diff(&w[1].profile) > TRANSITION_THRESHOLD)
        .map(|(i, w)| Transition {
            lo_index: i,
            hi_index: i + 1,
            critical: critical_angle(table, &w[0].profile, &w[1].profile, (w[0].eta, w[1].eta))
                .ok(),
        })
        .collect()
}

/// First positive zero `η_0` of `φ_1`, by a sign scan with step `π/(40j)`
/// refined with Brent's method.
pub fn first_zero_phi1(table: &AngularTable) -> Result<f64> {
    let j = table.spin();
    if j.floor_j() < 1 {
        return Err(Error::OutOfRange {
            name: "j",
            value: i64::from(j.two_j()),
            lo: 2,
            hi: i64::MAX,
        });
    }
    let step = std::f64::consts::PI / (40.0 * j.as_f64());
    let phi1 = |eta: f64| table.phi(1, eta).expect("t = 1 is valid");
    let mut lo = step;
    let mut g_lo = phi1(lo);
    let limit = 2.0 * std::f64::consts::PI;
    while lo < limit {
        let hi = lo + step;
        let g_hi = phi1(hi);
        if g_lo < 0.0 && g_hi >= 0.0 {
            return Ok(brent(phi1, lo, hi, 1e-10, 1e-14)?.x);
        }
        lo = hi;
        g_lo = g_hi;
    }
    Err(Error::NoSignChange {
        lo: step,
        hi: limit,
        g_lo: phi1(step),
        g_hi: phi1(limit),
    })
}

/// Whether every `φ_t`, `t ≥ 1`, is non-positive at 1000 evenly spaced
/// points of `(0, η_0)`.
pub fn negativity_window(table: &AngularTable) -> Result<bool> {
    let eta0 = first_zero_phi1(table)?;
    Ok((1..=1000).all(|i| {
        let eta = eta0 * i as f64 / 1001.0;
        table.phi_all(eta)[1..].iter().all(|&p| p <= 0.0)
    }))
}

/// Lower bound `φ_0 + Σ_t min(φ_t, 0)` on the fidelity of any state, from
/// `0 ≤ A_t ≤ 1`.
pub fn fidelity_floor(table: &AngularTable, eta: f64) -> f64 {
    let phi = table.phi_all(eta);
    phi[0] + phi[1..].iter().map(|p| p.min(0.0)).sum::<f64>()
}
