//! Cross-route verification suite: closed form against the quadrature oracle
//! and the Dicke linear system, the exact combinatorial identity, and the
//! negativity window below the first zero of `φ_1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fidelity::{
    angular_table, average_fidelity, combinatorial_identity_check, quadrature_fidelity_curve,
    DickeSystem, QuadratureGrid,
};
use crate::search::negativity_window;
use crate::specfun::SpinQuantum;
use crate::spin_state::random_state;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Closed form against direct spherical quadrature on random states.
    Oracle,
    /// Closed-form `φ_t` against the Dicke-state linear system.
    Dicke,
    /// Exact combinatorial identity for every `k ≤ 2j`.
    Identity,
    /// All `φ_t`, `t ≥ 1`, non-positive below the first zero of `φ_1`.
    Negativity,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::Oracle,
        Check::Dicke,
        Check::Identity,
        Check::Negativity,
    ];

    /// Largest `2j` checked by default.
    pub fn default_max_two_j(self) -> u32 {
        match self {
            Check::Oracle => 12,
            Check::Dicke => 20,
            Check::Identity | Check::Negativity => 52,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Check::Oracle => 1e-10,
            Check::Dicke => 1e-8,
            Check::Identity | Check::Negativity => 0.0,
        }
    }

    fn min_two_j(self) -> u32 {
        match self {
            Check::Negativity => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Check::Oracle => "oracle",
            Check::Dicke => "dicke",
            Check::Identity => "identity",
            Check::Negativity => "negativity",
        };
        f.write_str(name)
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown check {s:?}")))
    }
}

/// Outcome of one check at one spin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: Check,
    pub j: SpinQuantum,
    pub points: usize,
    /// Largest deviation found; 0 or 1 for the exact checks.
    pub worst_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Angle at which the largest deviation occurred.
    pub worst_eta: Option<f64>,
    pub route: &'static str,
}

/// Angles `2π(i + 0.37)/count`, avoiding the special points `0` and `π`.
pub fn verification_angles(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| 2.0 * PI * (i as f64 + 0.37) / count as f64)
        .collect()
}

/// Runs `check` for every `2j` from its minimum up to `max_two_j`.
pub fn run_check(check: Check, max_two_j: u32, seed: u64) -> Result<Vec<CheckRow>> {
    (check.min_two_j()..=max_two_j)
        .into_par_iter()
        .map(|two_j| run_single(check, SpinQuantum::new(two_j)?, seed))
        .collect()
}

fn worst(errors: impl Iterator<Item = (f64, f64)>) -> (f64, Option<f64>, usize) {
    let mut out = (0.0, None, 0);
    for (eta, e) in errors {
        out.2 += 1;
        if !(e <= out.0) {
            out.0 = e;
            out.1 = Some(eta);
        }
    }
    out
}

fn run_single(check: Check, j: SpinQuantum, seed: u64) -> Result<CheckRow> {
    let tolerance = check.tolerance();
    let (worst_error, worst_eta, points, route) = match check {
        Check::Oracle => {
            let etas = verification_angles(25);
            let grid = QuadratureGrid::for_spin(j);
            let mut errors = Vec::new();
            for s in 0..20 {
                let state = random_state(j, seed.wrapping_add(s));
                let quad = quadrature_fidelity_curve(&state, &etas, &grid)?;
                errors.extend(
                    etas.iter()
                        .zip(quad)
                        .map(|(&eta, q)| (eta, (average_fidelity(&state, eta) - q).abs())),
                );
            }
            let (w, at, n) = worst(errors.into_iter());
            (w, at, n, "quadrature")
        }
        Check::Dicke => {
            let sys = DickeSystem::new(j)?;
            let table = angular_table(j);
            let errors = verification_angles(100).into_iter().flat_map(|eta| {
                let closed = table.phi_all(eta);
                let dicke = sys.phi(eta);
                closed
                    .into_iter()
                    .zip(dicke)
                    .map(move |(a, b)| (eta, (a - b).abs()))
                    .collect::<Vec<_>>()
            });
            let (w, at, n) = worst(errors);
            (w, at, n, "dicke")
        }
        Check::Identity => {
            let n = u64::from(j.two_j());
            let failures = (0..=n)
                .filter(|&k| !combinatorial_identity_check(n, k))
                .count();
            (
                if failures == 0 { 0.0 } else { 1.0 },
                None,
                n as usize + 1,
                "exact",
            )
        }
        Check::Negativity => {
            let ok = negativity_window(&angular_table(j))?;
            (if ok { 0.0 } else { 1.0 }, None, 1000, "closed-form")
        }
    };
    Ok(CheckRow {
        check,
        j,
        points,
        worst_error,
        tolerance,
        passed: worst_error <= tolerance,
        worst_eta,
        route,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.to_string().parse::<Check>().unwrap(), c);
        }
        assert!("bogus".parse::<Check>().is_err());
    }

    #[test]
    fn small_suite_passes() {
        for c in Check::ALL {
            let rows = run_check(c, 4, 0).unwrap();
            assert!(!rows.is_empty());
            assert!(rows.iter().all(|r| r.passed), "{c}: {rows:?}");
        }
    }
}
