use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::SpinState;
use crate::error::{Error, Result};
use crate::specfun::SpinQuantum;

const IDS: &[&str] = &[
    "coherent",
    "cat",
    "inner-cat",
    "tetrahedron",
    "bipyramid",
    "octahedron",
    "small-angle",
];

/// Identifiers accepted by [`named_state`].
pub fn catalog_ids() -> &'static [&'static str] {
    IDS
}

/// A named state from the catalog; the j = 9/2 small-angle state uses χ = 0.
///
/// * `coherent`: `|j,j⟩`
/// * `cat`: `(|j,-j⟩ + |j,j⟩)/√2`
/// * `inner-cat`: `(|j,1-j⟩ + |j,j-1⟩)/√2`, j ≥ 3/2
/// * `tetrahedron` (j = 2), `bipyramid` (j = 5/2), `octahedron` (j = 3)
/// * `small-angle`: the best small-angle rotosensor found for 2 ≤ j ≤ 5
pub fn named_state(id: &str, j: SpinQuantum) -> Result<SpinState> {
    named_state_with_chi(id, j, 0.0)
}

/// As [`named_state`], with the relative phase χ of the j = 9/2 small-angle
/// state given explicitly.
pub fn named_state_with_chi(id: &str, j: SpinQuantum, chi: f64) -> Result<SpinState> {
    let n = i64::from(j.two_j());
    let mismatch = || Error::CatalogSpinMismatch {
        id: id.to_string(),
        spin: j.to_string(),
    };
    let r = |x: f64| Complex64::new(x, 0.0);
    // (two_m, amplitude) pairs
    let terms: Vec<(i64, Complex64)> = match id {
        "coherent" => vec![(n, r(1.0))],
        "cat" => vec![(-n, r(1.0)), (n, r(1.0))],
        "inner-cat" if n >= 3 => vec![(2 - n, r(1.0)), (n - 2, r(1.0))],
        "tetrahedron" if n == 4 => tetrahedron(),
        "bipyramid" if n == 5 => vec![(-3, r(1.0)), (3, r(1.0))],
        "octahedron" if n == 6 => vec![(-4, r(1.0)), (4, r(1.0))],
        "small-angle" => match n {
            4 => tetrahedron(),
            5 => vec![(-3, r(1.0)), (3, r(1.0))],
            6 => vec![(-4, r(1.0)), (4, r(1.0))],
            7 => vec![
                (-7, r((2.0f64 / 9.0).sqrt())),
                (-1, r(-(7.0f64 / 18.0).sqrt())),
                (5, r(-(7.0f64 / 18.0).sqrt())),
            ],
            8 => vec![
                (-8, r((5.0f64 / 24.0).sqrt())),
                (0, r(-(7.0f64 / 12.0).sqrt())),
                (8, r(-(5.0f64 / 24.0).sqrt())),
            ],
            9 => vec![
                (-9, r(13f64.sqrt() / 8.0)),
                (-1, Complex64::from_polar((15.0f64 / 32.0).sqrt(), chi)),
                (7, r(-(21f64.sqrt()) / 8.0)),
            ],
            10 => vec![
                (-8, r((5.0f64 / 16.0).sqrt())),
                (0, r((3.0f64 / 8.0).sqrt())),
                (8, r(-(5.0f64 / 16.0).sqrt())),
            ],
            _ => return Err(mismatch()),
        },
        _ if IDS.contains(&id) => return Err(mismatch()),
        _ => return Err(Error::UnknownCatalogState(id.to_string())),
    };
    let mut amps = vec![Complex64::new(0.0, 0.0); j.dim()];
    for (two_m, c) in terms {
        amps[j.index_of_two_m(two_m)?] += c;
    }
    SpinState::new(j, amps)
}

fn tetrahedron() -> Vec<(i64, Complex64)> {
    vec![
        (-4, Complex64::new(0.5, 0.0)),
        (0, Complex64::new(0.0, 0.5f64.sqrt())),
        (4, Complex64::new(0.5, 0.0)),
    ]
}

/// Haar-random state: independent standard complex Gaussians, normalized.
pub fn random_state(j: SpinQuantum, seed: u64) -> SpinState {
    random_state_with(j, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_state_with<R: Rng + ?Sized>(j: SpinQuantum, rng: &mut R) -> SpinState {
    loop {
        let amps = (0..j.dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = SpinState::new(j, amps) {
            return s;
        }
    }
}
