//! Parsing of angles, angle grids and inline amplitude lists.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::SpinQuantum;
use crate::spin_state::AnticoherenceProfile;

/// Parses an angle in radians: a number, `pi`, or a product/quotient of
/// numbers and `pi` such as `pi/2`, `pi*0.75`, `3*pi/4` or `-pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    eval_product(s).ok_or_else(|| Error::InvalidGrid(format!("cannot parse angle {s:?}")))
}

/// Parses comma-separated anticoherence measures `A_1,…,A_⌊j⌋`; entries may
/// be fractions such as `3/4`.
pub fn parse_profile(j: SpinQuantum, s: &str) -> Result<AnticoherenceProfile> {
    let measures = s
        .split(',')
        .map(|e| eval_product(e).ok_or_else(|| Error::InvalidConfig(format!("cannot parse measure {e:?}"))))
        .collect::<Result<Vec<f64>>>()?;
    AnticoherenceProfile::from_measures(j, &measures)
}

fn eval_product(s: &str) -> Option<f64> {
    let text = s.trim();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text),
    };
    let mut value = 1.0;
    let mut divide = false;
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let token = rest[..end].trim();
        let factor = if token.eq_ignore_ascii_case("pi") { PI } else { token.parse::<f64>().ok()? };
        value = if divide { value / factor } else { value * factor };
        if end == rest.len() {
            break;
        }
        divide = rest.as_bytes()[end] == b'/';
        rest = &rest[end + 1..];
    }
    value.is_finite().then_some(sign * value)
}

/// Inclusive evenly spaced grid written `start:stop:count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AngleGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(Self { start, stop, count })
    }

    /// Grid points, with both endpoints included exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

impl FromStr for AngleGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid(format!(
                "expected start:stop:count, got {s:?}"
            )));
        }
        let count = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad point count {:?}", parts[2])))?;
        Self::new(parse_angle(parts[0])?, parse_angle(parts[1])?, count)
    }
}

/// Parses comma-separated amplitudes in descending `m`; each entry is a real
/// number or a complex literal such as `0.5-0.5i`.
pub fn parse_amplitudes(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(|entry| {
            let e = entry.trim();
            e.parse::<Complex64>()
                .map_err(|_| Error::InvalidConfig(format!("cannot parse amplitude {e:?}")))
        })
        .collect()
}
