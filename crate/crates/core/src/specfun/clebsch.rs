use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{factorial, rational_to_f64, HalfInt};
use crate::error::{Error, Result};

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` (Condon–Shortley phase).
///
/// Evaluated with the Racah sum in exact rational arithmetic; the square root
/// is taken once on the exact squared value. Returns zero when the selection
/// rules (`|m| <= j`, triangle inequality, `M = m1 + m2`) are violated, and an
/// error when the arguments mix integers and half-integers inconsistently.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    let (tj1, tm1, tj2, tm2, tj, tm) = (
        j1.twice(),
        m1.twice(),
        j2.twice(),
        m2.twice(),
        j.twice(),
        m.twice(),
    );
    if tj1 < 0 || tj2 < 0 || tj < 0 {
        return Err(Error::InconsistentAngularMomenta(format!(
            "negative angular momentum in ({j1}, {j2}, {j})"
        )));
    }
    for (a, b) in [(tj1, tm1), (tj2, tm2), (tj, tm)] {
        if (a - b).rem_euclid(2) != 0 {
            return Err(Error::InconsistentAngularMomenta(format!(
                "projection {} incompatible with {}",
                HalfInt::from_twice(b),
                HalfInt::from_twice(a)
            )));
        }
    }
    if (tj1 + tj2 + tj).rem_euclid(2) != 0 {
        return Err(Error::InconsistentAngularMomenta(format!(
            "j1 + j2 + J = {j1} + {j2} + {j} is not an integer"
        )));
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return Ok(0.0);
    }
    if tm != tm1 + tm2 || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 {
        return Ok(0.0);
    }

    // All of these are non-negative integers once the checks above pass.
    let h = |x: i64| (x / 2) as u64;
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tm1);
    let c = h(tj2 + tm2);
    let d = tj - tj2 + tm1; // doubled, may be negative
    let e = tj - tj1 - tm2;

    let kmin = 0i64.max(-d / 2).max(-e / 2);
    let kmax = (a as i64).min(b as i64).min(c as i64);
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k as u64)
            * factorial(a - k as u64)
            * factorial(b - k as u64)
            * factorial(c - k as u64)
            * factorial((d / 2 + k) as u64)
            * factorial((e / 2 + k) as u64);
        let term = BigRational::new(BigInt::from(1), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(0.0);
    }

    let num = BigInt::from(tj + 1)
        * factorial(h(tj + tj1 - tj2))
        * factorial(h(tj - tj1 + tj2))
        * factorial(a)
        * factorial(h(tj + tm))
        * factorial(h(tj - tm))
        * factorial(h(tj1 - tm1))
        * factorial(h(tj1 + tm1))
        * factorial(h(tj2 - tm2))
        * factorial(h(tj2 + tm2));
    let den = factorial(h(tj1 + tj2 + tj) + 1);
    let squared = BigRational::new(num, den) * &sum * &sum;
    let magnitude = rational_to_f64(&squared).sqrt();
    Ok(if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x: i64) -> HalfInt {
        HalfInt::from_twice(x)
    }

    fn cg(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
        clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(tj), h(tm)).unwrap()
    }

    #[test]
    fn trivial_coupling_is_one() {
        for tj in 0..8 {
            for tm in (-tj..=tj).step_by(2) {
                assert!((cg(tj, tm, 0, 0, tj, tm) - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn known_values() {
        let r = 0.5f64.sqrt();
        assert!((cg(2, 2, 2, 0, 2, 2) - r).abs() < 1e-15);
        assert!((cg(1, 1, 1, -1, 0, 0) - r).abs() < 1e-15);
        assert!((cg(1, -1, 1, 1, 0, 0) + r).abs() < 1e-15);
        // ⟨1 0; 1 0 | 1 0⟩ vanishes.
        assert_eq!(cg(2, 0, 2, 0, 2, 0), 0.0);
        // ⟨1 0; 1 0 | 2 0⟩ = sqrt(2/3)
        assert!((cg(2, 0, 2, 0, 4, 0) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    /// Brute-force oracle: build |J M⟩ states of two spins by applying the
    /// total lowering operator to the stretched state and Gram–Schmidt.
    fn coupled_basis(tj1: i64, tj2: i64) -> Vec<(i64, i64, Vec<f64>)> {
        let d1 = (tj1 + 1) as usize;
        let d2 = (tj2 + 1) as usize;
        let idx = |a: usize, b: usize| a * d2 + b;
        let lower = |v: &[f64]| {
            let mut out = vec![0.0; d1 * d2];
            for a in 0..d1 {
                for b in 0..d2 {
                    let c = v[idx(a, b)];
                    if c == 0.0 {
                        continue;
                    }
                    // index a <-> m = j - a (doubled: tj - 2a)
                    let tm1 = tj1 - 2 * a as i64;
                    let tm2 = tj2 - 2 * b as i64;
                    if a + 1 < d1 {
                        let f =
                            (((tj1 + tm1) as f64 / 2.0) * ((tj1 - tm1) as f64 / 2.0 + 1.0)).sqrt();
                        out[idx(a + 1, b)] += f * c;
                    }
                    if b + 1 < d2 {
                        let f =
                            (((tj2 + tm2) as f64 / 2.0) * ((tj2 - tm2) as f64 / 2.0 + 1.0)).sqrt();
                        out[idx(a, b + 1)] += f * c;
                    }
                }
            }
            out
        };
        let mut found: Vec<(i64, i64, Vec<f64>)> = Vec::new();
        let mut tj = tj1 + tj2;
        while tj >= (tj1 - tj2).abs() {
            // highest-weight vector with M = J orthogonal to everything found
            let mut v = vec![0.0; d1 * d2];
            for a in 0..d1 {
                for b in 0..d2 {
                    if tj1 - 2 * a as i64 + tj2 - 2 * b as i64 == tj {
                        v[idx(a, b)] = 1.0 + a as f64 * 0.37;
                    }
                }
            }
            // two Gram–Schmidt passes keep the oracle orthogonal to ~1e-15
            for (_, tm, w) in found.iter().chain(found.iter()) {
                if *tm == tj {
                    let p: f64 = v.iter().zip(w).map(|(x, y)| x * y).sum();
                    v.iter_mut().zip(w).for_each(|(x, y)| *x -= p * y);
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= n);
            // Condon–Shortley: ⟨j1 j1; j2 (J - j1)| J J⟩ > 0
            let a0 = 0usize;
            let b0 = ((tj2 - (tj - tj1)) / 2) as usize;
            if b0 < d2 && v[idx(a0, b0)] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            let mut tm = tj;
            let mut cur = v;
            loop {
                found.push((tj, tm, cur.clone()));
                if tm == -tj {
                    break;
                }
                let mut next = lower(&cur);
                let n = next.iter().map(|x| x * x).sum::<f64>().sqrt();
                next.iter_mut().for_each(|x| *x /= n);
                cur = next;
                tm -= 2;
            }
            tj -= 2;
        }
        found
    }

    #[test]
    fn matches_ladder_operator_construction() {
        for tj1 in 0..=4i64 {
            for tj2 in 0..=4i64 {
                let d2 = (tj2 + 1) as usize;
                for (tj, tm, v) in coupled_basis(tj1, tj2) {
                    for a in 0..=(tj1 as usize) {
                        for b in 0..d2 {
                            let tm1 = tj1 - 2 * a as i64;
                            let tm2 = tj2 - 2 * b as i64;
                            let want = v[a * d2 + b];
                            let got = cg(tj1, tm1, tj2, tm2, tj, tm);
                            assert!(
                                (want - got).abs() < 1e-12,
                                "<{tj1} {tm1}; {tj2} {tm2} | {tj} {tm}>: {got} vs {want}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn columns_are_orthonormal() {
        for tj1 in 0..=8i64 {
            for tj2 in 0..=8i64 {
                let mut js = Vec::new();
                let mut tj = (tj1 - tj2).abs();
                while tj <= tj1 + tj2 {
                    js.push(tj);
                    tj += 2;
                }
                for &ja in &js {
                    for &jb in &js {
                        for tm in (-ja.min(jb)..=ja.min(jb)).step_by(2) {
                            let mut s = 0.0;
                            for tm1 in (-tj1..=tj1).step_by(2) {
                                let tm2 = tm - tm1;
                                if tm2.abs() > tj2 {
                                    continue;
                                }
                                s +=
                                    cg(tj1, tm1, tj2, tm2, ja, tm) * cg(tj1, tm1, tj2, tm2, jb, tm);
                            }
                            let want = if ja == jb { 1.0 } else { 0.0 };
                            assert!((s - want).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_inconsistent_mixtures() {
        assert!(clebsch_gordan(h(1), h(0), h(1), h(1), h(0), h(1)).is_err());
        assert!(clebsch_gordan(h(1), h(1), h(1), h(-1), h(1), h(0)).is_err());
        assert!(clebsch_gordan(h(-2), h(0), h(1), h(1), h(1), h(1)).is_err());
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(cg(2, 2, 2, 2, 2, 2), 0.0);
        assert_eq!(cg(2, 0, 2, 0, 6, 0), 0.0);
        assert_eq!(cg(2, 4, 2, 0, 2, 4), 0.0);
    }
}
