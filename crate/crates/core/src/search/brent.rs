use crate::error::{Error, Result};

/// Root of `g` on a sign-changing bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    /// Final bracket, `lo ≤ x ≤ hi`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Brent's method (inverse quadratic interpolation, secant and bisection).
/// Stops once the bracket is narrower than `xtol` and `|g| < ftol`, or the
/// bracket has collapsed to adjacent floats.
pub fn brent<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, xtol: f64, ftol: f64) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            bracket: (a, a),
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            bracket: (b, b),
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }
    // b is the best estimate, c the contrapoint, so that [b, c] brackets the root
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.25 * xtol;
        let m = 0.5 * (c - b);
        let width = (c - b).abs();
        if fb == 0.0 || (width < xtol && fb.abs() < ftol) || m.abs() <= 2.0 * f64::EPSILON * b.abs()
        {
            let bracket = if b < c { (b, c) } else { (c, b) };
            return Ok(Root {
                x: b,
                residual: fb,
                bracket,
                iterations: iter,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b);
    }
    let bracket = if b < c { (b, c) } else { (c, b) };
    Ok(Root {
        x: b,
        residual: fb,
        bracket,
        iterations: 200,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-12, 1e-12).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.bracket.0 <= r.x && r.x <= r.bracket.1);
        assert!(r.bracket.1 - r.bracket.0 < 1e-12);
        let r = brent(|x| x.cos(), 1.0, 2.0, 1e-10, 1e-9).unwrap();
        assert!((r.x - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn steep_and_flat_functions() {
        let r = brent(|x| (x - 0.3).powi(3), 0.0, 1.0, 1e-10, 1e-20).unwrap();
        assert!((r.x - 0.3).abs() < 1e-6);
        let r = brent(|x| (20.0 * (x - 0.7)).tanh(), 0.0, 1.0, 1e-10, 1e-9).unwrap();
        assert!((r.x - 0.7).abs() < 1e-10);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-10, 1e-9),
            Err(Error::NoSignChange { .. })
        ));
    }
}
