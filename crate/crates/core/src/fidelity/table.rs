use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::specfun::{binomial_int, rational_to_f64, SpinQuantum};

/// `a_{t,k} = 4^t (-1)^{k+t} C(2N,2k) C(k,t) C(2N-2t,N-t) / ((2k+1) C(2N,N))`.
pub fn coeff_a(j: SpinQuantum, t: usize, k: usize) -> BigRational {
    let n = u64::from(j.two_j());
    let (t, k) = (t as i64, k as i64);
    if t > k || k > n as i64 {
        return BigRational::zero();
    }
    let num = BigInt::from(4).pow(t as u32)
        * binomial_int(2 * n, 2 * k)
        * binomial_int(k as u64, t)
        * binomial_int(2 * n - 2 * t as u64, n as i64 - t);
    let den = BigInt::from(2 * k + 1) * binomial_int(2 * n, n as i64);
    let r = BigRational::new(num, den);
    if (k + t) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Exact coefficients `b_{t,k}` of the angular functions
/// `φ_t(η) = Σ_k b_{t,k} sin^{2k}(η/2) cos^{2(N-k)}(η/2)`, for `t = 0…⌊j⌋`.
///
/// Rows are evaluated by Horner's rule in the ratio `s/c` (or `c/s`) of
/// `s = sin²(η/2)`, `c = cos²(η/2)`, carried in double-double arithmetic with
/// double-double coefficients: for large `N` the terms cancel by many orders
/// of magnitude. Each row is also kept as an exact cosine series
/// `Σ_p g_p cos(pη)`.
#[derive(Clone, Debug)]
pub struct AngularTable {
    j: SpinQuantum,
    exact: Vec<Vec<BigRational>>,
    bern: Vec<Vec<f64>>,
    bern_dd: Vec<Vec<TwoFloat>>,
    cosine_exact: Vec<Vec<BigRational>>,
}

impl AngularTable {
    pub fn new(j: SpinQuantum) -> Self {
        let n = j.two_j() as usize;
        let exact: Vec<Vec<BigRational>> = (0..=j.floor_j())
            .map(|t| (0..=n).map(|k| coeff_b(j, t, k)).collect())
            .collect();
        let basis = bernstein_in_x(n);
        let to_cheb = monomial_to_chebyshev(n);
        let cosine_exact: Vec<Vec<BigRational>> = exact
            .iter()
            .map(|row| {
                let mut poly = vec![BigRational::zero(); n + 1];
                for (b, e) in row.iter().zip(&basis) {
                    if b.is_zero() {
                        continue;
                    }
                    for (acc, c) in poly.iter_mut().zip(e) {
                        *acc += b * c;
                    }
                }
                let mut g = vec![BigRational::zero(); n + 1];
                for (deg, a) in poly.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (p, w) in &to_cheb[deg] {
                        g[*p] += a * w;
                    }
                }
                g
            })
            .collect();
        let bern = exact
            .iter()
            .map(|r| r.iter().map(rational_to_f64).collect())
            .collect();
        let bern_dd = exact
            .iter()
            .map(|r| r.iter().map(rational_to_dd).collect())
            .collect();
        Self {
            j,
            exact,
            bern,
            bern_dd,
            cosine_exact,
        }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    /// Exact `b_{t,k}`.
    pub fn exact(&self, t: usize, k: usize) -> &BigRational {
        &self.exact[t][k]
    }

    /// `b_{t,0} … b_{t,N}` in double precision.
    pub fn coefficients(&self, t: usize) -> &[f64] {
        &self.bern[t]
    }

    /// Exact cosine-series coefficients `g_p`, `φ_t(η) = Σ_p g_p cos(pη)`.
    pub fn cosine_exact(&self, t: usize) -> &[BigRational] {
        &self.cosine_exact[t]
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t > self.j.floor_j() {
            return Err(Error::OutOfRange {
                name: "t",
                value: t as i64,
                lo: 0,
                hi: self.j.floor_j() as i64,
            });
        }
        Ok(())
    }

    /// `φ_t(η)`, `0 ≤ t ≤ ⌊j⌋`.
    pub fn phi(&self, t: usize, eta: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(Eval::new(self.j.two_j() as usize, eta).value(&self.bern_dd[t]))
    }

    /// `φ_0(η) … φ_⌊j⌋(η)`.
    pub fn phi_all(&self, eta: f64) -> Vec<f64> {
        let e = Eval::new(self.j.two_j() as usize, eta);
        self.bern_dd.iter().map(|b| e.value(b)).collect()
    }

    /// `φ_0(η) + Σ_t φ_t(η) A_t`.
    pub fn fidelity(&self, measures: &[f64], eta: f64) -> Result<f64> {
        if measures.len() != self.j.floor_j() {
            return Err(Error::ProfileLength {
                expected: self.j.floor_j(),
                got: measures.len(),
            });
        }
        Ok(self.weighted_sum(eta, |t| TwoFloat::from(measures[t - 1])))
    }

    /// Same as [`fidelity`](Self::fidelity) with `A_t = (t+1)/t (1 - tr ρ_t²)`
    /// formed in extended precision from `purities[t]`, `t = 0…` at least `⌊j⌋`.
    ///
    /// For large j the terms `φ_t A_t` cancel strongly, so rounding `A_t` to
    /// double first would cost several digits.
    pub fn fidelity_from_purities(&self, purities: &[f64], eta: f64) -> Result<f64> {
        if purities.len() <= self.j.floor_j() {
            return Err(Error::ProfileLength {
                expected: self.j.floor_j() + 1,
                got: purities.len(),
            });
        }
        Ok(self.weighted_sum(eta, |t| {
            let one_minus = TwoFloat::new_sub(1.0, purities[t]);
            one_minus * TwoFloat::new_div((t + 1) as f64, t as f64)
        }))
    }

    fn weighted_sum(&self, eta: f64, measure: impl Fn(usize) -> TwoFloat) -> f64 {
        let e = Eval::new(self.j.two_j() as usize, eta);
        let mut acc = e.value_dd(&self.bern_dd[0]);
        for t in 1..self.bern_dd.len() {
            acc += e.value_dd(&self.bern_dd[t]) * measure(t);
        }
        acc.hi()
    }

    /// CSV with columns `t,k,numerator,denominator`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "k", "numerator", "denominator"])?;
        for (t, row) in self.exact.iter().enumerate() {
            for (k, b) in row.iter().enumerate() {
                out.write_record([
                    t.to_string(),
                    k.to_string(),
                    b.numer().to_string(),
                    b.denom().to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Cached table for `j`; tables are immutable and shared.
pub fn angular_table(j: SpinQuantum) -> Arc<AngularTable> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<AngularTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("table cache poisoned").get(&j.two_j()) {
        return Arc::clone(t);
    }
    let table = Arc::new(AngularTable::new(j));
    Arc::clone(
        cache
            .write()
            .expect("table cache poisoned")
            .entry(j.two_j())
            .or_insert(table),
    )
}

/// `φ_t(η)` from a table.
pub fn phi(table: &AngularTable, t: usize, eta: f64) -> Result<f64> {
    table.phi(t, eta)
}

fn coeff_b(j: SpinQuantum, t: usize, k: usize) -> BigRational {
    let n = j.two_j() as usize;
    if t == 0 {
        return BigRational::new(binomial_int(n as u64, k as i64), BigInt::from(2 * k + 1));
    }
    let mut s = coeff_a(j, t, k) + coeff_a(j, n - t, k);
    if 2 * t == n {
        s /= BigInt::from(2);
    }
    -s * BigRational::new(BigInt::from(t), BigInt::from(t + 1))
}

/// Monomial coefficients in `x = cos η` of `(1-x)^k (1+x)^{N-k} / 2^N`, which
/// equals `sin^{2k}(η/2) cos^{2(N-k)}(η/2)`.
fn bernstein_in_x(n: usize) -> Vec<Vec<BigRational>> {
    let scale = BigInt::from(1) << n;
    (0..=n)
        .map(|k| {
            let mut c = vec![BigInt::zero(); n + 1];
            for a in 0..=k {
                let ca = binomial_int(k as u64, a as i64);
                let ca = if a % 2 == 1 { -ca } else { ca };
                for b in 0..=(n - k) {
                    c[a + b] += &ca * binomial_int((n - k) as u64, b as i64);
                }
            }
            c.into_iter()
                .map(|v| BigRational::new(v, scale.clone()))
                .collect()
        })
        .collect()
}

/// `x^n = Σ_p w_{n,p} T_p(x)`, as sparse lists of `(p, w)`.
fn monomial_to_chebyshev(n: usize) -> Vec<Vec<(usize, BigRational)>> {
    (0..=n)
        .map(|deg| {
            if deg == 0 {
                return vec![(0, BigRational::from_integer(1.into()))];
            }
            let den = BigInt::from(1) << (deg - 1);
            (0..=deg / 2)
                .map(|i| {
                    let p = deg - 2 * i;
                    let mut w = BigRational::new(binomial_int(deg as u64, i as i64), den.clone());
                    if p == 0 {
                        w /= BigInt::from(2);
                    }
                    (p, w)
                })
                .collect()
        })
        .collect()
}

/// Nearest double-double to an exact rational.
fn rational_to_dd(r: &BigRational) -> TwoFloat {
    let hi = rational_to_f64(r);
    let rest = r - BigRational::from_float(hi).expect("finite coefficient");
    TwoFloat::new_add(hi, rational_to_f64(&rest))
}

/// Per-angle quantities shared by all rows.
struct Eval {
    n: usize,
    /// ratio `s/c` when `s ≤ c`, otherwise `c/s`
    ratio: TwoFloat,
    /// `c^N` or `s^N` to match
    scale: TwoFloat,
    ascending: bool,
}

impl Eval {
    fn new(n: usize, eta: f64) -> Self {
        // φ is even and 2π-periodic
        let mut e = eta.rem_euclid(2.0 * PI);
        if e > PI {
            e = 2.0 * PI - e;
        }
        let (sh, ch) = (0.5 * e).sin_cos();
        let s = TwoFloat::new_mul(sh, sh);
        let c = TwoFloat::new_mul(ch, ch);
        if s <= c {
            Self {
                n,
                ratio: s / c,
                scale: c.powi(n as i32),
                ascending: true,
            }
        } else {
            Self {
                n,
                ratio: c / s,
                scale: s.powi(n as i32),
                ascending: false,
            }
        }
    }

    fn value(&self, b: &[TwoFloat]) -> f64 {
        self.value_dd(b).hi()
    }

    fn value_dd(&self, b: &[TwoFloat]) -> TwoFloat {
        debug_assert_eq!(b.len(), self.n + 1);
        let step = |acc: TwoFloat, x: &TwoFloat| acc * self.ratio + *x;
        let acc = if self.ascending {
            b.iter().rev().fold(TwoFloat::from(0.0), step)
        } else {
            b.iter().fold(TwoFloat::from(0.0), step)
        };
        acc * self.scale
    }
}
