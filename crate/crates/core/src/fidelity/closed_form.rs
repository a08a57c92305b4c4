use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::table::angular_table;
use crate::error::Result;
use crate::format::format_sig;
use crate::specfun::{binomial_int, rational_to_f64, SpinQuantum};
use crate::spin_state::{PurityKernel, SpinState};

/// Average fidelity `φ_0(η) + Σ_t φ_t(η) A_t(ψ)`.
pub fn average_fidelity(state: &SpinState, eta: f64) -> f64 {
    let j = state.spin();
    let kernel = PurityKernel::new(j);
    let purities: Vec<f64> = (0..=j.floor_j())
        .map(|t| kernel.purity_of(state.amps(), t))
        .collect();
    angular_table(j)
        .fidelity_from_purities(&purities, eta)
        .expect("purity count matches j")
}

/// Average fidelity assembled from all purities `tr ρ_t²` (t = 0…N) in the
/// alternative closed form
/// `F = Σ_t (-4)^t C(2N-2t,N-t) tr ρ_t² Σ_k (-1)^k s^k c^{N-k} C(2N+1,2k+1) C(k,t) / ((2N+1) C(2N,N))`
/// with `s = sin²(η/2)`, `c = cos²(η/2)`.
pub fn fidelity_from_purities(j: SpinQuantum, purities: &[f64], eta: f64) -> f64 {
    let n = j.two_j() as usize;
    assert_eq!(purities.len(), n + 1, "one purity per t = 0..=2j");
    let n64 = n as u64;
    let norm = BigInt::from(2 * n + 1) * binomial_int(2 * n64, n as i64);
    // The alternating weights cancel heavily in double precision, so the
    // sum is carried out exactly on the (exactly representable) inputs.
    let exact = |x: f64| BigRational::from_float(x).expect("finite input");
    let (sh, ch) = (0.5 * eta).sin_cos();
    let (sh, ch) = (exact(sh), exact(ch));
    let (s, c) = (&sh * &sh, &ch * &ch);
    let mut s_pow = vec![BigRational::one()];
    let mut c_pow = vec![BigRational::one()];
    for _ in 0..n {
        s_pow.push(s_pow.last().unwrap() * &s);
        c_pow.push(c_pow.last().unwrap() * &c);
    }
    let mut total = BigRational::zero();
    for (t, &p) in purities.iter().enumerate() {
        let outer =
            BigInt::from(-4).pow(t as u32) * binomial_int(2 * n64 - 2 * t as u64, (n - t) as i64);
        let mut inner = BigRational::zero();
        for k in t..=n {
            let w = binomial_int(2 * n64 + 1, 2 * k as i64 + 1) * binomial_int(k as u64, t as i64);
            let term = &s_pow[k] * &c_pow[n - k] * w;
            if k % 2 == 1 {
                inner -= term;
            } else {
                inner += term;
            }
        }
        total += inner * outer * exact(p);
    }
    rational_to_f64(&(total / norm))
}

/// Exact check of `Σ_{s,q} 2^s C(k,s) C(k-s,q) C(2N-2k, N-s-2q) = C(2N,N)`.
pub fn combinatorial_identity_check(n: u64, k: u64) -> bool {
    if k > n {
        return false;
    }
    let mut sum = BigInt::zero();
    for s in 0..=k {
        for q in 0..=(k - s) {
            let lower = n as i64 - s as i64 - 2 * q as i64;
            sum += (BigInt::from(1) << s)
                * binomial_int(k, s as i64)
                * binomial_int(k - s, q as i64)
                * binomial_int(2 * n - 2 * k, lower);
        }
    }
    sum == binomial_int(2 * n, n as i64)
}

/// One row of a fidelity curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub eta: f64,
    pub value: f64,
    pub route: Option<String>,
}

/// CSV with columns `eta,value[,route]`; numbers carry 12 significant digits.
pub fn write_curve_csv<W: Write>(w: W, points: &[CurvePoint]) -> Result<()> {
    let with_route = points.iter().any(|p| p.route.is_some());
    let mut out = csv::Writer::from_writer(w);
    if with_route {
        out.write_record(["eta", "value", "route"])?;
    } else {
        out.write_record(["eta", "value"])?;
    }
    for p in points {
        let mut rec = vec![format_sig(p.eta, 12), format_sig(p.value, 12)];
        if with_route {
            rec.push(p.route.clone().unwrap_or_default());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
