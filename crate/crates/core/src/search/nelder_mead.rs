/// Options for [`nelder_mead`].
#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub scale: f64,
    /// Iteration budget, shared across internal restarts.
    pub max_iters: usize,
    /// Converged when the spread of simplex values drops below this.
    pub ftol: f64,
    /// Times the simplex is rebuilt around the best vertex after convergence.
    pub reinits: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            scale: 0.3,
            max_iters: 2000,
            ftol: 1e-12,
            reinits: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Derivative-free Nelder–Mead minimization with dimension-adaptive
/// coefficients (Gao and Han). `project` is applied to every new point before
/// it is evaluated.
pub fn nelder_mead<F, P>(f: F, x0: &[f64], opts: &NelderMeadOptions, project: P) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut best_x = x0.to_vec();
    project(&mut best_x);
    let mut best_f = eval(&best_x, &mut evals);
    let mut iters = 0usize;
    let mut converged = false;

    for round in 0..=opts.reinits {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut v = best_x.clone();
            v[i] += opts.scale;
            project(&mut v);
            let fv = eval(&v, &mut evals);
            simplex.push((v, fv));
        }
        converged = false;
        while iters < opts.max_iters {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= opts.ftol {
                converged = true;
                break;
            }
            iters += 1;
            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect();
                project(&mut p);
                p
            };
            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(alpha * beta);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(alpha * gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let x_best = simplex[0].0.clone();
            for (v, fv) in simplex.iter_mut().skip(1) {
                for (x, b) in v.iter_mut().zip(&x_best) {
                    *x = b + delta * (*x - b);
                }
                project(v);
                *fv = eval(v, &mut evals);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < best_f - opts.ftol;
        if simplex[0].1 <= best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if (round > 0 && !improved) || iters >= opts.max_iters {
            break;
        }
    }
    NelderMeadResult {
        x: best_x,
        fx: best_f,
        iterations: iters,
        evaluations: evals,
        converged,
    }
}
