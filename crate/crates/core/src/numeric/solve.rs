use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{residual, Configuration, NumericError, SOLVE_TOL};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub attempts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { attempts: 64, max_iterations: 400, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub config: Configuration,
    /// Index of the successful random start.
    pub attempt: usize,
    /// Euclidean residual after each accepted step.
    pub history: Vec<f64>,
}

// Residual of Λz_n = Σ Γ_j / conj(z_n − z_j) in real coordinates, plus the
// rotation pin Im(z_2 − z_1) = 0.
fn equations(gamma: &[f64], lambda: Complex64, x: &DVector<f64>) -> DVector<f64> {
    let n = gamma.len();
    let z: Vec<Complex64> = (0..n).map(|k| Complex64::new(x[2 * k], x[2 * k + 1])).collect();
    let mut r = DVector::zeros(2 * n + 1);
    for a in 0..n {
        let mut f = lambda * z[a];
        for j in (0..n).filter(|&j| j != a) {
            f -= gamma[j] / (z[a] - z[j]).conj();
        }
        r[2 * a] = f.re;
        r[2 * a + 1] = f.im;
    }
    r[2 * n] = x[3] - x[1];
    r
}

fn jacobian(gamma: &[f64], lambda: Complex64, x: &DVector<f64>) -> DMatrix<f64> {
    let n = gamma.len();
    let z: Vec<Complex64> = (0..n).map(|k| Complex64::new(x[2 * k], x[2 * k + 1])).collect();
    let mut jac = DMatrix::zeros(2 * n + 1, 2 * n);
    let i = Complex64::new(0.0, 1.0);
    for a in 0..n {
        // df_a = A dz + B dz̄
        let mut a_coef = vec![Complex64::new(0.0, 0.0); n];
        let mut b_coef = vec![Complex64::new(0.0, 0.0); n];
        a_coef[a] = lambda;
        for j in (0..n).filter(|&j| j != a) {
            let t = gamma[j] / ((z[a] - z[j]).conj() * (z[a] - z[j]).conj());
            b_coef[a] += t;
            b_coef[j] -= t;
        }
        for m in 0..n {
            let dx = a_coef[m] + b_coef[m];
            let dy = i * (a_coef[m] - b_coef[m]);
            jac[(2 * a, 2 * m)] = dx.re;
            jac[(2 * a + 1, 2 * m)] = dx.im;
            jac[(2 * a, 2 * m + 1)] = dy.re;
            jac[(2 * a + 1, 2 * m + 1)] = dy.im;
        }
    }
    jac[(2 * n, 1)] = -1.0;
    jac[(2 * n, 3)] = 1.0;
    jac
}

fn min_separation(x: &DVector<f64>, n: usize) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            best = best.min((x[2 * a] - x[2 * b]).hypot(x[2 * a + 1] - x[2 * b + 1]));
        }
    }
    best
}

enum Attempt {
    Converged(DVector<f64>, Vec<f64>),
    Failed(f64),
}

fn attempt(gamma: &[f64], lambda: Complex64, opts: &SolveOptions, index: usize) -> Attempt {
    let n = gamma.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9e37_79b9).wrapping_add(index as u64));
    let scale = gamma.iter().map(|g| g.abs()).sum::<f64>().sqrt();
    let mut x = DVector::from_fn(2 * n, |_, _| rng.gen_range(-1.0..1.0) * scale);
    let mut r = equations(gamma, lambda, &x);
    let mut norm = r.norm();
    let mut history = vec![norm];
    let mut mu = 1e-3;
    for _ in 0..opts.max_iterations {
        if r.amax() < SOLVE_TOL * 0.1 {
            break;
        }
        let jac = jacobian(gamma, lambda, &x);
        let jt = jac.transpose();
        let mut normal = &jt * &jac;
        let g = &jt * &r;
        for d in 0..2 * n {
            normal[(d, d)] += mu * (normal[(d, d)] + 1e-12);
        }
        let step = match normal.clone().cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => match normal.lu().solve(&(-&g)) {
                Some(s) => s,
                None => return Attempt::Failed(norm),
            },
        };
        let trial = &x + &step;
        if min_separation(&trial, n) < 1e-9 * scale || trial.amax() > 1e9 {
            return Attempt::Failed(norm);
        }
        let rt = equations(gamma, lambda, &trial);
        let nt = rt.norm();
        if nt < norm {
            x = trial;
            r = rt;
            norm = nt;
            history.push(norm);
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    if r.amax() < SOLVE_TOL {
        Attempt::Converged(x, history)
    } else {
        Attempt::Failed(norm)
    }
}

/// Real normalized central configuration for `gamma` with the given unit Λ.
/// Random starts are tried in seed order; the first converged one wins.
pub fn solve(gamma: &[f64], lambda: Complex64, opts: &SolveOptions) -> Result<Solution, NumericError> {
    if gamma.len() < 2 {
        return Err(NumericError::Dimension("need at least two vortices".into()));
    }
    if let Some(k) = gamma.iter().position(|g| *g == 0.0) {
        return Err(NumericError::ZeroVorticity(k + 1));
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(NumericError::LambdaNotUnit(lambda.norm()));
    }
    let n = gamma.len();
    let outcomes: Vec<Attempt> = (0..opts.attempts).into_par_iter().map(|a| attempt(gamma, lambda, opts, a)).collect();
    let mut best = f64::INFINITY;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Attempt::Converged(x, history) => {
                let z = (0..n).map(|k| Complex64::new(x[2 * k], x[2 * k + 1])).collect();
                let config = Configuration::real(gamma.to_vec(), z, lambda)?;
                let res = residual(&config)?;
                if res < SOLVE_TOL {
                    return Ok(Solution { config, attempt: index, history });
                }
                best = best.min(res);
            }
            Attempt::Failed(r) => best = best.min(r),
        }
    }
    Err(NumericError::NoConvergence { attempts: opts.attempts, best })
}
