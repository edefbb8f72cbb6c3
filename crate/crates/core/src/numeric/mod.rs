//! Floating-point side: the extended central-configuration system, a
//! Levenberg–Marquardt solver, stationary classification and the order probe.

mod classify;
mod probe;
mod solve;

pub use classify::{classify, velocities, StationaryKind};
pub use probe::{
    estimate_order, load_samples, probe, synthetic_sequence, OrderExponent, ProbeOutcome, Sample,
    SingularSequenceSample,
};
pub use solve::{solve, Solution, SolveOptions};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const IDENTITY_TOL: f64 = 1e-9;
pub const SOLVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("vorticity Γ{0} is zero")]
    ZeroVorticity(usize),
    #[error("|Λ| must be 1, got {0}")]
    LambdaNotUnit(f64),
    #[error("length mismatch: {0}")]
    Dimension(String),
    #[error("no convergence after {attempts} attempts (best residual {best:e})")]
    NoConvergence { attempts: usize, best: f64 },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("epsilon must be positive and strictly decreasing")]
    NotDecreasing,
    #[error("epsilon range {0} is below the required factor 2")]
    NarrowRange(f64),
    #[error("ambiguous order exponent {alpha:.3} for {quantity}")]
    Ambiguous { quantity: String, alpha: f64 },
    #[error("sample {index}: {msg}")]
    BadSample { index: usize, msg: String },
}

/// A point of the extended system. `big_z[j][k] = 1/w_{jk}`,
/// `big_w[j][k] = 1/z_{jk}`, with `z_{jk} = z_k - z_j`; diagonals are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub gamma: Vec<f64>,
    pub z: Vec<Complex64>,
    pub w: Vec<Complex64>,
    #[serde(rename = "Z")]
    pub big_z: Vec<Vec<Complex64>>,
    #[serde(rename = "W")]
    pub big_w: Vec<Vec<Complex64>>,
    pub lambda: Complex64,
}

fn reciprocal_differences(v: &[Complex64]) -> Result<Vec<Vec<Complex64>>, NumericError> {
    let n = v.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let d = v[k] - v[j];
                if d == Complex64::new(0.0, 0.0) {
                    return Err(NumericError::Coincident(j.min(k) + 1, j.max(k) + 1));
                }
                out[j][k] = d.inv();
            }
        }
    }
    Ok(out)
}

impl Configuration {
    pub fn new(gamma: Vec<f64>, z: Vec<Complex64>, w: Vec<Complex64>, lambda: Complex64) -> Result<Self, NumericError> {
        if z.len() != gamma.len() || w.len() != gamma.len() {
            return Err(NumericError::Dimension(format!("{} vorticities, {} z, {} w", gamma.len(), z.len(), w.len())));
        }
        let big_z = reciprocal_differences(&w)?;
        let big_w = reciprocal_differences(&z)?;
        Ok(Configuration { gamma, z, w, big_z, big_w, lambda })
    }

    /// Real configuration: `w` is the conjugate of `z`.
    pub fn real(gamma: Vec<f64>, z: Vec<Complex64>, lambda: Complex64) -> Result<Self, NumericError> {
        let w = z.iter().map(|c| c.conj()).collect();
        Configuration::new(gamma, z, w, lambda)
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.z.iter().zip(&self.w).all(|(z, w)| (z.conj() - w).norm() <= tol)
    }

    pub fn translated(&self, shift: Complex64) -> Result<Self, NumericError> {
        let z = self.z.iter().map(|v| v + shift).collect();
        let w = self.w.iter().map(|v| v + shift.conj()).collect();
        Configuration::new(self.gamma.clone(), z, w, self.lambda)
    }
}

/// Max-norm of every equation of the extended system: both balance
/// equations, both reciprocal ties and antisymmetry.
pub fn residual(c: &Configuration) -> Result<f64, NumericError> {
    let n = c.n();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            if a != b && (c.z[a] == c.z[b] || c.w[a] == c.w[b]) {
                return Err(NumericError::Coincident(a.min(b) + 1, a.max(b) + 1));
            }
        }
    }
    for k in 0..n {
        let mut sz = Complex64::new(0.0, 0.0);
        let mut sw = Complex64::new(0.0, 0.0);
        for j in (0..n).filter(|&j| j != k) {
            sz += c.gamma[j] * c.big_z[j][k];
            sw += c.gamma[j] * c.big_w[j][k];
        }
        worst = worst.max((c.lambda * c.z[k] - sz).norm());
        worst = worst.max((c.lambda.conj() * c.w[k] - sw).norm());
        for j in (0..n).filter(|&j| j != k) {
            let one = Complex64::new(1.0, 0.0);
            worst = worst.max((c.big_z[j][k] * (c.w[k] - c.w[j]) - one).norm());
            worst = worst.max((c.big_w[j][k] * (c.z[k] - c.z[j]) - one).norm());
            worst = worst.max((c.big_z[j][k] + c.big_z[k][j]).norm());
            worst = worst.max((c.big_w[j][k] + c.big_w[k][j]).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub residual: f64,
    /// |Σ Γ_n z_n|
    pub moment_z: f64,
    /// |Σ Γ_n w_n|
    pub moment_w: f64,
    /// |Λ Σ Γ_n z_n w_n − L|
    pub angular: f64,
    pub pass: bool,
}

/// M = 0 and ΛI = L, each to `IDENTITY_TOL`. Fails outright when the
/// configuration is not a solution to 1e-10.
pub fn check_identities(c: &Configuration) -> IdentityReport {
    let residual = residual(c).unwrap_or(f64::INFINITY);
    let mz: Complex64 = c.gamma.iter().zip(&c.z).map(|(g, z)| g * z).sum();
    let mw: Complex64 = c.gamma.iter().zip(&c.w).map(|(g, w)| g * w).sum();
    let inertia: Complex64 = (0..c.n()).map(|k| c.gamma[k] * c.z[k] * c.w[k]).sum();
    let mut l = 0.0;
    for j in 0..c.n() {
        for k in j + 1..c.n() {
            l += c.gamma[j] * c.gamma[k];
        }
    }
    let angular = (c.lambda * inertia - l).norm();
    let (moment_z, moment_w) = (mz.norm(), mw.norm());
    IdentityReport {
        residual,
        moment_z,
        moment_w,
        angular,
        pass: residual < 1e-10 && moment_z < IDENTITY_TOL && moment_w < IDENTITY_TOL && angular < IDENTITY_TOL,
    }
}
