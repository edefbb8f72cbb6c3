use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericError;

const REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationaryKind {
    Equilibrium,
    RigidlyTranslating,
    RelativeEquilibrium,
    Collapse,
    NonStationary,
}

/// Velocities V_n = Σ_{j≠n} Γ_j / conj(z_n − z_j).
pub fn velocities(z: &[Complex64], gamma: &[f64]) -> Result<Vec<Complex64>, NumericError> {
    if z.len() != gamma.len() {
        return Err(NumericError::Dimension(format!("{} positions, {} vorticities", z.len(), gamma.len())));
    }
    let n = z.len();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for a in 0..n {
        for j in (0..n).filter(|&j| j != a) {
            let d = z[a] - z[j];
            if d.norm() == 0.0 {
                return Err(NumericError::Coincident(a.min(j) + 1, a.max(j) + 1));
            }
            v[a] += gamma[j] / d.conj();
        }
    }
    Ok(v)
}

/// Least-squares fit of V_n = Λ(z_n − z_0), then the stationary type.
/// Returns the kind with the fitted Λ.
pub fn classify(z: &[Complex64], gamma: &[f64]) -> Result<(StationaryKind, Complex64), NumericError> {
    let v = velocities(z, gamma)?;
    let n = z.len() as f64;
    let zbar: Complex64 = z.iter().sum::<Complex64>() / n;
    let vbar: Complex64 = v.iter().sum::<Complex64>() / n;
    let zc: Vec<Complex64> = z.iter().map(|x| x - zbar).collect();
    let vc: Vec<Complex64> = v.iter().map(|x| x - vbar).collect();
    let denom: f64 = zc.iter().map(|x| x.norm_sqr()).sum();
    let lambda: Complex64 = zc.iter().zip(&vc).map(|(a, b)| a.conj() * b).sum::<Complex64>() / denom;
    let mut min_dist = f64::INFINITY;
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            min_dist = min_dist.min((z[a] - z[b]).norm());
        }
    }
    // natural velocity scale of the configuration
    let scale = gamma.iter().map(|g| g.abs()).sum::<f64>() / min_dist;
    let vmax = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let misfit = zc.iter().zip(&vc).map(|(a, b)| (b - lambda * a).norm()).fold(0.0, f64::max);
    let spread = zc.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let kind = if vmax < REL_TOL * scale {
        StationaryKind::Equilibrium
    } else if misfit > REL_TOL * scale {
        StationaryKind::NonStationary
    } else if lambda.norm() * spread < REL_TOL * scale {
        StationaryKind::RigidlyTranslating
    } else if lambda.im.abs() <= REL_TOL * lambda.norm() {
        StationaryKind::RelativeEquilibrium
    } else {
        StationaryKind::Collapse
    };
    Ok((kind, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triangle() -> Vec<Complex64> {
        (0..3).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)).collect()
    }

    #[test]
    fn equilateral_is_relative_equilibrium() {
        let (kind, lambda) = classify(&triangle(), &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(kind, StationaryKind::RelativeEquilibrium);
        assert!((lambda - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dipole_translates() {
        let (kind, _) = classify(&[c(0.0, 0.0), c(1.0, 0.0)], &[1.0, -1.0]).unwrap();
        assert_eq!(kind, StationaryKind::RigidlyTranslating);
    }

    #[test]
    fn generic_is_not_stationary() {
        let z = [c(0.0, 0.0), c(1.0, 0.1), c(0.3, 2.0), c(-1.1, 0.7)];
        let (kind, _) = classify(&z, &[1.0, 2.0, -0.5, 1.5]).unwrap();
        assert_eq!(kind, StationaryKind::NonStationary);
    }

    #[test]
    fn shrinking_solution_is_collapse() {
        // L = 4 - 2 - 2 = 0 admits self-similar collapse
        let gamma = [2.0, 2.0, -1.0];
        let lambda = Complex64::from_polar(1.0, 0.3);
        let sol = crate::numeric::solve(&gamma, lambda, &crate::numeric::SolveOptions::default()).unwrap();
        let (kind, fitted) = classify(&sol.config.z, &gamma).unwrap();
        assert_eq!(kind, StationaryKind::Collapse);
        assert!((fitted - lambda).norm() < 1e-9);
    }

    #[test]
    fn invariant_under_similarity() {
        let z = triangle();
        let moved: Vec<Complex64> = z.iter().map(|x| x * c(0.0, 2.0) + c(3.0, -1.0)).collect();
        let (kind, lambda) = classify(&moved, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(kind, StationaryKind::RelativeEquilibrium);
        // scaling by |t| = 2 divides Λ by 4
        assert!((lambda - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn collision_rejected() {
        assert!(matches!(classify(&[c(0.0, 0.0), c(0.0, 0.0)], &[1.0, 1.0]), Err(NumericError::Coincident(1, 2))));
    }
}
