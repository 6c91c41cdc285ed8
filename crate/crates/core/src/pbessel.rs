//! `p`-Bessel bounds `B_p = sup_{|f|=1} sum_i |L_i f|^p` by multi-start
//! projected gradient ascent on the complex unit sphere.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::OperatorFamily;
use crate::spectral::CVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub restarts: usize,
    pub initial_step: f64,
    /// Stop when `|grad_sphere| < grad_tol * |grad|`.
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            restarts: crate::pair::DEFAULT_RESTARTS,
            initial_step: 0.1,
            grad_tol: 1e-9,
            max_iters: 500,
        }
    }
}

/// `sum_i |L_i f|^p`, without normalising `f`.
pub fn p_bessel_sum(family: &OperatorFamily, p: f64, f: &CVector) -> f64 {
    family
        .members()
        .iter()
        .map(|m| (m * f).norm().powf(p))
        .sum()
}

/// Objective value and Euclidean gradient (of the realified objective,
/// written back as a complex vector).
fn value_and_gradient(family: &OperatorFamily, p: f64, f: &CVector) -> (f64, CVector) {
    let mut value = 0.0;
    let mut grad = CVector::zeros(f.len());
    for m in family.members() {
        let y = m * f;
        let r = y.norm();
        value += r.powf(p);
        // at r = 0 the p < 2 terms are not differentiable; 0 is a valid
        // supergradient direction for the ascent
        if r > 0.0 {
            grad += m.adjoint() * y * Complex64::new(p * r.powf(p - 2.0), 0.0);
        }
    }
    (value, grad)
}

fn normalized(v: CVector) -> Option<CVector> {
    let n = v.norm();
    (n > 0.0 && n.is_finite()).then(|| v / Complex64::new(n, 0.0))
}

/// Ascent from a unit vector `start`; returns the best objective value seen.
pub fn ascend(family: &OperatorFamily, p: f64, start: CVector, cfg: &AscentConfig) -> f64 {
    let mut f = start;
    let (mut value, mut grad) = value_and_gradient(family, p, &f);
    let mut step = cfg.initial_step;
    for _ in 0..cfg.max_iters {
        let gnorm = grad.norm();
        if gnorm == 0.0 {
            break;
        }
        let radial = f.dotc(&grad).re;
        let tangent = &grad - &f * Complex64::new(radial, 0.0);
        let tnorm = tangent.norm();
        if tnorm < cfg.grad_tol * gnorm {
            break;
        }
        let direction = tangent / Complex64::new(gnorm, 0.0);
        let mut accepted = false;
        while step > 1e-14 {
            if let Some(trial) = normalized(&f + &direction * Complex64::new(step, 0.0)) {
                let (v, g) = value_and_gradient(family, p, &trial);
                if v > value {
                    f = trial;
                    value = v;
                    grad = g;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (step * 2.0).min(10.0);
    }
    value
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> CVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        });
        if let Some(u) = normalized(v) {
            return u;
        }
    }
}

/// Estimate of the optimal `p`-Bessel bound of `family`.
///
/// Every returned value is the objective at an actual unit vector, so it
/// never exceeds the true supremum. Starts are the `restarts` seeded random
/// unit vectors plus the leading row direction of each of the first few
/// members; results are independent of thread scheduling.
pub fn p_bessel_bound(family: &OperatorFamily, p: f64, restarts: usize, seed: u64) -> Result<f64> {
    p_bessel_bound_with(
        family,
        p,
        seed,
        &AscentConfig {
            restarts,
            ..AscentConfig::default()
        },
    )
}

pub fn p_bessel_bound_with(
    family: &OperatorFamily,
    p: f64,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter(
            "restarts must be at least 1".into(),
        ));
    }
    let dim = family.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<CVector> = (0..cfg.restarts)
        .map(|_| random_unit(dim, &mut rng))
        .collect();
    starts.extend(
        family
            .members()
            .iter()
            .take(8)
            .filter_map(|m| normalized(m.row(0).adjoint())),
    );
    let best = starts
        .into_par_iter()
        .map(|s| ascend(family, p, s, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn onb2() -> OperatorFamily {
        let e = |i: usize| {
            let mut v = CVector::zeros(2);
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        OperatorFamily::from_vectors(2, &[e(0), e(1)]).unwrap()
    }

    // dense scan of |cos t|^p + |sin t|^p; by phase invariance the sup over
    // C^2 of |f_1|^p + |f_2|^p reduces to this circle
    fn circle_scan(p: f64) -> f64 {
        (0..=200_000)
            .map(|k| {
                let t = k as f64 * std::f64::consts::FRAC_PI_2 / 200_000.0;
                t.cos().abs().powf(p) + t.sin().abs().powf(p)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn orthonormal_basis_values() {
        assert_relative_eq!(
            p_bessel_bound(&onb2(), 2.0, 8, 1).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let oracle = circle_scan(4.0);
        assert_relative_eq!(oracle, 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            p_bessel_bound(&onb2(), 4.0, 8, 1).unwrap(),
            oracle,
            max_relative = 1e-6
        );

        let oracle = circle_scan(1.0);
        assert_relative_eq!(oracle, 2f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(
            p_bessel_bound(&onb2(), 1.0, 8, 1).unwrap(),
            oracle,
            max_relative = 1e-6
        );
    }

    #[test]
    fn rejects_small_exponent() {
        assert!(matches!(
            p_bessel_bound(&onb2(), 0.5, 4, 0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            p_bessel_bound(&onb2(), f64::NAN, 4, 0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(p_bessel_bound(&onb2(), 2.0, 0, 0).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let a = p_bessel_bound(&onb2(), 3.0, 5, 42).unwrap();
        let b = p_bessel_bound(&onb2(), 3.0, 5, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
