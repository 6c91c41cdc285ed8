//! Pair systems `(m, G, L)` and the multiplier `S = sum_i m_i G_i^H L_i`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::OperatorFamily;
use crate::pbessel;
use crate::spectral::{self, CMatrix};

pub const DEFAULT_PAIR_TOL: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 32;

/// One complex weight per family member.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence(Vec<Complex64>);

impl WeightSequence {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights
            .iter()
            .any(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::InvalidParameter("weights must be finite".into()));
        }
        Ok(Self(weights))
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); len])
    }

    pub fn from_real(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| Complex64::new(w, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m|_inf`.
    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|w| w.conj()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSystem {
    weights: WeightSequence,
    gamma: OperatorFamily,
    lambda: OperatorFamily,
}

impl PairSystem {
    pub fn new(
        weights: WeightSequence,
        gamma: OperatorFamily,
        lambda: OperatorFamily,
    ) -> Result<Self> {
        if gamma.ambient_dim() != lambda.ambient_dim() {
            return Err(Error::DimensionMismatch {
                what: "ambient dimension of gamma and lambda",
                expected: lambda.ambient_dim(),
                found: gamma.ambient_dim(),
            });
        }
        if gamma.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                what: "member count of gamma and lambda",
                expected: lambda.len(),
                found: gamma.len(),
            });
        }
        if weights.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                what: "weight count",
                expected: lambda.len(),
                found: weights.len(),
            });
        }
        for (g, l) in gamma.members().iter().zip(lambda.members()) {
            if g.nrows() != l.nrows() {
                return Err(Error::DimensionMismatch {
                    what: "paired member row count",
                    expected: l.nrows(),
                    found: g.nrows(),
                });
            }
        }
        Ok(Self {
            weights,
            gamma,
            lambda,
        })
    }

    /// `(1, L, L)`, whose multiplier is the frame operator of `L`.
    pub fn diagonal(lambda: OperatorFamily) -> Self {
        Self {
            weights: WeightSequence::ones(lambda.len()),
            gamma: lambda.clone(),
            lambda,
        }
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn gamma(&self) -> &OperatorFamily {
        &self.gamma
    }

    pub fn lambda(&self) -> &OperatorFamily {
        &self.lambda
    }

    pub fn ambient_dim(&self) -> usize {
        self.lambda.ambient_dim()
    }

    /// `(conj(m), L, G)`.
    pub fn adjoint_system(&self) -> Self {
        Self {
            weights: self.weights.conj(),
            gamma: self.lambda.clone(),
            lambda: self.gamma.clone(),
        }
    }
}

/// `S = sum_i m_i G_i^H L_i`, accumulated member by member.
pub fn pair_operator(pair: &PairSystem) -> CMatrix {
    let n = pair.ambient_dim();
    pair.gamma
        .members()
        .iter()
        .zip(pair.lambda.members())
        .zip(pair.weights.as_slice())
        .fold(CMatrix::zeros(n, n), |acc, ((g, l), &w)| {
            acc + g.adjoint() * l * w
        })
}

/// `S` via the stacked factorisation `G_stacked^H diag(m_i I_{d_i}) L_stacked`.
pub fn pair_operator_factorized(pair: &PairSystem) -> CMatrix {
    let mut weighted = pair.lambda.stacked();
    for ((&start, d), &w) in pair
        .lambda
        .offsets()
        .iter()
        .zip(pair.lambda.block_dims())
        .zip(pair.weights.as_slice())
    {
        weighted.rows_mut(start, d).scale_mut_complex(w);
    }
    pair.gamma.stacked().adjoint() * weighted
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, w: Complex64);
}

impl<S> ScaleComplex for nalgebra::Matrix<Complex64, nalgebra::Dyn, nalgebra::Dyn, S>
where
    S: nalgebra::StorageMut<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
{
    fn scale_mut_complex(&mut self, w: Complex64) {
        self.iter_mut().for_each(|z| *z *= w);
    }
}

/// `|S(m, G, L)^H - S(conj m, L, G)|`.
pub fn adjoint_check(pair: &PairSystem) -> f64 {
    let s = pair_operator(pair);
    let t = pair_operator(&pair.adjoint_system());
    spectral::op_norm(&(s.adjoint() - t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub operator: CMatrix,
    pub is_pair_frame: bool,
    pub sigma_min: f64,
    pub op_norm: f64,
    /// `op_norm / sigma_min`, for pair frames.
    pub condition_number: Option<f64>,
    /// Distance from 0 to the numerical range of `S`: the best `A` with
    /// `A |f|^2 <= |<Sf, f>|`.
    pub framelike_lower: f64,
    /// Numerical radius of `S`: the best `B` with `|<Sf, f>| <= B |f|^2`.
    pub framelike_upper: f64,
    pub adjoint_residual: f64,
}

impl PairReport {
    /// Whether the frame-like lower bound is positive at the report's
    /// relative tolerance. When it is, `S` is bounded below and hence a pair
    /// frame; the converse fails (a rotation-like `S` can have 0 in its
    /// numerical range).
    pub fn framelike_lower_attained(&self, tol: f64) -> bool {
        self.framelike_lower > tol * self.op_norm
    }
}

pub fn classify_pair(pair: &PairSystem, tol: f64, theta_steps: usize) -> Result<PairReport> {
    let s = pair_operator(pair);
    let sv = spectral::singular_values(&s);
    let (op_norm, sigma_min) = (sv[0], sv[sv.len() - 1]);
    let is_pair_frame = op_norm > 0.0 && sigma_min > tol * op_norm;
    let (framelike_lower, framelike_upper) =
        spectral::numerical_range_bounds(&s, theta_steps, spectral::DEFAULT_REFINE_ITERS)?;
    Ok(PairReport {
        is_pair_frame,
        sigma_min,
        op_norm,
        condition_number: is_pair_frame.then(|| op_norm / sigma_min),
        framelike_lower,
        framelike_upper,
        adjoint_residual: adjoint_check(pair),
        operator: s,
    })
}

/// `(m, G V, L W)`, whose multiplier is `V^H S W`.
pub fn compose(pair: &PairSystem, v: &CMatrix, w: &CMatrix) -> Result<PairSystem> {
    PairSystem::new(
        pair.weights.clone(),
        pair.gamma.right_multiply(v)?,
        pair.lambda.right_multiply(w)?,
    )
}

/// Norm of `S` next to the two Hölder-type bounds built from the `p`-Bessel
/// bound `B` of gamma and the `q`-Bessel bound `B'` of lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderReport {
    pub norm: f64,
    pub gamma_bound: f64,
    pub lambda_bound: f64,
    /// `|m|_inf B^{1/p} B'^{1/q}`.
    pub holder_bound: f64,
    /// `sqrt(|m|_inf B^{1/p} B'^{1/q})`.
    pub sqrt_bound: f64,
}

impl HolderReport {
    pub fn holder_holds(&self, slack: f64) -> bool {
        self.norm <= self.holder_bound + slack
    }

    pub fn sqrt_form_holds(&self, slack: f64) -> bool {
        self.norm <= self.sqrt_bound + slack
    }
}

/// Conjugate exponents: `1/p + 1/q = 1` within `1e-12`.
pub fn check_conjugate(p: f64, q: f64) -> Result<()> {
    if !(p >= 1.0 && q >= 1.0)
        || !(p.is_finite() && q.is_finite())
        || ((1.0 / p + 1.0 / q) - 1.0).abs() > 1e-12
    {
        return Err(Error::ExponentMismatch { p, q });
    }
    Ok(())
}

pub fn pq_pair_norm_bound(
    pair: &PairSystem,
    p: f64,
    q: f64,
    restarts: usize,
    seed: u64,
) -> Result<HolderReport> {
    check_conjugate(p, q)?;
    let gamma_bound = pbessel::p_bessel_bound(&pair.gamma, p, restarts, seed)?;
    let lambda_bound = pbessel::p_bessel_bound(&pair.lambda, q, restarts, seed.wrapping_add(1))?;
    let holder_bound =
        pair.weights.sup_norm() * gamma_bound.powf(1.0 / p) * lambda_bound.powf(1.0 / q);
    Ok(HolderReport {
        norm: spectral::op_norm(&pair_operator(pair)),
        gamma_bound,
        lambda_bound,
        holder_bound,
        sqrt_bound: holder_bound.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::CVector;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis(n: usize, order: &[usize]) -> OperatorFamily {
        let vs: Vec<CVector> = order
            .iter()
            .map(|&i| {
                let mut v = CVector::zeros(n);
                v[i] = c(1.0);
                v
            })
            .collect();
        OperatorFamily::from_vectors(n, &vs).unwrap()
    }

    fn swap_system() -> PairSystem {
        PairSystem::new(
            WeightSequence::ones(2),
            basis(2, &[0, 1]),
            basis(2, &[1, 0]),
        )
        .unwrap()
    }

    fn real(rows: usize, data: &[f64]) -> CMatrix {
        CMatrix::from_row_iterator(rows, data.len() / rows, data.iter().map(|&x| c(x)))
    }

    #[test]
    fn construction_checks() {
        let b2 = basis(2, &[0, 1]);
        assert!(matches!(
            PairSystem::new(WeightSequence::ones(3), b2.clone(), b2.clone()),
            Err(Error::DimensionMismatch {
                what: "weight count",
                ..
            })
        ));
        assert!(PairSystem::new(WeightSequence::ones(2), basis(3, &[0, 1]), b2.clone()).is_err());
        assert!(
            PairSystem::new(WeightSequence::ones(2), basis(2, &[0, 1]), basis(2, &[0])).is_err()
        );
        let g =
            OperatorFamily::new(2, vec![CMatrix::identity(2, 2), real(1, &[1.0, 0.0])]).unwrap();
        assert!(PairSystem::new(WeightSequence::ones(2), g, b2).is_err());
        assert!(WeightSequence::new(vec![Complex64::new(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn pair_operator_examples() {
        let id = PairSystem::diagonal(basis(1, &[0]));
        assert_eq!(pair_operator(&id), CMatrix::identity(1, 1));

        let weighted = PairSystem::new(
            WeightSequence::from_real(&[2.0, 5.0]).unwrap(),
            basis(2, &[0, 1]),
            basis(2, &[0, 1]),
        )
        .unwrap();
        assert_eq!(pair_operator(&weighted), real(2, &[2.0, 0.0, 0.0, 5.0]));

        assert_eq!(
            pair_operator(&swap_system()),
            real(2, &[0.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(
            pair_operator_factorized(&swap_system()),
            real(2, &[0.0, 1.0, 1.0, 0.0])
        );
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint_check(&swap_system()), 0.0);
        let h = 3f64.sqrt() / 2.0;
        let vs = [[0.0, 1.0], [-h, -0.5], [h, -0.5]]
            .iter()
            .map(|v| CVector::from_vec(vec![c(v[0]), c(v[1])]))
            .collect::<Vec<_>>();
        let fam = OperatorFamily::from_vectors(2, &vs).unwrap();
        let p = PairSystem::new(
            WeightSequence::from_real(&[0.5, 2.0, -1.0]).unwrap(),
            fam.clone(),
            fam,
        )
        .unwrap();
        assert_eq!(adjoint_check(&p), 0.0);
        let s = pair_operator(&p);
        assert!(spectral::is_hermitian(&s, 1e-15));
    }

    #[test]
    fn classify_pair_examples() {
        let weighted = PairSystem::new(
            WeightSequence::from_real(&[2.0, 5.0]).unwrap(),
            basis(2, &[0, 1]),
            basis(2, &[0, 1]),
        )
        .unwrap();
        let r = classify_pair(&weighted, DEFAULT_PAIR_TOL, 720).unwrap();
        assert!(r.is_pair_frame);
        assert_relative_eq!(r.framelike_lower, 2.0, epsilon = 1e-12);
        assert_relative_eq!(r.framelike_upper, 5.0, epsilon = 1e-12);
        assert_relative_eq!(r.condition_number.unwrap(), 2.5, epsilon = 1e-12);

        let r = classify_pair(&swap_system(), DEFAULT_PAIR_TOL, 720).unwrap();
        assert!(r.is_pair_frame);
        assert_eq!(r.framelike_lower, 0.0);
        assert!(!r.framelike_lower_attained(DEFAULT_PAIR_TOL));
        assert_relative_eq!(r.sigma_min, 1.0, epsilon = 1e-14);

        let dead = PairSystem::new(
            WeightSequence::from_real(&[1.0, 0.0]).unwrap(),
            basis(2, &[0, 1]),
            basis(2, &[0, 1]),
        )
        .unwrap();
        let r = classify_pair(&dead, DEFAULT_PAIR_TOL, 720).unwrap();
        assert!(!r.is_pair_frame);
        assert_eq!(r.condition_number, None);
    }

    #[test]
    fn compose_examples() {
        let p = PairSystem::diagonal(basis(2, &[0, 1]));
        let id = CMatrix::identity(2, 2);
        assert_eq!(
            pair_operator(&compose(&p, &id, &id).unwrap()),
            pair_operator(&p)
        );
        let v = real(2, &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(
            pair_operator(&compose(&p, &v, &v).unwrap()),
            real(2, &[1.0, 0.0, 0.0, 4.0])
        );
        assert!(compose(&p, &CMatrix::identity(3, 3), &id).is_err());
    }

    #[test]
    fn holder_examples() {
        let onb = PairSystem::diagonal(basis(2, &[0, 1]));
        let r = pq_pair_norm_bound(&onb, 2.0, 2.0, 8, 7).unwrap();
        assert_relative_eq!(r.norm, 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.holder_bound, 1.0, epsilon = 1e-9);

        let scaled = PairSystem::new(
            WeightSequence::from_real(&[3.0, 3.0]).unwrap(),
            basis(2, &[0, 1]),
            basis(2, &[0, 1]),
        )
        .unwrap();
        let r = pq_pair_norm_bound(&scaled, 2.0, 2.0, 8, 7).unwrap();
        assert_relative_eq!(r.norm, 3.0, epsilon = 1e-12);
        assert_relative_eq!(r.holder_bound, 3.0, epsilon = 1e-9);
        assert!(r.holder_holds(1e-6));
        assert!(!r.sqrt_form_holds(1e-6));

        assert!(matches!(
            pq_pair_norm_bound(&onb, 2.0, 3.0, 4, 0),
            Err(Error::ExponentMismatch { .. })
        ));
        assert!(matches!(
            pq_pair_norm_bound(&onb, 0.5, -1.0, 4, 0),
            Err(Error::ExponentMismatch { .. })
        ));
    }

    #[test]
    fn conjugate_exponents() {
        assert!(check_conjugate(1.5, 3.0).is_ok());
        assert!(check_conjugate(4.0, 4.0 / 3.0).is_ok());
        assert!(check_conjugate(2.0, 2.0 + 1e-6).is_err());
    }
}
