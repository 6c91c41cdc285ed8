//! Deterministic fixture families.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `GenSpec::seed`, so a
//! spec always produces bit-identical families on every platform.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::frame::{self, OperatorFamily};
use crate::pair::{PairSystem, WeightSequence};
use crate::spectral::{self, CMatrix, CVector};

/// Families are resampled until `lambda_min > RANDOM_FRAME_RATIO * lambda_max`.
pub const RANDOM_FRAME_RATIO: f64 = 0.05;
const MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Orthonormal,
    Mercedes,
    Harmonic,
    RandomFrame,
    RandomGframe,
    Weighted,
    SwapFixture,
    RankDeficient,
    PrescribedSpectrum,
}

impl GenKind {
    pub const ALL: [GenKind; 9] = [
        GenKind::Orthonormal,
        GenKind::Mercedes,
        GenKind::Harmonic,
        GenKind::RandomFrame,
        GenKind::RandomGframe,
        GenKind::Weighted,
        GenKind::SwapFixture,
        GenKind::RankDeficient,
        GenKind::PrescribedSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Orthonormal => "orthonormal",
            GenKind::Mercedes => "mercedes",
            GenKind::Harmonic => "harmonic",
            GenKind::RandomFrame => "random_frame",
            GenKind::RandomGframe => "random_gframe",
            GenKind::Weighted => "weighted",
            GenKind::SwapFixture => "swap_fixture",
            GenKind::RankDeficient => "rank_deficient",
            GenKind::PrescribedSpectrum => "prescribed_spectrum",
        }
    }

    /// `(dim, count)` used when the caller does not specify them.
    pub fn default_shape(self) -> (usize, usize) {
        match self {
            GenKind::Mercedes => (2, 3),
            GenKind::Harmonic => (2, 4),
            GenKind::RandomFrame | GenKind::RandomGframe => (3, 6),
            GenKind::Orthonormal | GenKind::SwapFixture | GenKind::RankDeficient => (2, 2),
            GenKind::Weighted | GenKind::PrescribedSpectrum => (2, 2),
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown kind {s:?}")))
    }
}

/// Generator request.
///
/// Kind-specific `params`:
/// * `weighted`: `count` positive scales; member `i` is `scale_i e_{i mod dim}`
///   (defaults to scales `1, 2, ..., count`).
/// * `random_gframe`: optional `[max_rows]`, the largest block height (default 3).
/// * `prescribed_spectrum`: exactly `dim` positive eigenvalues of the frame operator.
/// * all other kinds take no parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub params: Vec<f64>,
}

impl GenSpec {
    pub fn new(kind: GenKind, dim: usize, count: usize, seed: u64) -> Self {
        Self {
            kind,
            dim,
            count,
            seed,
            params: Vec::new(),
        }
    }

    pub fn with_defaults(kind: GenKind, seed: u64) -> Self {
        let (dim, count) = kind.default_shape();
        Self::new(kind, dim, count, seed)
    }

    pub fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    fn invalid<T>(&self, why: &str) -> Result<T> {
        Err(Error::InvalidSpec(format!(
            "{} (dim {}, count {}): {why}",
            self.kind, self.dim, self.count
        )))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.count == 0 {
            return self.invalid("dim and count must be at least 1");
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return self.invalid("parameters must be finite");
        }
        let no_params = || {
            if self.params.is_empty() {
                Ok(())
            } else {
                self.invalid("kind takes no parameters")
            }
        };
        match self.kind {
            GenKind::Orthonormal => {
                no_params()?;
                if self.count != self.dim {
                    return self.invalid("orthonormal basis needs count == dim");
                }
            }
            GenKind::Mercedes => {
                no_params()?;
                if self.dim != 2 || self.count != 3 {
                    return self.invalid("mercedes frame has dim 2 and count 3");
                }
            }
            GenKind::Harmonic | GenKind::RandomFrame => {
                no_params()?;
                if self.count < self.dim {
                    return self.invalid("need count >= dim");
                }
            }
            GenKind::RandomGframe => {
                if self.params.len() > 1 {
                    return self.invalid("expected at most one parameter (max_rows)");
                }
                let max_rows = self.max_rows()?;
                if self.count * max_rows < self.dim {
                    return self.invalid("count * max_rows must be at least dim");
                }
            }
            GenKind::Weighted => {
                if !self.params.is_empty() && self.params.len() != self.count {
                    return self.invalid("weighted needs one scale per member");
                }
                if self.params.iter().any(|&p| p <= 0.0) {
                    return self.invalid("scales must be positive");
                }
                if self.count < self.dim {
                    return self.invalid("need count >= dim");
                }
            }
            GenKind::SwapFixture => {
                no_params()?;
                if self.dim < 2 || self.count != self.dim {
                    return self.invalid("swap fixture needs count == dim >= 2");
                }
            }
            GenKind::RankDeficient => no_params()?,
            GenKind::PrescribedSpectrum => {
                if self.params.len() != self.dim {
                    return self.invalid("need exactly dim eigenvalues");
                }
                if self.params.iter().any(|&p| p <= 0.0) {
                    return self.invalid("eigenvalues must be positive");
                }
                if self.count < self.dim {
                    return self.invalid("need count >= dim");
                }
            }
        }
        Ok(())
    }

    fn max_rows(&self) -> Result<usize> {
        match self.params.first() {
            None => Ok(3),
            Some(&m) if m >= 1.0 && m.fract() == 0.0 => Ok(m as usize),
            Some(_) => self.invalid("max_rows must be a positive integer"),
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn basis_vector(dim: usize, i: usize, scale: f64) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = c(scale);
    v
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`), from the
/// QR factorisation of a complex Gaussian matrix.
fn random_isometry(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    gaussian_matrix(rows, cols, rng).qr().q()
}

fn well_conditioned(family: &OperatorFamily) -> bool {
    let eig = spectral::hermitian_eigenvalues(&frame::frame_operator(family));
    eig[0] > RANDOM_FRAME_RATIO * eig[eig.len() - 1]
}

fn resample(
    spec: &GenSpec,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<OperatorFamily>,
) -> Result<OperatorFamily> {
    for _ in 0..MAX_RESAMPLES {
        let family = draw(rng)?;
        if well_conditioned(&family) {
            return Ok(family);
        }
    }
    spec.invalid("could not draw a well-conditioned family")
}

pub fn generate(spec: &GenSpec) -> Result<OperatorFamily> {
    spec.validate()?;
    let (n, count) = (spec.dim, spec.count);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GenKind::Orthonormal => {
            let vs: Vec<_> = (0..n).map(|i| basis_vector(n, i, 1.0)).collect();
            OperatorFamily::from_vectors(n, &vs)
        }
        GenKind::Mercedes => {
            let h = 3f64.sqrt() / 2.0;
            let vs = [[0.0, 1.0], [-h, -0.5], [h, -0.5]]
                .iter()
                .map(|v| CVector::from_vec(vec![c(v[0]), c(v[1])]))
                .collect::<Vec<_>>();
            OperatorFamily::from_vectors(2, &vs)
        }
        GenKind::Harmonic => {
            // unit-norm rows of the count-point DFT restricted to dim coordinates
            let scale = 1.0 / (n as f64).sqrt();
            let vs: Vec<_> = (0..count)
                .map(|k| {
                    DVector::from_fn(n, |j, _| {
                        let phase = std::f64::consts::TAU * ((j * k) % count) as f64 / count as f64;
                        Complex64::from_polar(scale, phase)
                    })
                })
                .collect();
            OperatorFamily::from_vectors(n, &vs)
        }
        GenKind::RandomFrame => resample(spec, &mut rng, |rng| {
            let vs: Vec<_> = (0..count)
                .map(|_| {
                    let v = DVector::from_fn(n, |_, _| gaussian(rng));
                    let norm = v.norm();
                    v / c(norm)
                })
                .collect();
            OperatorFamily::from_vectors(n, &vs)
        }),
        GenKind::RandomGframe => {
            let max_rows = spec.max_rows()?;
            resample(spec, &mut rng, |rng| {
                let members = (0..count)
                    .map(|_| {
                        let d = rng.gen_range(1..=max_rows);
                        gaussian_matrix(d, n, rng) / c((n as f64).sqrt())
                    })
                    .collect();
                OperatorFamily::new(n, members)
            })
        }
        GenKind::Weighted => {
            let scales: Vec<f64> = if spec.params.is_empty() {
                (1..=count).map(|i| i as f64).collect()
            } else {
                spec.params.clone()
            };
            let vs: Vec<_> = scales
                .iter()
                .enumerate()
                .map(|(i, &s)| basis_vector(n, i % n, s))
                .collect();
            OperatorFamily::from_vectors(n, &vs)
        }
        GenKind::SwapFixture => {
            // cyclic shift of the standard basis; paired with the basis
            // itself the multiplier is a cyclic permutation (the swap for n = 2)
            let vs: Vec<_> = (0..n).map(|i| basis_vector(n, (i + 1) % n, 1.0)).collect();
            OperatorFamily::from_vectors(n, &vs)
        }
        GenKind::RankDeficient => {
            if n == 1 {
                return OperatorFamily::from_vectors(1, &vec![CVector::zeros(1); count]);
            }
            let vs: Vec<_> = (0..count)
                .map(|i| basis_vector(n, i % (n - 1), 1.0))
                .collect();
            OperatorFamily::from_vectors(n, &vs)
        }
        GenKind::PrescribedSpectrum => {
            // rows of Phi D^{1/2} U^H with Phi^H Phi = I give S = U D U^H
            let phi = random_isometry(count, n, &mut rng);
            let u = random_isometry(n, n, &mut rng);
            let sqrt_d = CMatrix::from_diagonal(&CVector::from_iterator(
                n,
                spec.params.iter().map(|&l| c(l.sqrt())),
            ));
            let rows = phi * sqrt_d * u.adjoint();
            let members = (0..count).map(|i| rows.rows(i, 1).into_owned()).collect();
            OperatorFamily::new(n, members)
        }
    }
}

pub fn generate_pair(
    spec_gamma: &GenSpec,
    spec_lambda: &GenSpec,
    weights: WeightSequence,
) -> Result<PairSystem> {
    PairSystem::new(weights, generate(spec_gamma)?, generate(spec_lambda)?)
}

/// `(1, basis, shifted basis)` on `C^2`: multiplier `[[0, 1], [1, 0]]`.
pub fn swap_pair() -> PairSystem {
    let basis = GenSpec::new(GenKind::Orthonormal, 2, 2, 0);
    let shifted = GenSpec::new(GenKind::SwapFixture, 2, 2, 0);
    generate_pair(&basis, &shifted, WeightSequence::ones(2)).expect("static fixture")
}

/// Seeded complex Gaussian vector.
pub fn random_signal(dim: usize, seed: u64) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(dim, |_, _| gaussian(&mut rng))
}

/// Seeded complex Gaussian square matrix.
pub fn random_matrix(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_matrix(dim, dim, &mut rng)
}

/// Seeded complex Gaussian weights.
pub fn random_weights(len: usize, seed: u64) -> WeightSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightSequence::new((0..len).map(|_| gaussian(&mut rng)).collect()).expect("finite")
}
