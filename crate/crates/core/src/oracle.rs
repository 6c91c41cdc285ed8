//! Brute-force reference values in dimension at most 3.
//!
//! The oracle only ever evaluates objectives at sampled unit vectors: a
//! global quasi-uniform cloud on the complex sphere followed by a few rounds
//! of shrinking local clouds around the incumbent extremes. It uses no
//! gradients, eigensolvers or SVDs, so it is independent of the fast paths
//! it checks. Returned extremes are inner approximations: the observed max
//! never exceeds the true sup, the observed min never falls below the inf.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{CMatrix, CVector};

pub const MAX_ORACLE_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Size of the global quasi-uniform sample.
    pub sphere_samples: usize,
    /// Samples drawn in each local zoom round.
    pub theta_samples: usize,
    pub tolerance: f64,
    pub zoom_rounds: usize,
    /// Seeds the random shift of the low-discrepancy sequence.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            sphere_samples: 200_000,
            theta_samples: 4096,
            tolerance: 1e-3,
            zoom_rounds: 12,
            seed: 0x5eed,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.sphere_samples == 0
            || self.theta_samples == 0
            || self.tolerance.is_nan()
            || self.tolerance <= 0.0
        {
            return Err(Error::InvalidParameter(
                "oracle sample counts must be positive and tolerance > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Additive recurrence `frac(shift + k * a)` with `a_j = phi_d^{-j}`, where
/// `phi_d` is the positive root of `x^{d+1} = x + 1`.
struct KroneckerSequence {
    step: Vec<f64>,
    shift: Vec<f64>,
}

impl KroneckerSequence {
    fn new(dims: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dims as f64 + 1.0));
        }
        let step = (1..=dims).map(|j| phi.powi(-(j as i32)).fract()).collect();
        let shift = (0..dims).map(|_| rng.gen::<f64>()).collect();
        Self { step, shift }
    }

    fn point(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        self.step
            .iter()
            .zip(&self.shift)
            .map(move |(a, s)| (s + k as f64 * a).fract())
    }
}

/// Box-Muller: two uniforms in (0, 1) to two independent normals.
fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let u1 = u1.max(1e-300);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// Maps a point of `[0,1)^{2 dim}` to a unit vector of `C^dim`; each
/// uniform pair becomes one complex normal entry.
fn to_sphere(dim: usize, coords: &[f64]) -> Option<CVector> {
    let v = DVector::from_fn(dim, |i, _| {
        let (a, b) = box_muller(coords[2 * i], coords[2 * i + 1]);
        Complex64::new(a, b)
    });
    let n = v.norm();
    (n > 0.0 && n.is_finite()).then(|| v / Complex64::new(n, 0.0))
}

struct Extremes {
    min: (f64, CVector),
    max: (f64, CVector),
}

impl Extremes {
    fn offer(&mut self, value: f64, f: &CVector) {
        if value < self.min.0 {
            self.min = (value, f.clone());
        }
        if value > self.max.0 {
            self.max = (value, f.clone());
        }
    }
}

/// Observed `(min, max)` of `objective` over unit vectors of `C^dim`.
pub fn sphere_extremes(
    objective: impl Fn(&CVector) -> f64,
    dim: usize,
    cfg: &OracleConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    if dim > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_ORACLE_DIM,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seq = KroneckerSequence::new(2 * dim, &mut rng);
    let mut coords = Vec::with_capacity(2 * dim);

    let start = DVector::from_fn(dim, |i, _| {
        Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let v0 = objective(&start);
    let mut best = Extremes {
        min: (v0, start.clone()),
        max: (v0, start),
    };
    for k in 0..cfg.sphere_samples {
        coords.clear();
        coords.extend(seq.point(k));
        if let Some(f) = to_sphere(dim, &coords) {
            best.offer(objective(&f), &f);
        }
    }

    // local zoom: perturb the incumbents by shrinking sphere-sampled offsets
    let mut radius = 0.25;
    let mut k = cfg.sphere_samples;
    for _ in 0..cfg.zoom_rounds {
        let centres = [best.min.1.clone(), best.max.1.clone()];
        for _ in 0..cfg.theta_samples {
            coords.clear();
            coords.extend(seq.point(k));
            k += 1;
            let Some(offset) = to_sphere(dim, &coords) else {
                continue;
            };
            for centre in &centres {
                let trial = centre + &offset * Complex64::new(radius, 0.0);
                let n = trial.norm();
                if n > 0.0 {
                    let f = trial / Complex64::new(n, 0.0);
                    best.offer(objective(&f), &f);
                }
            }
        }
        radius *= 0.5;
    }
    Ok((best.min.0, best.max.0))
}

/// Observed `(min, max)` of `|<Mf, f>|` over unit vectors.
pub fn brute_numerical_range(m: &CMatrix, cfg: &OracleConfig) -> Result<(f64, f64)> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    sphere_extremes(
        |f| {
            // hand-rolled <Mf, f> to stay off the library's code paths
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..f.len() {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..f.len() {
                    row += m[(i, j)] * f[j];
                }
                acc += row * f[i].conj();
            }
            acc.norm()
        },
        m.nrows(),
        cfg,
    )
}
