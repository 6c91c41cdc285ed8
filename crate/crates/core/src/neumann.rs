//! Near-identity detection and truncated Neumann-series inversion.
//!
//! When `|I - a S| < 1` for some nonzero scalar `a`, the partial sums
//! `X_N = a sum_{n=0}^N (I - a S)^n` approximate `S^{-1}` and
//! `I - X_N S = (I - a S)^{N+1}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pair::{self, PairSystem};
use crate::spectral::{self, CMatrix, CVector};

pub const DEFAULT_ALPHA_GRID: usize = 64;
pub const DEFAULT_ALPHA_REFINE: usize = 40;
/// Residuals must clear `1 - NEAR_IDENTITY_MARGIN` to count as contractive,
/// so that a singular `S` (true residual exactly 1) is never accepted on
/// round-off.
pub const NEAR_IDENTITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearIdentityReport {
    pub alpha: Complex64,
    /// `|I - alpha S|`.
    pub residual: f64,
    pub is_near_identity: bool,
    /// `S` hermitian, `alpha` real positive and `residual < 1`.
    pub is_positive_variant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub n: usize,
    /// `|I - J_N|` with `J_N = X_N S`.
    pub error: f64,
    /// `|I - alpha S|^{N+1}`.
    pub bound: f64,
    /// `|(I - J_N) - (I - alpha S)^{N+1}|`.
    pub telescoping_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannTrace {
    pub alpha: Complex64,
    pub residual: f64,
    pub entries: Vec<TraceEntry>,
}

impl NeumannTrace {
    pub fn max_telescoping_gap(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.telescoping_gap)
            .fold(0.0, f64::max)
    }

    pub fn bound_holds(&self, slack: f64) -> bool {
        self.entries.iter().all(|e| e.error <= e.bound + slack)
    }
}

fn identity_minus_scaled(s: &CMatrix, alpha: Complex64) -> CMatrix {
    let n = s.nrows();
    CMatrix::identity(n, n) - s * alpha
}

/// `|I - alpha S|`.
pub fn residual(s: &CMatrix, alpha: Complex64) -> f64 {
    spectral::op_norm(&identity_minus_scaled(s, alpha))
}

/// Searches for the scalar `alpha` minimising `|I - alpha S|`.
///
/// Hermitian positive definite `S` uses the closed form
/// `alpha = 2 / (lambda_min + lambda_max)`. Otherwise a log-polar grid of
/// `grid x grid` candidates over `|alpha|` in `[1/(10|S|), 10/sigma_min]`
/// is scanned and the best point polished by nested golden-section searches
/// of `refine_iters` steps each over the real and imaginary parts.
pub fn find_alpha(s: &CMatrix, grid: usize, refine_iters: usize) -> Result<NearIdentityReport> {
    let n = spectral::ensure_square(s)?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if grid == 0 {
        return Err(Error::InvalidParameter(
            "alpha grid must be non-empty".into(),
        ));
    }
    let hermitian = spectral::is_hermitian(s, spectral::DEFAULT_HERMITIAN_TOL);
    if hermitian {
        let eig = spectral::hermitian_eigenvalues(s);
        let (lo, hi) = (eig[0], eig[n - 1]);
        if lo > 0.0 {
            let residual = (hi - lo) / (hi + lo);
            return Ok(NearIdentityReport {
                alpha: Complex64::new(2.0 / (lo + hi), 0.0),
                residual,
                is_near_identity: residual < 1.0 - NEAR_IDENTITY_MARGIN,
                is_positive_variant: residual < 1.0 - NEAR_IDENTITY_MARGIN,
            });
        }
    }

    let sv = spectral::singular_values(s);
    let (norm, sigma_min) = (sv[0], sv[n - 1]);
    if norm == 0.0 {
        // no nonzero alpha moves I - alpha S away from I
        return Ok(NearIdentityReport {
            alpha: Complex64::new(1.0, 0.0),
            residual: 1.0,
            is_near_identity: false,
            is_positive_variant: false,
        });
    }
    let lo = 1.0 / (10.0 * norm);
    let hi = 10.0 / sigma_min.max(1e-6 * norm);
    let log_step = if grid > 1 {
        (hi / lo).ln() / (grid - 1) as f64
    } else {
        0.0
    };
    let candidates: Vec<Complex64> = (0..grid)
        .flat_map(|i| {
            let r = lo * (log_step * i as f64).exp();
            (0..grid).map(move |j| {
                Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / grid as f64)
            })
        })
        .collect();
    let values: Vec<f64> = candidates.par_iter().map(|&a| residual(s, a)).collect();
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    let (mut alpha, mut value) = (candidates[best], values[best]);

    // The residual is convex in alpha but has creases where singular values
    // cross, which stall fixed-stencil searches. Minimising over Im(alpha) for
    // each Re(alpha) leaves a convex function of Re(alpha), so nested golden
    // sections on a box around the grid winner converge; the box is recentred
    // if the optimum lands on its edge.
    let cell = alpha.norm() * log_step.max(std::f64::consts::TAU / grid as f64).min(1.0);
    let mut half = 2.0 * cell;
    for _ in 0..8 {
        let centre = alpha;
        let inner = |re: f64| {
            golden_min(
                |im| residual(s, Complex64::new(re, im)),
                centre.im - half,
                centre.im + half,
                refine_iters,
            )
        };
        let (re, _) = golden_min(
            |re| inner(re).1,
            centre.re - half,
            centre.re + half,
            refine_iters,
        );
        let (im, v) = inner(re);
        let a = Complex64::new(re, im);
        if v < value && a != Complex64::new(0.0, 0.0) {
            alpha = a;
            value = v;
        }
        let interior = (re - centre.re).abs() < 0.9 * half && (im - centre.im).abs() < 0.9 * half;
        if interior || alpha == centre {
            break;
        }
        half *= 2.0;
    }

    let is_near_identity = value < 1.0 - NEAR_IDENTITY_MARGIN;
    Ok(NearIdentityReport {
        alpha,
        residual: value,
        is_near_identity,
        is_positive_variant: hermitian && is_near_identity && alpha.im == 0.0 && alpha.re > 0.0,
    })
}

/// Golden-section minimum of a unimodal `f` on `[lo, hi]`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `alpha sum_{n=0}^N (I - alpha S)^n`, evaluated Horner-style as
/// `X_0 = alpha I`, `X_k = alpha I + (I - alpha S) X_{k-1}`.
pub fn neumann_inverse(s: &CMatrix, alpha: Complex64, order: usize) -> Result<CMatrix> {
    let n = spectral::ensure_square(s)?;
    let r = identity_minus_scaled(s, alpha);
    let base = CMatrix::identity(n, n) * alpha;
    let mut x = base.clone();
    for _ in 0..order {
        x = &base + &r * x;
    }
    Ok(x)
}

/// Error of `J_N = X_N S` against the identity for `N = 0..=max_order`.
///
/// The partial sums and the powers `(I - alpha S)^{N+1}` are built up
/// incrementally; each entry records both the direct error and the gap to
/// the telescoped form.
pub fn neumann_trace(s: &CMatrix, alpha: Complex64, max_order: usize) -> Result<NeumannTrace> {
    let n = spectral::ensure_square(s)?;
    let id = CMatrix::identity(n, n);
    let r = identity_minus_scaled(s, alpha);
    let rnorm = spectral::op_norm(&r);
    let base = &id * alpha;
    let mut x = base.clone();
    let mut power = r.clone();
    let mut entries = Vec::with_capacity(max_order + 1);
    for order in 0..=max_order {
        if order > 0 {
            x = &base + &r * &x;
            power = &r * &power;
        }
        let gap = &id - &x * s;
        entries.push(TraceEntry {
            n: order,
            error: spectral::op_norm(&gap),
            bound: rnorm.powi(order as i32 + 1),
            telescoping_gap: spectral::op_norm(&(&gap - &power)),
        });
    }
    Ok(NeumannTrace {
        alpha,
        residual: rnorm,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub approx: CVector,
    /// `|approx - f| / |f|`, or 0 for `f = 0`.
    pub rel_error: f64,
}

/// `X_N S f` for the multiplier `S` of `pair`.
pub fn reconstruct(
    pair: &PairSystem,
    alpha: Complex64,
    order: usize,
    f: &CVector,
) -> Result<Reconstruction> {
    if f.len() != pair.ambient_dim() {
        return Err(Error::DimensionMismatch {
            what: "signal length",
            expected: pair.ambient_dim(),
            found: f.len(),
        });
    }
    let s = pair::pair_operator(pair);
    let approx = neumann_inverse(&s, alpha, order)? * (&s * f);
    let norm = f.norm();
    let rel_error = if norm == 0.0 {
        0.0
    } else {
        (&approx - f).norm() / norm
    };
    Ok(Reconstruction { approx, rel_error })
}
