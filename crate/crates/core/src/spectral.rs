//! Dense complex-matrix spectral quantities.
//!
//! Everything here works on small dense matrices (n in the hundreds at most)
//! and relies on full decompositions: hermitian eigendecomposition for the
//! self-adjoint cases and SVD for norms and lower bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance for "is this matrix hermitian".
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;
/// `invert` refuses matrices with `sigma_min < SINGULAR_RTOL * op_norm`.
pub const SINGULAR_RTOL: f64 = 1e-12;
pub const DEFAULT_THETA_STEPS: usize = 720;
pub const DEFAULT_REFINE_ITERS: usize = 30;
pub const MIN_THETA_STEPS: usize = 8;

/// Extremal spectral data of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// Eigen-extremes, present only when the input is hermitian within tolerance.
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub sigma_min: f64,
    pub op_norm: f64,
    /// Distance from 0 to the numerical range.
    pub nr_distance: f64,
    /// Numerical radius.
    pub nr_radius: f64,
}

pub fn spectral_report(m: &CMatrix, tol: f64) -> Result<SpectralReport> {
    ensure_square(m)?;
    let (lambda_min, lambda_max) = match hermitian_extremes(m, tol) {
        Ok((lo, hi)) => (Some(lo), Some(hi)),
        Err(Error::NotHermitian { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let (nr_distance, nr_radius) =
        numerical_range_bounds(m, DEFAULT_THETA_STEPS, DEFAULT_REFINE_ITERS)?;
    Ok(SpectralReport {
        lambda_min,
        lambda_max,
        sigma_min: min_singular(m)?,
        op_norm: op_norm(m),
        nr_distance,
        nr_radius,
    })
}

pub(crate) fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `(M + M^H) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `||M - M^H||_F / ||M||_F`, or 0 for the zero matrix.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / scale
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_deviation(m) <= tol
}

/// Eigenvalues of a hermitian matrix in ascending order. The input is
/// hermitianized first, so rounding-level asymmetry is harmless.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Smallest and largest eigenvalue of the hermitian matrix `m`.
pub fn hermitian_extremes(m: &CMatrix, tol: f64) -> Result<(f64, f64)> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let deviation = hermitian_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol,
        });
    }
    let values = hermitian_eigenvalues(m);
    Ok((values[0], values[n - 1]))
}

/// Singular values in descending order. Wide matrices are padded with zeros
/// up to `cols` so the last entry is always `inf_{|f|=1} |Mf|`.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = if m.nrows() == 0 || m.ncols() == 0 {
        Vec::new()
    } else {
        m.singular_values().iter().copied().collect()
    };
    values.sort_by(|a, b| b.total_cmp(a));
    values.resize(m.ncols().max(values.len()), 0.0);
    values
}

/// `inf_{|f|=1} |Mf|`, the lower bound of `M`.
pub fn min_singular(m: &CMatrix) -> Result<f64> {
    if m.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(*singular_values(m).last().unwrap_or(&0.0))
}

/// Spectral norm `sigma_max(M)`.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Inverse of `m`, refusing matrices with `sigma_min <= tol * op_norm`.
///
/// The LU inverse is followed by one Newton-Schulz correction step, which
/// brings the residual `|M M^{-1} - I|` down to rounding level for
/// well-conditioned inputs.
pub fn invert(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let sv = singular_values(m);
    let (norm, sigma_min) = (sv[0], sv[n - 1]);
    if norm == 0.0 || sigma_min <= tol * norm {
        return Err(Error::Singular {
            sigma_min,
            op_norm: norm,
        });
    }
    let inv = m.clone().try_inverse().ok_or(Error::Singular {
        sigma_min,
        op_norm: norm,
    })?;
    let two = CMatrix::identity(n, n) * Complex64::new(2.0, 0.0);
    Ok(&inv * (two - m * &inv))
}

/// `Re(e^{i theta} M)`.
fn rotated_hermitian(m: &CMatrix, theta: f64) -> CMatrix {
    hermitian_part(&(m * Complex64::from_polar(1.0, theta)))
}

fn rotated_extremes(m: &CMatrix, theta: f64) -> (f64, f64) {
    let values = hermitian_eigenvalues(&rotated_hermitian(m, theta));
    (values[0], values[values.len() - 1])
}

/// Golden-section maximisation of `g` on `[lo, hi]`. Returns the best value
/// seen, never less than `floor`.
fn golden_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize, floor: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    let mut best = floor.max(g1).max(g2);
    for _ in 0..iters {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + ratio * (b - a);
            g2 = g(x2);
            best = best.max(g2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - ratio * (b - a);
            g1 = g(x1);
            best = best.max(g1);
        }
    }
    best
}

/// Distance from 0 to the numerical range of `m` and its numerical radius.
///
/// Sweeps `theta` over a uniform grid of `theta_steps` points in `[0, 2pi)`,
/// tracking `lambda_max(Re(e^{i theta} M))` (support function of the range)
/// and `lambda_min(Re(e^{i theta} M))` (a separating half-plane when
/// positive). The best grid point of each is then refined by golden-section
/// search over the two neighbouring grid cells.
pub fn numerical_range_bounds(
    m: &CMatrix,
    theta_steps: usize,
    refine_iters: usize,
) -> Result<(f64, f64)> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if theta_steps < MIN_THETA_STEPS {
        return Err(Error::InvalidParameter(format!(
            "theta_steps must be at least {MIN_THETA_STEPS}, got {theta_steps}"
        )));
    }
    let step = std::f64::consts::TAU / theta_steps as f64;
    let grid: Vec<(f64, f64)> = (0..theta_steps)
        .into_par_iter()
        .map(|k| rotated_extremes(m, k as f64 * step))
        .collect();

    let argmax = |key: fn(&(f64, f64)) -> f64| {
        let mut best = 0;
        for (k, v) in grid.iter().enumerate() {
            if key(v) > key(&grid[best]) {
                best = k;
            }
        }
        best
    };

    let k_radius = argmax(|v| v.1);
    let theta = k_radius as f64 * step;
    let radius = golden_max(
        |t| rotated_extremes(m, t).1,
        theta - step,
        theta + step,
        refine_iters,
        grid[k_radius].1,
    );

    let k_dist = argmax(|v| v.0);
    let theta = k_dist as f64 * step;
    let separation = golden_max(
        |t| rotated_extremes(m, t).0,
        theta - step,
        theta + step,
        refine_iters,
        grid[k_dist].0,
    );

    Ok((separation.max(0.0), radius.max(0.0)))
}

/// `<Mf, f>` with the inner product linear in its first argument.
pub fn quadratic_form(m: &CMatrix, f: &CVector) -> Complex64 {
    f.dotc(&(m * f))
}
