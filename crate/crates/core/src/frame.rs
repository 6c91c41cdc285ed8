//! Operator families and their analysis, synthesis and frame operators.
//!
//! A family `{L_i}` of operators `C^n -> C^{d_i}` is stored as a list of
//! dense `d_i x n` matrices. An ordinary frame `{f_i}` is the case `d_i = 1`
//! with member `i` the row `f_i^H`, so that `L_i f = <f, f_i>`.
//!
//! Elements of the direct sum of the `C^{d_i}` are flat vectors with the
//! member blocks concatenated in order; `offsets()` gives the block starts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{self, CMatrix, CVector};

/// Relative tolerance for frame verdicts: `lambda_min > tol * lambda_max`.
pub const DEFAULT_FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    ambient_dim: usize,
    members: Vec<CMatrix>,
    offsets: Vec<usize>,
}

impl OperatorFamily {
    pub fn new(ambient_dim: usize, members: Vec<CMatrix>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidFamily(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if members.is_empty() {
            return Err(Error::InvalidFamily("family has no members".into()));
        }
        let mut offsets = Vec::with_capacity(members.len() + 1);
        offsets.push(0);
        for (i, m) in members.iter().enumerate() {
            if m.ncols() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    what: "member column count",
                    expected: ambient_dim,
                    found: m.ncols(),
                });
            }
            if m.nrows() == 0 {
                return Err(Error::InvalidFamily(format!("member {i} has no rows")));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidFamily(format!(
                    "member {i} has non-finite entries"
                )));
            }
            offsets.push(offsets[i] + m.nrows());
        }
        Ok(Self {
            ambient_dim,
            members,
            offsets,
        })
    }

    /// Ordinary frame `{f_i}`: member `i` is the row `f_i^H`.
    pub fn from_vectors(ambient_dim: usize, vectors: &[CVector]) -> Result<Self> {
        let members = vectors
            .iter()
            .map(|v| {
                if v.len() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        what: "frame vector length",
                        expected: ambient_dim,
                        found: v.len(),
                    });
                }
                Ok(CMatrix::from_row_iterator(
                    1,
                    ambient_dim,
                    v.iter().map(|z| z.conj()),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, members)
    }

    /// Inverse of [`from_vectors`](Self::from_vectors); `None` if some member
    /// has more than one row.
    pub fn to_vectors(&self) -> Option<Vec<CVector>> {
        self.members
            .iter()
            .map(|m| (m.nrows() == 1).then(|| m.adjoint().column(0).into_owned()))
            .collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[CMatrix] {
        &self.members
    }

    pub fn block_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|m| m.nrows())
    }

    /// Block start offsets, with the total length `D` as the final entry.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total_rows(&self) -> usize {
        self.offsets[self.members.len()]
    }

    /// The `D x n` vertical stack of all members.
    pub fn stacked(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.total_rows(), self.ambient_dim);
        for (m, &start) in self.members.iter().zip(&self.offsets) {
            out.rows_mut(start, m.nrows()).copy_from(m);
        }
        out
    }

    /// `{L_i T}` for an `n x n` operator `T`.
    pub fn right_multiply(&self, t: &CMatrix) -> Result<Self> {
        if t.nrows() != self.ambient_dim || t.ncols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                what: "right factor",
                expected: self.ambient_dim,
                found: if t.nrows() != self.ambient_dim {
                    t.nrows()
                } else {
                    t.ncols()
                },
            });
        }
        Self::new(
            self.ambient_dim,
            self.members.iter().map(|m| m * t).collect(),
        )
    }

    /// `{c_i L_i}`; `scales` must have one entry per member.
    pub fn scale_members(&self, scales: &[Complex64]) -> Result<Self> {
        if scales.len() != self.len() {
            return Err(Error::DimensionMismatch {
                what: "member scale count",
                expected: self.len(),
                found: scales.len(),
            });
        }
        Self::new(
            self.ambient_dim,
            self.members
                .iter()
                .zip(scales)
                .map(|(m, &c)| m * c)
                .collect(),
        )
    }

    /// Reorders members; `order` must be a permutation of `0..len`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidParameter(
                "order is not a permutation of the members".into(),
            ));
        }
        Self::new(
            self.ambient_dim,
            order.iter().map(|&i| self.members[i].clone()).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_tight(&self, tol: f64) -> bool {
        self.upper - self.lower <= tol * self.upper.max(f64::MIN_POSITIVE)
    }
}

/// Verdicts of the frame characterisations with their certifying constants.
///
/// In finite dimensions the four routes to "frame" (positive lower bound,
/// `|I - S/B| < 1`, invertibility of `S`, surjectivity of synthesis) must
/// agree; `classify` computes each independently.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub is_bessel: bool,
    pub is_frame: bool,
    /// Optimal bounds: the extreme eigenvalues of the frame operator.
    pub bounds: FrameBounds,
    /// `1 / B`, reported for frames.
    pub alpha_star: Option<f64>,
    /// `|I - alpha_star S|`, reported for frames.
    pub residual: Option<f64>,
    /// `|I - S/B| < 1 - tol`, evaluated for every family with `B > 0`.
    pub cert_contraction: bool,
    pub cert_invertible: bool,
    pub cert_surjective: bool,
}

impl ClassificationReport {
    pub fn is_tight(&self, tol: f64) -> bool {
        self.is_frame && self.bounds.is_tight(tol)
    }
}

fn ensure_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

/// `f -> (L_1 f, ..., L_N f)`.
pub fn analysis(family: &OperatorFamily, f: &CVector) -> Result<CVector> {
    ensure_len("signal length", family.ambient_dim(), f.len())?;
    let mut out = CVector::zeros(family.total_rows());
    for (m, &start) in family.members().iter().zip(family.offsets()) {
        out.rows_mut(start, m.nrows()).copy_from(&(m * f));
    }
    Ok(out)
}

/// `(h_i) -> sum_i L_i^H h_i`.
pub fn synthesis(family: &OperatorFamily, h: &CVector) -> Result<CVector> {
    ensure_len("coefficient length", family.total_rows(), h.len())?;
    let mut out = CVector::zeros(family.ambient_dim());
    for (m, &start) in family.members().iter().zip(family.offsets()) {
        out += m.adjoint() * h.rows(start, m.nrows());
    }
    Ok(out)
}

/// `S = sum_i L_i^H L_i`.
pub fn frame_operator(family: &OperatorFamily) -> CMatrix {
    let n = family.ambient_dim();
    family
        .members()
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, m| acc + m.adjoint() * m)
}

pub fn classify(family: &OperatorFamily, tol: f64) -> ClassificationReport {
    let s = frame_operator(family);
    let n = family.ambient_dim();
    let eig = spectral::hermitian_eigenvalues(&s);
    let (lambda_min, lambda_max) = (eig[0], eig[n - 1]);
    let is_frame = lambda_max > 0.0 && lambda_min > tol * lambda_max;

    let contraction = (lambda_max > 0.0).then(|| {
        let alpha = 1.0 / lambda_max;
        let r = CMatrix::identity(n, n) - &s * Complex64::new(alpha, 0.0);
        (alpha, spectral::op_norm(&r))
    });
    let cert_contraction = contraction.is_some_and(|(_, r)| r < 1.0 - tol);
    let cert_invertible = spectral::invert(&s, tol).is_ok();
    // synthesis is onto iff its D x n adjoint (the stacked analysis matrix)
    // is injective, i.e. bounded below
    let cert_surjective = spectral::min_singular(&family.stacked())
        .map(|sigma| sigma > (tol * spectral::op_norm(&s)).sqrt())
        .unwrap_or(false);

    let (alpha_star, residual) = match (is_frame, contraction) {
        (true, Some((a, r))) => (Some(a), Some(r)),
        _ => (None, None),
    };

    ClassificationReport {
        is_bessel: true,
        is_frame,
        bounds: FrameBounds {
            lower: lambda_min.max(0.0),
            upper: lambda_max.max(0.0),
        },
        alpha_star,
        residual,
        cert_contraction,
        cert_invertible,
        cert_surjective,
    }
}

/// Canonical dual `{L_i S^{-1}}`.
pub fn canonical_dual(family: &OperatorFamily, tol: f64) -> Result<OperatorFamily> {
    let report = classify(family, tol);
    if !report.is_frame {
        return Err(Error::NotAFrame {
            lower: report.bounds.lower,
        });
    }
    let s_inv = spectral::invert(&frame_operator(family), tol)?;
    family.right_multiply(&s_inv)
}
