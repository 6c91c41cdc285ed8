//! Finite-dimensional frame and pair-frame analysis.
//!
//! Families of operators `L_i : C^n -> C^{d_i}` (ordinary frames when every
//! `d_i = 1`) are classified through their frame operator; weighted pairs
//! `(m, G, L)` through the multiplier `S = sum_i m_i G_i^H L_i`. Around
//! that sit the frame-like constants from the numerical range of `S`,
//! Hölder bounds from `p`-Bessel constants, and truncated Neumann-series
//! inversion for multipliers close to a scaled identity.

pub mod cli;
pub mod error;
pub mod frame;
pub mod generators;
pub mod io;
pub mod neumann;
pub mod oracle;
pub mod pair;
pub mod pbessel;
pub mod spectral;

pub use error::{Error, Result};
pub use frame::{
    analysis, canonical_dual, classify, frame_operator, synthesis, ClassificationReport,
    FrameBounds, OperatorFamily,
};
pub use generators::{generate, generate_pair, GenKind, GenSpec};
pub use neumann::{
    find_alpha, neumann_inverse, neumann_trace, reconstruct, NearIdentityReport, NeumannTrace,
};
pub use pair::{
    adjoint_check, classify_pair, compose, pair_operator, pq_pair_norm_bound, PairReport,
    PairSystem, WeightSequence,
};
pub use pbessel::p_bessel_bound;
pub use spectral::{CMatrix, CVector};

pub use num_complex::Complex64;
