//! Shared corpora and test-side reference computations.
//!
//! The helpers here deliberately avoid the library's fast paths: operators
//! are rebuilt from explicit sums, extreme eigenvalues come from power
//! iteration, and Neumann partial sums are formed term by term.

#![allow(dead_code)]

pub mod cli_cases;

use pairframe::generators::{random_matrix, random_signal};
use pairframe::{
    generate, CMatrix, CVector, Complex64, GenKind, GenSpec, OperatorFamily, PairSystem,
    WeightSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Spectral norm via power iteration on `M^H M`, entrywise loops only.
pub fn power_norm(m: &CMatrix) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng)).collect();
    let mut estimate = 0.0;
    for _ in 0..2000 {
        let mv: Vec<Complex64> = (0..m.nrows())
            .map(|i| (0..n).map(|j| m[(i, j)] * v[j]).sum())
            .collect();
        let w: Vec<Complex64> = (0..n)
            .map(|j| (0..m.nrows()).map(|i| m[(i, j)].conj() * mv[i]).sum())
            .collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm.sqrt();
        v = w.into_iter().map(|z| z / norm).collect();
        if (next - estimate).abs() <= 1e-15 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `sum_i L_i^H L_i` assembled entry by entry.
pub fn explicit_frame_operator(family: &OperatorFamily) -> CMatrix {
    let n = family.ambient_dim();
    let mut s = CMatrix::zeros(n, n);
    for m in family.members() {
        for r in 0..m.nrows() {
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += m[(r, i)].conj() * m[(r, j)];
                }
            }
        }
    }
    s
}

/// `sum_i m_i G_i^H L_i` assembled entry by entry.
pub fn explicit_pair_operator(pair: &PairSystem) -> CMatrix {
    let n = pair.ambient_dim();
    let mut s = CMatrix::zeros(n, n);
    for ((g, l), w) in pair
        .gamma()
        .members()
        .iter()
        .zip(pair.lambda().members())
        .zip(pair.weights().as_slice())
    {
        for r in 0..g.nrows() {
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += w * g[(r, i)].conj() * l[(r, j)];
                }
            }
        }
    }
    s
}

/// Extreme eigenvalues of a positive semidefinite matrix by power iteration
/// on `S` and on `|S| I - S`.
pub fn psd_extremes(s: &CMatrix) -> (f64, f64) {
    let upper = power_norm(s);
    let n = s.nrows();
    let shifted = CMatrix::identity(n, n) * c(upper, 0.0) - s;
    let lower = upper - power_norm(&shifted);
    (lower.max(0.0), upper)
}

/// `alpha sum_{n=0}^N (I - alpha S)^n`, one power at a time.
pub fn naive_neumann(s: &CMatrix, alpha: Complex64, order: usize) -> CMatrix {
    let n = s.nrows();
    let r = CMatrix::identity(n, n) - s * alpha;
    let mut power = CMatrix::identity(n, n);
    let mut sum = CMatrix::zeros(n, n);
    for _ in 0..=order {
        sum += &power;
        power = &power * &r;
    }
    sum * alpha
}

/// A family of `count` random operator blocks with the given heights.
pub fn random_blocks(dim: usize, heights: &[usize], rng: &mut ChaCha8Rng) -> OperatorFamily {
    let members = heights
        .iter()
        .map(|&d| gaussian_matrix(d, dim, rng))
        .collect();
    OperatorFamily::new(dim, members).unwrap()
}

/// Random pair system with complex weights. Every fourth draw has fewer
/// total rows than the dimension, so its multiplier is singular.
pub fn random_pair(seed: u64) -> PairSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(2..=6);
    let singular = seed % 4 == 3;
    let count = if singular {
        rng.gen_range(1..dim)
    } else {
        rng.gen_range(1..=8)
    };
    let heights: Vec<usize> = (0..count)
        .map(|_| if singular { 1 } else { rng.gen_range(1..=3) })
        .collect();
    let gamma = random_blocks(dim, &heights, &mut rng);
    let lambda = random_blocks(dim, &heights, &mut rng);
    let weights = WeightSequence::new((0..count).map(|_| gaussian(&mut rng)).collect()).unwrap();
    PairSystem::new(weights, gamma, lambda).unwrap()
}

/// Random pair system in dimension `dim` whose multiplier sits near a
/// positive multiple of the identity.
pub fn near_identity_pair(dim: usize, seed: u64) -> PairSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perturb = 0.3 / dim as f64;
    let mut gamma = Vec::new();
    let mut lambda = Vec::new();
    for i in 0..dim {
        let mut e = CMatrix::zeros(1, dim);
        e[(0, i)] = c(1.0, 0.0);
        gamma.push(&e + gaussian_matrix(1, dim, &mut rng) * c(perturb, 0.0));
        lambda.push(&e + gaussian_matrix(1, dim, &mut rng) * c(perturb, 0.0));
    }
    let weights = (0..dim)
        .map(|_| c(1.0, 0.0) + gaussian(&mut rng) * c(0.1, 0.0))
        .collect();
    PairSystem::new(
        WeightSequence::new(weights).unwrap(),
        OperatorFamily::new(dim, gamma).unwrap(),
        OperatorFamily::new(dim, lambda).unwrap(),
    )
    .unwrap()
}

/// Random Bessel sequence with fewer vectors than the dimension.
pub fn undercomplete(dim: usize, seed: u64) -> OperatorFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights = vec![1; dim - 1];
    random_blocks(dim, &heights, &mut rng)
}

pub fn spec(kind: GenKind, dim: usize, count: usize, seed: u64) -> GenSpec {
    GenSpec::new(kind, dim, count, seed)
}

/// The classification corpus: named families of every generator kind plus
/// undercomplete random sequences.
pub fn classification_corpus() -> Vec<(String, OperatorFamily)> {
    let mut specs = Vec::new();
    for n in 1..=6 {
        specs.push(spec(GenKind::Orthonormal, n, n, 0));
    }
    specs.push(GenSpec::with_defaults(GenKind::Mercedes, 0));
    for (n, k) in [
        (2, 3),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 7),
        (4, 9),
        (5, 5),
        (6, 16),
    ] {
        specs.push(spec(GenKind::Harmonic, n, k, 0));
    }
    for seed in 0..12 {
        let n = 2 + (seed as usize % 5);
        specs.push(spec(
            GenKind::RandomFrame,
            n,
            n + 1 + seed as usize % 4,
            seed,
        ));
    }
    for seed in 0..6 {
        let n = 2 + (seed as usize % 4);
        specs.push(spec(GenKind::RandomGframe, n, n, 100 + seed));
    }
    for n in 2..=6 {
        specs.push(spec(GenKind::RankDeficient, n, n + 1, 0));
    }
    for (i, eig) in [
        vec![1.0, 1.0],
        vec![0.5, 2.0],
        vec![1e-3, 1.0],
        vec![1.0, 2.0, 3.0],
        vec![2.0, 2.0, 2.0, 2.0],
        vec![0.1, 0.2, 5.0, 5.0],
        vec![1.0, 10.0, 100.0],
        vec![3.0, 1.0, 4.0, 1.0, 5.0],
    ]
    .into_iter()
    .enumerate()
    {
        let n = eig.len();
        specs
            .push(spec(GenKind::PrescribedSpectrum, n, n + i % 3, 200 + i as u64).with_params(eig));
    }
    specs.push(spec(GenKind::Weighted, 3, 5, 0));
    specs.push(spec(GenKind::SwapFixture, 4, 4, 0));

    let mut corpus: Vec<(String, OperatorFamily)> = specs
        .into_iter()
        .map(|s| {
            let name = format!(
                "{}(dim {}, count {}, seed {})",
                s.kind, s.dim, s.count, s.seed
            );
            (name, generate(&s).unwrap())
        })
        .collect();
    for seed in 0..6 {
        let n = 2 + seed as usize % 5;
        corpus.push((
            format!("undercomplete(dim {n}, seed {seed})"),
            undercomplete(n, seed),
        ));
    }
    corpus
}

/// Small fixtures (dimension 2 or 3) for oracle comparisons.
pub fn small_operators() -> Vec<(String, CMatrix)> {
    let mut out = vec![
        (
            "swap".to_string(),
            pairframe::pair_operator(&pairframe::generators::swap_pair()),
        ),
        ("identity".to_string(), CMatrix::identity(3, 3)),
    ];
    let mut jordan = CMatrix::zeros(2, 2);
    jordan[(0, 1)] = c(1.0, 0.0);
    out.push(("jordan".to_string(), jordan));
    for seed in 0..6 {
        let m = random_matrix(2 + seed as usize % 2, 300 + seed);
        let norm = power_norm(&m);
        out.push((format!("gaussian(seed {seed})"), m / c(norm, 0.0)));
    }
    for seed in 0..4 {
        let p = near_identity_pair(2 + seed as usize % 2, 400 + seed);
        out.push((
            format!("near-identity(seed {seed})"),
            pairframe::pair_operator(&p),
        ));
    }
    out
}

pub fn small_families() -> Vec<(String, OperatorFamily)> {
    vec![
        (
            "orthonormal(2)".into(),
            generate(&spec(GenKind::Orthonormal, 2, 2, 0)).unwrap(),
        ),
        (
            "mercedes".into(),
            generate(&GenSpec::with_defaults(GenKind::Mercedes, 0)).unwrap(),
        ),
        (
            "swap_fixture(3)".into(),
            generate(&spec(GenKind::SwapFixture, 3, 3, 0)).unwrap(),
        ),
        (
            "harmonic(3, 5)".into(),
            generate(&spec(GenKind::Harmonic, 3, 5, 0)).unwrap(),
        ),
        (
            "random_frame(2, 4)".into(),
            generate(&spec(GenKind::RandomFrame, 2, 4, 5)).unwrap(),
        ),
        (
            "random_frame(3, 5)".into(),
            generate(&spec(GenKind::RandomFrame, 3, 5, 6)).unwrap(),
        ),
        (
            "random_gframe(3, 3)".into(),
            generate(&spec(GenKind::RandomGframe, 3, 3, 7)).unwrap(),
        ),
        (
            "weighted(2, 3)".into(),
            generate(&spec(GenKind::Weighted, 2, 3, 0)).unwrap(),
        ),
    ]
}

pub fn signal(dim: usize, seed: u64) -> CVector {
    random_signal(dim, seed)
}
