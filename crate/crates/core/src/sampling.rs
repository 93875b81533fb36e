//! Seeded random generators for bodies, fans and matrices.
//!
//! Loops draw per-sample generators from [`sample_rng`], which selects an
//! independent ChaCha stream per index, so results are reproducible for a
//! fixed seed no matter how the loop is scheduled.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geom::{AxisBox, Fan, SupportVector, Zonotope};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Rational `k/den` with `k` uniform in `lo..=hi`.
pub fn small_rational(rng: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.random_range(lo..=hi), den)
}

/// Box with side lengths in `{0, 1/4, …, 4}` and anchor in `[-2, 2]`.
pub fn random_box(rng: &mut impl Rng, dim: usize) -> AxisBox {
    let sides = (0..dim).map(|_| small_rational(rng, 0, 16, 4)).collect();
    let anchor = (0..dim).map(|_| small_rational(rng, -8, 8, 4)).collect();
    AxisBox::new(sides, anchor).expect("valid random box")
}

/// Box with strictly positive sides, centered so every support value is positive.
pub fn random_centered_box(rng: &mut impl Rng, dim: usize) -> AxisBox {
    let sides: Vec<Rational> = (0..dim).map(|_| small_rational(rng, 1, 24, 6)).collect();
    // Anchor strictly inside (-side, 0) keeps h(±e_j) > 0.
    let anchor = sides
        .iter()
        .map(|s| {
            let frac = rat(rng.random_range(1..=7), 8);
            -(s.clone() * frac)
        })
        .collect();
    AxisBox::new(sides, anchor).expect("valid centered box")
}

pub fn random_zonotope(rng: &mut impl Rng, dim: usize, max_generators: usize) -> Zonotope {
    let count = rng.random_range(1..=max_generators);
    let generators = (0..count)
        .map(|_| (0..dim).map(|_| small_rational(rng, -6, 6, 3)).collect())
        .collect();
    let anchor = (0..dim).map(|_| small_rational(rng, -4, 4, 2)).collect();
    Zonotope::new(dim, generators, anchor).expect("valid random zonotope")
}

/// Fan of `m` directions with every consecutive gap in `[min_gap, π)`.
pub fn random_fan(rng: &mut impl Rng, m: usize) -> Fan {
    assert!(m >= 3);
    let min_gap = (TAU / m as f64 * 0.2).min(0.3);
    loop {
        let weights: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let gaps: Vec<f64> = weights.iter().map(|w| w / total * TAU).collect();
        if gaps.iter().any(|&g| g >= PI - 1e-3 || g < min_gap) {
            continue;
        }
        let start = rng.random_range(0.0..TAU);
        let mut angles: Vec<f64> = gaps
            .iter()
            .scan(start, |acc, g| {
                let a = *acc;
                *acc += g;
                Some(a.rem_euclid(TAU))
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        if let Ok(fan) = Fan::new(angles) {
            return fan;
        }
    }
}

/// Support vector of a polygon with every edge of positive length on `fan`
/// and every support value positive (origin in the interior).
///
/// Starts from the circumscribed polygon `h = 1`, whose edges are
/// `tan(γᵢ/2) + tan(γᵢ₊₁/2) > 0`, and perturbs it by a random direction scaled
/// so that edge lengths stay above a fixed fraction of their initial value.
pub fn random_positive_edge_support(rng: &mut impl Rng, fan: &Fan) -> SupportVector {
    let m = fan.len();
    let ones = vec![1.0; m];
    let base = crate::geom::edge_lengths(fan, &ones).expect("valid fan");
    let base_min = base.iter().cloned().fold(f64::INFINITY, f64::min);
    let dir: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let dir_edges = crate::geom::edge_lengths(fan, &dir).expect("valid fan");
    let edge_bound = base_min / dir_edges.iter().fold(1e-300, |a: f64, b| a.max(b.abs()));
    let eps = rng.random_range(0.0..0.8) * edge_bound.min(1.0);
    let scale = rng.random_range(0.5..3.0);
    SupportVector::new(ones.iter().zip(&dir).map(|(o, d)| scale * (o + eps * d)).collect())
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Matrix<f64> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = gaussian(rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `G Gᵀ` for a Gaussian `n × rank` factor `G`.
pub fn random_wishart(rng: &mut impl Rng, n: usize, rank: usize) -> Matrix<f64> {
    let g = Matrix::from_fn(n, rank, |_, _| gaussian(rng));
    g.mul(&g.transpose())
}

pub fn random_rational_symmetric(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let den = rng.random_range(1..=4);
            let v = small_rational(rng, -9, 9, den);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// Rational `G Gᵀ` (+ `shift·I`), positive semidefinite by construction.
pub fn random_rational_psd(rng: &mut impl Rng, n: usize, rank: usize, shift: i64) -> Matrix<Rational> {
    let g = Matrix::from_fn(n, rank, |_, _| small_rational(rng, -4, 4, 2));
    g.mul(&g.transpose()).add(&Matrix::identity(n).scale(&crate::scalar::int(shift)))
}

pub fn random_rational_matrix(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    Matrix::from_fn(n, n, |_, _| small_rational(rng, -5, 5, 2))
}
