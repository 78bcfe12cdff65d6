//! Seeded instance generators.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded with `seed_from_u64`;
//! independent trials use separate ChaCha streams. Uniform draws are the
//! 53-bit `rand` conversion, normals use Box-Muller and exponentials
//! `−ln(1 − U)`, so the draws are reproducible from this description alone.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{JointDistribution, ProbVector};
use crate::error::Result;
use crate::linalg::{c, singular_values, ComplexMatrix};
use crate::quantum::{DensityOperator, PureEnsemble, RankOnePovm};

pub type SimRng = ChaCha8Rng;

/// Generator for trial `stream` of a run seeded with `seed`.
pub fn rng_for(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

/// Standard exponential draw.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - uniform(rng)).ln()
}

/// Standard normal draw (Box-Muller, cosine branch).
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng); // (0, 1]
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex standard normal with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c(normal(rng) * s, normal(rng) * s)
}

/// Uniform point of Δ_m (normalized exponentials).
pub fn sample_simplex<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ProbVector {
    assert!(m >= 1, "simplex dimension must be positive");
    let draws: Vec<f64> = (0..m).map(|_| exponential(rng)).collect();
    let sum: f64 = draws.iter().sum();
    ProbVector::from_raw(draws.into_iter().map(|x| x / sum).collect())
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite Gaussian draws")
}

/// `G G† / tr(G G†)` for a square Ginibre matrix `G`.
pub fn sample_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    assert!(d >= 1, "dimension must be positive");
    let g = ginibre(d, d, rng);
    DensityOperator::from_trusted(&g * &g.adjoint())
}

/// Haar-random unit vector.
pub fn sample_state_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix with the phases of
/// the triangular factor absorbed.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.column(j);
        for _ in 0..2 {
            for u in &q {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, col) in q.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

pub fn sample_joint<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> JointDistribution {
    let flat = sample_simplex(rows * cols, rng);
    JointDistribution::new(rows, cols, flat.into_vec()).expect("simplex sample")
}

pub fn sample_pure_ensemble<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> PureEnsemble {
    let weights = sample_simplex(n, rng);
    let states = (0..n).map(|_| sample_state_vector(d, rng)).collect();
    PureEnsemble::new(weights, states).expect("normalized states")
}

/// Rank-one POVM with `d + extra` outcomes from the Gram completion of
/// Gaussian vectors.
pub fn sample_povm<R: Rng + ?Sized>(d: usize, extra: usize, rng: &mut R) -> Result<RankOnePovm> {
    let vectors: Vec<Vec<Complex64>> = (0..d + extra)
        .map(|_| (0..d).map(|_| complex_normal(rng)).collect())
        .collect();
    RankOnePovm::gram_completion(&vectors)
}

/// Projective POVM onto a Haar-random orthonormal basis.
pub fn sample_basis_povm<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<RankOnePovm> {
    RankOnePovm::from_basis(&random_unitary(d, rng))
}

/// Instances that can be perturbed within a full-distance budget by mixing
/// with an independent sample.
pub trait SampleNear: Sized {
    /// Full distance used for the cap: l1 for distributions, trace norm for
    /// states.
    fn full_distance(&self, other: &Self) -> f64;
    fn fresh<R: Rng + ?Sized>(&self, rng: &mut R) -> Self;
    fn mix(&self, other: &Self, t: f64) -> Self;

    /// Returns `(1 − t)·self + t·fresh` with the largest `t ≤ 1` keeping the
    /// full distance from `self` at most `epsilon`.
    fn sample_near<R: Rng + ?Sized>(&self, epsilon: f64, rng: &mut R) -> Self {
        let fresh = self.fresh(rng);
        let dist = self.full_distance(&fresh);
        let t = if dist <= epsilon {
            1.0
        } else {
            (epsilon / dist).max(0.0)
        };
        self.mix(&fresh, t)
    }
}

impl SampleNear for ProbVector {
    fn full_distance(&self, other: &Self) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    fn fresh<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        sample_simplex(self.len(), rng)
    }

    fn mix(&self, other: &Self, t: f64) -> Self {
        if t == 0.0 {
            return self.clone();
        }
        if t == 1.0 {
            return other.clone();
        }
        let v: Vec<f64> = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        let sum: f64 = v.iter().sum();
        ProbVector::from_raw(v.into_iter().map(|x| x / sum).collect())
    }
}

impl SampleNear for DensityOperator {
    fn full_distance(&self, other: &Self) -> f64 {
        singular_values(&(self.matrix() - other.matrix()))
            .expect("Jacobi SVD converges on small Hermitian matrices")
            .iter()
            .sum()
    }

    fn fresh<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        sample_density(self.dim(), rng)
    }

    fn mix(&self, other: &Self, t: f64) -> Self {
        if t == 0.0 {
            return self.clone();
        }
        if t == 1.0 {
            return other.clone();
        }
        DensityOperator::mix(self, other, t).expect("equal dimensions")
    }
}
