//! Random-restart local searches: the adversarial probe of the continuity
//! bound over the domain `D_ε`, and the maximization of `H_α^(k)` over the
//! simplex.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound_threshold, f_diff_unchecked, fannes_bound, CHECK_TOL};
use crate::classical::{partial_sum_slice, ProbVector};
use crate::entropy::Alpha;
use crate::error::{Error, Result};
use crate::sampling::{rng_for, sample_simplex, uniform};

/// Proposal budget of one adversarial restart.
pub const ADVERSARIAL_ITERATIONS: usize = 20_000;
const MIN_STEP: f64 = 1e-10;

/// Best pair found in `D_ε = {x, y ≥ 0, Σx ≤ 1, Σy ≤ 1, ‖x − y‖₁ ≤ ε}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialResult {
    pub k: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `|F(x, y)|`
    pub achieved: f64,
    pub bound_rhs: f64,
    /// `achieved / bound_rhs`, zero when the bound is zero.
    pub tightness: f64,
    /// Proposals evaluated over all restarts.
    pub iterations: usize,
    pub seed: u64,
    /// Restart (generator stream) that produced the witness.
    pub restart: u64,
}

impl AdversarialResult {
    pub fn exceeds_bound(&self) -> bool {
        self.achieved > self.bound_rhs + CHECK_TOL
    }
}

/// Largest violation of the three `D_ε` constraints (and nonnegativity).
pub fn domain_residual(x: &[f64], y: &[f64], epsilon: f64) -> f64 {
    let neg = x.iter().chain(y).fold(0.0f64, |m, &v| m.max(-v));
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let dist: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
    neg.max(sx - 1.0).max(sy - 1.0).max(dist - epsilon).max(0.0)
}

/// Restores feasibility: clamp negatives, rescale each vector onto
/// `Σ ≤ 1`, then pull `y` toward `x` until `‖x − y‖₁ ≤ ε`.
fn project(x: &mut [f64], y: &mut [f64], epsilon: f64) {
    for v in x.iter_mut().chain(y.iter_mut()) {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    for v in [&mut *x, &mut *y] {
        let s: f64 = v.iter().sum();
        if s > 1.0 {
            v.iter_mut().for_each(|e| *e /= s);
        }
    }
    let dist: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs()).sum();
    if dist > epsilon {
        let t = epsilon / dist;
        for (yi, &xi) in y.iter_mut().zip(x.iter()) {
            *yi = xi + t * (*yi - xi);
        }
    }
}

struct Candidate {
    x: Vec<f64>,
    y: Vec<f64>,
    value: f64,
    iterations: usize,
}

fn adversarial_restart(k: usize, a: Alpha, epsilon: f64, seed: u64, restart: u64) -> Candidate {
    let mut rng = rng_for(seed, restart);
    let mut x: Vec<f64> = (0..k).map(|_| uniform(&mut rng)).collect();
    let mut y: Vec<f64> = (0..k).map(|_| uniform(&mut rng)).collect();
    project(&mut x, &mut y, epsilon);
    let mut value = f_diff_unchecked(&x, &y, a).abs();

    let mut step = 0.25;
    let patience = 8 * k;
    let mut failures = 0;
    let mut iterations = 0;
    while iterations < ADVERSARIAL_ITERATIONS && step > MIN_STEP {
        iterations += 1;
        let coord = rng.gen_range(0..2 * k);
        let delta = step * (2.0 * uniform(&mut rng) - 1.0);
        let (mut nx, mut ny) = (x.clone(), y.clone());
        if coord < k {
            nx[coord] += delta;
        } else {
            ny[coord - k] += delta;
        }
        project(&mut nx, &mut ny, epsilon);
        let v = f_diff_unchecked(&nx, &ny, a).abs();
        if v > value {
            x = nx;
            y = ny;
            value = v;
            failures = 0;
        } else {
            failures += 1;
            if failures >= patience {
                step *= 0.5;
                failures = 0;
            }
        }
    }
    Candidate {
        x,
        y,
        value,
        iterations,
    }
}

/// Maximizes `|F(x, y)|` over `D_ε` by random restarts, each followed by
/// projected coordinate ascent. Restarts run in parallel on independent
/// generator streams; the best value wins, ties going to the lower restart.
pub fn adversarial_search(
    k: usize,
    a: Alpha,
    epsilon: f64,
    restarts: usize,
    seed: u64,
) -> Result<AdversarialResult> {
    if k == 0 {
        return Err(Error::Index { k, max: usize::MAX });
    }
    let threshold = bound_threshold(k, a);
    if !(epsilon >= 0.0 && epsilon <= threshold) {
        return Err(Error::InfeasibleEpsilon { epsilon, threshold });
    }
    let restarts = restarts.max(1);
    let candidates: Vec<Candidate> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| adversarial_restart(k, a, epsilon, seed, r))
        .collect();
    let iterations = candidates.iter().map(|c| c.iterations).sum();
    let (restart, best) = candidates
        .into_iter()
        .enumerate()
        .reduce(|best, cur| {
            if cur.1.value > best.1.value {
                cur
            } else {
                best
            }
        })
        .expect("at least one restart");
    let bound_rhs = fannes_bound(epsilon, k, a).rhs;
    let tightness = if bound_rhs > 0.0 {
        best.value / bound_rhs
    } else {
        0.0
    };
    Ok(AdversarialResult {
        k,
        alpha: a.value(),
        epsilon,
        x: best.x,
        y: best.y,
        achieved: best.value,
        bound_rhs,
        tightness,
        iterations,
        seed,
        restart: restart as u64,
    })
}

/// Best point found for `max_{p∈Δ_m} H_α^(k)(p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexMaximum {
    pub value: f64,
    pub point: ProbVector,
    pub restart: u64,
}

fn simplex_restart(m: usize, k: usize, a: Alpha, seed: u64, restart: u64) -> (f64, Vec<f64>) {
    let mut rng = rng_for(seed, restart);
    let mut p = sample_simplex(m, &mut rng).into_vec();
    let mut value = partial_sum_slice(&p, k, a);
    let mut step: f64 = 0.1;
    // pairwise mass transfers keep the point on the simplex exactly
    while step > 1e-12 {
        let mut improved = false;
        for i in 0..m {
            for j in 0..m {
                if i == j || p[i] <= 0.0 {
                    continue;
                }
                let amount = step.min(p[i]);
                p[i] -= amount;
                p[j] += amount;
                let v = partial_sum_slice(&p, k, a);
                if v > value {
                    value = v;
                    improved = true;
                } else {
                    p[i] += amount;
                    p[j] -= amount;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, p)
}

/// Random-restart maximization of `H_α^(k)` over Δ_m by pairwise
/// mass-transfer ascent with a shrinking step.
pub fn maximize_partial_sum(
    m: usize,
    k: usize,
    a: Alpha,
    restarts: usize,
    seed: u64,
) -> Result<SimplexMaximum> {
    if k == 0 || k > m {
        return Err(Error::Index { k, max: m });
    }
    let results: Vec<(f64, Vec<f64>)> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| simplex_restart(m, k, a, seed, r))
        .collect();
    let (restart, (value, point)) = results
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .0 > best.1 .0 { cur } else { best })
        .expect("at least one restart");
    Ok(SimplexMaximum {
        value,
        point: ProbVector::new(point)?,
        restart: restart as u64,
    })
}
