//! Probability vectors, symmetric gauge functions `G_(k)` and classical
//! partial entropic sums `H_α^(k)`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::entropy::{eta_argmax, eta_unchecked, pow_alpha, q_log_unchecked, Alpha};
use crate::error::{Error, Result};

/// Tolerance on simplex membership accepted at construction.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A point of the probability simplex Δ_m.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector {
    values: Vec<f64>,
}

impl ProbVector {
    /// Validates simplex membership within [`SIMPLEX_TOL`], clamps tiny
    /// negative entries to zero and renormalizes by the sum unless it is
    /// already 1 up to rounding.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let values = normalize_simplex(values)?;
        Ok(ProbVector { values })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::NotProbability("empty vector".into()));
        }
        Ok(ProbVector {
            values: vec![1.0 / m as f64; m],
        })
    }

    /// The corner `e_i` of Δ_m.
    pub fn corner(m: usize, i: usize) -> Result<Self> {
        if i >= m {
            return Err(Error::Index { k: i + 1, max: m });
        }
        let mut values = vec![0.0; m];
        values[i] = 1.0;
        Ok(ProbVector { values })
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        ProbVector { values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Appends a zero-probability outcome.
    pub fn expanded(&self) -> ProbVector {
        let mut values = self.values.clone();
        values.push(0.0);
        ProbVector { values }
    }
}

fn normalize_simplex(mut values: Vec<f64>) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::NotProbability("empty vector".into()));
    }
    for (i, v) in values.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(Error::NotProbability(format!("entry {i} is not finite")));
        }
        if *v < -SIMPLEX_TOL {
            return Err(Error::NotProbability(format!(
                "entry {i} = {v} is negative"
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotProbability(format!("entries sum to {sum}")));
    }
    // a sum off by rounding alone is left as is, so the result does not
    // depend on the order of the entries
    if (sum - 1.0).abs() > values.len() as f64 * f64::EPSILON {
        values.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(values)
}

/// Selects a marginal of a [`JointDistribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Distribution of the row index: `p_i = Σ_j r_ij`.
    Rows,
    /// Distribution of the column index: `q_j = Σ_i r_ij`.
    Columns,
}

/// Joint distribution `r_ij` on an `m × n` grid, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::NotProbability("empty grid".into()));
        }
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(values.len(), rows * cols));
        }
        let values = normalize_simplex(values)?;
        Ok(JointDistribution { rows, cols, values })
    }

    pub fn from_rows(grid: &[Vec<f64>]) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(bad.len(), cols));
        }
        Self::new(rows, cols, grid.concat())
    }

    /// Product distribution `p_i q_j`.
    pub fn product(p: &ProbVector, q: &ProbVector) -> Self {
        let values = p
            .values()
            .iter()
            .flat_map(|&pi| q.values().iter().map(move |&qj| pi * qj))
            .collect();
        JointDistribution {
            rows: p.len(),
            cols: q.len(),
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The grid as one distribution on `m·n` points.
    pub fn flatten(&self) -> ProbVector {
        ProbVector::from_raw(self.values.clone())
    }

    pub fn marginal(&self, which: Axis) -> ProbVector {
        let values: Vec<f64> = match which {
            Axis::Rows => (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j)).sum())
                .collect(),
            Axis::Columns => (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
                .collect(),
        };
        let sum: f64 = values.iter().sum();
        ProbVector::from_raw(values.into_iter().map(|v| v / sum).collect())
    }
}

/// `marginal(r, which)`.
pub fn marginal(r: &JointDistribution, which: Axis) -> ProbVector {
    r.marginal(which)
}

/// Sum of the `k` largest entries of `values` (which must be nonnegative),
/// selected under the total order (value desc, index asc).
pub(crate) fn top_k_sum(values: &[f64], k: usize) -> f64 {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| match values[j].total_cmp(&values[i]) {
        Ordering::Equal => i.cmp(&j),
        o => o,
    });
    idx.iter().take(k).map(|&i| values[i]).sum()
}

fn check_order(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        Err(Error::Index { k, max: m })
    } else {
        Ok(())
    }
}

/// Symmetric gauge function `G_(k)(x)`: the sum of the `k` largest `|x_i|`.
pub fn gauge_k(x: &[f64], k: usize) -> Result<f64> {
    check_order(k, x.len())?;
    let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    Ok(top_k_sum(&abs, k))
}

/// `H_α^(k)(p) = G_(k)[η_α(p)]`.
///
/// The `k` largest η-values are selected, not the η-values of the `k`
/// largest probabilities; η_α is not monotone on `[0, 1]`.
pub fn partial_sum(p: &ProbVector, k: usize, a: Alpha) -> Result<f64> {
    check_order(k, p.len())?;
    Ok(partial_sum_slice(p.values(), k, a))
}

pub(crate) fn partial_sum_slice(p: &[f64], k: usize, a: Alpha) -> f64 {
    let etas: Vec<f64> = p.iter().map(|&x| eta_unchecked(x, a)).collect();
    top_k_sum(&etas, k)
}

/// Every partial sum `H_α^(1..=m)(p)` in one pass.
pub fn partial_sums_all(p: &[f64], a: Alpha) -> Vec<f64> {
    let mut etas: Vec<f64> = p.iter().map(|&x| eta_unchecked(x, a)).collect();
    etas.sort_by(|x, y| y.total_cmp(x));
    etas.iter()
        .scan(0.0, |acc, &e| {
            *acc += e;
            Some(*acc)
        })
        .collect()
}

fn check_same_len(p: &ProbVector, q: &ProbVector) -> Result<()> {
    if p.len() != q.len() {
        Err(Error::DimensionMismatch(p.len(), q.len()))
    } else {
        Ok(())
    }
}

fn difference(p: &ProbVector, q: &ProbVector) -> Vec<f64> {
    p.values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| a - b)
        .collect()
}

/// Kolmogorov distance `D(p, q) = ½ Σ |p_i − q_i|`.
pub fn kolmogorov(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    check_same_len(p, q)?;
    Ok(0.5 * difference(p, q).iter().map(|d| d.abs()).sum::<f64>())
}

/// Partitioned distance `G_(k)(p − q)`.
pub fn partial_distance(p: &ProbVector, q: &ProbVector, k: usize) -> Result<f64> {
    check_same_len(p, q)?;
    gauge_k(&difference(p, q), k)
}

/// Brackets on `max_{p∈Δ_m} H_α^(k)(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxBounds {
    pub lower: f64,
    pub upper: f64,
    /// Relative error of the bracket, `(k^α ln_α(k+1))^{−1}`; zero for the
    /// exact `k = 1` value.
    pub relative_error_cap: f64,
}

pub fn max_partial_bounds(k: usize, a: Alpha) -> Result<MaxBounds> {
    if k == 0 {
        return Err(Error::Index { k, max: usize::MAX });
    }
    if k == 1 {
        let exact = eta_unchecked(eta_argmax(a), a);
        return Ok(MaxBounds {
            lower: exact,
            upper: exact,
            relative_error_cap: 0.0,
        });
    }
    let kf = k as f64;
    let upper = q_log_unchecked(kf + 1.0, a);
    Ok(MaxBounds {
        lower: q_log_unchecked(kf, a),
        upper,
        relative_error_cap: 1.0 / (pow_alpha(kf, a) * upper),
    })
}

/// Shannon partial sums near the uniform binary distribution:
/// `p = ((1−ε)/2, (1+ε)/2)` against `q = (½, ½)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstabilityPoint {
    pub eps: f64,
    /// `|H_1^(1)(p) − H_1^(1)(q)|`
    pub delta1: f64,
    /// `|H_1^(2)(p) − H_1^(2)(q)|`
    pub delta2: f64,
    pub ratio: f64,
}

pub fn instability_demo(eps: f64) -> Result<InstabilityPoint> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            domain: "(0, 1)",
        });
    }
    let l_minus = (-eps).ln_1p();
    let l_plus = eps.ln_1p();
    let delta1 = (-(1.0 - eps) * l_minus - eps * std::f64::consts::LN_2) / 2.0;
    let delta2 = ((1.0 + eps) * l_plus + (1.0 - eps) * l_minus) / 2.0;
    Ok(InstabilityPoint {
        eps,
        delta1,
        delta2,
        ratio: delta1 / delta2,
    })
}
