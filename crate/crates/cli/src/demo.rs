//! Tables reproducing the closed-form examples: the instability of the
//! Shannon partial sums near the uniform distribution, the entangled-pair
//! counterexample to the reduced-state inequality, and the brackets on the
//! maximal partial sum.

use anyhow::Result;
use entropic_sums::quantum::{reduced_sums, Subsystem};
use entropic_sums::search::maximize_partial_sum;
use entropic_sums::{
    eigenvalues_desc, entangled_pair, instability_demo, max_partial_bounds, partial_trace,
    quantum_partial_sum, tens_preconditions, Alpha,
};

use crate::report::{Cell, Record};

#[derive(Debug, Clone, PartialEq)]
pub struct InstabilityRow {
    pub eps: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub ratio: f64,
    pub ratio_times_eps: f64,
    /// Relative deviation of `ratio·ε` from `1 − ln 2`.
    pub relative_deviation: f64,
}

impl Record for InstabilityRow {
    fn header() -> &'static [&'static str] {
        &[
            "eps",
            "delta1",
            "delta2",
            "ratio",
            "ratio_times_eps",
            "relative_deviation",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        [
            self.eps,
            self.delta1,
            self.delta2,
            self.ratio,
            self.ratio_times_eps,
            self.relative_deviation,
        ]
        .into_iter()
        .map(Cell::Float)
        .collect()
    }
}

pub fn instability(epsilons: &[f64]) -> Result<Vec<InstabilityRow>> {
    let limit = 1.0 - std::f64::consts::LN_2;
    epsilons
        .iter()
        .map(|&eps| {
            let pt = instability_demo(eps)?;
            let re = pt.ratio * eps;
            Ok(InstabilityRow {
                eps,
                delta1: pt.delta1,
                delta2: pt.delta2,
                ratio: pt.ratio,
                ratio_times_eps: re,
                relative_deviation: (re - limit).abs() / limit,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellRow {
    pub theta: f64,
    pub alpha: f64,
    pub k: usize,
    /// `S_α^(k)` of the two-qubit pure state.
    pub joint_sum: f64,
    pub reduced_eig0: f64,
    pub reduced_eig1: f64,
    /// `S_α^(k)` of the reduced state on A.
    pub reduced_sum: f64,
    pub commuting: bool,
    pub products_distinct: bool,
    /// Whether `S^(k)(ρ_A) ≤ S^(2k)(ρ̃)` and its B counterpart hold.
    pub inequality_holds: bool,
}

impl Record for BellRow {
    fn header() -> &'static [&'static str] {
        &[
            "theta",
            "alpha",
            "k",
            "joint_sum",
            "reduced_eig0",
            "reduced_eig1",
            "reduced_sum",
            "commuting",
            "products_distinct",
            "inequality_holds",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Float(self.theta),
            Cell::Float(self.alpha),
            Cell::Int(self.k as u64),
            Cell::Float(self.joint_sum),
            Cell::Float(self.reduced_eig0),
            Cell::Float(self.reduced_eig1),
            Cell::Float(self.reduced_sum),
            Cell::Bool(self.commuting),
            Cell::Bool(self.products_distinct),
            Cell::Bool(self.inequality_holds),
        ]
    }
}

pub fn bell(thetas: &[f64], alphas: &[Alpha], ks: &[usize], tol: f64) -> Result<Vec<BellRow>> {
    let mut rows = Vec::new();
    for &theta in thetas {
        let rho = entangled_pair(theta);
        let pre = tens_preconditions(&rho, (2, 2))?;
        let rho_a = partial_trace(&rho, (2, 2), Subsystem::A)?;
        let eig = eigenvalues_desc(&rho_a)?;
        for &a in alphas {
            for &k in ks.iter().filter(|&&k| (1..=2).contains(&k)) {
                let sums = reduced_sums(&rho, (2, 2), k, a)?;
                rows.push(BellRow {
                    theta,
                    alpha: a.value(),
                    k,
                    joint_sum: quantum_partial_sum(&rho, k, a)?,
                    reduced_eig0: eig.values()[0],
                    reduced_eig1: eig.values()[1],
                    reduced_sum: sums.reduced_a,
                    commuting: pre.commuting,
                    products_distinct: pre.products_distinct,
                    inequality_holds: sums.holds(tol),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxBoundsRow {
    pub alpha: f64,
    pub k: usize,
    pub m: usize,
    pub lower: f64,
    pub upper: f64,
    pub relative_error_cap: f64,
    pub search_max: f64,
    pub within: bool,
}

impl Record for MaxBoundsRow {
    fn header() -> &'static [&'static str] {
        &[
            "alpha",
            "k",
            "m",
            "lower",
            "upper",
            "relative_error_cap",
            "search_max",
            "within",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Float(self.alpha),
            Cell::Int(self.k as u64),
            Cell::Int(self.m as u64),
            Cell::Float(self.lower),
            Cell::Float(self.upper),
            Cell::Float(self.relative_error_cap),
            Cell::Float(self.search_max),
            Cell::Bool(self.within),
        ]
    }
}

/// Brackets `[ln_α(k), ln_α(k+1)]` next to a random-restart maximum over
/// `Δ_m` for every `m > k` in `dims`.
pub fn maxbounds(
    alphas: &[Alpha],
    ks: &[usize],
    dims: &[usize],
    restarts: usize,
    seed: u64,
) -> Result<Vec<MaxBoundsRow>> {
    let mut rows = Vec::new();
    for &a in alphas {
        for &k in ks {
            let b = max_partial_bounds(k, a)?;
            for &m in dims.iter().filter(|&&m| m > k) {
                let best = maximize_partial_sum(m, k, a, restarts, seed)?;
                rows.push(MaxBoundsRow {
                    alpha: a.value(),
                    k,
                    m,
                    lower: b.lower,
                    upper: b.upper,
                    relative_error_cap: b.relative_error_cap,
                    search_max: best.value,
                    within: best.value <= b.upper + 1e-9 && best.value >= b.lower - 1e-6,
                });
            }
        }
    }
    Ok(rows)
}
