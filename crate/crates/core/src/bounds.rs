//! Fannes-type continuity bounds for partial entropic sums, the checks that
//! compare them against computed differences, and the stability function
//! `δ(ξ)`.
//!
//! For α ∈ (0, 2] the bound is `ε^α ln_α(k+1) + η_α(ε)`, valid while
//! `ε ≤ α^{1/(1−α)}`. For α > 2 the binary entropy `H_α(ε, 1−ε)` is added
//! and the cap tightens to `min{α^{1/(1−α)}, (k+1)/(k+2)}`.

use serde::Serialize;

use crate::classical::{partial_distance, partial_sum, partial_sums_all, ProbVector};
use crate::entropy::{
    binary_entropy_unchecked, eta_argmax, eta_max, eta_unchecked, g_bound_unchecked, pow_alpha,
    q_log_unchecked, Alpha,
};
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::quantum::{eigenvalues_desc, partial_fidelities_all, DensityOperator};

/// Slack allowed when deciding whether a computed difference respects its
/// bound.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// α ∈ (0, 2]
    LowAlpha,
    /// α ∈ (2, ∞)
    HighAlpha,
}

impl Regime {
    pub fn of(a: Alpha) -> Regime {
        if a.value() <= 2.0 {
            Regime::LowAlpha
        } else {
            Regime::HighAlpha
        }
    }
}

/// Right-hand side of the continuity bound at one `(ε, k, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub rhs: f64,
    pub regime: Regime,
    pub applicable: bool,
    /// The ε-cap that `applicable` was decided against.
    pub threshold: f64,
}

/// Applicability cap on ε for the given order and regime.
pub fn bound_threshold(k: usize, a: Alpha) -> f64 {
    let x0 = eta_argmax(a);
    match Regime::of(a) {
        Regime::LowAlpha => x0,
        Regime::HighAlpha => x0.min((k as f64 + 1.0) / (k as f64 + 2.0)),
    }
}

/// Evaluates the bound whatever ε is; `applicable` records whether the
/// bound is proven there. The η terms saturate at ε = 1.
pub fn fannes_bound(epsilon: f64, k: usize, a: Alpha) -> BoundValue {
    let regime = Regime::of(a);
    let e = epsilon.max(0.0);
    let e1 = e.min(1.0);
    let base = pow_alpha(e, a) * q_log_unchecked(k as f64 + 1.0, a) + eta_unchecked(e1, a);
    let rhs = match regime {
        Regime::LowAlpha => base,
        Regime::HighAlpha => base + binary_entropy_unchecked(e1, a),
    };
    let threshold = bound_threshold(k, a);
    BoundValue {
        rhs,
        regime,
        applicable: epsilon <= threshold,
        threshold,
    }
}

/// The α > 2 style right-hand side, `g(ε, k+1) + η_α(ε)`, at any α.
pub fn coupling_bound(epsilon: f64, k: usize, a: Alpha) -> f64 {
    let e = epsilon.clamp(0.0, 1.0);
    g_bound_unchecked(e, k + 1, a) + eta_unchecked(e, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    /// ε is outside the range where the bound holds; nothing is asserted.
    NotEvaluated,
}

/// One comparison of a computed difference against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub k: usize,
    pub lhs: f64,
    pub epsilon: f64,
    pub bound: BoundValue,
    pub verdict: Verdict,
    /// `rhs − lhs`
    pub margin: f64,
}

impl InequalityCheck {
    pub fn new(k: usize, lhs: f64, epsilon: f64, bound: BoundValue, tol: f64) -> Self {
        let verdict = if !bound.applicable {
            Verdict::NotEvaluated
        } else if lhs <= bound.rhs + tol {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        };
        InequalityCheck {
            k,
            lhs,
            epsilon,
            bound,
            verdict,
            margin: bound.rhs - lhs,
        }
    }

    /// `Some(true/false)` when applicable, `None` otherwise.
    pub fn satisfied(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Satisfied => Some(true),
            Verdict::Violated => Some(false),
            Verdict::NotEvaluated => None,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Re-decides the verdict under a different tolerance.
    pub fn with_tolerance(self, tol: f64) -> Self {
        Self::new(self.k, self.lhs, self.epsilon, self.bound, tol)
    }
}

/// `F(x, y) = Σ η_α(x_i) − Σ η_α(y_i)`.
pub fn f_diff(x: &[f64], y: &[f64], a: Alpha) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    if let Some(&bad) = x.iter().chain(y).find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Domain {
            name: "x_i",
            value: bad,
            domain: "[0, 1]",
        });
    }
    Ok(f_diff_unchecked(x, y, a))
}

pub(crate) fn f_diff_unchecked(x: &[f64], y: &[f64], a: Alpha) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| eta_unchecked(xi, a) - eta_unchecked(yi, a))
        .sum()
}

/// `|H_α^(k)(p) − H_α^(k)(q)|` against the bound at `ε = G_(k)(p − q)`.
pub fn check_classical(
    p: &ProbVector,
    q: &ProbVector,
    k: usize,
    a: Alpha,
) -> Result<InequalityCheck> {
    let epsilon = partial_distance(p, q, k)?;
    let lhs = (partial_sum(p, k, a)? - partial_sum(q, k, a)?).abs();
    Ok(InequalityCheck::new(
        k,
        lhs,
        epsilon,
        fannes_bound(epsilon, k, a),
        CHECK_TOL,
    ))
}

/// [`check_classical`] for every `k = 1..=m`.
pub fn check_classical_all(
    p: &ProbVector,
    q: &ProbVector,
    a: Alpha,
) -> Result<Vec<InequalityCheck>> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let hp = partial_sums_all(p.values(), a);
    let hq = partial_sums_all(q.values(), a);
    let mut diff: Vec<f64> = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(x, y)| (x - y).abs())
        .collect();
    diff.sort_by(|x, y| y.total_cmp(x));
    let mut eps = 0.0;
    Ok((1..=p.len())
        .map(|k| {
            eps += diff[k - 1];
            let lhs = (hp[k - 1] - hq[k - 1]).abs();
            InequalityCheck::new(k, lhs, eps, fannes_bound(eps, k, a), CHECK_TOL)
        })
        .collect())
}

/// `|S_α^(k)(ρ) − S_α^(k)(σ)|` against the bound at `ε = ‖ρ − σ‖_(k)`.
pub fn check_quantum(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    k: usize,
    a: Alpha,
) -> Result<InequalityCheck> {
    if k == 0 || k > rho.dim() {
        return Err(Error::Index { k, max: rho.dim() });
    }
    Ok(check_quantum_all(rho, sigma, a)?.swap_remove(k - 1))
}

/// [`check_quantum`] for every `k = 1..=d`, sharing the decompositions.
pub fn check_quantum_all(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    a: Alpha,
) -> Result<Vec<InequalityCheck>> {
    let spectra = PairSpectra::new(rho, sigma)?;
    Ok(spectra.checks(&spectra.ky_fan, a))
}

/// Same as [`check_quantum`] with ε replaced by `ε' = 2(1 − F_k(ρ, σ))`.
pub fn check_fidelity_variant(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    k: usize,
    a: Alpha,
) -> Result<InequalityCheck> {
    if k == 0 || k > rho.dim() {
        return Err(Error::Index { k, max: rho.dim() });
    }
    Ok(check_fidelity_all(rho, sigma, a)?.swap_remove(k - 1))
}

pub fn check_fidelity_all(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    a: Alpha,
) -> Result<Vec<InequalityCheck>> {
    let spectra = PairSpectra::new(rho, sigma)?;
    Ok(spectra.checks(&spectra.fidelity_eps, a))
}

/// Spectral data of a pair of states, computed once and reusable across
/// orders and α values.
#[derive(Debug, Clone)]
pub struct PairSpectra {
    pub rho_eigenvalues: Vec<f64>,
    pub sigma_eigenvalues: Vec<f64>,
    /// `‖ρ − σ‖_(k)` for `k = 1..=d`.
    pub ky_fan: Vec<f64>,
    /// `2(1 − F_k)` for `k = 1..=d`.
    pub fidelity_eps: Vec<f64>,
}

impl PairSpectra {
    pub fn new(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
        }
        let sv = singular_values(&(rho.matrix() - sigma.matrix()))?;
        let ky_fan = sv
            .iter()
            .scan(0.0, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        let fid = partial_fidelities_all(rho, sigma)?;
        Ok(PairSpectra {
            rho_eigenvalues: eigenvalues_desc(rho)?.into_vec(),
            sigma_eigenvalues: eigenvalues_desc(sigma)?.into_vec(),
            ky_fan,
            fidelity_eps: fid[1..].iter().map(|f| 2.0 * (1.0 - f)).collect(),
        })
    }

    pub fn checks(&self, epsilons: &[f64], a: Alpha) -> Vec<InequalityCheck> {
        let sr = partial_sums_all(&self.rho_eigenvalues, a);
        let ss = partial_sums_all(&self.sigma_eigenvalues, a);
        epsilons
            .iter()
            .enumerate()
            .map(|(i, &eps)| {
                let k = i + 1;
                InequalityCheck::new(
                    k,
                    (sr[i] - ss[i]).abs(),
                    eps,
                    fannes_bound(eps, k, a),
                    CHECK_TOL,
                )
            })
            .collect()
    }
}

/// `ε₀ = min{α^{1/(1−α)}, (k+1)/(k+2)}`, the right end of the stability
/// range.
pub fn stability_epsilon0(k: usize, a: Alpha) -> f64 {
    eta_argmax(a).min((k as f64 + 1.0) / (k as f64 + 2.0))
}

/// Normalizer of `δ(ξ)`: `ln_α(k)` for `k ≥ 2` and the exact maximum
/// `η_α(α^{1/(1−α)})` for `k = 1`, where `ln_α(1) = 0`.
pub fn stability_normalizer(k: usize, a: Alpha) -> f64 {
    if k >= 2 {
        q_log_unchecked(k as f64, a)
    } else {
        eta_max(a)
    }
}

/// `δ(ξ) = (g(ξ, k+1) + η_α(ξ)) / normalizer` on `[0, ε₀]`.
pub fn stability_delta(xi: f64, k: usize, a: Alpha) -> Result<f64> {
    if k == 0 {
        return Err(Error::Index { k, max: usize::MAX });
    }
    let eps0 = stability_epsilon0(k, a);
    if !(0.0..=eps0).contains(&xi) {
        return Err(Error::Domain {
            name: "xi",
            value: xi,
            domain: "[0, eps0]",
        });
    }
    Ok((g_bound_unchecked(xi, k + 1, a) + eta_unchecked(xi, a)) / stability_normalizer(k, a))
}

/// Inverse of [`stability_delta`] by bisection: the `ξ` with `δ(ξ) = delta`,
/// for `delta ∈ [0, δ(ε₀)]`.
pub fn stability_inverse(delta: f64, k: usize, a: Alpha) -> Result<f64> {
    let eps0 = stability_epsilon0(k, a);
    let top = stability_delta(eps0, k, a)?;
    if !(0.0..=top).contains(&delta) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "[0, delta(eps0)]",
        });
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    // bisect down to adjacent floats; δ is steep near 0 when α < 1
    let (mut lo, mut hi) = (0.0, eps0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stability_delta(mid, k, a)? < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_lo = (stability_delta(lo, k, a)? - delta).abs();
    let r_hi = (stability_delta(hi, k, a)? - delta).abs();
    Ok(if r_lo < r_hi { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, LN_2};

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn bound_examples() {
        let b = fannes_bound(0.0, 3, a(1.5));
        assert_eq!(b.rhs, 0.0);
        assert!(b.applicable);

        let b = fannes_bound(0.1, 1, a(1.0));
        assert_relative_eq!(b.rhs, 0.299_573_227_355_399_1, epsilon = 1e-15);
        assert_relative_eq!(b.threshold, 1.0 / E, epsilon = 1e-15);
        assert!(b.applicable);
        assert_eq!(b.regime, Regime::LowAlpha);

        let b = fannes_bound(0.8, 2, a(3.0));
        assert_eq!(b.regime, Regime::HighAlpha);
        assert_relative_eq!(b.threshold, 3f64.powf(-0.5), epsilon = 1e-15);
        assert!(!b.applicable);
        // the cap switches to (k+1)/(k+2) when that is smaller
        assert_relative_eq!(bound_threshold(1, a(50.0)), 2.0 / 3.0, epsilon = 1e-15);
        // boundary value is applicable
        assert!(fannes_bound(bound_threshold(2, a(0.5)), 2, a(0.5)).applicable);
    }

    #[test]
    fn f_diff_examples() {
        let x = [0.2, 0.5, 0.1];
        assert_eq!(f_diff(&x, &x, a(2.0)).unwrap(), 0.0);
        let y = [0.25, 0.3, 0.0];
        assert_relative_eq!(
            f_diff(&x, &y, a(0.7)).unwrap(),
            -f_diff(&y, &x, a(0.7)).unwrap(),
            epsilon = 1e-15
        );
        let eps = 0.01;
        let d2 = f_diff(&[0.5, 0.5], &[(1.0 - eps) / 2.0, (1.0 + eps) / 2.0], a(1.0)).unwrap();
        let closed = ((1.0 + eps) * eps.ln_1p() + (1.0 - eps) * (-eps).ln_1p()) / 2.0;
        assert_relative_eq!(d2, closed, max_relative = 1e-9);
        assert!(f_diff(&[0.1], &[0.1, 0.2], a(1.0)).is_err());
        assert!(f_diff(&[1.1], &[0.1], a(1.0)).is_err());
    }

    #[test]
    fn classical_check_example() {
        let p = ProbVector::new(vec![0.6, 0.4]).unwrap();
        let q = ProbVector::uniform(2).unwrap();
        let chk = check_classical(&p, &q, 2, a(2.0)).unwrap();
        assert_relative_eq!(chk.lhs, 0.02, epsilon = 1e-15);
        assert_relative_eq!(chk.epsilon, 0.2, epsilon = 1e-15);
        assert_relative_eq!(chk.bound.rhs, 0.186_666_666_666_666_67, epsilon = 1e-15);
        assert_eq!(chk.verdict, Verdict::Satisfied);
        assert_eq!(chk.satisfied(), Some(true));

        let same = check_classical(&p, &p, 1, a(2.0)).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert_eq!(same.verdict, Verdict::Satisfied);

        let all = check_classical_all(&p, &q, a(2.0)).unwrap();
        assert_relative_eq!(all[1].lhs, chk.lhs, epsilon = 1e-15);
        assert_relative_eq!(all[1].epsilon, chk.epsilon, epsilon = 1e-15);
        assert!(check_classical(&p, &ProbVector::uniform(3).unwrap(), 1, a(1.0)).is_err());
    }

    #[test]
    fn not_applicable_is_not_evaluated() {
        let p = ProbVector::corner(2, 0).unwrap();
        let q = ProbVector::corner(2, 1).unwrap();
        let chk = check_classical(&p, &q, 2, a(1.0)).unwrap();
        assert!(!chk.bound.applicable);
        assert_eq!(chk.verdict, Verdict::NotEvaluated);
        assert_eq!(chk.satisfied(), None);
        // a corrupted tolerance turns a pass into a violation
        let p = ProbVector::new(vec![0.6, 0.4]).unwrap();
        let q = ProbVector::new(vec![0.55, 0.45]).unwrap();
        let chk = check_classical(&p, &q, 1, a(1.0)).unwrap();
        assert_eq!(chk.verdict, Verdict::Satisfied);
        assert!(chk.with_tolerance(-1.0).is_violation());
    }

    #[test]
    fn commuting_quantum_check_reproduces_classical() {
        let p = ProbVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let q = ProbVector::new(vec![0.45, 0.33, 0.22]).unwrap();
        let rho = DensityOperator::diagonal(&p);
        let sigma = DensityOperator::diagonal(&q);
        for al in [0.5, 1.0, 2.0, 4.0] {
            for k in 1..=3 {
                let c = check_classical(&p, &q, k, a(al)).unwrap();
                let qc = check_quantum(&rho, &sigma, k, a(al)).unwrap();
                assert_relative_eq!(c.lhs, qc.lhs, epsilon = 1e-14);
                assert_relative_eq!(c.epsilon, qc.epsilon, epsilon = 1e-14);
                assert_eq!(c.verdict, qc.verdict);
            }
        }
        let same = check_quantum(&rho, &rho, 2, a(1.0)).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert!(check_quantum(&rho, &sigma, 4, a(1.0)).is_err());
        assert!(check_quantum(&rho, &DensityOperator::maximally_mixed(2), 1, a(1.0)).is_err());
    }

    #[test]
    fn fidelity_variant_on_equal_states() {
        let p = ProbVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let rho = DensityOperator::diagonal(&p);
        let fid = check_fidelity_variant(&rho, &rho, 1, a(1.0)).unwrap();
        assert_eq!(fid.lhs, 0.0);
        // F_1(ρ, ρ) = 1 − λ_max, so ε' = 2 λ_max
        assert_relative_eq!(fid.epsilon, 1.0, epsilon = 1e-13);
        assert!(!fid.bound.applicable);
    }

    #[test]
    fn stability_examples() {
        assert_eq!(stability_delta(0.0, 3, a(2.0)).unwrap(), 0.0);
        assert!(stability_delta(1e-12, 3, a(2.0)).unwrap() < 1e-10);
        assert_relative_eq!(
            stability_delta(0.1, 2, a(2.0)).unwrap(),
            0.553_333_333_333_333_3,
            epsilon = 1e-14
        );
        for (al, k) in [(1.5, 2), (1.5, 5), (3.0, 2), (3.0, 5)] {
            let eps0 = stability_epsilon0(k, a(al));
            let mut prev = 0.0;
            for i in 1..=100 {
                let d = stability_delta(eps0 * i as f64 / 100.0, k, a(al)).unwrap();
                assert!(d > prev, "α={al} k={k} i={i}");
                prev = d;
            }
        }
        // k = 1 normalizer is the exact maximum of η
        assert_relative_eq!(stability_normalizer(1, a(1.0)), 1.0 / E, epsilon = 1e-15);
        assert_relative_eq!(stability_normalizer(2, a(1.0)), LN_2, epsilon = 1e-15);
        assert!(stability_delta(0.9, 2, a(2.0)).is_err());
        assert!(stability_delta(-0.1, 2, a(2.0)).is_err());
    }

    #[test]
    fn stability_inverse_round_trip() {
        for (al, k) in [(0.5, 1), (1.0, 3), (2.5, 2)] {
            let eps0 = stability_epsilon0(k, a(al));
            let top = stability_delta(eps0, k, a(al)).unwrap();
            for i in 0..=20 {
                let d = top * i as f64 / 20.0;
                let xi = stability_inverse(d, k, a(al)).unwrap();
                assert!((stability_delta(xi, k, a(al)).unwrap() - d).abs() < 1e-10);
            }
            assert!(stability_inverse(top * 1.01, k, a(al)).is_err());
        }
    }
}
