//! Density operators, Ky Fan norms, quantum partial entropic sums,
//! tensor/partial-trace algebra, rank-one POVMs and partial fidelities.
//!
//! Every matrix function goes through the Hermitian eigendecomposition
//! `f(A) = Σ f(λ_i)|e_i⟩⟨e_i|`; nothing is computed by series expansion.

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::{partial_sum_slice, top_k_sum, JointDistribution, ProbVector};
use crate::entropy::{eta_unchecked, Alpha};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, singular_values, ComplexMatrix, HermitianEigen};

pub const HERM_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
pub const COMM_TOL: f64 = 1e-9;
pub const SPEC_TOL: f64 = 1e-8;
pub const POVM_TOL: f64 = 1e-8;
/// Eigenvalues below this are rounding noise and are read as exact zeros.
pub const SPECTRAL_FLOOR: f64 = 1e-14;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::NotDensity(format!(
                "shape {}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERM_TOL {
            return Err(Error::NotDensity(format!("Hermitian deviation {dev:.3e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > HERM_TOL || tr.im.abs() > HERM_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eigen(&matrix)?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotDensity(format!("smallest eigenvalue {min:.3e}")));
        }
        Ok(DensityOperator { matrix })
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// `diag(p)`.
    pub fn diagonal(p: &ProbVector) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::from_real_diag(p.values()),
        }
    }

    /// Projector onto the normalized `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm.is_nan() || norm <= 0.0 {
            return Err(Error::NotDensity("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(DensityOperator {
            matrix: ComplexMatrix::outer(&v),
        })
    }

    /// Trusted constructor for internally generated states; only the trace
    /// is renormalized.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let tr = matrix.trace().re;
        let matrix = matrix.hermitian_part().scale(1.0 / tr);
        DensityOperator { matrix }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(&self.matrix)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(u.rows(), self.dim()));
        }
        Ok(Self::from_trusted(&(u * &self.matrix) * &u.adjoint()))
    }

    /// `ρ ⊕ 0` on a space enlarged by `extra` dimensions.
    pub fn embed(&self, extra: usize) -> Self {
        DensityOperator {
            matrix: self.matrix.pad_zeros(extra),
        }
    }

    /// `(1 − t) ρ + t σ`.
    pub fn mix(&self, other: &DensityOperator, t: f64) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self::from_trusted(
            &self.matrix.scale(1.0 - t) + &other.matrix.scale(t),
        ))
    }
}

fn check_dims(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        Err(Error::DimensionMismatch(rho.dim(), sigma.dim()))
    } else {
        Ok(())
    }
}

fn clamp_to_simplex(values: &[f64]) -> Vec<f64> {
    let clamped: Vec<f64> = values
        .iter()
        .map(|&v| if v < SPECTRAL_FLOOR { 0.0 } else { v.min(1.0) })
        .collect();
    let sum: f64 = clamped.iter().sum();
    if sum > 0.0 {
        clamped.into_iter().map(|v| v / sum).collect()
    } else {
        clamped
    }
}

/// Eigenvalues of `rho` in descending order as a probability vector.
pub fn eigenvalues_desc(rho: &DensityOperator) -> Result<ProbVector> {
    let eig = rho.eigen()?;
    Ok(ProbVector::from_raw(clamp_to_simplex(&eig.values)))
}

/// Singular values in descending order.
pub fn singular_values_desc(x: &ComplexMatrix) -> Result<Vec<f64>> {
    singular_values(x)
}

/// Ky Fan k-norm: the sum of the `k` largest singular values.
pub fn ky_fan_norm(x: &ComplexMatrix, k: usize) -> Result<f64> {
    let max = x.rows().min(x.cols());
    if k == 0 || k > max {
        return Err(Error::Index { k, max });
    }
    Ok(singular_values(x)?.iter().take(k).sum())
}

/// `‖X‖_(k)` for every `k = 1..=min(dims)`.
pub fn ky_fan_norms_all(x: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(cumulative(&singular_values(x)?))
}

fn cumulative(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn check_order(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d {
        Err(Error::Index { k, max: d })
    } else {
        Ok(())
    }
}

/// `S_α^(k)(ρ) = ‖η_α(ρ)‖_(k)`, evaluated on the spectrum.
pub fn quantum_partial_sum(rho: &DensityOperator, k: usize, a: Alpha) -> Result<f64> {
    check_order(k, rho.dim())?;
    let p = eigenvalues_desc(rho)?;
    Ok(partial_sum_slice(p.values(), k, a))
}

/// `S_α^(k)(ρ)` by forming the operator `η_α(ρ)` and taking its Ky Fan
/// norm through singular values.
pub fn quantum_partial_sum_matrix_route(rho: &DensityOperator, k: usize, a: Alpha) -> Result<f64> {
    check_order(k, rho.dim())?;
    let eta_op = entropy_operator(rho, a)?;
    ky_fan_norm(&eta_op, k)
}

/// The operator `η_α(ρ)`.
pub fn entropy_operator(rho: &DensityOperator, a: Alpha) -> Result<ComplexMatrix> {
    Ok(rho.eigen()?.apply_function(|x| {
        if x < SPECTRAL_FLOOR {
            0.0
        } else {
            eta_unchecked(x, a)
        }
    }))
}

/// `‖ρ − σ‖_(k)`.
pub fn ky_fan_distance(rho: &DensityOperator, sigma: &DensityOperator, k: usize) -> Result<f64> {
    check_dims(rho, sigma)?;
    ky_fan_norm(&(rho.matrix() - sigma.matrix()), k)
}

/// `ρ ⊗ ω`, with `ρ` as the slow index.
pub fn tensor(rho: &DensityOperator, omega: &DensityOperator) -> DensityOperator {
    DensityOperator {
        matrix: rho.matrix().kron(omega.matrix()),
    }
}

/// Which factor of a bipartite state a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a state on `H_A ⊗ H_B` (A is the slow index, so the
/// basis label of `|iμ⟩` is `i·d_B + μ`).
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), da * db));
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).map(|mu| m[(i * db + mu, j * db + mu)]).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(db, db);
            for mu in 0..db {
                for nu in 0..db {
                    out[(mu, nu)] = (0..da).map(|i| m[(i * db + mu, i * db + nu)]).sum();
                }
            }
            out
        }
    };
    Ok(DensityOperator::from_trusted(out))
}

/// Preconditions of the reduced-state monotonicity inequality for a bipartite
/// state `ρ̃`: (i) `[ρ̃, ρ_A ⊗ ρ_B] = 0`, (ii) the products `a_i b_μ` of
/// the reduced spectra are pairwise distinct.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensPreconditions {
    pub commuting: bool,
    pub products_distinct: bool,
    /// Largest entry of the commutator.
    pub commutator_max: f64,
    /// Smallest separation between two products `a_i b_μ`.
    pub min_product_gap: f64,
}

pub fn tens_preconditions(
    rho: &DensityOperator,
    dims: (usize, usize),
) -> Result<TensPreconditions> {
    let rho_a = partial_trace(rho, dims, Subsystem::A)?;
    let rho_b = partial_trace(rho, dims, Subsystem::B)?;
    let prod = tensor(&rho_a, &rho_b);
    let commutator_max = rho.matrix().commutator(prod.matrix()).max_abs();

    let a = eigenvalues_desc(&rho_a)?;
    let b = eigenvalues_desc(&rho_b)?;
    let mut products: Vec<f64> = a
        .values()
        .iter()
        .flat_map(|&x| b.values().iter().map(move |&y| x * y))
        .collect();
    products.sort_by(f64::total_cmp);
    let min_product_gap = products
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    Ok(TensPreconditions {
        commuting: commutator_max <= COMM_TOL,
        products_distinct: min_product_gap > SPEC_TOL,
        commutator_max,
        min_product_gap,
    })
}

/// Both sides of the reduced-state inequalities
/// `S^(k)(ρ_A) ≤ S^(kN)(ρ̃)` and `S^(k)(ρ_B) ≤ S^(kd)(ρ̃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedSums {
    pub reduced_a: f64,
    pub joint_for_a: f64,
    pub reduced_b: f64,
    pub joint_for_b: f64,
}

impl ReducedSums {
    pub fn holds(&self, tol: f64) -> bool {
        self.reduced_a <= self.joint_for_a + tol && self.reduced_b <= self.joint_for_b + tol
    }
}

/// Evaluates the reduced-state inequalities at order `k`; `k` is capped at
/// each factor dimension.
pub fn reduced_sums(
    rho: &DensityOperator,
    dims: (usize, usize),
    k: usize,
    a: Alpha,
) -> Result<ReducedSums> {
    let (da, db) = dims;
    let rho_a = partial_trace(rho, dims, Subsystem::A)?;
    let rho_b = partial_trace(rho, dims, Subsystem::B)?;
    let joint = eigenvalues_desc(rho)?;
    let ka = k.min(da);
    let kb = k.min(db);
    Ok(ReducedSums {
        reduced_a: quantum_partial_sum(&rho_a, ka, a)?,
        joint_for_a: partial_sum_slice(joint.values(), ka * db, a),
        reduced_b: quantum_partial_sum(&rho_b, kb, a)?,
        joint_for_b: partial_sum_slice(joint.values(), kb * da, a),
    })
}

/// `cos θ |00⟩ + sin θ |11⟩` as a two-qubit density operator.
pub fn entangled_pair(theta: f64) -> DensityOperator {
    let psi = [
        c(theta.cos(), 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(theta.sin(), 0.0),
    ];
    DensityOperator {
        matrix: ComplexMatrix::outer(&psi),
    }
}

/// The positive square root `√ρ`.
pub fn matrix_sqrt(rho: &DensityOperator) -> Result<ComplexMatrix> {
    Ok(rho.eigen()?.apply_function(|x| x.max(0.0).sqrt()))
}

/// Partial fidelity `F_k(ρ, σ) = Σ_{j>k} σ_j↓(√ρ √σ)` for `k ∈ [0, d]`.
pub fn partial_fidelity(rho: &DensityOperator, sigma: &DensityOperator, k: usize) -> Result<f64> {
    check_dims(rho, sigma)?;
    if k > rho.dim() {
        return Err(Error::Index { k, max: rho.dim() });
    }
    Ok(partial_fidelities_all(rho, sigma)?[k])
}

/// `[F_0, F_1, …, F_d]`.
pub fn partial_fidelities_all(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Vec<f64>> {
    check_dims(rho, sigma)?;
    let prod = &matrix_sqrt(rho)? * &matrix_sqrt(sigma)?;
    let sv = singular_values(&prod)?;
    let mut tail = vec![0.0; sv.len() + 1];
    for j in (0..sv.len()).rev() {
        tail[j] = tail[j + 1] + sv[j];
    }
    Ok(tail)
}

/// Weighted pure-state ensemble `{q_i, |ψ_i⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureEnsemble {
    weights: ProbVector,
    states: Vec<Vec<Complex64>>,
}

impl PureEnsemble {
    pub fn new(weights: ProbVector, states: Vec<Vec<Complex64>>) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch(weights.len(), states.len()));
        }
        let d = states.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::NotDensity("empty ensemble state".into()));
        }
        let mut normalized = Vec::with_capacity(states.len());
        for (i, s) in states.into_iter().enumerate() {
            if s.len() != d {
                return Err(Error::DimensionMismatch(s.len(), d));
            }
            let norm = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > HERM_TOL {
                return Err(Error::NotDensity(format!("state {i} has norm {norm}")));
            }
            normalized.push(s.into_iter().map(|z| z / norm).collect());
        }
        Ok(PureEnsemble {
            weights,
            states: normalized,
        })
    }

    pub fn weights(&self) -> &ProbVector {
        &self.weights
    }

    pub fn states(&self) -> &[Vec<Complex64>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `ϱ = Σ q_i |ψ_i⟩⟨ψ_i|`.
pub fn density_from_ensemble(e: &PureEnsemble) -> DensityOperator {
    let d = e.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (&q, psi) in e.weights.values().iter().zip(&e.states) {
        m = &m + &ComplexMatrix::outer(psi).scale(q);
    }
    DensityOperator::from_trusted(m)
}

/// Rank-one POVM `{|w_j⟩⟨w_j|}` with `Σ_j |w_j⟩⟨w_j| = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOnePovm {
    vectors: Vec<Vec<Complex64>>,
}

impl RankOnePovm {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::PovmIncomplete(f64::INFINITY));
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for v in &vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch(v.len(), d));
            }
            sum = &sum + &ComplexMatrix::outer(v);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev.is_nan() || dev > POVM_TOL {
            return Err(Error::PovmIncomplete(dev));
        }
        Ok(RankOnePovm { vectors })
    }

    /// The POVM of an orthonormal basis given as the columns of a unitary.
    pub fn from_basis(u: &ComplexMatrix) -> Result<Self> {
        Self::new((0..u.cols()).map(|j| u.column(j)).collect())
    }

    /// Gram completion: given vectors `v_j` spanning the space, returns
    /// `w_j = S^{−1/2} v_j` with `S = Σ_j |v_j⟩⟨v_j|`.
    pub fn gram_completion(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        let mut frame = ComplexMatrix::zeros(d, d);
        for v in vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch(v.len(), d));
            }
            frame = &frame + &ComplexMatrix::outer(v);
        }
        let eig = hermitian_eigen(&frame)?;
        let smallest = eig.values.last().copied().unwrap_or(0.0);
        if smallest.is_nan() || smallest <= 1e-12 * eig.values[0].max(1.0) {
            return Err(Error::PovmIncomplete(f64::INFINITY));
        }
        let inv_sqrt = eig.apply_function(|x| 1.0 / x.sqrt());
        Self::new(vectors.iter().map(|v| inv_sqrt.apply(v)).collect())
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn outcomes(&self) -> usize {
        self.vectors.len()
    }
}

fn inner(w: &[Complex64], psi: &[Complex64]) -> Complex64 {
    w.iter().zip(psi).map(|(a, b)| a.conj() * b).sum()
}

/// Joint distribution `P(ψ_i; w_j) = q_i |⟨w_j|ψ_i⟩|²`, rows indexed by the
/// ensemble member and columns by the outcome.
pub fn povm_joint_probs(e: &PureEnsemble, m: &RankOnePovm) -> Result<JointDistribution> {
    if e.dim() != m.dim() {
        return Err(Error::DimensionMismatch(e.dim(), m.dim()));
    }
    let n = m.outcomes();
    let mut values = Vec::with_capacity(e.len() * n);
    for (&q, psi) in e.weights.values().iter().zip(&e.states) {
        values.extend(m.vectors.iter().map(|w| q * inner(w, psi).norm_sqr()));
    }
    JointDistribution::new(e.len(), n, values)
}

/// Quantities around the measurement bound `S_α^(k)(ϱ) ≤ H_α^(kN)(P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBound {
    /// `S_α^(k)(ϱ)` of the ensemble average.
    pub state_sum: f64,
    /// `H_α^(k)(q)` of the ensemble weights (order capped at the ensemble size).
    pub weight_sum: f64,
    /// `H_α^(kN)(P)` of the joint outcome distribution (order capped at its size).
    pub joint_sum: f64,
}

impl MeasurementBound {
    /// The inequality stated for the averaged state.
    pub fn state_bound_holds(&self, tol: f64) -> bool {
        self.state_sum <= self.joint_sum + tol
    }

    /// The marginal form `H^(k)(q) ≤ H^(kN)(P)`.
    pub fn weight_bound_holds(&self, tol: f64) -> bool {
        self.weight_sum <= self.joint_sum + tol
    }
}

pub fn measurement_bound(
    e: &PureEnsemble,
    m: &RankOnePovm,
    k: usize,
    a: Alpha,
) -> Result<MeasurementBound> {
    check_order(k, e.dim())?;
    let joint = povm_joint_probs(e, m)?;
    let n = m.outcomes();
    let state = density_from_ensemble(e);
    Ok(MeasurementBound {
        state_sum: quantum_partial_sum(&state, k, a)?,
        weight_sum: partial_sum_slice(e.weights.values(), k.min(e.len()), a),
        joint_sum: partial_sum_slice(joint.values(), (k * n).min(joint.values().len()), a),
    })
}

/// `G_(k)(λ↓(ρ) − λ↓(σ))`, the spectral side of the Ky Fan comparison.
pub fn spectral_partial_distance(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    k: usize,
) -> Result<f64> {
    check_dims(rho, sigma)?;
    check_order(k, rho.dim())?;
    let p = rho.eigen()?.values;
    let q = sigma.eigen()?.values;
    let diff: Vec<f64> = p.iter().zip(&q).map(|(x, y)| (x - y).abs()).collect();
    Ok(top_k_sum(&diff, k))
}
