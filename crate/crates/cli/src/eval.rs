use anyhow::{bail, Result};
use entropic_sums::quantum::{measurement_bound, partial_fidelities_all};
use entropic_sums::{
    density_from_ensemble, ky_fan_distance, marginal, partial_distance, partial_sum,
    quantum_partial_sum, Alpha, Axis,
};

use crate::config::KPolicy;
use crate::input::Input;
use crate::report::{Cell, Record};

/// One computed quantity. `alpha` is absent for α-free quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub quantity: &'static str,
    pub alpha: Option<f64>,
    pub k: usize,
    pub value: f64,
}

impl Record for EvalRow {
    fn header() -> &'static [&'static str] {
        &["quantity", "alpha", "k", "value"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.quantity.to_string()),
            self.alpha.map_or(Cell::Missing, Cell::Float),
            Cell::Int(self.k as u64),
            Cell::Float(self.value),
        ]
    }
}

struct Rows<'a> {
    alphas: &'a [Alpha],
    ks: &'a KPolicy,
    out: Vec<EvalRow>,
}

impl Rows<'_> {
    fn per_alpha(
        &mut self,
        quantity: &'static str,
        dim: usize,
        f: impl Fn(usize, Alpha) -> Result<f64>,
    ) -> Result<()> {
        for &a in self.alphas {
            for k in self.ks.orders(dim) {
                let value = f(k, a)?;
                self.out.push(EvalRow {
                    quantity,
                    alpha: Some(a.value()),
                    k,
                    value,
                });
            }
        }
        Ok(())
    }

    fn plain(
        &mut self,
        quantity: &'static str,
        ks: impl IntoIterator<Item = usize>,
        f: impl Fn(usize) -> Result<f64>,
    ) -> Result<()> {
        for k in ks {
            let value = f(k)?;
            self.out.push(EvalRow {
                quantity,
                alpha: None,
                k,
                value,
            });
        }
        Ok(())
    }
}

/// Partial sums of one input, or pair quantities of two.
pub fn evaluate(inputs: &[Input], alphas: &[Alpha], ks: &KPolicy) -> Result<Vec<EvalRow>> {
    let mut rows = Rows {
        alphas,
        ks,
        out: Vec::new(),
    };
    match inputs {
        [Input::Prob(p)] => {
            rows.per_alpha("partial_sum", p.len(), |k, a| Ok(partial_sum(p, k, a)?))?
        }
        [Input::Density(rho)] => rows.per_alpha("partial_sum", rho.dim(), |k, a| {
            Ok(quantum_partial_sum(rho, k, a)?)
        })?,
        [Input::Joint(r)] => {
            let flat = r.flatten();
            let (pa, pb) = (marginal(r, Axis::Rows), marginal(r, Axis::Columns));
            rows.per_alpha("partial_sum", flat.len(), |k, a| {
                Ok(partial_sum(&flat, k, a)?)
            })?;
            rows.per_alpha("marginal_rows_partial_sum", pa.len(), |k, a| {
                Ok(partial_sum(&pa, k, a)?)
            })?;
            rows.per_alpha("marginal_cols_partial_sum", pb.len(), |k, a| {
                Ok(partial_sum(&pb, k, a)?)
            })?;
        }
        [Input::Ensemble(e)] => {
            let state = density_from_ensemble(e);
            rows.per_alpha("partial_sum", state.dim(), |k, a| {
                Ok(quantum_partial_sum(&state, k, a)?)
            })?;
            rows.per_alpha("weights_partial_sum", e.len(), |k, a| {
                Ok(partial_sum(e.weights(), k, a)?)
            })?;
        }
        [Input::Prob(p), Input::Prob(q)] => {
            if p.len() != q.len() {
                bail!("dimension mismatch: {} vs {}", p.len(), q.len());
            }
            rows.plain("partial_distance", ks.orders(p.len()), |k| {
                Ok(partial_distance(p, q, k)?)
            })?;
        }
        [Input::Density(rho), Input::Density(sigma)] => {
            if rho.dim() != sigma.dim() {
                bail!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim());
            }
            rows.plain("ky_fan_distance", ks.orders(rho.dim()), |k| {
                Ok(ky_fan_distance(rho, sigma, k)?)
            })?;
            let fid = partial_fidelities_all(rho, sigma)?;
            rows.plain("partial_fidelity", 0..=rho.dim(), |k| Ok(fid[k]))?;
        }
        [Input::Ensemble(e), Input::Povm(m)] | [Input::Povm(m), Input::Ensemble(e)] => {
            rows.per_alpha("state_partial_sum", e.dim(), |k, a| {
                Ok(measurement_bound(e, m, k, a)?.state_sum)
            })?;
            rows.per_alpha("weights_partial_sum", e.dim(), |k, a| {
                Ok(measurement_bound(e, m, k, a)?.weight_sum)
            })?;
            rows.per_alpha("measured_joint_partial_sum", e.dim(), |k, a| {
                Ok(measurement_bound(e, m, k, a)?.joint_sum)
            })?;
        }
        _ => {
            let kinds: Vec<&str> = inputs.iter().map(Input::kind).collect();
            bail!("unsupported input combination: {}", kinds.join(" + "));
        }
    }
    Ok(rows.out)
}
