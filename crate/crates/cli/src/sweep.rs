//! Randomized verification of the continuity bounds and the adversarial
//! tightness grid.

use anyhow::Result;
use entropic_sums::bounds::{bound_threshold, check_classical_all, PairSpectra};
use entropic_sums::sampling::{
    rng_for, sample_density, sample_simplex, uniform, SampleNear, SimRng,
};
use entropic_sums::{adversarial_search, AdversarialResult, Alpha, InequalityCheck};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{KPolicy, RunConfig};
use crate::input::RawInput;
use crate::report::ReportRow;

/// A pair that violated a bound, in the input JSON format so it can be fed
/// back to `check`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub trial: u64,
    pub experiment: String,
    pub alpha: f64,
    pub k: usize,
    pub dim: usize,
    pub epsilon: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub first: RawInput,
    pub second: RawInput,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub rows: Vec<ReportRow>,
    /// Violations of the first failing trial; the run stops there.
    pub witnesses: Vec<Witness>,
}

impl SweepOutput {
    pub fn has_violation(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// Full-distance cap for a near pair: `u²` with `u` uniform, which puts
/// most pairs in the small-ε range where the bounds apply.
fn draw_cap(rng: &mut SimRng) -> f64 {
    let u = uniform(rng);
    u * u
}

struct TrialContext<'a> {
    seed: u64,
    trial: u64,
    tol: f64,
    alphas: &'a [Alpha],
    k_policy: &'a KPolicy,
    rows: Vec<ReportRow>,
    witnesses: Vec<Witness>,
}

impl TrialContext<'_> {
    fn record(
        &mut self,
        experiment: &str,
        a: Alpha,
        dim: usize,
        checks: &[InequalityCheck],
        pair: impl Fn() -> (RawInput, RawInput),
    ) {
        for k in self.k_policy.orders(dim) {
            let c = checks[k - 1].with_tolerance(self.tol);
            let row = ReportRow::from_check(experiment, a.value(), dim, self.seed, &c);
            if row.is_violation() {
                let (first, second) = pair();
                self.witnesses.push(Witness {
                    trial: self.trial,
                    experiment: experiment.to_string(),
                    alpha: a.value(),
                    k,
                    dim,
                    epsilon: c.epsilon,
                    lhs: c.lhs,
                    rhs: c.bound.rhs,
                    first,
                    second,
                });
            }
            self.rows.push(row);
        }
    }
}

fn run_trial(
    cfg: &RunConfig,
    alphas: &[Alpha],
    tol: f64,
    trial: u64,
) -> Result<(Vec<ReportRow>, Vec<Witness>)> {
    let mut rng = rng_for(cfg.seed, trial);
    let mut ctx = TrialContext {
        seed: cfg.seed,
        trial,
        tol,
        alphas,
        k_policy: &cfg.k_policy,
        rows: Vec::new(),
        witnesses: Vec::new(),
    };
    for &d in &cfg.dims {
        let p = sample_simplex(d, &mut rng);
        let cap = draw_cap(&mut rng);
        let q = p.sample_near(cap, &mut rng);

        let rho = sample_density(d, &mut rng);
        let cap = draw_cap(&mut rng);
        let sigma = rho.sample_near(cap, &mut rng);
        let spectra = PairSpectra::new(&rho, &sigma)?;

        for &a in ctx.alphas {
            let classical = check_classical_all(&p, &q, a)?;
            ctx.record("classical", a, d, &classical, || ((&p).into(), (&q).into()));
            let quantum = spectra.checks(&spectra.ky_fan, a);
            ctx.record("quantum", a, d, &quantum, || {
                ((&rho).into(), (&sigma).into())
            });
            let fidelity = spectra.checks(&spectra.fidelity_eps, a);
            ctx.record("fidelity", a, d, &fidelity, || {
                ((&rho).into(), (&sigma).into())
            });
        }
    }
    Ok((ctx.rows, ctx.witnesses))
}

/// Runs `cfg.trials` independent trials in parallel. Trial `t` draws from
/// generator stream `t`, and rows are merged in trial order, so the output
/// does not depend on the thread count.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let tol = cfg.check_tolerance()?;
    let alphas = cfg.alphas();
    let trials: Vec<(Vec<ReportRow>, Vec<Witness>)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, &alphas, tol, t))
        .collect::<Result<_>>()?;
    let mut out = SweepOutput::default();
    for (rows, witnesses) in trials {
        out.rows.extend(rows);
        if !witnesses.is_empty() {
            out.witnesses = witnesses;
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AdversarialOutput {
    pub rows: Vec<ReportRow>,
    pub results: Vec<AdversarialResult>,
    /// Grid points skipped because ε exceeds the applicability threshold.
    pub skipped: Vec<(f64, usize, f64, f64)>,
}

/// Adversarial tightness search over `alphas × ks × epsilons`.
pub fn run_adversarial(
    alphas: &[Alpha],
    ks: &[usize],
    epsilons: &[f64],
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<AdversarialOutput> {
    let mut out = AdversarialOutput {
        rows: Vec::new(),
        results: Vec::new(),
        skipped: Vec::new(),
    };
    for &a in alphas {
        for &k in ks {
            let threshold = bound_threshold(k, a);
            for &eps in epsilons {
                if !(0.0..=threshold).contains(&eps) {
                    out.skipped.push((a.value(), k, eps, threshold));
                    continue;
                }
                let res = adversarial_search(k, a, eps, restarts, seed)?;
                let bound = entropic_sums::fannes_bound(eps, k, a);
                let c = InequalityCheck::new(k, res.achieved, eps, bound, tol);
                out.rows
                    .push(ReportRow::from_check("adversarial", a.value(), k, seed, &c));
                out.results.push(res);
            }
        }
    }
    Ok(out)
}
