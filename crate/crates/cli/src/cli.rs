use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use entropic_sums::bounds::{check_classical_all, PairSpectra};
use entropic_sums::Alpha;

use crate::config::{env_tolerance, KPolicy, RunConfig, DEFAULT_ALPHAS};
use crate::input::{load_input, Input};
use crate::report::{Format, RecordWriter, ReportRow};
use crate::{demo, eval, sweep};

#[derive(Debug, Parser)]
#[command(
    name = "entropic-sums",
    version,
    about = "Partial Tsallis entropic sums and their continuity bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial sums of one input file, or distances and fidelities of two
    Eval {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, value_parser = KPolicy::parse, default_value = "all")]
        k: KPolicy,
        #[command(flatten)]
        output: Output,
    },
    /// Check the continuity bound on a pair of distributions or states
    Check {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, value_parser = KPolicy::parse, default_value = "all")]
        k: KPolicy,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized verification of the bounds on near pairs
    Sweep {
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        #[arg(long, value_parser = KPolicy::parse, default_value = "all")]
        k: KPolicy,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Random-restart search for pairs that come closest to the bound
    Adversarial {
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        /// Orders to search; `all` means 1,2,3,4
        #[arg(long, value_parser = KPolicy::parse, default_value = "1,2,3")]
        k: KPolicy,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.2")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Tables for the closed-form examples
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Shannon partial sums of ((1-ε)/2, (1+ε)/2) against the uniform pair
    Instability {
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
        eps: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// The state cos θ|00⟩ + sin θ|11⟩ against the reduced-state inequality
    Bell {
        /// Angles; decimals or forms like `pi/4` and `3pi/8`
        #[arg(long, value_delimiter = ',', value_parser = parse_angle, default_value = "pi/6,pi/4")]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, value_parser = KPolicy::parse, default_value = "all")]
        k: KPolicy,
        #[command(flatten)]
        output: Output,
    },
    /// Brackets on the maximal partial sum beside random-restart maxima
    Maxbounds {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, value_parser = KPolicy::parse, default_value = "2")]
        k: KPolicy,
        /// Simplex sizes m
        #[arg(long, value_delimiter = ',', default_value = "6")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// Whether every evaluated check held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Violation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Clean => 0,
            Outcome::Violation => 2,
        }
    }
}

/// `1.25`, `pi`, `pi/4`, `3pi/8` or `3*pi/8`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().with_context(|| format!("bad angle {s:?}"));
    };
    let head = t[..pos].trim_end_matches('*').trim();
    let tail = t[pos + 2..].trim();
    let num = if head.is_empty() {
        1.0
    } else {
        head.parse::<f64>()?
    };
    let den = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>()?,
        None if tail.is_empty() => 1.0,
        None => bail!("bad angle {s:?}"),
    };
    Ok(num * std::f64::consts::PI / den)
}

fn alphas(values: &[f64]) -> Result<Vec<Alpha>> {
    values.iter().map(|&a| Ok(Alpha::new(a)?)).collect()
}

fn open(output: &Output) -> Result<RecordWriter<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match &output.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok(RecordWriter::new(sink, output.format))
}

fn report_violations(rows: &[ReportRow]) -> Outcome {
    let bad: Vec<&ReportRow> = rows.iter().filter(|r| r.is_violation()).collect();
    for r in &bad {
        eprintln!(
            "bound violated: {} alpha={} k={} epsilon={} lhs={} rhs={}",
            r.experiment, r.alpha, r.k, r.epsilon, r.lhs, r.rhs
        );
    }
    if bad.is_empty() {
        Outcome::Clean
    } else {
        Outcome::Violation
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Eval {
            files,
            alpha,
            k,
            output,
        } => {
            let inputs: Vec<Input> = files.iter().map(|f| load_input(f)).collect::<Result<_>>()?;
            let rows = eval::evaluate(&inputs, &alphas(&alpha)?, &k)?;
            let mut w = open(&output)?;
            w.header::<eval::EvalRow>()?;
            w.write_all(&rows)?;
            w.finish()?;
            Ok(Outcome::Clean)
        }
        Command::Check {
            first,
            second,
            alpha,
            k,
            output,
        } => {
            let tol = env_tolerance()?;
            let alphas = alphas(&alpha)?;
            let mut rows = Vec::new();
            match (load_input(&first)?, load_input(&second)?) {
                (Input::Prob(p), Input::Prob(q)) => {
                    if p.len() != q.len() {
                        bail!("dimension mismatch: {} vs {}", p.len(), q.len());
                    }
                    for &a in &alphas {
                        let checks = check_classical_all(&p, &q, a)?;
                        for k in k.orders(p.len()) {
                            let c = checks[k - 1].with_tolerance(tol);
                            rows.push(ReportRow::from_check(
                                "classical",
                                a.value(),
                                p.len(),
                                0,
                                &c,
                            ));
                        }
                    }
                }
                (Input::Density(rho), Input::Density(sigma)) => {
                    let spectra = PairSpectra::new(&rho, &sigma)?;
                    let d = rho.dim();
                    for &a in &alphas {
                        for (name, eps) in [
                            ("quantum", &spectra.ky_fan),
                            ("fidelity", &spectra.fidelity_eps),
                        ] {
                            let checks = spectra.checks(eps, a);
                            for k in k.orders(d) {
                                let c = checks[k - 1].with_tolerance(tol);
                                rows.push(ReportRow::from_check(name, a.value(), d, 0, &c));
                            }
                        }
                    }
                }
                (x, y) => bail!(
                    "check needs two prob_vector or two density inputs, got {} and {}",
                    x.kind(),
                    y.kind()
                ),
            }
            let mut w = open(&output)?;
            w.header::<ReportRow>()?;
            w.write_all(&rows)?;
            w.finish()?;
            Ok(report_violations(&rows))
        }
        Command::Sweep {
            alpha,
            k,
            dims,
            trials,
            seed,
            output,
        } => {
            let cfg = RunConfig {
                seed,
                trials,
                alpha_grid: alpha.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec()),
                k_policy: k,
                dims,
                tolerance: None,
            };
            let out = sweep::run_sweep(&cfg)?;
            let mut w = open(&output)?;
            w.header::<ReportRow>()?;
            w.write_all(&out.rows)?;
            w.finish()?;
            if out.has_violation() {
                for wit in &out.witnesses {
                    eprintln!("bound violated, witness: {}", serde_json::to_string(wit)?);
                }
                return Ok(Outcome::Violation);
            }
            Ok(Outcome::Clean)
        }
        Command::Adversarial {
            alpha,
            k,
            eps,
            restarts,
            seed,
            output,
        } => {
            let alphas = alphas(&alpha.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec()))?;
            let out = sweep::run_adversarial(
                &alphas,
                &k.orders(4),
                &eps,
                restarts,
                seed,
                env_tolerance()?,
            )?;
            for (a, k, e, t) in &out.skipped {
                eprintln!("skipped alpha={a} k={k} eps={e}: above the applicability threshold {t}");
            }
            let mut w = open(&output)?;
            w.header::<ReportRow>()?;
            w.write_all(&out.rows)?;
            w.finish()?;
            Ok(report_violations(&out.rows))
        }
        Command::Demo(demo) => run_demo(demo),
    }
}

fn run_demo(d: Demo) -> Result<Outcome> {
    match d {
        Demo::Instability { eps, output } => {
            let rows = demo::instability(&eps)?;
            let mut w = open(&output)?;
            w.write_all(&rows)?;
            w.finish()?;
        }
        Demo::Bell {
            theta,
            alpha,
            k,
            output,
        } => {
            let rows = demo::bell(&theta, &alphas(&alpha)?, &k.orders(2), 1e-10)?;
            let mut w = open(&output)?;
            w.write_all(&rows)?;
            w.finish()?;
        }
        Demo::Maxbounds {
            alpha,
            k,
            dims,
            restarts,
            seed,
            output,
        } => {
            let max_m = dims.iter().copied().max().unwrap_or(0);
            let rows = demo::maxbounds(&alphas(&alpha)?, &k.orders(max_m), &dims, restarts, seed)?;
            let mut w = open(&output)?;
            w.write_all(&rows)?;
            w.finish()?;
        }
    }
    Ok(Outcome::Clean)
}
