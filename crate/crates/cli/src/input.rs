use std::path::Path;

use anyhow::{bail, Context, Result};
use entropic_sums::{
    Complex64, ComplexMatrix, DensityOperator, JointDistribution, ProbVector, PureEnsemble,
    RankOnePovm,
};
use serde::{Deserialize, Serialize};

/// The JSON input formats accepted by `eval` and `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawInput {
    ProbVector {
        values: Vec<f64>,
    },
    Density {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Joint {
        rows: usize,
        cols: usize,
        values: Vec<Vec<f64>>,
    },
    Ensemble {
        weights: Vec<f64>,
        states_re: Vec<Vec<f64>>,
        states_im: Vec<Vec<f64>>,
    },
    Povm {
        vectors_re: Vec<Vec<f64>>,
        vectors_im: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone)]
pub enum Input {
    Prob(ProbVector),
    Density(DensityOperator),
    Joint(JointDistribution),
    Ensemble(PureEnsemble),
    Povm(RankOnePovm),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Prob(_) => "prob_vector",
            Input::Density(_) => "density",
            Input::Joint(_) => "joint",
            Input::Ensemble(_) => "ensemble",
            Input::Povm(_) => "povm",
        }
    }
}

fn complex_vectors(re: &[Vec<f64>], im: &[Vec<f64>], what: &str) -> Result<Vec<Vec<Complex64>>> {
    if re.len() != im.len() {
        bail!(
            "{what}: {} real parts but {} imaginary parts",
            re.len(),
            im.len()
        );
    }
    re.iter()
        .zip(im)
        .enumerate()
        .map(|(i, (r, m))| {
            if r.len() != m.len() {
                bail!("{what} {i}: real and imaginary parts differ in length");
            }
            Ok(r.iter()
                .zip(m)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect())
        })
        .collect()
}

impl TryFrom<RawInput> for Input {
    type Error = anyhow::Error;

    fn try_from(raw: RawInput) -> Result<Self> {
        Ok(match raw {
            RawInput::ProbVector { values } => Input::Prob(ProbVector::new(values)?),
            RawInput::Density { dim, re, im } => {
                if re.len() != dim || im.len() != dim {
                    bail!("density: expected {dim} rows");
                }
                Input::Density(DensityOperator::new(ComplexMatrix::from_parts(&re, &im)?)?)
            }
            RawInput::Joint { rows, cols, values } => {
                if values.len() != rows || values.iter().any(|r| r.len() != cols) {
                    bail!("joint: expected a {rows}x{cols} grid");
                }
                Input::Joint(JointDistribution::from_rows(&values)?)
            }
            RawInput::Ensemble {
                weights,
                states_re,
                states_im,
            } => {
                let states = complex_vectors(&states_re, &states_im, "state")?;
                Input::Ensemble(PureEnsemble::new(ProbVector::new(weights)?, states)?)
            }
            RawInput::Povm {
                vectors_re,
                vectors_im,
            } => Input::Povm(RankOnePovm::new(complex_vectors(
                &vectors_re,
                &vectors_im,
                "vector",
            )?)?),
        })
    }
}

impl From<&ProbVector> for RawInput {
    fn from(p: &ProbVector) -> Self {
        RawInput::ProbVector {
            values: p.values().to_vec(),
        }
    }
}

impl From<&DensityOperator> for RawInput {
    fn from(rho: &DensityOperator) -> Self {
        let d = rho.dim();
        let m = rho.matrix();
        let part = |f: fn(Complex64) -> f64| {
            (0..d)
                .map(|i| (0..d).map(|j| f(m[(i, j)])).collect())
                .collect()
        };
        RawInput::Density {
            dim: d,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input> {
    let raw: RawInput = serde_json::from_str(text)?;
    raw.try_into()
}

pub fn load_input(path: &Path) -> Result<Input> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_input(&text).with_context(|| format!("parsing {}", path.display()))
}
