use anyhow::{bail, Context, Result};
use entropic_sums::{Alpha, CHECK_TOL};
use serde::Serialize;

/// Environment variable overriding the verdict tolerance. Test-only: it
/// exists so the violation exit path can be exercised end to end.
pub const TOL_ENV: &str = "ENTROPIC_SUMS_TOL";

pub const DEFAULT_ALPHAS: [f64; 9] = [0.3, 0.7, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KPolicy {
    All,
    List(Vec<usize>),
}

impl KPolicy {
    /// Orders to evaluate for a system of size `dim`; listed orders above
    /// `dim` are skipped.
    pub fn orders(&self, dim: usize) -> Vec<usize> {
        match self {
            KPolicy::All => (1..=dim).collect(),
            KPolicy::List(ks) => ks.iter().copied().filter(|&k| k >= 1 && k <= dim).collect(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(KPolicy::All);
        }
        let ks = parse_list::<usize>(s, "k")?;
        if ks.contains(&0) {
            bail!("k must be at least 1");
        }
        Ok(KPolicy::List(ks))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub alpha_grid: Vec<f64>,
    pub k_policy: KPolicy,
    pub dims: Vec<usize>,
    pub tolerance: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 100,
            alpha_grid: DEFAULT_ALPHAS.to_vec(),
            k_policy: KPolicy::All,
            dims: vec![2, 4, 8],
            tolerance: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.alpha_grid.is_empty() {
            bail!("alpha grid is empty");
        }
        for &a in &self.alpha_grid {
            Alpha::new(a)?;
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            bail!("dims must be a nonempty list of positive integers");
        }
        if let Some(t) = self.tolerance {
            if !t.is_finite() {
                bail!("tolerance must be finite");
            }
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<Alpha> {
        self.alpha_grid
            .iter()
            .map(|&a| Alpha::new(a).expect("validated"))
            .collect()
    }

    /// Explicit override, else the environment, else [`CHECK_TOL`].
    pub fn check_tolerance(&self) -> Result<f64> {
        match self.tolerance {
            Some(t) => Ok(t),
            None => env_tolerance(),
        }
    }
}

pub fn env_tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(s) => {
            let t: f64 = s
                .trim()
                .parse()
                .with_context(|| format!("{TOL_ENV}={s:?} is not a number"))?;
            if !t.is_finite() {
                bail!("{TOL_ENV} must be finite");
            }
            Ok(t)
        }
        Err(std::env::VarError::NotPresent) => Ok(CHECK_TOL),
        Err(e) => Err(e).context(TOL_ENV),
    }
}

/// Comma-separated list parser used by the list-valued flags.
pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .with_context(|| format!("bad {what} value {t:?}"))
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        bail!("empty {what} list");
    }
    Ok(items)
}
