//! Scalar α-deformed functions: the α-logarithm, the α-entropy function
//! `η_α`, its maximizer, the binary Tsallis entropy and the coupling bound
//! `g(δ, n)`.
//!
//! Every function switches to the Shannon closed form when
//! `|α − 1| < LIMIT_SWITCH`; the ratio forms lose all significant digits
//! there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the window around α = 1 that is evaluated with the
/// Shannon-limit closed forms.
pub const LIMIT_SWITCH: f64 = 1e-8;

/// Validated entropic order α ∈ (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    /// The Shannon case α = 1.
    pub const SHANNON: Alpha = Alpha(1.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_shannon_limit(self) -> bool {
        (self.0 - 1.0).abs() < LIMIT_SWITCH
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `x^α` with the continuous extension `0^α = 0`.
#[inline]
pub(crate) fn pow_alpha(x: f64, a: Alpha) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(a.0)
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            domain: "[0, 1]",
        })
    }
}

/// α-logarithm `ln_α(x) = (x^{1−α} − 1)/(1 − α)`, `ln x` at the Shannon limit.
pub fn q_log(x: f64, a: Alpha) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "(0, inf)",
        });
    }
    Ok(q_log_unchecked(x, a))
}

#[inline]
pub(crate) fn q_log_unchecked(x: f64, a: Alpha) -> f64 {
    if a.is_shannon_limit() {
        x.ln()
    } else {
        let s = 1.0 - a.0;
        // exp_m1 keeps precision when x^{1-α} is close to 1
        (s * x.ln()).exp_m1() / s
    }
}

/// α-entropy function `η_α(x) = (x^α − x)/(1 − α)`; `−x ln x` at the limit.
pub fn eta(x: f64, a: Alpha) -> Result<f64> {
    check_unit("x", x)?;
    Ok(eta_unchecked(x, a))
}

/// `η_α` for callers that already guarantee `x ∈ [0, 1]`. Values slightly
/// outside are clamped.
#[inline]
pub(crate) fn eta_unchecked(x: f64, a: Alpha) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    if a.is_shannon_limit() {
        -x * x.ln()
    } else {
        // x (x^{α−1} − 1)/(1 − α): no 0·∞ when x^α underflows
        let s = a.0 - 1.0;
        -x * (s * x.ln()).exp_m1() / s
    }
}

/// Maximizer `x₀(α) = α^{1/(1−α)}` of `η_α` on `[0, 1]`; `1/e` at the limit.
pub fn eta_argmax(a: Alpha) -> f64 {
    if a.is_shannon_limit() {
        std::f64::consts::E.recip()
    } else {
        (a.0.ln() / (1.0 - a.0)).exp()
    }
}

/// `max_{x∈[0,1]} η_α(x)`.
pub fn eta_max(a: Alpha) -> f64 {
    eta_unchecked(eta_argmax(a), a)
}

/// Binary Tsallis entropy `H_α(δ, 1−δ) = η_α(δ) + η_α(1−δ)`.
pub fn binary_entropy(d: f64, a: Alpha) -> Result<f64> {
    check_unit("d", d)?;
    Ok(binary_entropy_unchecked(d, a))
}

#[inline]
pub(crate) fn binary_entropy_unchecked(d: f64, a: Alpha) -> f64 {
    eta_unchecked(d, a) + eta_unchecked(1.0 - d, a)
}

/// Coupling bound `g(δ, n) = δ^α ln_α(n) + H_α(δ, 1−δ)`.
///
/// For α > 1 it is strictly increasing in δ on `(0, n/(n+1))`.
pub fn g_bound(d: f64, n: usize, a: Alpha) -> Result<f64> {
    check_unit("d", d)?;
    if n < 1 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            domain: "n >= 1",
        });
    }
    Ok(g_bound_unchecked(d, n, a))
}

#[inline]
pub(crate) fn g_bound_unchecked(d: f64, n: usize, a: Alpha) -> f64 {
    pow_alpha(d, a) * q_log_unchecked(n as f64, a) + binary_entropy_unchecked(d, a)
}
