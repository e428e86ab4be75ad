//! Closed-form evaluators for the convergence-rate bounds and the
//! auxiliary sequence lemmas backing them.
//!
//! All bounds target the interpolated ratio
//! `||f_m|| / (||f||^(1-alpha) ||f||_{A_1}^alpha)` and are evaluated in
//! plain double precision, with `m = 0` mapping to 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ALPHA_SLACK: f64 = 1e-12;

fn check_alpha(alpha: f64, threshold: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ParamRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    if alpha > threshold + ALPHA_SLACK {
        return Err(Error::AlphaAboveThreshold { alpha, threshold });
    }
    Ok(())
}

/// Residual bound for a weak greedy run with a nonincreasing weakness
/// sequence `tau` and shrinkage `b`:
///
/// `e_m(tau, b) = (1 + b(2-b) sum_{k<=m} t_k^2)^(-(2-b)t_m / (2(2+(2-b)t_m)))`.
pub fn e_m_tau_b(tau: &[f64], b: f64, m: usize) -> Result<f64> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::ParamRange {
            name: "b",
            value: b,
            range: "(0, 1]",
        });
    }
    if m == 0 {
        return Ok(1.0);
    }
    if tau.len() < m {
        return Err(Error::InvalidInput(format!(
            "weakness sequence has {} entries, need {m}",
            tau.len()
        )));
    }
    for (k, &t) in tau[..m].iter().enumerate() {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::ParamRange {
                name: "tau[k]",
                value: t,
                range: "(0, 1]",
            });
        }
        if k > 0 && t > tau[k - 1] + 1e-15 {
            return Err(Error::InvalidInput(
                "weakness sequence must be nonincreasing".into(),
            ));
        }
    }
    let sum_sq: f64 = tau[..m].iter().map(|t| t * t).sum();
    let t_m = tau[m - 1];
    let base = 1.0 + b * (2.0 - b) * sum_sq;
    let exponent = -(2.0 - b) * t_m / (2.0 * (2.0 + (2.0 - b) * t_m));
    Ok(base.powf(exponent))
}

/// Largest interpolation exponent covered by the weak greedy bound:
/// `alpha_0 = (2-b)t / ((2-b)t + 2)`. Equals `1/3` at `t = b = 1`.
pub fn alpha0_hilbert(t: f64, b: f64) -> f64 {
    let s = (2.0 - b) * t;
    s / (s + 2.0)
}

/// Interpolated-ratio bound for WGA(t, b): `(1 + m b(2-b) t^2)^(-alpha/2)`
/// for `alpha <= alpha0_hilbert(t, b)`.
///
/// The base carries `t^2`, which is what the residual recursion actually
/// delivers; see [`wga_alpha_bound_linear_t`] for the variant with a
/// single `t` factor (the two coincide at `t = 1`).
pub fn wga_alpha_bound(m: usize, t: f64, b: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha, alpha0_hilbert(t, b))?;
    Ok((1.0 + m as f64 * b * (2.0 - b) * t * t).powf(-alpha / 2.0))
}

/// Comparison variant of [`wga_alpha_bound`] whose base grows like
/// `1 + m b(2-b) t` — stronger for `t < 1`, not backed by the residual
/// recursion. Kept behind its own name so nothing asserts it.
pub fn wga_alpha_bound_linear_t(m: usize, t: f64, b: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha, alpha0_hilbert(t, b))?;
    Ok((1.0 + m as f64 * b * (2.0 - b) * t).powf(-alpha / 2.0))
}

/// Interpolated-ratio bound for the orthogonal greedy algorithm:
/// `m^(-alpha/2)` for any `alpha <= 1`.
pub fn oga_alpha_bound(m: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha, 1.0)?;
    if m == 0 {
        return Ok(1.0);
    }
    Ok((m as f64).powf(-alpha / 2.0))
}

/// Largest interpolation exponent covered by the dual greedy bound:
/// `alpha_0 = t(1-b) / (1 + t(1-b))`. Strictly below the Hilbert
/// threshold for every `t` in `(0, 1]`, `b` in `(0, 1)`.
pub fn alpha0_banach(t: f64, b: f64) -> f64 {
    let s = t * (1.0 - b);
    s / (1.0 + s)
}

/// Rate constant of the dual greedy bound:
/// `c = (1-b) (b / (2 gamma))^(1/(q-1))`.
pub fn dga_rate_constant(b: f64, q: f64, gamma: f64) -> f64 {
    (1.0 - b) * (b / (2.0 * gamma)).powf(1.0 / (q - 1.0))
}

/// Interpolated-ratio bound for DGA(t, b, gamma u^q):
/// `(1 + m c t^p)^(-alpha/p)` with `p = q/(q-1)`, for
/// `alpha <= alpha0_banach(t, b)` and majorant power `q` in `(1, 2]`.
pub fn dga_alpha_bound(m: usize, t: f64, b: f64, q: f64, gamma: f64, alpha: f64) -> Result<f64> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::ParamRange {
            name: "q",
            value: q,
            range: "(1, 2]",
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::ParamRange {
            name: "gamma",
            value: gamma,
            range: "(0, inf)",
        });
    }
    check_alpha(alpha, alpha0_banach(t, b))?;
    let p = q / (q - 1.0);
    let c = dga_rate_constant(b, q, gamma);
    Ok((1.0 + m as f64 * c * t.powf(p)).powf(-alpha / p))
}

/// Decay envelope of the damped recursion: a nonnegative sequence with
/// `x_0 <= C_1` and `x_{m+1} <= x_m (1 - x_m C_2)` obeys
/// `x_m <= (C_1^{-1} + C_2 m)^{-1}`.
pub fn hl1_bound(c1: f64, c2: f64, m: usize) -> Result<f64> {
    if !(c1 > 0.0) {
        return Err(Error::ParamRange {
            name: "C1",
            value: c1,
            range: "(0, inf)",
        });
    }
    if !(c2 > 0.0) {
        return Err(Error::ParamRange {
            name: "C2",
            value: c2,
            range: "(0, inf)",
        });
    }
    Ok(1.0 / (1.0 / c1 + c2 * m as f64))
}

/// Exponent transfer: a bound `C phi(m)^(-beta/2)` on the ratio at
/// exponent `beta` yields `C^(alpha/beta) phi(m)^(-alpha/2)` at any
/// smaller exponent `alpha` (the algorithms never increase the residual
/// norm, so interpolation applies).
pub fn hl2_transfer(c: f64, beta: f64, alpha: f64, phi_m: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::ParamRange {
            name: "beta",
            value: beta,
            range: "(0, 1]",
        });
    }
    if !(alpha > 0.0 && alpha <= beta) {
        return Err(Error::ParamRange {
            name: "alpha",
            value: alpha,
            range: "(0, beta]",
        });
    }
    if !(phi_m > 0.0) {
        return Err(Error::ParamRange {
            name: "phi_m",
            value: phi_m,
            range: "(0, inf)",
        });
    }
    if !(c > 0.0) {
        return Err(Error::ParamRange {
            name: "C",
            value: c,
            range: "(0, inf)",
        });
    }
    Ok(c.powf(alpha / beta) * phi_m.powf(-alpha / 2.0))
}

/// Verify a sequence against the damped-recursion hypothesis and, when it
/// holds, against the [`hl1_bound`] conclusion. Returns false as soon as
/// the hypothesis fails (the conclusion is then not asserted).
pub fn check_hl1_recursion(xs: &[f64], c1: f64, c2: f64) -> bool {
    const SLACK: f64 = 1e-12;
    if xs.is_empty() || c1 <= 0.0 || c2 <= 0.0 {
        return xs.is_empty();
    }
    if xs.iter().any(|&x| !(x >= 0.0)) {
        return false;
    }
    if xs[0] > c1 + SLACK {
        return false;
    }
    for w in xs.windows(2) {
        if w[1] > w[0] * (1.0 - w[0] * c2) + SLACK {
            return false;
        }
    }
    xs.iter().enumerate().all(|(m, &x)| {
        hl1_bound(c1, c2, m).map(|bound| x <= bound + SLACK).unwrap_or(false)
    })
}

/// Concavity inequality `(1-x)(1 + x/a)^a <= 1` for `x < 1`, `a > 0`.
///
/// The real power needs `1 + x/a > 0`, i.e. `x > -a`; outside that the
/// left side is not a real number and the call is rejected.
pub fn check_concavity_inequality(x: f64, a: f64) -> Result<bool> {
    if !(x < 1.0) {
        return Err(Error::ParamRange {
            name: "x",
            value: x,
            range: "(-a, 1)",
        });
    }
    if !(a > 0.0) {
        return Err(Error::ParamRange {
            name: "a",
            value: a,
            range: "(0, inf)",
        });
    }
    if !(1.0 + x / a > 0.0) {
        return Err(Error::ParamRange {
            name: "x",
            value: x,
            range: "(-a, 1)",
        });
    }
    Ok((1.0 - x) * (1.0 + x / a).powf(a) <= 1.0 + 1e-12)
}

/// A theoretical curve, serialized with experiment reports so every
/// asserted inequality names its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum BoundSpec {
    WgaTauB { tau: Vec<f64>, b: f64 },
    WgaAlpha { t: f64, b: f64, alpha: f64 },
    DgaAlpha { t: f64, b: f64, q: f64, gamma: f64, alpha: f64 },
    OgaAlpha { alpha: f64 },
    Hl1 { c1: f64, c2: f64 },
    /// Best m-term lower envelope `(1/2) m^(-alpha/p)` in `l_q`.
    SigmaLower { q: f64, alpha: f64 },
}

impl BoundSpec {
    pub fn evaluate(&self, m: usize) -> Result<f64> {
        match self {
            BoundSpec::WgaTauB { tau, b } => e_m_tau_b(tau, *b, m),
            BoundSpec::WgaAlpha { t, b, alpha } => wga_alpha_bound(m, *t, *b, *alpha),
            BoundSpec::DgaAlpha { t, b, q, gamma, alpha } => {
                dga_alpha_bound(m, *t, *b, *q, *gamma, *alpha)
            }
            BoundSpec::OgaAlpha { alpha } => oga_alpha_bound(m, *alpha),
            BoundSpec::Hl1 { c1, c2 } => hl1_bound(*c1, *c2, m),
            BoundSpec::SigmaLower { q, alpha } => {
                if m == 0 {
                    return Ok(1.0);
                }
                let p = q / (q - 1.0);
                Ok(0.5 * (m as f64).powf(-alpha / p))
            }
        }
    }
}
