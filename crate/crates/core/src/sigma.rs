//! Exact best m-term approximation `sigma_m(f, D) = inf ||f - h||` over
//! m-term combinations `h` of dictionary atoms.
//!
//! Over the symmetrized standard basis in `l_q` the infimum is the tail
//! norm after keeping the `m` largest coefficients; over small Hilbert
//! dictionaries it is found exactly by enumerating atom subsets. These
//! serve as ground truth for the sharpness experiments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::hilbert::solve_dense;
use crate::quad::lq_norm_periodic;
use crate::space::{Element, SpaceKind};

/// Subset budget for the brute-force oracle.
const BRUTE_FORCE_BUDGET: u64 = 200_000;
const GRAM_PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaMethod {
    SortedTail,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaResult {
    pub m: usize,
    pub value: f64,
    pub support: Vec<usize>,
    pub method: SigmaMethod,
    /// Subsets dropped because their Gram system was numerically singular
    /// (brute force only).
    pub degenerate_subsets: usize,
}

/// Best m-term error over the symmetrized standard basis: sort the
/// coefficients by magnitude and take the `l_q` norm of the tail.
/// Ties keep the lowest index.
pub fn sigma_m_basis(f: &Element, m: usize) -> Result<SigmaResult> {
    let q = f.space().q();
    let mut order: Vec<usize> = (0..f.dim()).collect();
    order.sort_by(|&i, &j| {
        f.coeffs()[j]
            .abs()
            .total_cmp(&f.coeffs()[i].abs())
            .then(i.cmp(&j))
    });
    let kept = m.min(f.dim());
    let mut support = order[..kept].to_vec();
    support.sort_unstable();
    let tail = &order[kept..];
    let value = if q == 2.0 {
        tail.iter()
            .map(|&i| f.coeffs()[i] * f.coeffs()[i])
            .sum::<f64>()
            .sqrt()
    } else {
        tail.iter()
            .map(|&i| f.coeffs()[i].abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    Ok(SigmaResult {
        m,
        value,
        support,
        method: SigmaMethod::SortedTail,
        degenerate_subsets: 0,
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
        if acc > BRUTE_FORCE_BUDGET * 1000 {
            return u64::MAX;
        }
    }
    acc
}

fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 {
        visit(&[]);
        return;
    }
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance to the next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact `sigma_m` over a small Hilbert dictionary: minimize
/// `||f - P_S f||` over all m-subsets `S` of atoms, with the orthogonal
/// projection from a dense Gram solve per subset.
pub fn sigma_m_hilbert_bruteforce(
    f: &Element,
    dictionary: &Dictionary,
    m: usize,
) -> Result<SigmaResult> {
    if !f.space().is_hilbert() || !dictionary.space().is_hilbert() {
        return Err(Error::SpaceMismatch("brute-force sigma requires Hilbert space"));
    }
    if f.dim() != dictionary.dim() {
        return Err(Error::DimensionMismatch(f.dim(), dictionary.dim()));
    }
    let n = dictionary.num_atoms();
    let k = m.min(n);
    if k == 0 {
        return Ok(SigmaResult {
            m,
            value: f.norm(),
            support: Vec::new(),
            method: SigmaMethod::BruteForce,
            degenerate_subsets: 0,
        });
    }
    if binomial(n, k) > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "C({n}, {k}) subsets exceed the {BRUTE_FORCE_BUDGET} budget"
        )));
    }

    let atoms: Vec<Element> = (0..n).map(|i| dictionary.atom(i)).collect::<Result<_>>()?;
    let mut best_value = f64::INFINITY;
    let mut best_support: Vec<usize> = Vec::new();
    let mut degenerate = 0usize;

    for_each_combination(n, k, |subset| {
        let mut aug = vec![vec![0.0f64; k + 1]; k];
        for (r, &i) in subset.iter().enumerate() {
            for (c, &j) in subset.iter().enumerate() {
                aug[r][c] = atoms[i]
                    .coeffs()
                    .iter()
                    .zip(atoms[j].coeffs())
                    .map(|(a, b)| a * b)
                    .sum();
            }
            aug[r][k] = atoms[i]
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .map(|(a, b)| a * b)
                .sum();
        }
        let Some(coeffs) = solve_dense(&mut aug, GRAM_PIVOT_EPS) else {
            degenerate += 1;
            return;
        };
        let mut residual = f.clone();
        for (&i, &c) in subset.iter().zip(&coeffs) {
            residual.axpy(-c, &atoms[i]);
        }
        let value = residual.norm();
        if value < best_value {
            best_value = value;
            best_support = subset.to_vec();
        }
    });

    if !best_value.is_finite() {
        return Err(Error::DegenerateGram(
            "every atom subset was numerically singular".into(),
        ));
    }
    Ok(SigmaResult {
        m,
        value: best_value,
        support: best_support,
        method: SigmaMethod::BruteForce,
        degenerate_subsets: degenerate,
    })
}

/// Tail bound for monotone coefficients in `l_q`, `q > 2`: for
/// `alpha = beta (1 - 1/q) + 1/q`, `beta` in `[0, 1]`,
///
/// `sigma_m(f) <= m^(-alpha/p) ||f||_q^(1-alpha) ||f||_1^alpha`,
/// `p = q/(q-1)`.
///
/// Returns the bound after verifying it against the exact tail.
pub fn monotone_coefficient_bound(f: &Element, m: usize, alpha: f64) -> Result<f64> {
    let q = f.space().q();
    if f.space().kind() != SpaceKind::LqSequence || q <= 2.0 {
        return Err(Error::SpaceMismatch(
            "monotone tail bound applies in l_q with q > 2",
        ));
    }
    if m == 0 {
        return Err(Error::ParamRange {
            name: "m",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let coeffs = f.coeffs();
    if coeffs.iter().any(|&c| c < 0.0) || coeffs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput(
            "coefficients must be nonincreasing and nonnegative".into(),
        ));
    }
    if !(1.0 / q - 1e-12..=1.0 + 1e-12).contains(&alpha) {
        return Err(Error::ParamRange {
            name: "alpha",
            value: alpha,
            range: "[1/q, 1]",
        });
    }
    let p = q / (q - 1.0);
    let bound = (m as f64).powf(-alpha / p) * f.norm().powf(1.0 - alpha) * f.l1_norm().powf(alpha);
    let sigma = sigma_m_basis(f, m)?.value;
    if sigma > bound + 1e-9 {
        return Err(Error::InvalidInput(format!(
            "tail {sigma} exceeds the monotone bound {bound}"
        )));
    }
    Ok(bound)
}

/// Report of the lacunary-cosine demonstration
/// `f(x) = sum_{k=1}^{2m} cos(2^k x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigDemoReport {
    pub m: usize,
    pub q: f64,
    pub quad_points: usize,
    /// Unnormalized `L_q(0, 2 pi)` norm by quadrature.
    pub lq_norm: f64,
    /// Unnormalized `L_2` norm by quadrature; equals `sqrt(2 m pi)`.
    pub l2_norm: f64,
    pub l2_norm_exact: f64,
    /// `sigma_m` lower bound in `L_2`: dropping the `m` smallest of `2m`
    /// equal-energy orthogonal terms leaves `sqrt(m pi)`.
    pub sigma_l2_lower: f64,
    /// Coefficient budget over the trigonometric system: `2m`.
    pub a1_norm: f64,
    /// `(alpha, sigma_lower / (lq_norm^(1-alpha) a1^alpha))` samples.
    pub ratios: Vec<(f64, f64)>,
}

/// Compute the lacunary-cosine example at desk scale (`m <= 6`). The grid
/// must resolve the top frequency: `quad_points >= 2^(2m+3)`.
pub fn trig_lacunary_demo(m: usize, q: f64, quad_points: usize) -> Result<TrigDemoReport> {
    if !(q > 2.0) || !q.is_finite() {
        return Err(Error::ParamRange {
            name: "q",
            value: q,
            range: "(2, inf)",
        });
    }
    if m == 0 || m > 6 {
        return Err(Error::ParamRange {
            name: "m",
            value: m as f64,
            range: "[1, 6]",
        });
    }
    let needed = 1usize << (2 * m + 3);
    if quad_points < needed {
        return Err(Error::QuadratureResolution {
            needed,
            got: quad_points,
        });
    }
    let f = |x: f64| -> f64 { (1..=2 * m).map(|k| ((1u64 << k) as f64 * x).cos()).sum() };
    let lq_norm = lq_norm_periodic(q, quad_points, f);
    let l2_norm = lq_norm_periodic(2.0, quad_points, f);
    let l2_norm_exact = (2.0 * m as f64 * PI).sqrt();
    let sigma_l2_lower = (m as f64 * PI).sqrt();
    let a1_norm = 2.0 * m as f64;
    let ratios = (0..=4)
        .map(|i| {
            let alpha = i as f64 * 0.25;
            let ratio = sigma_l2_lower / (lq_norm.powf(1.0 - alpha) * a1_norm.powf(alpha));
            (alpha, ratio)
        })
        .collect();
    Ok(TrigDemoReport {
        m,
        q,
        quad_points,
        lq_norm,
        l2_norm,
        l2_norm_exact,
        sigma_l2_lower,
        a1_norm,
        ratios,
    })
}
