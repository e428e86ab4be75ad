//! Greedy expansion engines in Hilbert space.
//!
//! `run_wga` implements the weak greedy algorithm with shrinkage `b`:
//! each step selects `phi_m` with `<f_{m-1}, phi_m> >= t * sup_g <f_{m-1}, g>`
//! and updates `f_m = f_{m-1} - b <f_{m-1}, phi_m> phi_m`. The pure greedy
//! algorithm is the `t = 1`, `b = 1` case. `run_oga` re-projects onto the
//! span of all selected atoms each step (orthogonal matching pursuit).

use crate::dictionary::{Dictionary, DictionaryKind, Selection, SelectionMode, WeakSelector};
use crate::error::{Error, Result};
use crate::space::Element;
use crate::trace::{Algorithm, ExpansionTerm, GreedyTrace, IterationRecord, TraceParams};

/// Below this fraction of the input norm a residual counts as exhausted
/// and remaining steps emit zero records.
const EXHAUSTION_REL: f64 = 1e-15;

/// Gram pivots below this threshold terminate an orthogonal run as
/// degenerate rather than silently regularizing.
const GRAM_PIVOT_EPS: f64 = 1e-12;

pub(crate) fn zero_padding_record(
    step: usize,
    residual_norm: f64,
    envelope: Option<f64>,
) -> IterationRecord {
    IterationRecord {
        step,
        selection: Selection {
            atom_index: 0,
            orientation: 1,
            value: 0.0,
            sup_value: 0.0,
        },
        y_or_c: 0.0,
        residual_norm,
        envelope,
        r_d: None,
    }
}

fn check_hilbert_setup(f: &Element, dictionary: &Dictionary) -> Result<()> {
    if !f.space().is_hilbert() || !dictionary.space().is_hilbert() {
        return Err(Error::SpaceMismatch("greedy engine requires Hilbert space"));
    }
    if f.dim() != dictionary.dim() {
        return Err(Error::DimensionMismatch(f.dim(), dictionary.dim()));
    }
    Ok(())
}

fn resolve_a1(f: &Element, dictionary: &Dictionary, a1: Option<f64>) -> Option<f64> {
    a1.or_else(|| match dictionary.kind() {
        DictionaryKind::StandardBasis => Some(f.l1_norm()),
        DictionaryKind::FiniteAtoms => None,
    })
}

/// Weak greedy algorithm with weakness `t` and shrinkage `b`.
///
/// Pass `a1` when the exact `A_1` norm of `f` is known; standard-basis
/// dictionaries fill it in automatically (there `A_1 = l_1`). Without it
/// the `B_m` envelope is left out of the records rather than guessed.
pub fn run_wga(
    f: &Element,
    dictionary: &Dictionary,
    steps: usize,
    t: f64,
    b: f64,
    mode: SelectionMode,
    a1: Option<f64>,
) -> Result<GreedyTrace> {
    check_hilbert_setup(f, dictionary)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::ParamRange {
            name: "b",
            value: b,
            range: "(0, 1]",
        });
    }
    let mut selector = WeakSelector::new(t, mode)?;
    let a1 = resolve_a1(f, dictionary, a1);

    let input_norm = f.norm();
    let exhaustion_sq = (EXHAUSTION_REL * input_norm).powi(2);
    let mut residual = f.clone();
    let mut norm_sq: f64 = residual.coeffs().iter().map(|c| c * c).sum();
    let mut envelope = a1;
    let mut records = Vec::with_capacity(steps);
    let mut expansion = Vec::with_capacity(steps);

    for step in 1..=steps {
        if norm_sq <= exhaustion_sq {
            records.push(zero_padding_record(step, norm_sq.sqrt(), envelope));
            continue;
        }
        let scores = dictionary.hilbert_scores(&residual)?;
        let sel = selector.select(&scores)?;
        let y = sel.value;
        dictionary.subtract_scaled_atom(&mut residual, sel.atom_index, sel.orientation, b * y);
        norm_sq = residual.coeffs().iter().map(|c| c * c).sum();
        envelope = envelope.map(|e| e + b * y);
        records.push(IterationRecord {
            step,
            selection: sel,
            y_or_c: y,
            residual_norm: norm_sq.sqrt(),
            envelope,
            r_d: None,
        });
        expansion.push(ExpansionTerm {
            atom_index: sel.atom_index,
            orientation: sel.orientation,
            coefficient: b * y,
        });
    }

    Ok(GreedyTrace {
        algorithm: if t == 1.0 && b == 1.0 && mode == SelectionMode::Exact {
            Algorithm::Pga
        } else {
            Algorithm::Wga
        },
        input: f.clone(),
        params: TraceParams {
            t,
            b,
            mode,
            variant: None,
        },
        a1_input: a1,
        records,
        final_residual: residual,
        expansion,
        degenerate: false,
    })
}

/// Pure greedy algorithm: exact selection, full step.
pub fn run_pga(f: &Element, dictionary: &Dictionary, steps: usize) -> Result<GreedyTrace> {
    run_wga(f, dictionary, steps, 1.0, 1.0, SelectionMode::Exact, None)
}

/// Dense linear solve with partial pivoting on an augmented matrix
/// (`k` rows of `k + 1` entries). Returns `None` when some pivot falls
/// below `pivot_eps`.
pub(crate) fn solve_dense(aug: &mut [Vec<f64>], pivot_eps: f64) -> Option<Vec<f64>> {
    let k = aug.len();
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&a, &b| aug[a][col].abs().total_cmp(&aug[b][col].abs()))
            .unwrap();
        if aug[pivot_row][col].abs() < pivot_eps {
            return None;
        }
        aug.swap(col, pivot_row);
        let pivot = aug[col][col];
        for row in 0..k {
            if row != col {
                let factor = aug[row][col] / pivot;
                if factor != 0.0 {
                    for j in col..=k {
                        let v = aug[col][j];
                        aug[row][j] -= factor * v;
                    }
                }
            }
        }
    }
    Some((0..k).map(|i| aug[i][k] / aug[i][i]).collect())
}

/// Orthogonal greedy algorithm: exact selection against the residual,
/// then the residual is recomputed as `f` minus its orthogonal projection
/// onto the span of all selected atoms (one dense Gram solve per step).
///
/// Re-selecting an active atom — possible only through floating-point
/// noise — or a Gram pivot under threshold records a degenerate step and
/// terminates the run.
pub fn run_oga(f: &Element, dictionary: &Dictionary, steps: usize) -> Result<GreedyTrace> {
    check_hilbert_setup(f, dictionary)?;
    let mut selector = WeakSelector::new(1.0, SelectionMode::Exact)?;

    let input_norm = f.norm();
    let exhaustion_sq = (EXHAUSTION_REL * input_norm).powi(2);
    let mut residual = f.clone();
    let mut norm_sq: f64 = residual.coeffs().iter().map(|c| c * c).sum();
    let mut records = Vec::with_capacity(steps);
    let mut active: Vec<Selection> = Vec::new();
    let mut oriented_atoms: Vec<Element> = Vec::new();
    let mut coefficients: Vec<f64> = Vec::new();
    let mut degenerate = false;

    for step in 1..=steps {
        if norm_sq <= exhaustion_sq {
            records.push(zero_padding_record(step, norm_sq.sqrt(), None));
            continue;
        }
        let scores = dictionary.hilbert_scores(&residual)?;
        let sel = selector.select(&scores)?;
        if active.iter().any(|s| s.atom_index == sel.atom_index) {
            records.push(IterationRecord {
                step,
                selection: sel,
                y_or_c: 0.0,
                residual_norm: norm_sq.sqrt(),
                envelope: None,
                r_d: None,
            });
            degenerate = true;
            break;
        }
        let atom = dictionary.atom(sel.atom_index)?;
        let oriented = atom.scaled(f64::from(sel.orientation));
        active.push(sel);
        oriented_atoms.push(oriented);

        // Gram system over the active oriented atoms.
        let k = oriented_atoms.len();
        let mut aug = vec![vec![0.0f64; k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                aug[i][j] = oriented_atoms[i]
                    .coeffs()
                    .iter()
                    .zip(oriented_atoms[j].coeffs())
                    .map(|(a, b)| a * b)
                    .sum();
            }
            aug[i][k] = oriented_atoms[i]
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .map(|(a, b)| a * b)
                .sum();
        }
        match solve_dense(&mut aug, GRAM_PIVOT_EPS) {
            Some(solution) => coefficients = solution,
            None => {
                records.push(IterationRecord {
                    step,
                    selection: sel,
                    y_or_c: 0.0,
                    residual_norm: norm_sq.sqrt(),
                    envelope: None,
                    r_d: None,
                });
                degenerate = true;
                active.pop();
                oriented_atoms.pop();
                break;
            }
        }
        residual = f.clone();
        for (c, g) in coefficients.iter().zip(&oriented_atoms) {
            residual.axpy(-c, g);
        }
        norm_sq = residual.coeffs().iter().map(|c| c * c).sum();
        records.push(IterationRecord {
            step,
            selection: sel,
            y_or_c: sel.value,
            residual_norm: norm_sq.sqrt(),
            envelope: None,
            r_d: None,
        });
    }

    let expansion = active
        .iter()
        .zip(&coefficients)
        .map(|(sel, &c)| ExpansionTerm {
            atom_index: sel.atom_index,
            orientation: sel.orientation,
            coefficient: c,
        })
        .collect();

    Ok(GreedyTrace {
        algorithm: Algorithm::Oga,
        input: f.clone(),
        params: TraceParams {
            t: 1.0,
            b: 1.0,
            mode: SelectionMode::Exact,
            variant: None,
        },
        a1_input: None,
        records,
        final_residual: residual,
        expansion,
        degenerate,
    })
}

/// Maximum relative defect of the exact energy identity
/// `||f_m||^2 = ||f_{m-1}||^2 - b(2-b) y_m^2` over a WGA/PGA trace.
pub fn energy_identity_check(trace: &GreedyTrace) -> Result<f64> {
    if !matches!(trace.algorithm, Algorithm::Wga | Algorithm::Pga) {
        return Err(Error::InvalidTrace(
            "energy identity applies to WGA/PGA traces only",
        ));
    }
    let b = trace.params.b;
    let shrink = b * (2.0 - b);
    let mut prev_sq = trace.input.norm().powi(2);
    let mut worst = 0.0f64;
    for record in &trace.records {
        let cur_sq = record.residual_norm.powi(2);
        let predicted = prev_sq - shrink * record.y_or_c.powi(2);
        let defect = (cur_sq - predicted).abs() / prev_sq.max(f64::MIN_POSITIVE);
        worst = worst.max(defect);
        prev_sq = cur_sq;
    }
    Ok(worst)
}
