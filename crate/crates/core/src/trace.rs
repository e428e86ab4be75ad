//! Full per-step records of greedy runs, with CSV/JSON serialization.

use serde::{Deserialize, Serialize};

use crate::banach::DgaVariant;
use crate::dictionary::{Dictionary, Selection, SelectionMode};
use crate::error::Result;
use crate::report::float_repr;
use crate::space::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Pga,
    Oga,
    Wga,
    Dga,
    DgaStar,
}

impl Algorithm {
    pub fn is_dual(self) -> bool {
        matches!(self, Algorithm::Dga | Algorithm::DgaStar)
    }
}

/// One greedy step: the selection made, the recorded coefficient
/// (`y_m = <f_{m-1}, phi_m>` for Hilbert algorithms, the subtracted `c_m`
/// for dual algorithms), the residual norm after the step, and the
/// coefficient-budget envelope `B_m` when the input's `A_1` norm is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub step: usize,
    pub selection: Selection,
    pub y_or_c: f64,
    pub residual_norm: f64,
    pub envelope: Option<f64>,
    pub r_d: Option<f64>,
}

/// One term of the final expansion `f ~ residual + sum coeff * phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub atom_index: usize,
    pub orientation: i8,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    pub t: f64,
    pub b: f64,
    pub mode: SelectionMode,
    pub variant: Option<DgaVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub algorithm: Algorithm,
    pub input: Element,
    pub params: TraceParams,
    /// Exact `A_1` norm of the input when the caller (or a standard-basis
    /// dictionary) supplies it; envelope records are skipped otherwise.
    pub a1_input: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub final_residual: Element,
    pub expansion: Vec<ExpansionTerm>,
    /// Set when an orthogonal run hit a re-selected atom or a Gram pivot
    /// below threshold and terminated early.
    pub degenerate: bool,
}

impl GreedyTrace {
    /// Residual norms including the input: `[||f||, ||f_1||, ..., ||f_m||]`.
    pub fn residual_norms(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.records.len() + 1);
        out.push(self.input.norm());
        out.extend(self.records.iter().map(|r| r.residual_norm));
        out
    }

    /// Relative defect of the expansion identity
    /// `f = final_residual + sum coeff * phi`.
    pub fn expansion_defect(&self, dictionary: &Dictionary) -> Result<f64> {
        let mut recon = self.final_residual.clone();
        for term in &self.expansion {
            let atom = dictionary.atom(term.atom_index)?;
            recon.axpy(f64::from(term.orientation) * term.coefficient, &atom);
        }
        let diff: f64 = recon
            .coeffs()
            .iter()
            .zip(self.input.coeffs())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = self.input.norm().max(f64::MIN_POSITIVE);
        Ok(diff / scale)
    }

    /// CSV rows, one per record. Dual-algorithm traces carry the extra
    /// `r_D` column.
    pub fn to_csv(&self) -> String {
        let dual = self.algorithm.is_dual();
        let mut out = String::from("m,atom_index,orientation,y_or_c,residual_norm,B_m");
        if dual {
            out.push_str(",r_D");
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}",
                r.step,
                r.selection.atom_index,
                r.selection.orientation,
                float_repr(r.y_or_c),
                float_repr(r.residual_norm),
                r.envelope.map(float_repr).unwrap_or_default(),
            ));
            if dual {
                out.push(',');
                out.push_str(&r.r_d.map(float_repr).unwrap_or_default());
            }
            out.push('\n');
        }
        out
    }

    /// Full trace object as JSON (keys sorted by the serializer).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serialization cannot fail")
    }
}
