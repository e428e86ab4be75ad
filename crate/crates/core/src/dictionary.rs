//! Symmetric dictionaries of unit atoms.
//!
//! A dictionary stores canonical atom representatives; the mirrored atom
//! `-g` is implied everywhere, so selections carry an orientation sign.
//! Besides exact and `t`-weak selection this module evaluates the best
//! dual correlation `r_D(f) = sup_{g in D} F_f(g)` and the `A_1(D)` norm
//! (the minimal total coefficient budget of an atomic representation).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::simplex::solve_min_cost_equality;
use crate::space::{inner, norming_functional, DualFunctional, Element, SpaceSpec};

const UNIT_TOL: f64 = 1e-9;
const DISTINCT_TOL: f64 = 1e-12;

/// Budget for the exact `l_1` solve: beyond this the LP tableau is no
/// longer "small scale".
const A1_MAX_ATOMS: usize = 24;
const A1_MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DictionaryKind {
    /// Symmetrized standard coordinate basis; atoms never materialized.
    StandardBasis,
    /// Explicit finite list of canonical atoms.
    FiniteAtoms,
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    kind: DictionaryKind,
    space: SpaceSpec,
    dim: usize,
    atoms: Vec<Element>,
}

impl Dictionary {
    pub fn standard_basis(dim: usize, space: SpaceSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDictionary);
        }
        Ok(Dictionary {
            kind: DictionaryKind::StandardBasis,
            space,
            dim,
            atoms: Vec::new(),
        })
    }

    /// Build from explicit canonical atoms. Every atom must be unit norm;
    /// no atom may repeat another or its negation.
    pub fn from_atoms(atoms: Vec<Element>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        let space = *atoms[0].space();
        let dim = atoms[0].dim();
        for (i, g) in atoms.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(g.dim(), dim));
            }
            if !g.space().compatible(&space) {
                return Err(Error::SpaceMismatch("atoms live in different spaces"));
            }
            if (g.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidAtom(format!(
                    "atom {i} has norm {}, expected 1",
                    g.norm()
                )));
            }
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                let mut same = true;
                let mut negated = true;
                for (a, b) in atoms[i].coeffs().iter().zip(atoms[j].coeffs()) {
                    if (a - b).abs() > DISTINCT_TOL {
                        same = false;
                    }
                    if (a + b).abs() > DISTINCT_TOL {
                        negated = false;
                    }
                    if !same && !negated {
                        break;
                    }
                }
                if same || negated {
                    return Err(Error::InvalidAtom(format!(
                        "atoms {i} and {j} coincide up to sign"
                    )));
                }
            }
        }
        Ok(Dictionary {
            kind: DictionaryKind::FiniteAtoms,
            space,
            dim,
            atoms,
        })
    }

    pub fn kind(&self) -> DictionaryKind {
        self.kind
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_atoms(&self) -> usize {
        match self.kind {
            DictionaryKind::StandardBasis => self.dim,
            DictionaryKind::FiniteAtoms => self.atoms.len(),
        }
    }

    /// Canonical atom `index` (materialized for the standard basis).
    pub fn atom(&self, index: usize) -> Result<Element> {
        if index >= self.num_atoms() {
            return Err(Error::DimensionMismatch(index, self.num_atoms()));
        }
        match self.kind {
            DictionaryKind::StandardBasis => Element::unit(self.dim, index, self.space),
            DictionaryKind::FiniteAtoms => Ok(self.atoms[index].clone()),
        }
    }

    /// Hilbert selection scores: `<f, g_i>` per canonical atom.
    pub(crate) fn hilbert_scores(&self, f: &Element) -> Result<Vec<f64>> {
        match self.kind {
            DictionaryKind::StandardBasis => Ok(f.coeffs().to_vec()),
            DictionaryKind::FiniteAtoms => {
                self.atoms.iter().map(|g| inner(f, g)).collect()
            }
        }
    }

    /// Dual selection scores: `F(g_i)` per canonical atom.
    pub(crate) fn dual_scores(&self, functional: &DualFunctional) -> Result<Vec<f64>> {
        match self.kind {
            DictionaryKind::StandardBasis => Ok(functional.coeffs().to_vec()),
            DictionaryKind::FiniteAtoms => {
                self.atoms.iter().map(|g| functional.pair(g)).collect()
            }
        }
    }

    /// `f -= coeff * orientation * g_index` in place.
    pub(crate) fn subtract_scaled_atom(
        &self,
        f: &mut Element,
        index: usize,
        orientation: i8,
        coeff: f64,
    ) {
        let s = f64::from(orientation) * coeff;
        match self.kind {
            DictionaryKind::StandardBasis => f.coeffs_mut()[index] -= s,
            DictionaryKind::FiniteAtoms => f.axpy(-s, &self.atoms[index]),
        }
    }

    /// Best dual correlation `r_D(f) = max over oriented atoms of F_f(g)`.
    /// Lies in `[0, 1]`; for the standard basis in a Hilbert space it is
    /// `max_i |f_i| / ||f||`.
    pub fn r_d(&self, f: &Element) -> Result<f64> {
        let functional = norming_functional(f)?;
        let scores = self.dual_scores(&functional)?;
        Ok(scores.iter().fold(0.0f64, |acc, s| acc.max(s.abs())))
    }

    /// `A_1` norm over the symmetrized standard basis: plain `l_1`.
    pub fn a1_norm_basis(&self, f: &Element) -> Result<f64> {
        if self.kind != DictionaryKind::StandardBasis {
            return Err(Error::InvalidInput(
                "a1_norm_basis requires a standard-basis dictionary".into(),
            ));
        }
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(f.dim(), self.dim));
        }
        Ok(f.l1_norm())
    }

    /// Exact `A_1(D)` norm at small scale: the minimal `sum |c_i|` over
    /// representations `f = sum c_i g_i`, solved as an equality-constrained
    /// `l_1` LP with a dense exact-pivot method.
    pub fn a1_norm_small(&self, f: &Element) -> Result<f64> {
        if !self.space.is_hilbert() {
            return Err(Error::SpaceMismatch("a1_norm_small requires Hilbert space"));
        }
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(f.dim(), self.dim));
        }
        let n_atoms = self.num_atoms();
        if n_atoms > A1_MAX_ATOMS && self.dim > A1_MAX_DIM {
            return Err(Error::BudgetExceeded(format!(
                "a1_norm_small handles at most {A1_MAX_ATOMS} atoms or dimension {A1_MAX_DIM}, got {n_atoms} atoms in dimension {}",
                self.dim
            )));
        }
        // Split c = u - v with u, v >= 0; minimize the total mass.
        let mut a = vec![vec![0.0f64; 2 * n_atoms]; self.dim];
        for j in 0..n_atoms {
            let g = self.atom(j)?;
            for (i, &v) in g.coeffs().iter().enumerate() {
                a[i][j] = v;
                a[i][n_atoms + j] = -v;
            }
        }
        let c = vec![1.0f64; 2 * n_atoms];
        match solve_min_cost_equality(&a, f.coeffs(), &c)? {
            Some(sol) => {
                // guard the pivoting: the returned point must reproduce f
                let mut defect = 0.0f64;
                for (i, row) in a.iter().enumerate() {
                    let recon: f64 = row.iter().zip(&sol.x).map(|(aij, xj)| aij * xj).sum();
                    defect = defect.max((recon - f.coeffs()[i]).abs());
                }
                if defect > 1e-8 * f.norm().max(1.0) {
                    return Err(Error::DegenerateGram(format!(
                        "l1 solve reconstruction defect {defect}"
                    )));
                }
                Ok(sol.objective)
            }
            None => Err(Error::OutsideSpan),
        }
    }

    /// JSON form `{kind, dimension, atoms}` used by experiment configs.
    pub fn to_json(&self) -> serde_json::Value {
        let atoms: Vec<Vec<f64>> = match self.kind {
            DictionaryKind::StandardBasis => Vec::new(),
            DictionaryKind::FiniteAtoms => {
                self.atoms.iter().map(|g| g.coeffs().to_vec()).collect()
            }
        };
        json!({
            "kind": match self.kind {
                DictionaryKind::StandardBasis => "StandardBasis",
                DictionaryKind::FiniteAtoms => "FiniteAtoms",
            },
            "dimension": self.dim,
            "atoms": atoms,
        })
    }

    pub fn from_json(value: &serde_json::Value, space: SpaceSpec) -> Result<Self> {
        let kind = value
            .get("kind")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::InvalidInput("dictionary JSON missing kind".into()))?;
        let dim = value
            .get("dimension")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::InvalidInput("dictionary JSON missing dimension".into()))?
            as usize;
        match kind {
            "StandardBasis" => Dictionary::standard_basis(dim, space),
            "FiniteAtoms" => {
                let atoms: Vec<Vec<f64>> = value
                    .get("atoms")
                    .cloned()
                    .map(serde_json::from_value)
                    .transpose()
                    .map_err(|e| Error::InvalidInput(format!("bad atoms array: {e}")))?
                    .unwrap_or_default();
                let atoms = atoms
                    .into_iter()
                    .map(|coeffs| Element::new(coeffs, space))
                    .collect::<Result<Vec<_>>>()?;
                Dictionary::from_atoms(atoms)
            }
            other => Err(Error::InvalidInput(format!("unknown dictionary kind {other}"))),
        }
    }
}

/// How a weak selection resolves the freedom among `t`-qualifying atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionMode {
    /// The exact maximizer; ties go to the lowest canonical index and the
    /// `+1` orientation.
    Exact,
    /// The lowest-index oriented atom whose score clears `t * sup`.
    AdversarialMinIndex,
    /// Uniform choice among qualifying oriented atoms.
    Seeded(u64),
}

/// One selection step: chosen oriented atom, its score, and the exact
/// supremum it was measured against. Always `value >= t * sup_value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub atom_index: usize,
    pub orientation: i8,
    pub value: f64,
    pub sup_value: f64,
}

enum SelectorState {
    Exact,
    AdversarialMinIndex,
    Seeded(ChaCha8Rng),
}

/// Reusable weak selector; carries the RNG across steps for `Seeded` runs.
pub struct WeakSelector {
    t: f64,
    state: SelectorState,
}

impl WeakSelector {
    pub fn new(t: f64, mode: SelectionMode) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::ParamRange {
                name: "t",
                value: t,
                range: "(0, 1]",
            });
        }
        let state = match mode {
            SelectionMode::Exact => SelectorState::Exact,
            SelectionMode::AdversarialMinIndex => SelectorState::AdversarialMinIndex,
            SelectionMode::Seeded(seed) => SelectorState::Seeded(ChaCha8Rng::seed_from_u64(seed)),
        };
        Ok(WeakSelector { t, state })
    }

    /// Select from per-canonical-atom scores; the oriented score of
    /// `(i, sign)` is `sign * scores[i]`.
    pub fn select(&mut self, scores: &[f64]) -> Result<Selection> {
        if scores.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("selection scores"));
        }
        let mut best_i = 0usize;
        let mut best_sign = 1i8;
        let mut best_v = f64::NEG_INFINITY;
        for (i, &s) in scores.iter().enumerate() {
            let (sign, v) = if s < 0.0 { (-1i8, -s) } else { (1i8, s) };
            if v > best_v {
                best_i = i;
                best_sign = sign;
                best_v = v;
            }
        }
        let sup = best_v;
        match &mut self.state {
            SelectorState::Exact => Ok(Selection {
                atom_index: best_i,
                orientation: best_sign,
                value: best_v,
                sup_value: sup,
            }),
            SelectorState::AdversarialMinIndex => {
                let threshold = self.t * sup;
                for (i, &s) in scores.iter().enumerate() {
                    if s >= threshold {
                        return Ok(Selection {
                            atom_index: i,
                            orientation: 1,
                            value: s,
                            sup_value: sup,
                        });
                    }
                    if -s >= threshold {
                        return Ok(Selection {
                            atom_index: i,
                            orientation: -1,
                            value: -s,
                            sup_value: sup,
                        });
                    }
                }
                unreachable!("the supremum-achieving atom always qualifies")
            }
            SelectorState::Seeded(rng) => {
                let threshold = self.t * sup;
                let mut qualifying: Vec<(usize, i8, f64)> = Vec::new();
                for (i, &s) in scores.iter().enumerate() {
                    if s >= threshold {
                        qualifying.push((i, 1, s));
                    }
                    if -s >= threshold {
                        qualifying.push((i, -1, -s));
                    }
                }
                let (atom_index, orientation, value) =
                    qualifying[rng.random_range(0..qualifying.len())];
                Ok(Selection {
                    atom_index,
                    orientation,
                    value,
                    sup_value: sup,
                })
            }
        }
    }
}

/// One-shot weak selection over precomputed scores.
pub fn select_weak(scores: &[f64], t: f64, mode: SelectionMode) -> Result<Selection> {
    WeakSelector::new(t, mode)?.select(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hilbert_el(coeffs: &[f64]) -> Element {
        Element::new(coeffs.to_vec(), SpaceSpec::hilbert()).unwrap()
    }

    fn diagonal_dictionary() -> Dictionary {
        let s = 2f64.sqrt();
        Dictionary::from_atoms(vec![
            hilbert_el(&[1.0, 0.0]),
            hilbert_el(&[0.0, 1.0]),
            hilbert_el(&[1.0 / s, 1.0 / s]),
        ])
        .unwrap()
    }

    #[test]
    fn select_exact_takes_argmax() {
        // scores from f = (3, 4) against the standard basis
        let sel = select_weak(&[3.0, 4.0], 1.0, SelectionMode::Exact).unwrap();
        assert_eq!(sel.atom_index, 1);
        assert_eq!(sel.orientation, 1);
        assert_eq!(sel.value, 4.0);
        assert_eq!(sel.sup_value, 4.0);
    }

    #[test]
    fn select_adversarial_takes_lowest_qualifier() {
        // 3 >= 0.7 * 4, so index 0 qualifies first
        let sel = select_weak(&[3.0, 4.0], 0.7, SelectionMode::AdversarialMinIndex).unwrap();
        assert_eq!(sel.atom_index, 0);
        assert_eq!(sel.orientation, 1);
        assert_eq!(sel.value, 3.0);
        assert_eq!(sel.sup_value, 4.0);
    }

    #[test]
    fn select_tie_breaks_low_index_positive() {
        let sel = select_weak(&[1.0, 1.0], 1.0, SelectionMode::Exact).unwrap();
        assert_eq!(sel.atom_index, 0);
        assert_eq!(sel.orientation, 1);
        let sel = select_weak(&[0.0, 0.0], 1.0, SelectionMode::Exact).unwrap();
        assert_eq!(sel.orientation, 1);
    }

    #[test]
    fn select_negative_orientation() {
        let sel = select_weak(&[0.5, -2.0], 1.0, SelectionMode::Exact).unwrap();
        assert_eq!(sel.atom_index, 1);
        assert_eq!(sel.orientation, -1);
        assert_eq!(sel.value, 2.0);
    }

    #[test]
    fn select_seeded_is_deterministic_and_qualifying() {
        let scores = [3.0, 4.0, -3.5];
        let a = select_weak(&scores, 0.7, SelectionMode::Seeded(99)).unwrap();
        let b = select_weak(&scores, 0.7, SelectionMode::Seeded(99)).unwrap();
        assert_eq!(a, b);
        assert!(a.value >= 0.7 * a.sup_value);
    }

    #[test]
    fn select_rejects_bad_input() {
        assert!(select_weak(&[], 1.0, SelectionMode::Exact).is_err());
        assert!(select_weak(&[f64::NAN], 1.0, SelectionMode::Exact).is_err());
        assert!(select_weak(&[1.0], 0.0, SelectionMode::Exact).is_err());
        assert!(select_weak(&[1.0], 1.5, SelectionMode::Exact).is_err());
    }

    #[test]
    fn r_d_examples() {
        let basis = Dictionary::standard_basis(2, SpaceSpec::hilbert()).unwrap();
        let rd = basis.r_d(&hilbert_el(&[3.0, 4.0])).unwrap();
        assert!((rd - 0.8).abs() < 1e-12);

        let diag = diagonal_dictionary();
        let s = 2f64.sqrt();
        let rd = diag.r_d(&hilbert_el(&[1.0 / s, 1.0 / s])).unwrap();
        assert!((rd - 1.0).abs() < 1e-12);

        let lq = SpaceSpec::lq(1.5).unwrap();
        let basis_q = Dictionary::standard_basis(2, lq).unwrap();
        let f = Element::new(vec![1.0, 1.0], lq).unwrap();
        assert!((basis_q.r_d(&f).unwrap() - 2f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn a1_basis_examples() {
        let basis = Dictionary::standard_basis(3, SpaceSpec::hilbert()).unwrap();
        assert_eq!(basis.a1_norm_basis(&hilbert_el(&[3.0, -4.0, 0.0])).unwrap(), 7.0);
        assert_eq!(basis.a1_norm_basis(&hilbert_el(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
        let basis10 = Dictionary::standard_basis(10, SpaceSpec::hilbert()).unwrap();
        let f = Element::ones(10, 10, SpaceSpec::hilbert()).unwrap();
        assert_eq!(basis10.a1_norm_basis(&f).unwrap(), 10.0);
        let diag = diagonal_dictionary();
        assert!(diag.a1_norm_basis(&hilbert_el(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn a1_small_matches_closed_form_on_basis() {
        let basis = Dictionary::standard_basis(2, SpaceSpec::hilbert()).unwrap();
        let v = basis.a1_norm_small(&hilbert_el(&[3.0, -4.0])).unwrap();
        assert!((v - 7.0).abs() < 1e-8);
    }

    #[test]
    fn a1_small_uses_diagonal_atom() {
        let diag = diagonal_dictionary();
        let v = diag.a1_norm_small(&hilbert_el(&[1.0, 1.0])).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn a1_small_homogeneous_on_atom() {
        let diag = diagonal_dictionary();
        let g = diag.atom(2).unwrap();
        let v = diag.a1_norm_small(&g.scaled(2.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn a1_small_outside_span() {
        let d = Dictionary::from_atoms(vec![hilbert_el(&[1.0, 0.0])]).unwrap();
        assert!(matches!(
            d.a1_norm_small(&hilbert_el(&[0.0, 1.0])),
            Err(Error::OutsideSpan)
        ));
    }

    #[test]
    fn a1_small_budget() {
        let d = Dictionary::standard_basis(64, SpaceSpec::hilbert()).unwrap();
        let f = Element::ones(64, 64, SpaceSpec::hilbert()).unwrap();
        assert!(matches!(d.a1_norm_small(&f), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn atom_validation() {
        assert!(Dictionary::from_atoms(vec![hilbert_el(&[2.0, 0.0])]).is_err());
        assert!(Dictionary::from_atoms(vec![
            hilbert_el(&[1.0, 0.0]),
            hilbert_el(&[1.0, 0.0])
        ])
        .is_err());
        assert!(Dictionary::from_atoms(vec![
            hilbert_el(&[1.0, 0.0]),
            hilbert_el(&[-1.0, 0.0])
        ])
        .is_err());
        assert!(Dictionary::from_atoms(vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let diag = diagonal_dictionary();
        let j = diag.to_json();
        let back = Dictionary::from_json(&j, SpaceSpec::hilbert()).unwrap();
        assert_eq!(back.num_atoms(), 3);
        assert_eq!(back.kind(), DictionaryKind::FiniteAtoms);

        let basis = Dictionary::standard_basis(5, SpaceSpec::hilbert()).unwrap();
        let back = Dictionary::from_json(&basis.to_json(), SpaceSpec::hilbert()).unwrap();
        assert_eq!(back.num_atoms(), 5);
        assert_eq!(back.kind(), DictionaryKind::StandardBasis);
    }

    /// Independent check for the LP route: enumerate small column subsets,
    /// solve the square/overdetermined system, and take the cheapest
    /// consistent representation.
    fn a1_bruteforce(d: &Dictionary, f: &Element) -> Option<f64> {
        let n = d.num_atoms();
        let dim = d.dim();
        let mut best: Option<f64> = None;
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if idx.len() > dim {
                continue;
            }
            let k = idx.len();
            let mut gram = vec![vec![0.0; k + 1]; k];
            for (r, &i) in idx.iter().enumerate() {
                let gi = d.atom(i).unwrap();
                for (c, &j) in idx.iter().enumerate() {
                    gram[r][c] = inner(&gi, &d.atom(j).unwrap()).unwrap();
                }
                gram[r][k] = inner(&gi, f).unwrap();
            }
            let Some(coef) = crate::hilbert::solve_dense(&mut gram, 1e-12) else {
                continue;
            };
            let mut recon = Element::zeros(dim, *f.space()).unwrap();
            for (&i, &c) in idx.iter().zip(&coef) {
                recon.axpy(c, &d.atom(i).unwrap());
            }
            let resid: f64 = recon
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if resid < 1e-8 {
                let cost: f64 = coef.iter().map(|c| c.abs()).sum();
                best = Some(best.map_or(cost, |b: f64| b.min(cost)));
            }
        }
        best
    }

    #[test]
    fn a1_small_agrees_with_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let dim = rng.random_range(2..=3);
            let n = rng.random_range(2..=5);
            let mut atoms = Vec::new();
            while atoms.len() < n {
                let coeffs: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                let el = Element::new(coeffs, SpaceSpec::hilbert()).unwrap();
                if el.norm() > 0.1 {
                    atoms.push(el.scaled(1.0 / el.norm()));
                }
            }
            let Ok(d) = Dictionary::from_atoms(atoms) else {
                continue;
            };
            let coeffs: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = Element::new(coeffs, SpaceSpec::hilbert()).unwrap();
            match (d.a1_norm_small(&f), a1_bruteforce(&d, &f)) {
                (Ok(lp), Some(bf)) => {
                    assert!(
                        (lp - bf).abs() <= 1e-6 * bf.max(1.0),
                        "lp {lp} vs bruteforce {bf}"
                    );
                }
                (Err(Error::OutsideSpan), None) => {}
                (lp, bf) => panic!("inconsistent feasibility: {lp:?} vs {bf:?}"),
            }
        }
    }

    #[test]
    fn a1_small_agrees_with_l1_on_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let d = Dictionary::standard_basis(6, SpaceSpec::hilbert()).unwrap();
        for _ in 0..200 {
            let coeffs: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
            let f = Element::new(coeffs, SpaceSpec::hilbert()).unwrap();
            let lp = d.a1_norm_small(&f).unwrap();
            let closed = d.a1_norm_basis(&f).unwrap();
            assert!((lp - closed).abs() <= 1e-8 * closed.max(1.0));
        }
    }

    #[test]
    fn norm_below_a1_and_rd_above_norm_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let d = diagonal_dictionary();
        for _ in 0..200 {
            let f = Element::new(
                vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
                SpaceSpec::hilbert(),
            )
            .unwrap();
            if f.norm() < 1e-6 {
                continue;
            }
            let a1 = d.a1_norm_small(&f).unwrap();
            assert!(f.norm() <= a1 + 1e-9);
            let rd = d.r_d(&f).unwrap();
            assert!(rd >= f.norm() / a1 - 1e-9);
            assert!(rd <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn a1_scaling() {
        let d = diagonal_dictionary();
        let f = hilbert_el(&[0.3, -0.7]);
        let a1 = d.a1_norm_small(&f).unwrap();
        let a1s = d.a1_norm_small(&f.scaled(-3.5)).unwrap();
        assert!((a1s - 3.5 * a1).abs() <= 1e-12 * a1s.max(1.0));
    }
}
