//! Dual greedy expansions in uniformly smooth spaces.
//!
//! Each step selects `phi_m` through the norming functional,
//! `F_{f_{m-1}}(phi_m) >= t * r_D(f_{m-1})`, picks the step size `c_m > 0`
//! from the balance equation
//! `||f_{m-1}|| mu(c_m / ||f_{m-1}||) = (t b / 2) c_m r_D(f_{m-1})`
//! (the starred variant drives with `F_{f_{m-1}}(phi_m)` and drops the
//! `t` factor), and updates `f_m = f_{m-1} - c_m phi_m`.
//!
//! For the power majorant `mu(u) = gamma u^q` the balance equation has the
//! closed-form root `c = ((t b drive) / (2 gamma))^(1/(q-1)) ||f_{m-1}||`;
//! a bracketing bisection handles any strictly convex majorant with
//! `mu(u)/u` increasing and agrees with the closed form to 1e-10.

use serde::{Deserialize, Serialize};

use crate::dictionary::{Dictionary, SelectionMode, WeakSelector};
use crate::error::{Error, Result};
use crate::space::{norming_functional, Element, SpaceKind};
use crate::trace::{Algorithm, ExpansionTerm, GreedyTrace, IterationRecord, TraceParams};

const EXHAUSTION_REL: f64 = 1e-15;

/// Which drive the step-size equation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DgaVariant {
    /// Balance against `t * r_D(f_{m-1})`.
    Rd,
    /// Balance against the achieved value `F_{f_{m-1}}(phi_m)`.
    Star,
}

/// Parameters of a dual greedy run. `b` must stay strictly inside `(0, 1)`
/// — the residual-decrease analysis degenerates at `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgaParams {
    t: f64,
    b: f64,
    variant: DgaVariant,
}

impl DgaParams {
    pub fn new(t: f64, b: f64, variant: DgaVariant) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::ParamRange {
                name: "t",
                value: t,
                range: "(0, 1]",
            });
        }
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::ParamRange {
                name: "b",
                value: b,
                range: "(0, 1)",
            });
        }
        Ok(DgaParams { t, b, variant })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn variant(&self) -> DgaVariant {
        self.variant
    }
}

/// Unique positive root of the step-size equation for the power majorant
/// `mu(u) = gamma u^power`.
///
/// `drive` is `r_D(f_{m-1})` with `t_eff = t`, or `F_{f_{m-1}}(phi_m)`
/// with `t_eff = 1` for the starred variant.
pub fn dga_step_size(
    residual_norm: f64,
    drive: f64,
    t_eff: f64,
    b: f64,
    gamma: f64,
    power: f64,
) -> Result<f64> {
    if !(drive > 0.0) {
        return Err(Error::NonpositiveDrive(drive));
    }
    if !(residual_norm > 0.0) {
        return Err(Error::ParamRange {
            name: "residual_norm",
            value: residual_norm,
            range: "(0, inf)",
        });
    }
    if !(gamma > 0.0 && power > 1.0 && power <= 2.0) {
        return Err(Error::InvalidMajorant { gamma, power });
    }
    Ok(((t_eff * b * drive) / (2.0 * gamma)).powf(1.0 / (power - 1.0)) * residual_norm)
}

/// Bisection fallback for a general majorant; 200 halvings of the bracket
/// leave no meaningful interval width at f64 precision.
pub fn dga_step_size_bisect(
    residual_norm: f64,
    drive: f64,
    t_eff: f64,
    b: f64,
    mu: impl Fn(f64) -> f64,
    gamma: f64,
    power: f64,
) -> Result<f64> {
    if !(drive > 0.0) {
        return Err(Error::NonpositiveDrive(drive));
    }
    let balance =
        |c: f64| residual_norm * mu(c / residual_norm) - 0.5 * t_eff * b * c * drive;
    let mut hi = 2.0 * dga_step_size(residual_norm, drive, t_eff, b, gamma, power)?;
    let mut grow = 0;
    while balance(hi) < 0.0 && grow < 64 {
        hi *= 2.0;
        grow += 1;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Dual greedy algorithm over a symmetric dictionary in an `l_q` space
/// (a Hilbert input runs as `q = 2` for cross-validation).
///
/// `a1` has the same meaning as in the Hilbert engines; for the standard
/// basis it defaults to the `l_1` norm of the input.
pub fn run_dga(
    f: &Element,
    dictionary: &Dictionary,
    steps: usize,
    params: DgaParams,
    mode: SelectionMode,
    a1: Option<f64>,
) -> Result<GreedyTrace> {
    if f.dim() != dictionary.dim() {
        return Err(Error::DimensionMismatch(f.dim(), dictionary.dim()));
    }
    if !f.space().compatible(dictionary.space()) {
        return Err(Error::SpaceMismatch("input and dictionary spaces differ"));
    }
    debug_assert!(matches!(
        f.space().kind(),
        SpaceKind::Hilbert | SpaceKind::LqSequence
    ));
    let (gamma, power) = f.space().majorant();
    let mut selector = WeakSelector::new(params.t, mode)?;
    let a1 = a1.or_else(|| match dictionary.kind() {
        crate::dictionary::DictionaryKind::StandardBasis => Some(f.l1_norm()),
        crate::dictionary::DictionaryKind::FiniteAtoms => None,
    });

    let input_norm = f.norm();
    let exhaustion = EXHAUSTION_REL * input_norm;
    let mut residual = f.clone();
    let mut norm = input_norm;
    let mut envelope = a1;
    let mut records = Vec::with_capacity(steps);
    let mut expansion = Vec::with_capacity(steps);

    for step in 1..=steps {
        if norm <= exhaustion {
            records.push(crate::hilbert::zero_padding_record(step, norm, envelope));
            continue;
        }
        let functional = norming_functional(&residual)?;
        let scores = dictionary.dual_scores(&functional)?;
        let sel = selector.select(&scores)?;
        // The finite supremum over oriented atoms is exactly r_D(f_{m-1}).
        let r_d = sel.sup_value;
        let (drive, t_eff) = match params.variant {
            DgaVariant::Rd => (r_d, params.t),
            DgaVariant::Star => (sel.value, 1.0),
        };
        let c = dga_step_size(norm, drive, t_eff, params.b, gamma, power)?;
        dictionary.subtract_scaled_atom(&mut residual, sel.atom_index, sel.orientation, c);
        norm = residual.norm();
        envelope = envelope.map(|e| e + c);
        records.push(IterationRecord {
            step,
            selection: sel,
            y_or_c: c,
            residual_norm: norm,
            envelope,
            r_d: Some(r_d),
        });
        expansion.push(ExpansionTerm {
            atom_index: sel.atom_index,
            orientation: sel.orientation,
            coefficient: c,
        });
    }

    Ok(GreedyTrace {
        algorithm: match params.variant {
            DgaVariant::Rd => Algorithm::Dga,
            DgaVariant::Star => Algorithm::DgaStar,
        },
        input: f.clone(),
        params: TraceParams {
            t: params.t,
            b: params.b,
            mode,
            variant: Some(params.variant),
        },
        a1_input: a1,
        records,
        final_residual: residual,
        expansion,
        degenerate: false,
    })
}

/// Worst violation of the per-step residual decrease
/// `||f_m|| <= ||f_{m-1}|| - t (1-b) c_m r_D(f_{m-1})`; nonpositive when
/// the inequality holds everywhere.
pub fn residual_decrease_check(trace: &GreedyTrace) -> Result<f64> {
    if !trace.algorithm.is_dual() {
        return Err(Error::InvalidTrace(
            "residual decrease check applies to dual greedy traces",
        ));
    }
    let t = trace.params.t;
    let b = trace.params.b;
    let mut prev = trace.input.norm();
    let mut worst = f64::NEG_INFINITY;
    for record in &trace.records {
        match record.r_d {
            Some(r_d) => {
                let allowed = prev - t * (1.0 - b) * record.y_or_c * r_d;
                worst = worst.max(record.residual_norm - allowed);
            }
            None if record.y_or_c == 0.0 => {
                // exhausted-residual padding; nothing to check
            }
            None => {
                return Err(Error::InvalidTrace("trace lacks r_D records"));
            }
        }
        prev = record.residual_norm;
    }
    Ok(if worst == f64::NEG_INFINITY { 0.0 } else { worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::run_wga;
    use crate::space::SpaceSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_size_closed_form_example() {
        // q = 2, gamma = 1/2, ||f|| = 1, t = 1, b = 1/2, drive = 1:
        // (1/2) c^2 = (1/4) c  =>  c = 1/2
        let c = dga_step_size(1.0, 1.0, 1.0, 0.5, 0.5, 2.0).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn step_size_homogeneous_in_residual_norm() {
        let c1 = dga_step_size(1.0, 0.7, 1.0, 0.3, 1.0 / 1.5, 1.5).unwrap();
        let c2 = dga_step_size(2.0, 0.7, 1.0, 0.3, 1.0 / 1.5, 1.5).unwrap();
        assert!((c2 - 2.0 * c1).abs() <= 1e-12 * c2);
    }

    #[test]
    fn step_size_rejects_nonpositive_drive() {
        assert!(matches!(
            dga_step_size(1.0, 0.0, 1.0, 0.5, 0.5, 2.0),
            Err(Error::NonpositiveDrive(_))
        ));
        assert!(dga_step_size(1.0, -0.2, 1.0, 0.5, 0.5, 2.0).is_err());
    }

    #[test]
    fn bisection_agrees_with_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..200 {
            let power = rng.random_range(1.1..=2.0);
            let gamma = rng.random_range(0.2..2.0);
            let rnorm = rng.random_range(0.1..5.0);
            let drive = rng.random_range(0.05..1.0);
            let t_eff = rng.random_range(0.2..=1.0);
            let b = rng.random_range(0.1..0.9);
            let closed = dga_step_size(rnorm, drive, t_eff, b, gamma, power).unwrap();
            let mu = |u: f64| gamma * u.powf(power);
            let bisected =
                dga_step_size_bisect(rnorm, drive, t_eff, b, mu, gamma, power).unwrap();
            assert!(
                (bisected - closed).abs() <= 1e-10 * closed.max(1e-30),
                "closed {closed} vs bisect {bisected}"
            );
        }
    }

    #[test]
    fn params_validate_ranges() {
        assert!(DgaParams::new(1.0, 0.5, DgaVariant::Rd).is_ok());
        assert!(DgaParams::new(1.0, 1.0, DgaVariant::Rd).is_err());
        assert!(DgaParams::new(1.0, 0.0, DgaVariant::Rd).is_err());
        assert!(DgaParams::new(0.0, 0.5, DgaVariant::Rd).is_err());
        assert!(DgaParams::new(1.1, 0.5, DgaVariant::Rd).is_err());
    }

    #[test]
    fn star_step_on_orthonormal_hilbert() {
        // c_1 = b <f, e_1> = 1/2, residual (1/2, 1)
        let space = SpaceSpec::hilbert();
        let d = Dictionary::standard_basis(2, space).unwrap();
        let f = Element::new(vec![1.0, 1.0], space).unwrap();
        let params = DgaParams::new(1.0, 0.5, DgaVariant::Star).unwrap();
        let trace = run_dga(&f, &d, 1, params, SelectionMode::Exact, None).unwrap();
        assert_eq!(trace.records[0].selection.atom_index, 0);
        assert!((trace.records[0].y_or_c - 0.5).abs() < 1e-12);
        let coeffs = trace.final_residual.coeffs();
        assert!((coeffs[0] - 0.5).abs() < 1e-12);
        assert!((coeffs[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_atom_lq_run() {
        let space = SpaceSpec::lq(1.5).unwrap();
        let d = Dictionary::standard_basis(1, space).unwrap();
        let f = Element::new(vec![1.0], space).unwrap();
        let params = DgaParams::new(1.0, 0.5, DgaVariant::Rd).unwrap();
        let trace = run_dga(&f, &d, 1, params, SelectionMode::Exact, None).unwrap();
        // drive = r_D = 1; c = ((t b)/(2 gamma))^(1/(q-1)) = (0.5/(4/3))^2
        let expected = (0.5f64 / (4.0 / 3.0)).powi(2);
        assert!((trace.records[0].y_or_c - expected).abs() < 1e-12);
        assert!((trace.records[0].residual_norm - (1.0 - expected)).abs() < 1e-12);
    }

    #[test]
    fn zero_input_and_zero_steps() {
        let space = SpaceSpec::lq(1.5).unwrap();
        let d = Dictionary::standard_basis(2, space).unwrap();
        let params = DgaParams::new(1.0, 0.5, DgaVariant::Rd).unwrap();

        let f = Element::new(vec![1.0, -1.0], space).unwrap();
        let trace = run_dga(&f, &d, 0, params, SelectionMode::Exact, None).unwrap();
        assert!(trace.records.is_empty());
        assert_eq!(trace.final_residual, f);

        let zero = Element::zeros(2, space).unwrap();
        let trace = run_dga(&zero, &d, 3, params, SelectionMode::Exact, None).unwrap();
        assert_eq!(trace.records.len(), 3);
        assert!(trace.records.iter().all(|r| r.y_or_c == 0.0));
    }

    fn random_element(rng: &mut ChaCha8Rng, dim: usize, space: SpaceSpec) -> Element {
        loop {
            let coeffs: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let el = Element::new(coeffs, space).unwrap();
            if el.norm() > 1e-2 {
                return el;
            }
        }
    }

    #[test]
    fn dga_invariants_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for q in [1.25, 1.5, 2.0] {
            let space = SpaceSpec::lq(q).unwrap();
            for trial in 0..20 {
                let dim = rng.random_range(2..=16);
                let d = Dictionary::standard_basis(dim, space).unwrap();
                let f = random_element(&mut rng, dim, space);
                let variant = if trial % 2 == 0 {
                    DgaVariant::Rd
                } else {
                    DgaVariant::Star
                };
                let t = [0.5, 1.0][trial % 2];
                let b = [0.25, 0.5, 0.75][trial % 3];
                let params = DgaParams::new(t, b, variant).unwrap();
                let trace =
                    run_dga(&f, &d, 40, params, SelectionMode::Exact, None).unwrap();

                assert!(residual_decrease_check(&trace).unwrap() <= 1e-9);

                let (gamma, power) = space.majorant();
                let lyapunov_exp = t * (1.0 - b);
                let mut prev_norm = f.norm();
                let mut prev_env = trace.a1_input.unwrap();
                for r in &trace.records {
                    if r.y_or_c == 0.0 {
                        break;
                    }
                    assert!(r.residual_norm <= prev_norm + 1e-12, "norm monotonicity");
                    let env = r.envelope.unwrap();
                    assert!(r.residual_norm <= env + 1e-9);
                    assert!(
                        r.r_d.unwrap() >= prev_norm / prev_env - 1e-9,
                        "dual correlation lower bound"
                    );
                    let lyap_prev = prev_norm * prev_env.powf(lyapunov_exp);
                    let lyap_cur = r.residual_norm * env.powf(lyapunov_exp);
                    assert!(lyap_cur <= lyap_prev * (1.0 + 1e-9), "Lyapunov product");

                    // step-size equation balances to 1e-10 relative
                    let drive = match variant {
                        DgaVariant::Rd => r.r_d.unwrap(),
                        DgaVariant::Star => r.selection.value,
                    };
                    let t_eff = match variant {
                        DgaVariant::Rd => t,
                        DgaVariant::Star => 1.0,
                    };
                    let c = r.y_or_c;
                    let lhs = prev_norm * gamma * (c / prev_norm).powf(power);
                    let rhs = 0.5 * t_eff * b * c * drive;
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300),
                        "balance defect lhs={lhs} rhs={rhs}"
                    );

                    prev_norm = r.residual_norm;
                    prev_env = env;
                }
                assert!(trace.expansion_defect(&d).unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn dga_envelope_dominates_residual_l1() {
        // On the standard basis the residual's A_1 norm is its l_1 norm.
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let space = SpaceSpec::lq(1.5).unwrap();
        for _ in 0..20 {
            let dim = rng.random_range(2..=12);
            let d = Dictionary::standard_basis(dim, space).unwrap();
            let f = random_element(&mut rng, dim, space);
            let params = DgaParams::new(1.0, 0.5, DgaVariant::Rd).unwrap();
            let trace = run_dga(&f, &d, 25, params, SelectionMode::Exact, None).unwrap();
            let mut residual = f.clone();
            for (r, term) in trace.records.iter().zip(&trace.expansion) {
                d.subtract_scaled_atom(
                    &mut residual,
                    term.atom_index,
                    term.orientation,
                    term.coefficient,
                );
                assert!(residual.l1_norm() <= r.envelope.unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn star_variant_matches_wga_on_hilbert() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let space = SpaceSpec::hilbert();
        for _ in 0..25 {
            let dim = rng.random_range(2..=12);
            let d = Dictionary::standard_basis(dim, space).unwrap();
            let f = random_element(&mut rng, dim, space);
            let b = rng.random_range(0.1..0.9);
            let params = DgaParams::new(1.0, b, DgaVariant::Star).unwrap();
            let dga = run_dga(&f, &d, 20, params, SelectionMode::Exact, None).unwrap();
            let wga = run_wga(&f, &d, 20, 1.0, b, SelectionMode::Exact, None).unwrap();
            for (rd, rw) in dga.records.iter().zip(&wga.records) {
                if rw.selection.sup_value == 0.0 {
                    break;
                }
                assert_eq!(rd.selection.atom_index, rw.selection.atom_index);
                assert_eq!(rd.selection.orientation, rw.selection.orientation);
                // c_m = b y_m
                assert!((rd.y_or_c - b * rw.y_or_c).abs() <= 1e-10 * rd.y_or_c.max(1e-30));
                assert!((rd.residual_norm - rw.residual_norm).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn decrease_check_rejects_hilbert_traces() {
        let space = SpaceSpec::hilbert();
        let d = Dictionary::standard_basis(2, space).unwrap();
        let f = Element::new(vec![1.0, 0.5], space).unwrap();
        let wga = run_wga(&f, &d, 2, 1.0, 0.5, SelectionMode::Exact, None).unwrap();
        assert!(residual_decrease_check(&wga).is_err());
    }
}
