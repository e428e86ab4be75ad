//! Greedy expansion algorithms with verifiable rate bounds.
//!
//! The crate has three layers:
//!
//! - spaces and dictionaries ([`space`], [`dictionary`]): finite
//!   dimensional Hilbert / `l_q` machinery — norms, norming functionals,
//!   weak atom selection, `A_1` norms;
//! - engines ([`hilbert`], [`banach`]): pure/orthogonal/weak greedy
//!   algorithms and dual greedy expansions, all emitting full
//!   [`trace::GreedyTrace`] records;
//! - verification ([`bounds`], [`sigma`], [`experiments`]): closed-form
//!   bound evaluators, exact best m-term oracles, and experiments that
//!   pit measured ratios against the theoretical curves.
//!
//! Everything is deterministic given a seed; experiment reports serialize
//! to stable JSON/CSV via [`report`].

pub mod banach;
pub mod bounds;
pub mod dictionary;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod quad;
pub mod report;
pub mod sigma;
mod simplex;
pub mod space;
pub mod trace;

pub use banach::{
    dga_step_size, dga_step_size_bisect, residual_decrease_check, run_dga, DgaParams, DgaVariant,
};
pub use bounds::{
    alpha0_banach, alpha0_hilbert, check_concavity_inequality, check_hl1_recursion,
    dga_alpha_bound, dga_rate_constant, e_m_tau_b, hl1_bound, hl2_transfer, oga_alpha_bound,
    wga_alpha_bound, wga_alpha_bound_linear_t, BoundSpec,
};
pub use dictionary::{select_weak, Dictionary, DictionaryKind, Selection, SelectionMode, WeakSelector};
pub use error::{Error, Result};
pub use experiments::{
    all_pass, construction_i, construction_ii, default_alpha_grid, dga_upper_sweep,
    lq_lower_bound_experiment, oga_upper_sweep, ratio, run_all, wga_upper_sweep, DgaSweepConfig,
    ExperimentReport, OgaSweepConfig, RatioPoint, SuiteConfig, WgaSweepConfig,
};
pub use hilbert::{energy_identity_check, run_oga, run_pga, run_wga};
pub use quad::{lq_norm_periodic, periodic_trapezoid};
pub use sigma::{
    monotone_coefficient_bound, sigma_m_basis, sigma_m_hilbert_bruteforce, trig_lacunary_demo,
    SigmaMethod, SigmaResult, TrigDemoReport,
};
pub use space::{
    empirical_modulus, inner, norming_functional, pair, smoothness_majorant, DualFunctional,
    Element, SpaceKind, SpaceSpec,
};
pub use trace::{Algorithm, ExpansionTerm, GreedyTrace, IterationRecord, TraceParams};
