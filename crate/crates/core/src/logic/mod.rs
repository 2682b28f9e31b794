//! First-order machinery: formulas, the characteristic sentence of a
//! marked graph, finite-model evaluation, and the exact/bounded checker.

pub mod check;
pub mod eval;
pub mod formula;
pub mod phi;

pub use check::{
    bounded_witness_search, check_conditions, check_phi, cond3_counterexample, CheckResult,
    Cond3Counterexample, ConditionsReport,
};
pub use eval::eval_formula_finite;
pub use formula::{emit_pretty, emit_sexpr, parse_formula, Formula, Term};
pub use phi::{build_phi, cond3_instances, Cond3Instance, EmitFormat, PhiSentence};
