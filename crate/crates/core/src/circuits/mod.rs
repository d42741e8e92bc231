//! Monotone circuits with local oracles: the DAG representation, oracle
//! valuations, separation checking, `D_J` substitution, the normal form and
//! the JSON bundle format.

mod circuit;
mod json;
mod normal_form;
mod valuation;

pub use circuit::{Circuit, CircuitBuilder, Fanin, Node, NodeId};
pub use json::{emit_bundle, parse_bundle_str, parse_circuit_bundle, parse_family, Bundle};
pub use normal_form::{normal_form, pair_for_subset, small_subsets, NormalForm, NormalFormEntry, NormalFormEntrySummary};
pub use valuation::{
    check_separation, eval, f_star, random_separating, verify_separation, BoundValuation, OracleValuation,
    SeparationReport, Verdict,
};
pub(crate) use valuation::eval_unchecked;
