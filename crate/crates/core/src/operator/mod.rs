//! The Farey transfer operator `T̂` with respect to `μ` (density `1/x`) and the
//! Perron–Frobenius operator `P̂` with respect to Lebesgue measure.

mod checks;
mod density;
mod exact;
mod grid;
mod mesh;
mod rates;

pub use checks::{
    cone_check, decreasing_check_above, decreasing_on_a1_check, uniform_returning_trace, ConeReport, DecayReport,
    OperatorTrace, DECAY_TOL,
};
pub use density::{ClosedFormDensity, Density};
pub use exact::{conjugation_check, exact_iterate, pf_at, transfer_at, MAX_EXACT_ITERATE};
pub use grid::{apply_pf_lambda, apply_transfer_mu, standard_mesh, GridFunction};
pub use mesh::{Mesh, DEFAULT_FIRST_NODE, DEFAULT_NODES};
pub use rates::{bn_sequence, return_tail_endpoint, return_tail_measure, wandering_rate, UNIFORM_RETURN_LIMIT};
