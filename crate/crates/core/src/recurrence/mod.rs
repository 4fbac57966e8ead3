//! Recurrence sets `B_N(ν; S)`, the pigeonhole and linear-recurrence
//! constructions, and checkers for (strong, approximate) local
//! polynomiality.

mod checker;
mod checks;
mod linear;
mod pigeonhole;
mod set;

use thiserror::Error;

pub use checker::{check_locally_poly, BudgetMode, CheckMode, CheckOutcome, CheckerBudget, ViolationWitness};
pub use checks::{
    ap_dilation_check, find_k_aps, kth_derivative_identity_check, simple_deriv_check, strong_set_builder,
    weak_recurrence_check, ApDilationReport, IdentityReport, SimpleDerivReport, WeakRecurrenceReport,
};
pub use linear::linear_recurrence_witness;
pub use pigeonhole::{pigeonhole_intervals, PigeonholeResult};
pub use set::{density_csv, RecurrenceSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("exhaustive scan needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid interval: {0}")]
    Interval(String),
}
