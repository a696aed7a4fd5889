//! Finite-domain integer constraint store.
//!
//! Linear constraints are kept as `sum(a*x) + c (<=|=|\=) 0`. Comparisons
//! get bounds consistency; disequalities prune a value once every other
//! variable is fixed.

mod domain;
mod store;

pub use domain::IntervalSet;
pub use store::{enumerate, negate, Enumeration, Negation, Store, StoreError, BIG};
