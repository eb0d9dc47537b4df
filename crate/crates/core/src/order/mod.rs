//! Finite posets, lattice operations on fibers, poset reflection, and filters.
//!
//! Negation is always `¬a ≔ a → ⊥`; there is no separate complement table.

mod filter;
mod lattice;
mod poset;

pub use filter::{classify_filter, enumerate_filters, extend_to_ultrafilter, generated_filter, Filter, FilterClass};
pub use lattice::{derive_lattice_ops, Fiber, LatticeOps};
pub use poset::{poset_reflection, FinPoset, MonotoneMap, OrderError, Preorder, Reflection};
