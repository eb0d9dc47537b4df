//! Finite categories with a chosen terminal object and chosen binary products.
//!
//! Products are partial: a finite category with every binary product is thin,
//! so non-thin fixtures declare products only for the pairs they need. Every
//! declared product is checked for its universal property by
//! [`validate_category`].

mod category;
mod kleisli;
pub mod sets;

pub use category::{
    hom_set, tuple, validate_category, Arrow, CategoryBuilder, CategoryError, CategoryViolation, Embedding,
    FinCategory, MorId, ObjId, Product, ValidationReport,
};
pub use kleisli::{kleisli_reader, KleisliPresentation};
