//! The JSON document format for doctrines and the fixture generators.
//!
//! Serialization is normalized: explicit tables, sorted keys, compact output
//! and a trailing newline, so equal doctrines give identical bytes.

mod document;
mod fixtures;

use thiserror::Error;

use crate::doctrine::DoctrineError;
use crate::fincat::CategoryError;
use crate::order::OrderError;

pub use document::{
    parse_doctrine, parse_document, serialize_doctrine, to_canonical_json, CategoryDoc, DeltaDoc, DoctrineDocument,
    FiberDoc, Meta, MorphismDoc, Op, OpsDoc, ProductDoc, QuantifierDoc, StructureDoc,
};
pub use fixtures::{
    boolean_cube_fixture, fixture, gen_chain_fixture, gen_subset_doctrine, gen_subset_doctrine_with, named_fixtures,
    powerset_fiber, subset_doctrine_over, subsets_fixture, subterminal_fixture, trivial_fixture, SubsetOptions,
    MAX_POWERSET_CARRIER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("cannot derive `{op}` in the fiber over `{object}`: it does not exist there")]
    Derive { object: String, op: &'static str },
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("empty carriers are excluded: the subsets doctrine is taken over nonempty sets")]
    EmptyCarrier,
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Doctrine(#[from] DoctrineError),
}
