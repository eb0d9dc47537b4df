//! Filter quotients, model extraction into finite sets, and the end-to-end
//! Henkin pipeline from a doctrine to a model in the subsets doctrine.
//!
//! A model assigns a nonempty finite carrier to every base object, a function
//! to every base arrow and a subset of the carrier to every fiber element.
//! It is extracted from a rich consistent doctrine and an ultrafilter on the
//! terminal fiber; carriers are the global elements `𝐭 → X`.

mod extract;
mod pipeline;
mod quotient;

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::doctrine::{DoctrineError, Layer};
use crate::fincat::CategoryError;
use crate::io::IoError;
use crate::order::OrderError;

pub use extract::{
    extract_model, extract_model_elementary, ModelAdapter, ModelLaw, ModelMode, ModelReport, SubsetModel, Tally,
};
pub use pipeline::{henkin_model_pipeline, FilterChoice, ModelPipeline, PipelineOptions, PipelineTrace};
pub use quotient::{quotient_by_filter, quotient_mediator, quotient_mediator_uniqueness, QuotientPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Doctrine(#[from] DoctrineError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("not a filter on the terminal fiber: {0}")]
    NotAFilter(String),
    #[error("precondition failed: the doctrine does not declare the {0} layer")]
    MissingLayer(Layer),
    #[error("precondition failed: the {layer} layer has {failures} counterexamples")]
    LayerFails { layer: Layer, failures: u64 },
    #[error("inconsistent: ⊤ ≤ ⊥ in the terminal fiber{}", step.map(|s| format!(" after saturation step {s}")).unwrap_or_default())]
    Inconsistent { step: Option<usize> },
    #[error("model undefined: empty carrier possible (no witness for {})", .0.join(", "))]
    NotRich(Vec<String>),
    #[error("the filter is improper")]
    Improper,
    #[error("implication preservation unavailable: the filter is not an ultrafilter")]
    NotUltra,
    #[error("∼ not respected: {0}")]
    NotRespected(String),
    #[error("saturation truncated: {} elements lack a witness ({})", .uncovered.len(), .uncovered.join(", "))]
    Truncated { uncovered: Vec<String> },
    #[error("the target does not factor through the quotient: {0}")]
    NoFactorization(String),
    #[error("target morphism has the wrong source: {0}")]
    WrongSource(String),
}
