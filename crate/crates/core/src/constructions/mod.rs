//! Effective constructions on doctrines: adding a constant, adding an axiom,
//! their mediating morphisms, single Henkin steps and bounded saturation,
//! colimits of finite directed diagrams, and the ¬¬-fragment.
//!
//! Every construction returns the new doctrine together with the doctrine
//! morphism it comes with; none of them checks laws on its own.

mod axiom;
mod colimit;
mod constant;
mod henkin;
mod negation;
mod relabel;

use thiserror::Error;

use crate::doctrine::DoctrineError;
use crate::fincat::CategoryError;
use crate::order::OrderError;

pub use axiom::{add_axiom, axiom_mediator_uniqueness, mediate_axiom, AxiomExtension};
pub use colimit::{colimit_mediator, directed_colimit, Colimit, FiniteDirectedDiagram};
pub use constant::{add_constant, constant_mediator_uniqueness, mediate_constant, ConstantExtension};
pub use henkin::{
    henkin_saturate, henkin_step, HenkinSaturation, HenkinStep, HenkinTrace, SaturationOptions, SaturationPolicy,
    Targets, TraceStep,
};
pub use negation::{double_negation_fragment, NegationFragment};
pub use relabel::{relabel_elements, Relabeling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Doctrine(#[from] DoctrineError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("`{0}` cannot serve as a sort: it needs chosen products with itself and with the terminal object")]
    NotAdmissible(String),
    #[error("element {element} is outside the fiber over `{object}`")]
    ElementOutOfRange { object: String, element: usize },
    #[error("the construction needs {0}")]
    MissingStructure(String),
    #[error("axiom not satisfied in target: ⊤ ≰ g(φ)")]
    AxiomNotSatisfied,
    #[error("constant has the wrong endpoints: {0}")]
    BadConstant(String),
    #[error("target morphism has the wrong source: {0}")]
    WrongSource(String),
    #[error("reindexing leaves the downset of the axiom over `{0}`")]
    NotClosed(String),
    #[error("invalid diagram: {0}")]
    Diagram(String),
}
