//! Finitely presented doctrines over finite base categories.
pub mod cli;
pub mod constructions;
pub mod doctrine;
pub mod fincat;
pub mod io;
pub mod model;
pub mod order;
pub mod search;
