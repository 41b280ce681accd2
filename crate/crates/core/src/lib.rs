//! Basic data of a two-dimensional modular functor: labels, fusion
//! dimensions, F/R/B tensors and twists, the genus-zero relations they
//! satisfy, and reconstruction of the genus-one S(λ) matrices.

pub mod basic_data;
pub mod curve_operators;
pub mod error;
pub mod generators;
pub mod genus_zero_relations;
pub mod label_algebra;
pub mod linalg;
pub mod report;
pub mod s_reconstruction;
pub mod suite;

pub use basic_data::{BasicData, Block4};
pub use error::{Error, Result};
pub use generators::generate;
pub use label_algebra::{DimTable, Label, LabelSet, PantsTree};
pub use linalg::{CMat, C64};
pub use report::RelationReport;
