//! Exact normal ordering for the three operator families.

mod algebra;
mod element;
mod generator;
mod ops;
mod rewrite;

pub use algebra::{Algebra, WordId};
pub use element::Element;
pub use generator::{Family, GeneratorId, Kind, Letter, Word};
pub use ops::{Engine, OpBuilder};
pub use rewrite::{RelationSet, Strategy};
