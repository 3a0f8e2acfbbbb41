pub mod bisim;
pub mod error;
pub mod fixtures;
pub mod mc;
pub mod model;
pub mod qbf;
pub mod semantics;
pub mod syntax;
pub mod translate;
pub mod updates;

pub use error::{Error, Result};
pub use model::{KripkeModel, PointedModel, RawModel, Relation};
pub use syntax::{parse_formula, print_formula, Formula};
