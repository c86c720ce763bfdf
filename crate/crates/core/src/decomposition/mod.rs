//! Modular decomposition and split decomposition.

mod md;
mod skeleton;
mod split;

pub use md::{modular_decomposition, MdKind, MdNode, MdTree};
pub(crate) use md::maximal_modules;
pub use skeleton::{skeleton, Component, ComponentKind, SkNode, Skeleton};
pub use split::{find_proper_split, Split, SplitError};
