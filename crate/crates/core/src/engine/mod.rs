//! Enumeration and comparison of subgroups of the unitary group.

pub mod ambient;
pub mod bracket;
pub mod instance;
pub mod layer;
pub mod sampler;
pub mod store;
pub mod subgroup;

pub use bracket::{enumerate_bracketings, CommExpr, LeafKind, Level, Shape};
pub use instance::{GuMode, Instance, Options};
pub use store::Store;
pub use subgroup::{closure_enumerate, mixed_commutator, normal_closure, Status, SubgroupHandle, DEFAULT_BUDGET};
