//! Functions on products of vector spaces spanned by exponentials of linear
//! forms, with pointwise and slot-wise Moyal products.

mod oracle;
mod slots;
mod subst;
mod sum;
mod term;
pub mod text;

pub use oracle::{taylor_expand, taylor_star_oracle, TaylorPoly};
pub use slots::{darboux, Orientation, Slot, SlotKind, SlotSpec};
pub use subst::{substitute, AffineMap};
pub use sum::{mul, star, translate, ExpSum};
pub use term::{star_inverse, ExpTerm, LinForm};
