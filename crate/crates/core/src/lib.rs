//! Lipschitz analysis on finite pointed metric spaces and on cones over
//! normed spaces: Lipschitz constants, McShane extensions, positively
//! homogeneous fields, and the norms of the associated free spaces.

pub mod cone;
pub mod elements;
pub mod error;
pub mod flow;
pub mod freespace;
pub mod lp;
pub mod mcshane;
pub mod metric;
pub mod norm;
pub mod numeric;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use metric::{lip_const, PointedSpace, ScalarField, SpaceSpec};
pub use norm::NormKind;
