// Guards like `!(x > 0.0)` are written that way on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod coords;
pub mod density;
pub mod error;
pub mod gaussian;
pub mod legendre;
pub mod ode;
pub mod oracle;
pub mod separated;

pub use error::{Error, Result};
