//! Carlitz module arithmetic over F_q(T), geometric gamma values and their
//! algebraic relations.

/// Owned-operand arithmetic forwarded to the by-reference impls.
macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl std::ops::$tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}

pub mod error;
pub mod ffarith;
pub mod carlitz;
pub mod tseries;
pub mod gammaeval;
pub mod brackets;
pub mod distribution;
pub mod coleman;
pub mod motive;

pub use error::{Error, Result};
