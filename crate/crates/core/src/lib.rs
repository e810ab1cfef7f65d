//! Exact computation of divided-power differential operators over F_p that
//! carry `1/f` to `1/f^p`, witnessing that `1/f` generates the localization
//! `F_p[x1..xd][1/f]` as a module over the ring of differential operators.

pub mod diffop;
pub mod error;
pub mod frobdecomp;
pub mod generation;
pub mod gfp;
pub mod groebner;
pub mod ideal;
pub mod ideal_chain;
pub mod json;
pub mod poly;

pub use error::{Error, Result};
